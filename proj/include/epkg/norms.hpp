#pragma once

#include <limits>

#include "epkg/field.hpp"

namespace epkg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ‖f‖_{L^p} by the rectangle rule on the native grid; p = kInf gives the max norm.
double lebesgue_norm(const SpectralField& f, double p);
/// Same quadrature on the 3/2-padded sampling used for products; this is the
/// L^q / L^∞ norm the decay diagnostics refer to.
double lebesgue_norm_dealiased(const SpectralField& f, double p);
/// Same, on already-synthesized point values.
double lebesgue_norm(const PhysicalField& values, double p);
double lebesgue_norm(const RealPhysicalField& values, double p);

/// ‖⟨∇⟩^s f‖_{L²}, computed from the coefficients.
double sobolev_norm(const SpectralField& f, double s);

/// ‖⟨x⟩ f‖_{L^p} with x the representative of the point in the centered box.
/// `profile` is expected to already be a profile e^{-it⟨∇⟩}h.
double weighted_profile_norm(const SpectralField& profile, double p);

}  // namespace epkg
