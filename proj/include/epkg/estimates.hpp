#pragma once

#include "epkg/field.hpp"

namespace epkg {

/// Measured Bernstein ratios for P_M f in dimension two.
struct BernsteinReport {
  double M = 0, p = 0, q = 0, s = 0;
  /// ‖|∇|^{s} P_M f‖_p / (M^{s} ‖P_M f‖_p)
  double derivative_ratio = 0;
  /// ‖|∇|^{-s} P_M f‖_p / (M^{-s} ‖P_M f‖_p)
  double inverse_ratio = 0;
  /// ‖P_M f‖_q / (M^{2/p - 2/q} ‖P_M f‖_p)
  double embedding_ratio = 0;
  double window = 0;
  /// Both derivative ratios in [1/window, window] and the embedding ratio <= window.
  bool within = false;
};

/// Throws InvalidArgument if p > q, p < 1, M <= 0, or P_M f vanishes.
BernsteinReport bernstein_check(const SpectralField& f, double M, double p, double q, double s,
                                double window = 4.0);

struct KernelOptions {
  /// Largest grid side the auto-enlargement may use.
  int max_points = 4096;
  /// Admissible fraction of Σ|K| in the outer frame max(|x|,|y|) > 0.4 L.
  double tail_fraction = 0.01;
};

struct KernelReport {
  double M = 0, t = 0;
  double l1 = 0;
  double box_length = 0;
  int points = 0;
  double tail_fraction = 0;
};

/// ‖K‖_{L¹} for K̂(ξ) = e^{it⟨ξ⟩} φ(ξ/M), computed on a box enlarged until the
/// outer frame carries less than `tail_fraction` of the mass.
/// Throws Error if that needs more than `max_points` per side.
KernelReport kernel_l1_norm(double M, double t, const KernelOptions& opts = {});

}  // namespace epkg
