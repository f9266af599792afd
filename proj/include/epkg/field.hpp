#pragma once

#include <complex>
#include <span>
#include <vector>

#include "epkg/grid.hpp"

namespace epkg {

/// Scalar field stored as Fourier coefficients on the lattice of a GridSpec.
///
/// Normalization (used everywhere in the library):
///   coeff(ξ) = (L²/(nx·ny)) Σ_x f(x) e^{-iξ·x},   f(x) = (1/L²) Σ_ξ coeff(ξ) e^{iξ·x},
/// so coeff approximates the ℝ² transform ∫ e^{-iξ·x} f(x) dx, and
/// ‖f‖²_{L²} = (1/L²) Σ_ξ |coeff(ξ)|².
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid, bool is_real = false);
  SpectralField(const GridSpec& grid, std::vector<cd> coeffs, bool is_real);

  const GridSpec& grid() const { return grid_; }
  bool is_real() const { return is_real_; }
  void set_real(bool r) { is_real_ = r; }

  std::span<const cd> coeffs() const { return coeffs_; }
  std::span<cd> coeffs() { return coeffs_; }
  cd& operator[](std::size_t i) { return coeffs_[i]; }
  const cd& operator[](std::size_t i) const { return coeffs_[i]; }
  cd at(int jx, int jy) const { return coeffs_[grid_.index(jx, jy)]; }
  cd& at(int jx, int jy) { return coeffs_[grid_.index(jx, jy)]; }
  std::size_t size() const { return coeffs_.size(); }

  /// Zeroes every storage slot outside the lattice (Nyquist rows/columns).
  void clear_off_lattice();
  /// max_ξ |c(-ξ) - conj c(ξ)| / max_ξ |c(ξ)|  (0 for the zero field).
  double hermitian_defect() const;
  /// ξ ↦ conj(c(-ξ)): coefficients of the complex-conjugate function.
  SpectralField reflected_conjugate() const;
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cd s);
  SpectralField& operator*=(double s);
  /// this += s * o
  void axpy(cd s, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cd s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  GridSpec grid_{};
  std::vector<cd> coeffs_;
  bool is_real_ = false;
};

/// Point values on an m0 x m1 sampling of the box (row-major, x slow).
struct PhysicalField {
  GridSpec grid;
  int m0 = 0;
  int m1 = 0;
  std::vector<cd> values;

  double x(int i) const { return -0.5 * grid.L + i * grid.L / m0; }
  double y(int i) const { return -0.5 * grid.L + i * grid.L / m1; }
  double cell_area() const { return grid.L * grid.L / (static_cast<double>(m0) * m1); }
};

struct RealPhysicalField {
  GridSpec grid;
  int m0 = 0;
  int m1 = 0;
  std::vector<double> values;

  double cell_area() const { return grid.L * grid.L / (static_cast<double>(m0) * m1); }
};

void require_same_grid(const SpectralField& a, const SpectralField& b);

/// Point values on the native grid.
PhysicalField to_physical(const SpectralField& f);
/// Point values on a finer m0 x m1 sampling (zero padding); m0 >= nx, m1 >= ny.
PhysicalField to_physical(const SpectralField& f, int m0, int m1);
/// Real point values (real part of the synthesis for non-Hermitian input).
RealPhysicalField to_physical_real(const SpectralField& f, int m0, int m1);
RealPhysicalField to_physical_real(const SpectralField& f);

/// Analysis of point values; content outside the lattice is dropped.
SpectralField from_physical(const PhysicalField& p);
SpectralField from_physical(const GridSpec& grid, std::span<const cd> values);
SpectralField from_physical(const RealPhysicalField& p);
SpectralField from_physical(const GridSpec& grid, std::span<const double> values);

/// ‖f‖_{L²} evaluated from the coefficients.
double l2_norm_spectral(const SpectralField& f);

}  // namespace epkg
