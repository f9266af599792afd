#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace epkg {

using cd = std::complex<double>;

/// Periodic square box [-L/2, L/2)^2 sampled by nx x ny points.
///
/// Storage follows the FFT convention: index i along an axis of n points
/// holds the integer wavenumber j = i for i < n/2 and j = i - n otherwise.
/// The Nyquist index i = n/2 is kept in storage but is not part of the
/// lattice; fields always hold zero there, which makes the lattice
/// {|j| <= n/2 - 1} closed under negation.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double L = 0.0;

  /// Throws InvalidArgument unless nx, ny >= 4 are even and L > 0.
  static GridSpec make(int nx, int ny, double L);
  static GridSpec square(int n, double L) { return make(n, n, L); }

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double dx() const { return L / nx; }
  double dy() const { return L / ny; }
  double cell_area() const { return dx() * dy(); }
  /// Lattice spacing 2π/L.
  double dk() const { return 2.0 * std::numbers::pi / L; }
  int jmax_x() const { return nx / 2 - 1; }
  int jmax_y() const { return ny / 2 - 1; }

  static int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }
  static int storage(int j, int n) { return j >= 0 ? j : j + n; }

  bool on_lattice(int jx, int jy) const {
    return std::abs(jx) <= jmax_x() && std::abs(jy) <= jmax_y();
  }
  std::size_t index(int jx, int jy) const {
    return static_cast<std::size_t>(storage(jx, nx)) * ny + storage(jy, ny);
  }
  /// Storage index of -ξ for the lattice point stored at `idx`.
  std::size_t negated(std::size_t idx) const;
  double x(int ix) const { return -0.5 * L + ix * dx(); }
  double y(int iy) const { return -0.5 * L + iy * dy(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Per-grid frequency tables, indexed like field storage.
struct LatticeTables {
  std::vector<double> kx, ky, kabs, bracket;
  /// Unit vector ξ/|ξ|, zero at the zero mode.
  std::vector<double> ux, uy;
  std::vector<unsigned char> active;
};

/// Cached tables for `g` (thread-safe, built once per distinct grid).
const LatticeTables& lattice_tables(const GridSpec& g);

inline double bracket(double r) { return std::sqrt(1.0 + r * r); }

/// Side of the padded grid on which products of two lattice fields alias
/// nothing back onto the lattice (3n/2, rounded up to even).
inline int dealiased_size(int n) {
  const int m = (3 * n + 1) / 2;
  return m + (m & 1);
}

}  // namespace epkg
