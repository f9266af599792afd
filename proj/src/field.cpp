#include "epkg/field.hpp"

#include <algorithm>
#include <cmath>

#include "epkg/errors.hpp"
#include "fft.hpp"

namespace epkg {

SpectralField::SpectralField(const GridSpec& grid, bool is_real)
    : grid_(grid), coeffs_(grid.size(), cd{}), is_real_(is_real) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<cd> coeffs, bool is_real)
    : grid_(grid), coeffs_(std::move(coeffs)), is_real_(is_real) {
  if (coeffs_.size() != grid_.size())
    throw DimensionMismatch("coefficient array does not match grid size");
  clear_off_lattice();
}

void SpectralField::clear_off_lattice() {
  const auto& t = lattice_tables(grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!t.active[i]) coeffs_[i] = cd{};
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::hermitian_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    d = std::max(d, std::abs(coeffs_[grid_.negated(i)] - std::conj(coeffs_[i])));
  return d / scale;
}

SpectralField SpectralField::reflected_conjugate() const {
  SpectralField out(grid_, is_real_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = std::conj(coeffs_[grid_.negated(i)]);
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  is_real_ = is_real_ && o.is_real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  is_real_ = is_real_ && o.is_real_;
  return *this;
}

SpectralField& SpectralField::operator*=(cd s) {
  for (auto& c : coeffs_) c *= s;
  if (s.imag() != 0.0) is_real_ = false;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

void SpectralField::axpy(cd s, const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  is_real_ = is_real_ && o.is_real_ && s.imag() == 0.0;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
}

namespace {

inline double parity(int jx, int jy) { return ((jx + jy) & 1) ? -1.0 : 1.0; }

void check_sampling(const GridSpec& g, int m0, int m1) {
  if (m0 < g.nx || m1 < g.ny)
    throw DimensionMismatch("physical sampling must be at least as fine as the grid");
}

}  // namespace

PhysicalField to_physical(const SpectralField& f) { return to_physical(f, f.grid().nx, f.grid().ny); }

PhysicalField to_physical(const SpectralField& f, int m0, int m1) {
  const GridSpec& g = f.grid();
  check_sampling(g, m0, m1);
  auto& fft = detail::fft_for(m0, m1);
  cd* buf = fft.cbuf();
  std::fill(buf, buf + static_cast<std::size_t>(m0) * m1, cd{});
  const double inv_area = 1.0 / (g.L * g.L);
  for (int jx = -g.jmax_x(); jx <= g.jmax_x(); ++jx)
    for (int jy = -g.jmax_y(); jy <= g.jmax_y(); ++jy)
      buf[static_cast<std::size_t>(GridSpec::storage(jx, m0)) * m1 + GridSpec::storage(jy, m1)] =
          f.at(jx, jy) * (parity(jx, jy) * inv_area);
  fft.backward();
  PhysicalField p{g, m0, m1, std::vector<cd>(buf, buf + static_cast<std::size_t>(m0) * m1)};
  return p;
}

RealPhysicalField to_physical_real(const SpectralField& f) {
  return to_physical_real(f, f.grid().nx, f.grid().ny);
}

RealPhysicalField to_physical_real(const SpectralField& f, int m0, int m1) {
  const GridSpec& g = f.grid();
  check_sampling(g, m0, m1);
  auto& fft = detail::fft_for(m0, m1);
  const int h = fft.half();
  cd* hb = fft.hbuf();
  std::fill(hb, hb + static_cast<std::size_t>(m0) * h, cd{});
  const double scale = 0.5 / (g.L * g.L);
  for (int jx = -g.jmax_x(); jx <= g.jmax_x(); ++jx)
    for (int jy = 0; jy <= g.jmax_y(); ++jy) {
      const cd sym = f.at(jx, jy) + std::conj(f.at(-jx, -jy));
      hb[static_cast<std::size_t>(GridSpec::storage(jx, m0)) * h + jy] = sym * (parity(jx, jy) * scale);
    }
  fft.backward_real();
  const double* rb = fft.rbuf();
  return RealPhysicalField{g, m0, m1, std::vector<double>(rb, rb + static_cast<std::size_t>(m0) * m1)};
}

SpectralField from_physical(const PhysicalField& p) {
  const GridSpec& g = p.grid;
  if (p.values.size() != static_cast<std::size_t>(p.m0) * p.m1)
    throw DimensionMismatch("physical array size does not match its declared shape");
  check_sampling(g, p.m0, p.m1);
  auto& fft = detail::fft_for(p.m0, p.m1);
  std::copy(p.values.begin(), p.values.end(), fft.cbuf());
  fft.forward();
  const cd* buf = fft.cbuf();
  SpectralField out(g, false);
  const double scale = g.L * g.L / (static_cast<double>(p.m0) * p.m1);
  for (int jx = -g.jmax_x(); jx <= g.jmax_x(); ++jx)
    for (int jy = -g.jmax_y(); jy <= g.jmax_y(); ++jy)
      out.at(jx, jy) =
          buf[static_cast<std::size_t>(GridSpec::storage(jx, p.m0)) * p.m1 + GridSpec::storage(jy, p.m1)] *
          (parity(jx, jy) * scale);
  return out;
}

SpectralField from_physical(const GridSpec& grid, std::span<const cd> values) {
  if (values.size() != grid.size()) throw DimensionMismatch("physical array does not match grid");
  return from_physical(PhysicalField{grid, grid.nx, grid.ny, std::vector<cd>(values.begin(), values.end())});
}

SpectralField from_physical(const RealPhysicalField& p) {
  const GridSpec& g = p.grid;
  if (p.values.size() != static_cast<std::size_t>(p.m0) * p.m1)
    throw DimensionMismatch("physical array size does not match its declared shape");
  check_sampling(g, p.m0, p.m1);
  auto& fft = detail::fft_for(p.m0, p.m1);
  std::copy(p.values.begin(), p.values.end(), fft.rbuf());
  fft.forward_real();
  const int h = fft.half();
  const cd* hb = fft.hbuf();
  SpectralField out(g, true);
  const double scale = g.L * g.L / (static_cast<double>(p.m0) * p.m1);
  for (int jx = -g.jmax_x(); jx <= g.jmax_x(); ++jx)
    for (int jy = 0; jy <= g.jmax_y(); ++jy) {
      const cd c = hb[static_cast<std::size_t>(GridSpec::storage(jx, p.m0)) * h + jy] * (parity(jx, jy) * scale);
      out.at(jx, jy) = c;
      if (jy > 0) out.at(-jx, -jy) = std::conj(c);
    }
  // the jy = 0 column comes straight from the r2c output and is Hermitian already
  return out;
}

SpectralField from_physical(const GridSpec& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw DimensionMismatch("physical array does not match grid");
  return from_physical(RealPhysicalField{grid, grid.nx, grid.ny, std::vector<double>(values.begin(), values.end())});
}

double l2_norm_spectral(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(s) / f.grid().L;
}

}  // namespace epkg
