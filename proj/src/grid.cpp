#include "epkg/grid.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "epkg/errors.hpp"

namespace epkg {

GridSpec GridSpec::make(int nx, int ny, double L) {
  if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
    throw InvalidArgument("grid sizes must be even and >= 4, got " + std::to_string(nx) + "x" +
                          std::to_string(ny));
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("box length must be positive");
  return GridSpec{nx, ny, L};
}

std::size_t GridSpec::negated(std::size_t idx) const {
  const int ix = static_cast<int>(idx / ny);
  const int iy = static_cast<int>(idx % ny);
  const int nix = ix == 0 ? 0 : nx - ix;
  const int niy = iy == 0 ? 0 : ny - iy;
  return static_cast<std::size_t>(nix) * ny + niy;
}

namespace {

LatticeTables build_tables(const GridSpec& g) {
  LatticeTables t;
  const std::size_t n = g.size();
  t.kx.resize(n);
  t.ky.resize(n);
  t.kabs.resize(n);
  t.bracket.resize(n);
  t.ux.resize(n);
  t.uy.resize(n);
  t.active.resize(n);
  const double dk = g.dk();
  for (int ix = 0; ix < g.nx; ++ix) {
    const int jx = GridSpec::wavenumber(ix, g.nx);
    for (int iy = 0; iy < g.ny; ++iy) {
      const int jy = GridSpec::wavenumber(iy, g.ny);
      const std::size_t i = static_cast<std::size_t>(ix) * g.ny + iy;
      const double kx = dk * jx, ky = dk * jy;
      const double r = std::hypot(kx, ky);
      t.kx[i] = kx;
      t.ky[i] = ky;
      t.kabs[i] = r;
      t.bracket[i] = bracket(r);
      t.ux[i] = r > 0 ? kx / r : 0.0;
      t.uy[i] = r > 0 ? ky / r : 0.0;
      t.active[i] = g.on_lattice(jx, jy) ? 1 : 0;
    }
  }
  return t;
}

}  // namespace

const LatticeTables& lattice_tables(const GridSpec& g) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<LatticeTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{g.nx, g.ny, g.L}];
  if (!slot) slot = std::make_unique<LatticeTables>(build_tables(g));
  return *slot;
}

}  // namespace epkg
