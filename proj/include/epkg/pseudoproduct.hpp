#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "epkg/field.hpp"
#include "epkg/vec2.hpp"

namespace epkg {

using Symbol1 = std::function<cd(Vec2)>;
using Symbol2 = std::function<cd(Vec2 xi, Vec2 eta)>;
using Symbol3 = std::function<cd(Vec2 xi, Vec2 eta, Vec2 sigma)>;

/// One term out(ξ)·left(ξ-η)·right(η) of a separable symbol; empty factors are 1.
struct SeparableTerm {
  Symbol1 out, left, right;
};

/// m(ξ, η) for T_m(F, G)(ξ) = Σ_η m(ξ,η) F(ξ-η) G(η) Δη, Δη = (2π/L)².
struct BilinearSymbol {
  Symbol2 eval;
  std::vector<SeparableTerm> separable;

  /// Max |Σ_k terms - eval| over `samples` random lattice pairs.
  double factorization_residual(const GridSpec& grid, std::size_t samples, std::uint64_t seed = 3) const;
};

/// m(ξ, η, σ) for Σ_{η,σ} m F(ξ-η) G(η-σ) H(σ) Δη Δσ. The optional nested
/// factorization m = outer(ξ,η)·inner(η,σ) gives T_outer(F, T_inner(G, H)).
struct TrilinearSymbol {
  Symbol3 eval;
  struct Nested {
    Symbol2 outer, inner;
  };
  std::optional<Nested> nested;
};

struct BilinearOptions {
  /// Use the separable factorization (FFT products on the 3/2-padded grid).
  bool fast_path = false;
  /// Direct sum only: skip η (resp. ξ-η) where |G| (resp. |F|) <= tol·max.
  double support_tol = 0.0;
};

/// Contributions with ξ - η off the lattice are dropped. Throws GridMismatch,
/// or InvalidArgument if fast_path is requested without a factorization.
SpectralField bilinear_apply(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                             const BilinearOptions& opts = {});

/// Symbol values on every pair of active lattice points, for repeated application.
class BilinearTable {
 public:
  BilinearTable() = default;
  BilinearTable(const BilinearSymbol& m, const GridSpec& grid);
  /// From a pointwise function of lattice indices (i = ξ slot, j = η slot).
  static BilinearTable from_values(const GridSpec& grid, std::vector<cd> values);

  const GridSpec& grid() const { return grid_; }
  /// Active storage indices, in table order.
  const std::vector<std::size_t>& active() const { return active_; }
  cd operator()(std::size_t xi_rank, std::size_t eta_rank) const { return m_[xi_rank * active_.size() + eta_rank]; }
  std::vector<cd>& values() { return m_; }
  const std::vector<cd>& values() const { return m_; }

 private:
  GridSpec grid_{};
  std::vector<std::size_t> active_;
  std::vector<cd> m_;
  friend SpectralField bilinear_apply(const BilinearTable&, const SpectralField&, const SpectralField&);
};

SpectralField bilinear_apply(const BilinearTable& m, const SpectralField& F, const SpectralField& G);

/// Largest grid side for the direct O(n⁶) trilinear sum.
inline constexpr int kTrilinearDirectMax = 32;

/// Direct sum (all of η, σ, ξ-η, η-σ on the lattice) or the nested factorization
/// when present and `use_factorization`. Throws InvalidArgument if the grid is
/// too large for the direct path and no factorization is available.
SpectralField trilinear_apply(const TrilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                              const SpectralField& H, bool use_factorization = true);

}  // namespace epkg
