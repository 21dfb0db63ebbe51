#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "multipoint/atlas.hpp"
#include "multipoint/divdiff.hpp"
#include "multipoint/poly.hpp"

namespace multipoint {

/// Reduced Groebner basis under degrevlex: monic, interreduced, sorted by
/// increasing leading monomial. The unit ideal gives {1}, the zero ideal {}.
std::vector<Poly> groebner_basis(const VarTablePtr& vars, const std::vector<Poly>& generators);

/// Remainder of p modulo a Groebner basis (full reduction).
Poly reduce(const Poly& p, const std::vector<Poly>& basis);

/// Krull dimension of k[vars]/I from the leading monomials of a Groebner
/// basis of I; -1 for the unit ideal.
int dimension_from_basis(std::size_t nvars, const std::vector<Poly>& basis);

/// Generators plus a lazily computed, cached reduced Groebner basis. Copies
/// share the cache; safe to query from several threads.
class IdealHandle {
 public:
  IdealHandle(VarTablePtr vars, std::vector<Poly> generators);

  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<Poly>& generators() const noexcept { return generators_; }

  const std::vector<Poly>& groebner() const;
  bool has_basis() const;
  int dimension() const;
  bool contains(const Poly& p) const;
  bool is_unit() const { return dimension() == -1; }

  /// New handle with extra generators appended.
  IdealHandle extended(const std::vector<Poly>& more) const;

 private:
  struct Cache;

  VarTablePtr vars_;
  std::vector<Poly> generators_;
  std::shared_ptr<Cache> cache_;
};

/// Defining equations of K_r on one chart.
struct ChartEquations {
  Chart chart;
  /// (r - 1)(p - s) normalized generators, level by level.
  std::vector<Poly> generators;
  std::vector<std::vector<Poly>> projections;

  IdealHandle ideal() const { return IdealHandle(chart.vars(), generators); }
};

ChartEquations chart_equations(const PolyMap& f, int r, const CoveringCollection& cc, const MultiIndex& alpha);

/// One entry per multi-index of (f.base_dim(), r, cc.ell()) in lexicographic
/// order. `jobs` > 1 computes charts concurrently.
std::vector<ChartEquations> kr_equations(const PolyMap& f, int r, const CoveringCollection& cc, int jobs = 1);

/// nr - p(r - 1), the dimension of a dimensionally correct K_r.
int expected_dimension(const PolyMap& f, int r);

/// Dimension of the fiber of K_r over (point, ..., point): the maximum over
/// charts of dim(I + <x^(j) - point, j = 0..r-1>), with x^(j) the projections.
/// `point` lists every source coordinate, parameters first. -1 when empty.
int diagonal_fiber_dimension(const PolyMap& f, int r, const std::vector<Rational>& point,
                             const CoveringCollection& cc);

}  // namespace multipoint
