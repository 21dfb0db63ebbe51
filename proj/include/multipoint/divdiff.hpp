#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multipoint/atlas.hpp"
#include "multipoint/poly.hpp"

namespace multipoint {

/// A polynomial map C^n -> C^p in unfolding normal form: the first s
/// coordinate functions are the first s source variables (the parameters).
class PolyMap {
 public:
  /// `params` nullopt means auto-detect (see detect_params). Throws ValidationError.
  static PolyMap make(VarTablePtr vars, std::vector<Poly> components, std::optional<int> params = std::nullopt);
  /// Parses ';'-separated component texts in compact mode.
  static PolyMap parse(const std::vector<std::string>& var_names, const std::string& map_text,
                       std::optional<int> params = std::nullopt);

  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<Poly>& components() const noexcept { return components_; }
  int n() const noexcept { return static_cast<int>(vars_->size()); }
  int p() const noexcept { return static_cast<int>(components_.size()); }
  int s() const noexcept { return s_; }
  int base_dim() const noexcept { return n() - s_; }

  std::vector<std::string> param_names() const;
  std::vector<std::string> base_names() const;

 private:
  VarTablePtr vars_;
  std::vector<Poly> components_;
  int s_ = 0;
};

/// Longest prefix with f_i = x_i. A prefix covering every source variable
/// (identity or graph of a map) counts as no parameters at all.
int detect_params(const VarTable& vars, const std::vector<Poly>& components);

/// Chart built for f over a collection for its base dimension.
Chart build_chart_for(const PolyMap& f, const CoveringCollection& cc, const MultiIndex& alpha, int r);

/// levels[j-1] holds the p - s level-j differences, in chart coordinates.
struct DifferenceChain {
  std::vector<std::vector<Poly>> levels;
};

/// The substitution gamma^(j-1) -> gamma^(j-1) + nu_j(gamma^(j)), j >= 2.
Assignment level_shift(const Chart& chart, int j);

/// depth 0 means r - 1.
DifferenceChain difference_chain(const PolyMap& f, const Chart& chart, int depth = 0);

/// lambda^(j) * level_j - (shift(level_{j-1}) - level_{j-1}) for every
/// component; level 0 is f itself with base x shifted by nu_1. All zero
/// exactly when the chain telescopes.
std::vector<Poly> telescoping_defect(const PolyMap& f, const Chart& chart, const DifferenceChain& chain, int j);

/// Classical iterated divided differences of a normal-form map
/// (x_1..x_{n-1}, y) -> (x, f_n, ..., f_p). Variables of the result:
/// x_1..x_{n-1}, y, y_1..y_{r-1}.
struct ClassicalDifferences {
  VarTablePtr vars;
  std::vector<std::vector<Poly>> levels;
};
ClassicalDifferences classical_corank1(const PolyMap& f, int r);

/// Rewrites a chain from a one-dimensional-fiber chart in the variables of
/// classical_corank1: lambda^(1) -> y_1 - y, lambda^(j) -> y_j - y_{j-1}.
std::vector<std::vector<Poly>> corank1_translate(const Chart& chart, const DifferenceChain& chain,
                                                 const VarTablePtr& classical_vars);

}  // namespace multipoint
