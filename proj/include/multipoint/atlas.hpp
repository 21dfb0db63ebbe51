#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multipoint/poly.hpp"
#include "multipoint/rational.hpp"
#include "multipoint/var_table.hpp"

namespace multipoint {

using RationalMatrix = std::vector<std::vector<Rational>>;

std::size_t rank(RationalMatrix m);
/// nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// L(x) = sum_j coeffs[j] * x_j on C^n.
struct LinearForm {
  std::vector<Rational> coeffs;

  Rational operator()(std::span<const Rational> x) const;
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

enum class CollectionStrategy { coordinate, vandermonde };

/// Linear forms on C^n in general position, each paired with n-1 companion
/// forms. The nonvanishing loci of the forms cover (P^{n-1})^{ell-1}; form i
/// together with its companions gives the coordinate change Lambda_i.
class CoveringCollection {
 public:
  /// Validates both invariants; throws ValidationError.
  CoveringCollection(int n, int ell, std::vector<LinearForm> forms, std::vector<std::vector<std::size_t>> companions);

  int n() const noexcept { return n_; }
  int ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return forms_.size(); }
  const std::vector<LinearForm>& forms() const noexcept { return forms_; }
  const LinearForm& form(std::size_t i) const { return forms_.at(i); }
  /// 0-based indices into forms().
  const std::vector<std::size_t>& companions(std::size_t i) const { return companions_.at(i); }

  /// Rows: form i, then its companions.
  RationalMatrix lambda_matrix(std::size_t i) const;

  /// Number of forms a collection for (n, ell) needs.
  static std::size_t required_size(int n, int ell);

 private:
  int n_;
  int ell_;
  std::vector<LinearForm> forms_;
  std::vector<std::vector<std::size_t>> companions_;
};

/// Throws ValidationError when `coordinate` is asked for outside n <= 2, ell <= 3.
CoveringCollection covering_collection(int n, int ell, CollectionStrategy strategy);
/// `coordinate` when available, vandermonde otherwise.
CoveringCollection default_collection(int n, int ell);

/// Text format: one form per line as comma-separated rationals, then a line
/// `companions: i,j;k,l;...` listing the 1-based companion indices of each
/// form. `#` starts a comment. Errors name the offending line.
CoveringCollection parse_covering_collection(std::istream& in, int ell);
CoveringCollection load_covering_collection(const std::string& path, int ell);
std::string format_covering_collection(const CoveringCollection& cc);

/// alpha_i is 1-based and satisfies 1 <= alpha_i <= (ell - i)(n - 1) + 1.
using MultiIndex = std::vector<int>;

/// Lexicographic enumeration of all multi-indices of length r - 1.
std::vector<MultiIndex> multi_indices(int n, int r, int ell);
std::size_t multi_index_count(int n, int r, int ell);
std::string format_multi_index(const MultiIndex& alpha);  // "U(1,2)"

/// Data of one blowup level i of a chart.
struct ChartLevel {
  std::size_t form = 0;  // 0-based index of L_{alpha_i}
  RationalMatrix lambda;
  RationalMatrix lambda_inverse;
  std::size_t lambda_var = 0;
  std::vector<std::size_t> a_vars;  // n - 1 entries
  /// nu_i(gamma^(i)) = lambda^(i) * Lambda^{-1}(1, a^(i)), n components.
  std::vector<Poly> nu;
};

/// One affine chart U_alpha of the universal space B_r of C^n, with n the
/// base (non-parameter) dimension. Variables are laid out as
/// params | base | lambda^(1), a^(1)_* | ... | lambda^(r-1), a^(r-1)_*.
class Chart {
 public:
  const MultiIndex& alpha() const noexcept { return alpha_; }
  const VarTablePtr& vars() const noexcept { return vars_; }
  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  const std::vector<std::size_t>& param_vars() const noexcept { return param_vars_; }
  const std::vector<std::size_t>& base_vars() const noexcept { return base_vars_; }
  /// level is 1-based.
  const ChartLevel& level(int i) const { return levels_.at(static_cast<std::size_t>(i - 1)); }
  int depth() const noexcept { return static_cast<int>(levels_.size()); }

  /// gamma^(i) = (lambda^(i), a^(i)) as n polynomials.
  std::vector<Poly> gamma(int i) const;
  /// nu_i applied to an arbitrary n-vector gamma = (l, b): Lambda_i^{-1}(l, l*b).
  std::vector<Poly> apply_nu(int i, std::span<const Poly> gamma) const;

  /// The exceptional divisor is {lambda^(r-1) = 0}.
  std::size_t exceptional_var() const { return levels_.back().lambda_var; }

  std::string name() const { return format_multi_index(alpha_); }

 private:
  friend Chart build_chart(const CoveringCollection&, const MultiIndex&, int, const std::vector<std::string>&,
                           const std::vector<std::string>&);

  MultiIndex alpha_;
  VarTablePtr vars_;
  int n_ = 0;
  int r_ = 0;
  std::vector<std::size_t> param_vars_;
  std::vector<std::size_t> base_vars_;
  std::vector<ChartLevel> levels_;
};

/// Builds chart alpha of B_r for base variables `base_names` (size cc.n())
/// with leading parameter variables `param_names`.
Chart build_chart(const CoveringCollection& cc, const MultiIndex& alpha, int r,
                  const std::vector<std::string>& param_names, const std::vector<std::string>& base_names);
/// Default names: parameters t1..ts, base variables x1..xn.
Chart build_chart(const CoveringCollection& cc, const MultiIndex& alpha, int n, int r, int params);

/// x^(0) = x, x^(1), ..., x^(r-1) in chart coordinates (r vectors of n base
/// coordinates each).
std::vector<std::vector<Poly>> projection_to_Xr(const Chart& chart);

/// Inverse chart map: chart coordinates of the point of B_r lying over the
/// source tuple (x^(0), ..., x^(r-1)) (each of length n, parameters prepended
/// to the result from `params`). nullopt when the tuple is not representable
/// in this chart (some L_{alpha_i}(delta) vanishes).
std::optional<std::vector<Rational>> chart_coordinates(const Chart& chart, std::span<const Rational> params,
                                                       const std::vector<std::vector<Rational>>& points);

}  // namespace multipoint
