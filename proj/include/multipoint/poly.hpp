#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multipoint/monomial.hpp"
#include "multipoint/rational.hpp"
#include "multipoint/var_table.hpp"

namespace multipoint {

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Exact multivariate polynomial over Q.
///
/// Terms are kept sorted in decreasing degrevlex order with no zero
/// coefficients, so the zero polynomial is the empty term list and the
/// leading term is `terms().front()`. Values are immutable once built and
/// safe to share between threads.
class Poly {
 public:
  explicit Poly(VarTablePtr vars);

  static Poly constant(VarTablePtr vars, const Rational& c);
  static Poly variable(VarTablePtr vars, std::size_t index);
  static Poly variable(VarTablePtr vars, const std::string& name);
  /// Combines like terms, drops zeros and sorts. Monomials must match the table size.
  static Poly from_terms(VarTablePtr vars, std::vector<Term> terms);

  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Value of a constant polynomial (zero included), nullopt otherwise.
  std::optional<Rational> constant_value() const;

  /// Precondition: nonzero.
  const Term& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().monomial; }
  const Rational& leading_coeff() const { return terms_.front().coeff; }

  /// -1 for the zero polynomial.
  long total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool involves(std::size_t var) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend Poly operator-(Poly lhs, const Poly& rhs) { return lhs -= rhs; }
  friend Poly operator*(const Poly& lhs, const Poly& rhs);
  friend Poly operator*(Poly lhs, const Rational& c) { return lhs *= c; }
  friend Poly operator*(const Rational& c, Poly rhs) { return rhs *= c; }

  /// Structural equality; polynomials over different tables are never equal.
  friend bool operator==(const Poly& a, const Poly& b);

 private:
  Poly(VarTablePtr vars, std::vector<Term> sorted_terms);

  VarTablePtr vars_;
  std::vector<Term> terms_;
};

/// Two tables are compatible when they are the same object or list the same names.
bool same_table(const VarTable& a, const VarTable& b);

Poly pow(const Poly& base, unsigned exponent);

/// Simultaneous substitution: every variable index in `assignment` is replaced
/// by its image, all others are left alone.
using Assignment = std::map<std::size_t, Poly>;
Poly substitute(const Poly& p, const Assignment& assignment);

/// Ring homomorphism into another table: variable i of `p` maps to images[i].
Poly change_ring(const Poly& p, const VarTablePtr& target, std::span<const Poly> images);
/// Re-expresses p in `target`, matching variables by name. Variables that do
/// not occur in p need not exist in `target`.
Poly embed(const Poly& p, const VarTablePtr& target);

/// Returns q with q * var = p. Throws NotDivisibleError naming the first
/// monomial with zero exponent in `var`.
Poly divide_by_variable(const Poly& p, std::size_t var);

/// Exact quotient of p by (var - shift) where `shift` does not involve var,
/// computed by synthetic division in var. Throws NotDivisibleError when the
/// remainder is nonzero.
Poly divide_by_binomial(const Poly& p, std::size_t var, const Poly& shift);

/// Formal partial derivative.
Poly derivative(const Poly& p, std::size_t var);

/// Exact value at `point` (one entry per variable).
Rational evaluate(const Poly& p, std::span<const Rational> point);

/// Scales p so its coefficients are coprime integers with positive leading coefficient.
Poly normalize(const Poly& p);

enum class RenderStyle { strict, compact };
std::string render(const Poly& p, RenderStyle style = RenderStyle::strict);
std::string render_monomial(const Monomial& m, const VarTable& vars);

enum class ParseMode { strict, compact };
/// Throws ParseError / UnknownVariableError.
Poly parse_poly(std::string_view src, const VarTablePtr& vars, ParseMode mode = ParseMode::strict);

}  // namespace multipoint
