#include "multipoint/poly.hpp"

#include <algorithm>

#include "multipoint/errors.hpp"

namespace multipoint {

namespace {

void require_same_table(const Poly& a, const Poly& b, const char* op) {
  if (a.vars() != b.vars() && !same_table(*a.vars(), *b.vars())) {
    throw TableMismatchError(std::string(op) + ": operands use different variable tables");
  }
}

// Merges two sorted term lists; `sign` is applied to rhs.
std::vector<Term> merge_terms(const std::vector<Term>& lhs, const std::vector<Term>& rhs, int sign) {
  std::vector<Term> out;
  out.reserve(lhs.size() + rhs.size());
  auto i = lhs.begin();
  auto j = rhs.begin();
  while (i != lhs.end() && j != rhs.end()) {
    auto cmp = degrevlex(i->monomial, j->monomial);
    if (cmp > 0) {
      out.push_back(*i++);
    } else if (cmp < 0) {
      out.push_back(*j++);
      if (sign < 0) out.back().coeff = -out.back().coeff;
    } else {
      Rational c = sign < 0 ? Rational(i->coeff - j->coeff) : Rational(i->coeff + j->coeff);
      if (c != 0) out.push_back({i->monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  for (; i != lhs.end(); ++i) out.push_back(*i);
  for (; j != rhs.end(); ++j) {
    out.push_back(*j);
    if (sign < 0) out.back().coeff = -out.back().coeff;
  }
  return out;
}

}  // namespace

bool same_table(const VarTable& a, const VarTable& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.name(i) != b.name(i)) return false;
  }
  return true;
}

Poly::Poly(VarTablePtr vars) : vars_(std::move(vars)) {}

Poly::Poly(VarTablePtr vars, std::vector<Term> sorted_terms)
    : vars_(std::move(vars)), terms_(std::move(sorted_terms)) {}

Poly Poly::constant(VarTablePtr vars, const Rational& c) {
  Poly p(std::move(vars));
  if (c != 0) p.terms_.push_back({Monomial(p.vars_->size()), c});
  return p;
}

Poly Poly::variable(VarTablePtr vars, std::size_t index) {
  if (index >= vars->size()) throw TableMismatchError("variable index out of range");
  Monomial m(vars->size());
  m.set(index, 1);
  Poly p(std::move(vars));
  p.terms_.push_back({std::move(m), Rational(1)});
  return p;
}

Poly Poly::variable(VarTablePtr vars, const std::string& name) {
  auto i = vars->require(name);
  return variable(std::move(vars), i);
}

Poly Poly::from_terms(VarTablePtr vars, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.monomial.size() != vars->size()) throw TableMismatchError("monomial length does not match table");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return degrevlex(a.monomial, b.monomial) > 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().monomial == t.monomial) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return Poly(std::move(vars), std::move(out));
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.is_one());
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.front().coeff;
  return std::nullopt;
}

long Poly::total_degree() const {
  long d = -1;
  for (const auto& t : terms_) d = std::max<long>(d, t.monomial.degree());
  return d;
}

std::uint32_t Poly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial[var]);
  return d;
}

bool Poly::involves(std::size_t var) const { return degree_in(var) > 0; }

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Poly& Poly::operator+=(const Poly& rhs) {
  require_same_table(*this, rhs, "add");
  terms_ = merge_terms(terms_, rhs.terms_, +1);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  require_same_table(*this, rhs, "sub");
  terms_ = merge_terms(terms_, rhs.terms_, -1);
  return *this;
}

Poly& Poly::operator*=(const Poly& rhs) {
  *this = *this * rhs;
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Poly operator*(const Poly& lhs, const Poly& rhs) {
  require_same_table(lhs, rhs, "mul");
  if (lhs.is_zero() || rhs.is_zero()) return Poly(lhs.vars_);
  if (rhs.size() == 1) {
    // Multiplying by a single term preserves the order.
    const Term& r = rhs.terms_.front();
    std::vector<Term> out;
    out.reserve(lhs.size());
    for (const auto& t : lhs.terms_) out.push_back({t.monomial * r.monomial, t.coeff * r.coeff});
    return Poly(lhs.vars_, std::move(out));
  }
  std::vector<Term> prods;
  prods.reserve(lhs.size() * rhs.size());
  for (const auto& a : lhs.terms_) {
    for (const auto& b : rhs.terms_) prods.push_back({a.monomial * b.monomial, a.coeff * b.coeff});
  }
  return Poly::from_terms(lhs.vars_, std::move(prods));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.vars_ != b.vars_ && !same_table(*a.vars_, *b.vars_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].monomial != b.terms_[i].monomial || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Poly pow(const Poly& base, unsigned exponent) {
  Poly result = Poly::constant(base.vars(), Rational(1));
  Poly square = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= square;
    exponent >>= 1U;
    if (exponent != 0) square *= square;
  }
  return result;
}

Poly substitute(const Poly& p, const Assignment& assignment) {
  for (const auto& [var, image] : assignment) {
    if (var >= p.vars()->size()) throw TableMismatchError("substitute: variable index out of range");
    if (image.vars() != p.vars() && !same_table(*image.vars(), *p.vars())) {
      throw TableMismatchError("substitute: replacement uses a different variable table");
    }
  }
  std::vector<Poly> images;
  images.reserve(p.vars()->size());
  for (std::size_t i = 0; i < p.vars()->size(); ++i) {
    auto it = assignment.find(i);
    images.push_back(it == assignment.end() ? Poly::variable(p.vars(), i) : it->second);
  }
  return change_ring(p, p.vars(), images);
}

Poly change_ring(const Poly& p, const VarTablePtr& target, std::span<const Poly> images) {
  if (images.size() != p.vars()->size()) throw TableMismatchError("change_ring: need one image per variable");
  for (const auto& img : images) {
    if (img.vars() != target && !same_table(*img.vars(), *target)) {
      throw TableMismatchError("change_ring: image uses a different variable table");
    }
  }
  // Variables whose image is a plain variable are handled by moving exponents;
  // the rest are expanded through cached powers.
  const std::size_t nsrc = p.vars()->size();
  std::vector<std::optional<std::size_t>> direct(nsrc);
  for (std::size_t i = 0; i < nsrc; ++i) {
    const auto& img = images[i];
    if (img.size() == 1 && img.leading_coeff() == 1 && img.leading_monomial().degree() == 1) {
      direct[i] = img.leading_monomial().support().front();
    }
  }
  std::vector<std::vector<Poly>> powers(nsrc);
  auto power_of = [&](std::size_t var, std::uint32_t e) -> const Poly& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Poly::constant(target, Rational(1)));
    while (cache.size() <= e) cache.push_back(cache.back() * images[var]);
    return cache[e];
  };

  std::vector<Term> collected;
  for (const auto& t : p.terms()) {
    Monomial m(target->size());
    Poly factor = Poly::constant(target, t.coeff);
    for (std::size_t i = 0; i < nsrc; ++i) {
      auto e = t.monomial[i];
      if (e == 0) continue;
      if (direct[i]) {
        m.set(*direct[i], m[*direct[i]] + e);
      } else {
        factor *= power_of(i, e);
      }
    }
    for (const auto& ft : factor.terms()) collected.push_back({ft.monomial * m, ft.coeff});
  }
  return Poly::from_terms(target, std::move(collected));
}

Poly embed(const Poly& p, const VarTablePtr& target) {
  std::vector<Poly> images;
  images.reserve(p.vars()->size());
  for (std::size_t i = 0; i < p.vars()->size(); ++i) {
    auto j = target->index_of(p.vars()->name(i));
    if (j) {
      images.push_back(Poly::variable(target, *j));
    } else if (p.involves(i)) {
      throw TableMismatchError("embed: target table lacks variable '" + p.vars()->name(i) + "'");
    } else {
      images.emplace_back(target);
    }
  }
  return change_ring(p, target, images);
}

Poly divide_by_variable(const Poly& p, std::size_t var) {
  if (var >= p.vars()->size()) throw TableMismatchError("divide_by_variable: variable index out of range");
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    if (t.monomial[var] == 0) {
      throw NotDivisibleError(p.vars()->name(var), render_monomial(t.monomial, *p.vars()));
    }
    Monomial m = t.monomial;
    m.set(var, m[var] - 1);
    out.push_back({std::move(m), t.coeff});
  }
  return Poly::from_terms(p.vars(), std::move(out));
}

Poly divide_by_binomial(const Poly& p, std::size_t var, const Poly& shift) {
  if (shift.involves(var)) throw InternalError("divide_by_binomial: shift involves the division variable");
  const auto& vars = p.vars();
  const std::uint32_t deg = p.degree_in(var);
  // coeffs[k] = coefficient of var^k, a polynomial free of var.
  std::vector<Poly> coeffs(deg + 1, Poly(vars));
  {
    std::vector<std::vector<Term>> buckets(deg + 1);
    for (const auto& t : p.terms()) {
      Monomial m = t.monomial;
      auto k = m[var];
      m.set(var, 0);
      buckets[k].push_back({std::move(m), t.coeff});
    }
    for (std::uint32_t k = 0; k <= deg; ++k) coeffs[k] = Poly::from_terms(vars, std::move(buckets[k]));
  }
  if (p.is_zero()) return Poly(vars);
  // Synthetic division by (var - shift): q_{k-1} = c_k + shift * q_k.
  std::vector<Poly> quotient(deg, Poly(vars));
  Poly carry(vars);
  for (std::uint32_t k = deg; k >= 1; --k) {
    carry = coeffs[k] + shift * carry;
    quotient[k - 1] = carry;
  }
  Poly remainder = coeffs[0] + shift * carry;
  if (!remainder.is_zero()) {
    throw NotDivisibleError(vars->name(var) + "-(" + render(shift) + ")",
                            render_monomial(remainder.leading_monomial(), *vars));
  }
  Poly result(vars);
  Poly v = Poly::variable(vars, var);
  for (std::uint32_t k = deg; k-- > 0;) result = result * v + quotient[k];
  return result;
}

Poly derivative(const Poly& p, std::size_t var) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    auto e = t.monomial[var];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set(var, e - 1);
    out.push_back({std::move(m), t.coeff * e});
  }
  return Poly::from_terms(p.vars(), std::move(out));
}

Rational evaluate(const Poly& p, std::span<const Rational> point) {
  if (point.size() != p.vars()->size()) {
    throw TableMismatchError("evaluate: point has " + std::to_string(point.size()) + " coordinates, table has " +
                             std::to_string(p.vars()->size()));
  }
  Rational total = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < point.size(); ++i) {
      for (std::uint32_t k = 0; k < t.monomial[i]; ++k) v *= point[i];
    }
    total += v;
  }
  return total;
}

Poly normalize(const Poly& p) {
  if (p.is_zero()) return p;
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  Rational scale = make_rational(den_lcm, num_gcd);
  if (p.leading_coeff() < 0) scale = -scale;
  return p * scale;
}

}  // namespace multipoint
