#include <catch_amalgamated.hpp>

#include "multipoint/errors.hpp"
#include "multipoint/poly.hpp"
#include "multipoint/verify.hpp"
#include "support.hpp"

using namespace multipoint;
using testing_support::P;
using testing_support::table;

namespace {

Poly strict(const VarTablePtr& vars, const std::string& text) { return parse_poly(text, vars, ParseMode::strict); }

// Coefficient of the monomial given by `exps`, or zero.
Rational coeff_of(const Poly& p, std::vector<std::uint32_t> exps) {
  Monomial m(std::move(exps));
  for (const auto& t : p.terms()) {
    if (t.monomial == m) return t.coeff;
  }
  return 0;
}

}  // namespace

TEST_CASE("rationals are canonical") {
  CHECK(to_string(make_rational(6, -4)) == "-3/2");
  CHECK(to_string(make_rational(8, 4)) == "2");
  CHECK(parse_rational("-7/14") == make_rational(-1, 2));
  CHECK(parse_rational(" 12 ") == 12);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("x"), ValidationError);
}

TEST_CASE("variable tables reject bad names") {
  CHECK_THROWS_AS(table({"x", "x"}), ValidationError);
  CHECK_THROWS_AS(table({"1x"}), ValidationError);
  CHECK_THROWS_AS(VarTable::make({{"l", VarRole::lambda, 0, 0}}), ValidationError);
  CHECK_THROWS_AS(VarTable::make({{"a", VarRole::a, 1, 0}}), ValidationError);
  auto v = table({"t", "x", "y"});
  CHECK(v->index_of("y") == 2u);
  CHECK_FALSE(v->index_of("z"));
}

TEST_CASE("parse strict grammar") {
  auto v = table({"t", "x", "y"});
  Poly p = strict(v, "x^2+t*y");
  REQUIRE(p.size() == 2);
  CHECK(coeff_of(p, {0, 2, 0}) == 1);
  CHECK(coeff_of(p, {1, 0, 1}) == 1);
  CHECK(strict(v, "0").is_zero());
  CHECK(strict(v, "-(x - y)*(1/2)") == strict(v, "(1/2)*y-(1/2)*x"));
  CHECK(strict(v, "(x+y)^3") == strict(v, "x^3+3*x^2*y+3*x*y^2+y^3"));
  CHECK(strict(v, "(-3/6)*x") == strict(v, "-(1/2)*x"));
}

TEST_CASE("compact grammar desugars digit suffixes and juxtaposition") {
  auto v = table({"t", "x", "y"});
  CHECK(P(v, "x2+ty") == strict(v, "x^2+t*y"));
  CHECK(P(v, "y2-tx") == strict(v, "y^2-t*x"));
  CHECK(P(v, "x3+y3+xy") == strict(v, "x^3+y^3+x*y"));
  CHECK(P(v, "2x2y") == strict(v, "2*x^2*y"));
  CHECK(P(v, "x2^2") == strict(v, "x^4"));
  CHECK_THROWS_AS(strict(v, "x2"), UnknownVariableError);

  auto w = table({"x1", "x2", "x"});
  CHECK(P(w, "x2") == strict(w, "x2"));
  CHECK(P(w, "x1x2") == strict(w, "x1*x2"));
}

TEST_CASE("parse errors carry positions") {
  auto v = table({"x", "y"});
  try {
    (void)strict(v, "x + * y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  try {
    (void)strict(v, "x + z");
    FAIL("expected an unknown variable");
  } catch (const UnknownVariableError& e) {
    CHECK(e.name() == "z");
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(strict(v, ""), ParseError);
  CHECK_THROWS_AS(strict(v, "(x+y"), ParseError);
  CHECK_THROWS_AS(strict(v, "(1/0)"), ParseError);
  CHECK_THROWS_AS(strict(v, "x^"), ParseError);
}

TEST_CASE("ring arithmetic") {
  auto v = table({"x", "y", "l"});
  CHECK((P(v, "x+y") * P(v, "x-y")) == P(v, "x2-y2"));
  CHECK((P(v, "x3y+7") * Poly(v)).is_zero());
  Poly cube = pow(P(v, "x+l"), 3);
  CHECK(cube == P(v, "x3+3x2l+3xl2+l3"));
  // Binomial coefficients for a larger power.
  Poly p10 = pow(P(v, "x+l"), 10);
  Integer binom = 1;
  for (std::uint32_t k = 0; k <= 10; ++k) {
    CHECK(coeff_of(p10, {10 - k, 0, k}) == Rational(binom));
    binom = binom * (10 - k) / (k + 1);
  }
  CHECK(pow(P(v, "x"), 0) == Poly::constant(v, 1));
}

TEST_CASE("operands must share a table") {
  auto a = table({"x", "y"});
  auto b = table({"x", "z"});
  CHECK_THROWS_AS(P(a, "x") + P(b, "x"), TableMismatchError);
  CHECK_THROWS_AS(P(a, "x") * P(b, "z"), TableMismatchError);
  CHECK_FALSE(P(a, "x") == P(b, "x"));
}

TEST_CASE("substitution") {
  auto v = table({"t", "x", "y", "l", "a"});
  Poly p = P(v, "x2+ty");
  Poly s = substitute(p, {{1, P(v, "x+l")}, {2, P(v, "y+la")}});
  CHECK(s == P(v, "x2+2xl+l2+ty+tla"));
  CHECK(substitute(p, {}) == p);
  CHECK(substitute(p, {{1, P(v, "x")}}) == p);
  CHECK(substitute(P(v, "x"), {{1, Poly(v)}}).is_zero());
  // Simultaneous, not sequential.
  CHECK(substitute(P(v, "x+2y"), {{1, P(v, "y")}, {2, P(v, "x")}}) == P(v, "y+2x"));
}

TEST_CASE("divide by a variable") {
  auto v = table({"t", "x", "l", "a"});
  CHECK(divide_by_variable(P(v, "2xl+l2+tal"), 2) == P(v, "ta+l+2x"));
  CHECK(divide_by_variable(Poly(v), 2).is_zero());
  CHECK(divide_by_variable(P(v, "l3a+l2x"), 2) == P(v, "l2a+lx"));
  try {
    (void)divide_by_variable(P(v, "l2+x"), 2);
    FAIL("expected NotDivisibleError");
  } catch (const NotDivisibleError& e) {
    CHECK(e.monomial() == "x");
  }
}

TEST_CASE("divide by a binomial") {
  auto v = table({"y", "y1"});
  Poly q = divide_by_binomial(P(v, "y1^2-y^2"), 1, P(v, "y"));
  CHECK(q == P(v, "y+y1"));
  CHECK_THROWS_AS(divide_by_binomial(P(v, "y1^2+y"), 1, P(v, "y")), NotDivisibleError);
}

TEST_CASE("evaluation") {
  auto v = table({"t", "x", "y"});
  std::vector<Rational> pt{1, 2, 3};
  CHECK(evaluate(P(v, "x2+ty"), pt) == 7);
  CHECK(evaluate(Poly(v), pt) == 0);
  auto w = table({"t", "x", "y", "l", "a"});
  std::vector<Rational> root{0, 1, 0, -2, 5};
  CHECK(evaluate(P(w, "at+l+2x"), root) == 0);
  CHECK_THROWS_AS(evaluate(P(v, "x"), std::vector<Rational>{1}), TableMismatchError);
}

TEST_CASE("normalization") {
  auto v = table({"x", "y"});
  CHECK(normalize(strict(v, "(1/2)*x+(1/2)*y")) == P(v, "x+y"));
  CHECK(normalize(P(v, "-2x-4y")) == P(v, "x+2y"));
  CHECK(normalize(Poly(v)).is_zero());
  Poly q = strict(v, "(-4/3)*x^2+(2/9)*y");
  CHECK(normalize(normalize(q)) == normalize(q));
  CHECK(normalize(q) == P(v, "6x2-y"));
}

TEST_CASE("rendering") {
  auto v = table({"t", "x", "y"});
  CHECK(render(P(v, "x2+ty")) == "x^2+t*y");
  CHECK(render(Poly(v)) == "0");
  CHECK(render(strict(v, "-(1/2)*x+3")) == "-(1/2)*x+3");
  CHECK(render(P(v, "x2+ty"), RenderStyle::compact) == "x2+ty");
  auto w = table({"t", "x", "y", "l", "a"});
  Poly g = P(w, "a2l+2ay-t");
  const std::string once = render(g);
  CHECK(once == render(parse_poly(once, w)));
  CHECK(parse_poly(once, w) == g);
  auto long_names = table({"l1", "a1"});
  CHECK(render(P(long_names, "l1a1"), RenderStyle::compact) == "l1*a1");
}

TEST_CASE("degrevlex breaks ties at the last variable") {
  auto v = table({"x", "y", "z"});
  // Same degree: x*z < y^2 because z has the larger exponent.
  Poly p = P(v, "xz+y2");
  CHECK(render(p) == "y^2+x*z");
  CHECK(render(P(v, "z3+x2")) == "z^3+x^2");
}

TEST_CASE("ring axioms on random polynomials") {
  Rng rng(2024);
  auto v = table({"w", "x", "y", "z"});
  for (int i = 0; i < 60; ++i) {
    Poly a = rng.poly(v, 4, 9);
    Poly b = rng.poly(v, 4, 9);
    Poly c = rng.poly(v, 4, 9);
    CHECK((a + b) == (b + a));
    CHECK((a * b) == (b * a));
    CHECK(((a * b) * c) == (a * (b * c)));
    CHECK((a * (b + c)) == (a * b + a * c));
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("division undoes multiplication by a variable") {
  Rng rng(11);
  auto v = table({"x", "y", "l"});
  for (int i = 0; i < 50; ++i) {
    Poly p = rng.poly(v, 4, 9);
    auto var = static_cast<std::size_t>(rng.uniform(0, 2));
    CHECK(divide_by_variable(p * Poly::variable(v, var), var) == p);
  }
}

TEST_CASE("evaluation commutes with substitution") {
  Rng rng(5);
  auto v = table({"x", "y", "z"});
  for (int i = 0; i < 40; ++i) {
    Poly p = rng.poly(v, 3, 5);
    Assignment sigma;
    for (std::size_t k = 0; k < 3; ++k) {
      if (rng.coin()) sigma.emplace(k, rng.poly(v, 2, 5));
    }
    std::vector<Rational> pt{rng.rational(5), rng.rational(5), rng.rational(5)};
    std::vector<Rational> image(3);
    for (std::size_t k = 0; k < 3; ++k) {
      auto it = sigma.find(k);
      image[k] = it == sigma.end() ? pt[k] : evaluate(it->second, pt);
    }
    CHECK(evaluate(substitute(p, sigma), pt) == evaluate(p, image));
  }
}

TEST_CASE("parse inverts render") {
  Rng rng(99);
  auto v = table({"t", "x", "y", "l1", "a1"});
  for (int i = 0; i < 60; ++i) {
    Poly p = rng.poly(v, 4, 9) * make_rational(1, rng.uniform(1, 7));
    const std::string text = render(p);
    Poly back = parse_poly(text, v);
    CHECK(back == p);
    CHECK(render(back) == text);
  }
}

TEST_CASE("normalize keeps the zero set") {
  Rng rng(3);
  auto v = table({"x", "y"});
  for (int i = 0; i < 40; ++i) {
    Poly p = rng.poly(v, 3, 6) * rng.nonzero_rational(6);
    Poly n = normalize(p);
    CHECK(normalize(n) == n);
    if (!n.is_zero()) CHECK(n.leading_coeff() > 0);
    std::vector<Rational> pt{rng.rational(3), rng.rational(3)};
    CHECK((evaluate(p, pt) == 0) == (evaluate(n, pt) == 0));
  }
}

TEST_CASE("derivative and change of ring") {
  auto v = table({"x", "y"});
  CHECK(derivative(P(v, "x3y+y2"), 0) == P(v, "3x2y"));
  auto w = table({"t", "x", "y", "l"});
  CHECK(embed(P(v, "x2+y"), w) == P(w, "x2+y"));
  CHECK_THROWS_AS(embed(P(w, "t"), v), TableMismatchError);
  CHECK(embed(P(w, "x"), v) == P(v, "x"));
}
