#include <catch_amalgamated.hpp>

#include "multipoint/divdiff.hpp"
#include "multipoint/errors.hpp"
#include "multipoint/verify.hpp"
#include "support.hpp"

using namespace multipoint;
using testing_support::P;

namespace {

const std::vector<std::string> kTrifoldVars{"t", "x", "y"};
const char* const kTrifold = "t;x2+ty;y2-tx;x3+y3+xy";

std::vector<std::string> rendered(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(render(p));
  return out;
}

}  // namespace

TEST_CASE("parameter detection") {
  CHECK(PolyMap::parse(kTrifoldVars, kTrifold).s() == 1);
  CHECK(PolyMap::parse({"x", "y"}, "x;y").s() == 0);
  CHECK(PolyMap::parse({"x", "y"}, "x;y;x2+y").s() == 0);
  CHECK(PolyMap::parse({"x", "y"}, "x;y2").s() == 1);
  CHECK(PolyMap::parse({"x", "y"}, "y;x").s() == 0);
  CHECK(PolyMap::parse({"x", "y"}, "x;y2", 0).s() == 0);
  CHECK_THROWS_AS(PolyMap::parse({"x", "y"}, "x2;y", 1), ValidationError);
  CHECK_THROWS(PolyMap::parse({"x", "y"}, "x;z"));
}

TEST_CASE("first differences of the trifold") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  auto cc = default_collection(2, 2);
  SECTION("U(1)") {
    Chart c = build_chart_for(f, cc, {1}, 2);
    auto chain = difference_chain(f, c);
    REQUIRE(chain.levels.size() == 1);
    CHECK(rendered(chain.levels[0]) ==
          std::vector<std::string>{"t*a1+2*x+l1", "l1*a1^2+2*y*a1-t",
                                   "l1^2*a1^3+3*y*l1*a1^2+3*y^2*a1+3*x^2+3*x*l1+l1^2+x*a1+l1*a1+y"});
  }
  SECTION("U(2)") {
    Chart c = build_chart_for(f, cc, {2}, 2);
    auto chain = difference_chain(f, c);
    CHECK(chain.levels[0][0] == P(c.vars(), "l1*a1^2+2*x*a1+t"));
    CHECK(chain.levels[0][1] == P(c.vars(), "2*y+l1-t*a1"));
  }
}

TEST_CASE("second differences of the trifold") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  auto cc = default_collection(2, 3);
  SECTION("U(1,1)") {
    Chart c = build_chart_for(f, cc, {1, 1}, 3);
    auto chain = difference_chain(f, c);
    REQUIRE(chain.levels.size() == 2);
    CHECK(chain.levels[1][0] == P(c.vars(), "t*a2+1"));
    CHECK(chain.levels[1][1] == P(c.vars(), "l1*l2*a2^2+l2^2*a2^2+2*l1*a1*a2+2*a1*l2*a2+a1^2+2*y*a2"));
  }
  SECTION("U(1,2)") {
    Chart c = build_chart_for(f, cc, {1, 2}, 3);
    auto chain = difference_chain(f, c);
    CHECK(chain.levels[1][0] == P(c.vars(), "t+a2"));
    CHECK(chain.levels[1][1] == P(c.vars(), "a1^2*a2+2*a1*l2*a2+l2^2*a2+2*l1*a1+l1*l2+2*y"));
  }
  SECTION("depth can be truncated") {
    Chart c = build_chart_for(f, cc, {1, 1}, 3);
    CHECK(difference_chain(f, c, 1).levels.size() == 1);
  }
}

TEST_CASE("identity map has unit first differences") {
  auto f = PolyMap::parse({"x", "y"}, "x;y");
  auto cc = default_collection(2, 2);
  for (const auto& alpha : multi_indices(2, 2, 2)) {
    Chart c = build_chart_for(f, cc, alpha, 2);
    auto chain = difference_chain(f, c);
    bool has_unit = false;
    for (const auto& g : chain.levels[0]) has_unit = has_unit || g.constant_value() == Rational(1);
    CHECK(has_unit);
  }
}

TEST_CASE("level shift moves the previous level only") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  Chart c = build_chart_for(f, default_collection(2, 3), {1, 2}, 3);
  auto shift = level_shift(c, 2);
  const auto& lv = c.level(1);
  CHECK(shift.size() == 2);
  CHECK(shift.at(lv.lambda_var) == P(c.vars(), "l1+l2*a2"));
  CHECK(shift.at(lv.a_vars[0]) == P(c.vars(), "a1+l2"));
  CHECK_THROWS(level_shift(c, 1));
}

TEST_CASE("classical differences") {
  SECTION("square") {
    auto f = PolyMap::parse({"x", "y"}, "x;y2");
    auto cl = classical_corank1(f, 2);
    CHECK(cl.vars->names() == std::vector<std::string>{"x", "y", "y_1"});
    CHECK(cl.levels[0][0] == P(cl.vars, "y+y_1"));
  }
  SECTION("cube") {
    auto f = PolyMap::parse({"x", "y"}, "x;y3");
    auto cl = classical_corank1(f, 3);
    CHECK(cl.levels[0][0] == P(cl.vars, "y^2+y*y_1+y_1^2"));
    CHECK(cl.levels[1][0] == P(cl.vars, "y+y_1+y_2"));
  }
  SECTION("constant component") {
    auto f = PolyMap::parse({"x", "y"}, "x;x2+3", 1);
    auto cl = classical_corank1(f, 3);
    CHECK(cl.levels[0][0].is_zero());
    CHECK(cl.levels[1][0].is_zero());
  }
  SECTION("one variable") {
    auto f = PolyMap::parse({"y"}, "y4");
    auto cl = classical_corank1(f, 4);
    CHECK(cl.levels[2][0] == P(cl.vars, "y+y_1+y_2+y_3"));
  }
  CHECK_THROWS_AS(classical_corank1(PolyMap::parse({"x", "y"}, "y;x2", 0), 2), ValidationError);
}

TEST_CASE("chart differences agree with classical ones in corank one") {
  auto f = PolyMap::parse({"x", "y"}, "x;y3+xy;y4");
  for (int r = 2; r <= 4; ++r) {
    auto cc = default_collection(1, r);
    Chart c = build_chart_for(f, cc, MultiIndex(static_cast<std::size_t>(r - 1), 1), r);
    auto chain = difference_chain(f, c);
    auto cl = classical_corank1(f, r);
    auto tr = corank1_translate(c, chain, cl.vars);
    REQUIRE(tr.size() == cl.levels.size());
    for (std::size_t j = 0; j < tr.size(); ++j) CHECK(tr[j] == cl.levels[j]);
  }
}

TEST_CASE("chains telescope on random maps") {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = static_cast<int>(rng.uniform(1, 3));
    const int s = static_cast<int>(rng.uniform(0, std::min(n - 1, 1)));
    const int p = static_cast<int>(rng.uniform(std::max(s, 1), 4));
    const int r = static_cast<int>(rng.uniform(2, 3));
    PolyMap f = random_map(rng, n, p, s, 3, 4);
    auto cc = default_collection(f.base_dim(), r);
    for (const auto& alpha : multi_indices(f.base_dim(), r, r)) {
      Chart c = build_chart_for(f, cc, alpha, r);
      auto chain = difference_chain(f, c);
      for (int j = 1; j < r; ++j) {
        for (const auto& d : telescoping_defect(f, c, chain, j)) CHECK(d.is_zero());
      }
    }
  }
}

TEST_CASE("tampered chain leaves a defect") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  Chart c = build_chart_for(f, default_collection(2, 2), {1}, 2);
  auto chain = difference_chain(f, c);
  drop_one_term(chain);
  bool nonzero = false;
  for (const auto& d : telescoping_defect(f, c, chain, 1)) nonzero = nonzero || !d.is_zero();
  CHECK(nonzero);
}

TEST_CASE("first differences restrict to the derivative on the diagonal") {
  SampleConfig cfg;
  for (const char* map : {"t;x2+ty;y2-tx;x3+y3+xy", "t;x;y3+tx+y2"}) {
    auto f = PolyMap::parse(kTrifoldVars, map);
    CHECK(check_diagonal_kernel(f, default_collection(f.base_dim(), 2), cfg).passed());
  }
}

TEST_CASE("fixing a parameter commutes with differencing") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  auto g = PolyMap::parse({"x", "y"}, "x2+2y;y2-2x;x3+y3+xy", 0);
  auto cc = default_collection(2, 3);
  for (const auto& alpha : multi_indices(2, 3, 3)) {
    Chart cf = build_chart_for(f, cc, alpha, 3);
    Chart cg = build_chart_for(g, cc, alpha, 3);
    auto full = difference_chain(f, cf);
    auto sliced = difference_chain(g, cg);
    Assignment t2{{cf.param_vars()[0], Poly::constant(cf.vars(), Rational(2))}};
    for (std::size_t j = 0; j < full.levels.size(); ++j) {
      for (std::size_t k = 0; k < full.levels[j].size(); ++k) {
        CHECK(embed(substitute(full.levels[j][k], t2), cg.vars()) == sliced.levels[j][k]);
      }
    }
  }
}

TEST_CASE("chart and map dimensions must agree") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  Chart wrong = build_chart(default_collection(2, 2), {1}, 2, 2, 0);
  CHECK_THROWS_AS(difference_chain(f, wrong), TableMismatchError);
}
