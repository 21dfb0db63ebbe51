#include <catch_amalgamated.hpp>

#include "multipoint/errors.hpp"
#include "multipoint/verify.hpp"
#include "support.hpp"

using namespace multipoint;
using testing_support::P;
using testing_support::table;

namespace {

const std::vector<std::string> kTrifoldVars{"t", "x", "y"};
const char* const kTrifold = "t;x2+ty;y2-tx;x3+y3+xy";

}  // namespace

TEST_CASE("rng is deterministic and bounded") {
  Rng a(42), b(42), c(43);
  std::vector<long> xs, ys, zs;
  for (int i = 0; i < 50; ++i) {
    xs.push_back(a.uniform(-3, 7));
    ys.push_back(b.uniform(-3, 7));
    zs.push_back(c.uniform(-3, 7));
  }
  CHECK(xs == ys);
  CHECK(xs != zs);
  for (long x : xs) CHECK((x >= -3 && x <= 7));
  for (int i = 0; i < 50; ++i) {
    CHECK(a.nonzero_rational(3) != 0);
    auto q = a.rational(4);
    CHECK(abs(q) <= 4);
  }
  auto v = table({"x", "y"});
  for (int i = 0; i < 20; ++i) {
    auto p = a.poly(v, 3, 5, 4);
    CHECK(p.total_degree() <= 3);
    CHECK(p.size() <= 4);
  }
}

TEST_CASE("random maps have the requested shape") {
  Rng rng(5);
  auto f = random_map(rng, 3, 5, 1, 3, 5);
  CHECK(f.n() == 3);
  CHECK(f.p() == 5);
  CHECK(f.s() == 1);
  auto g = random_corank1_map(rng, 3, 4, 3, 5);
  CHECK(g.s() == 2);
  CHECK(g.vars()->names() == std::vector<std::string>{"x1", "x2", "y"});
  CHECK_THROWS_AS(random_map(rng, 2, 1, 2, 3, 5), ValidationError);
}

TEST_CASE("rational roots") {
  auto v = table({"x", "y"});
  auto roots = rational_roots(P(v, "6x3-5x2-2x+1"), 0);
  std::sort(roots.begin(), roots.end());
  CHECK(roots == std::vector<Rational>{-make_rational(1, 2), make_rational(1, 3), 1});
  CHECK(rational_roots(P(v, "y2+1"), 1).empty());
  CHECK(rational_roots(P(v, "y3"), 1) == std::vector<Rational>{0});
}

TEST_CASE("sample config validation") {
  SampleConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("suites pass on the trifold") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  SampleConfig cfg;
  cfg.seed = 9;
  for (int r = 2; r <= 3; ++r) {
    auto cc = default_collection(2, r);
    CHECK(check_telescoping(f, r, cc, cfg).passed());
    auto strict = check_strict_points(f, r, cc, cfg);
    CHECK(strict.passed());
    CHECK(strict.trials > 0);
    CHECK(check_overlap(f, r, cc, cfg).passed());
  }
  CHECK(check_diagonal_kernel(f, default_collection(2, 2), cfg).passed());
  CHECK(check_corank1(cfg).passed());
}

TEST_CASE("negative control fails") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  auto report = check_telescoping(f, 2, default_collection(2, 2), SampleConfig{}, drop_one_term);
  CHECK_FALSE(report.passed());
  CHECK(format_report(report).find("FAIL") != std::string::npos);
}

TEST_CASE("reports are reproducible") {
  auto f = PolyMap::parse(kTrifoldVars, kTrifold);
  SampleConfig cfg;
  cfg.seed = 4;
  auto cc = default_collection(2, 2);
  auto a = check_strict_points(f, 2, cc, cfg);
  auto b = check_strict_points(f, 2, cc, cfg);
  CHECK(a.trials == b.trials);
  CHECK(a.skipped == b.skipped);
  CHECK(format_report(a) == format_report(b));
  CHECK(format_report(a).rfind("strict: PASS", 0) == 0);
}

TEST_CASE("fold strict point") {
  auto f = PolyMap::parse({"x", "y"}, "x;y2");
  auto eq = chart_equations(f, 2, default_collection(1, 2), {1});
  const auto& v = eq.chart.vars();
  REQUIRE(v->names() == std::vector<std::string>{"x", "y", "l1"});
  CHECK(eq.generators == std::vector<Poly>{P(v, "2y+l1")});
  // l = -2y: the pair (x, y), (x, -y) with a common image.
  std::vector<Rational> pt{3, 1, -2};
  CHECK(is_strict_sample(eq, pt));
  CHECK_FALSE(is_strict_sample(eq, {3, 0, 0}));
  Rng rng(1);
  auto z = manufacture_zero(eq, rng, 5);
  REQUIRE(z);
  CHECK(evaluate(eq.generators[0], *z) == 0);
}
