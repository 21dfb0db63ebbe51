#include <catch_amalgamated.hpp>
#include <json.hpp>
#include <sstream>

#include "multipoint/cli.hpp"
#include "multipoint/ideals.hpp"
#include "multipoint/poly.hpp"

using namespace multipoint;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "multipoint");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* const kTrifold = "t;x2+ty;y2-tx;x3+y3+xy";

}  // namespace

TEST_CASE("eqs prints the chart generators") {
  auto r = run({"eqs", "--vars", "t,x,y", "--map", kTrifold, "-r", "2", "--chart", "1"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("U(1)\n") != std::string::npos);
  CHECK(r.out.find("  t*a1+2*x+l1\n  l1*a1^2+2*y*a1-t\n") != std::string::npos);
  CHECK(r.out.find("U(2)") == std::string::npos);
}

TEST_CASE("json generators parse back to the same polynomials") {
  auto r = run({"eqs", "--vars", "t,x,y", "--map", kTrifold, "-r", "3", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "kr-eqs/1");
  CHECK(j["params"] == 1);
  REQUIRE(j["charts"].size() == 6);
  auto f = PolyMap::parse({"t", "x", "y"}, kTrifold);
  auto eqs = kr_equations(f, 3, default_collection(2, 3));
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    const auto& c = j["charts"][k];
    CHECK(c["alpha"].get<std::vector<int>>() == eqs[k].chart.alpha());
    auto vars = VarTable::plain(c["vars"].get<std::vector<std::string>>());
    auto gens = c["generators"].get<std::vector<std::string>>();
    REQUIRE(gens.size() == eqs[k].generators.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      CHECK(parse_poly(gens[i], vars) == embed(eqs[k].generators[i], vars));
    }
  }
}

TEST_CASE("dim reports expected and actual dimensions") {
  auto r = run({"dim", "--vars", "t,x,y", "--map", kTrifold, "-r", "3", "--format", "json", "--chart", "1,1",
                "--chart", "1,2"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["expected"] == 1);
  CHECK(j["charts"][0]["dimension"] == 1);
  CHECK(j["charts"][0]["correct"] == true);
  CHECK(j["charts"][1]["dimension"] == 2);
  CHECK(j["charts"][1]["correct"] == false);

  auto text = run({"dim", "--vars", "x,y", "--map", "x;y", "-r", "2"});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("dim empty") != std::string::npos);
}

TEST_CASE("charts describes the atlas") {
  auto r = run({"charts", "--vars", "x,y", "-r", "3", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "kr-charts/1");
  CHECK(j["charts"].size() == 6);
  CHECK(j["charts"][0]["exceptional"] == "l2");
  auto text = run({"charts", "--vars", "x,y", "-r", "2", "--ell", "3", "--chart", "3"});
  CHECK(text.out.find("nu1 = (l1*a1, -l1*a1+l1)") != std::string::npos);
}

TEST_CASE("check runs the suites") {
  auto ok = run({"check", "--vars", "t,x,y", "--map", kTrifold, "-r", "2", "--seed", "3", "--trials", "10"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("all suites passed") != std::string::npos);
  auto bad = run({"check", "--vars", "t,x,y", "--map", kTrifold, "-r", "2", "--suite", "telescoping", "--corrupt"});
  CHECK(bad.code == kExitFailure);
  CHECK(bad.out.find("telescoping: FAIL") != std::string::npos);
  auto corank = run({"check", "--suite", "corank1", "--trials", "5", "--format", "json"});
  CHECK(corank.code == kExitOk);
  CHECK(nlohmann::json::parse(corank.out)["passed"] == true);
}

TEST_CASE("usage errors name the flag") {
  auto missing = run({"eqs", "--map", "x;y"});
  CHECK(missing.code == kExitUsage);
  CHECK(missing.err.find("--vars") != std::string::npos);

  auto unknown = run({"eqs", "--vars", "x,y", "--map", "x;z"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("--map") != std::string::npos);

  auto order = run({"eqs", "--vars", "x,y", "--map", "x;y2", "-r", "1"});
  CHECK(order.code == kExitUsage);

  auto chart = run({"eqs", "--vars", "x,y", "--map", "x2;y2;xy", "-r", "2", "--chart", "7"});
  CHECK(chart.code == kExitUsage);
  CHECK(chart.err.find("--chart") != std::string::npos);

  auto fmt = run({"dim", "--vars", "x,y", "--map", "x;y", "--format", "xml"});
  CHECK(fmt.code == kExitUsage);

  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("output is reproducible") {
  const std::vector<std::string> args{"eqs", "--vars", "t,x,y", "--map", kTrifold, "-r", "3"};
  auto a = run(args);
  auto b = run(args);
  auto par = args;
  par.insert(par.end(), {"--jobs", "3"});
  auto c = run(par);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  auto s1 = run({"check", "--vars", "t,x,y", "--map", kTrifold, "-r", "2", "--seed", "5", "--trials", "8"});
  auto s2 = run({"check", "--vars", "t,x,y", "--map", kTrifold, "-r", "2", "--seed", "5", "--trials", "8"});
  CHECK(s1.out == s2.out);
}
