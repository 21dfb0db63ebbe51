#include "multipoint/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "multipoint/errors.hpp"
#include "multipoint/ideals.hpp"
#include "multipoint/verify.hpp"

namespace multipoint {

namespace {

using Json = nlohmann::ordered_json;

// Bad user input; the message already names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep, bool drop_blanks = true) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!drop_blanks || (c != ' ' && c != '\t')) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError(flag + ": expected an integer, got '" + text + "'");
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::max(1, jobs));
  if (nthreads <= 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(nthreads, count); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Context {
  RunSpec spec;
  VarTablePtr vars;
  std::optional<PolyMap> f;
  int s = 0;
  int base_dim = 0;
  int ell = 2;
  std::optional<CoveringCollection> cc;
  std::vector<MultiIndex> selected;
  bool color = false;

  std::string bold(const std::string& text) const { return color ? "\x1b[1m" + text + "\x1b[0m" : text; }
  std::string red(const std::string& text) const { return color ? "\x1b[31m" + text + "\x1b[0m" : text; }
  std::string green(const std::string& text) const { return color ? "\x1b[32m" + text + "\x1b[0m" : text; }

  std::vector<std::string> param_names() const {
    std::vector<std::string> out(spec.vars.begin(), spec.vars.begin() + s);
    return out;
  }
  std::vector<std::string> base_names() const {
    std::vector<std::string> out(spec.vars.begin() + s, spec.vars.end());
    return out;
  }
};

Context prepare(const RunSpec& spec, bool color) {
  Context ctx;
  ctx.spec = spec;
  ctx.color = color;
  if (spec.vars.empty()) throw UsageError("--vars: at least one variable is required");
  try {
    ctx.vars = VarTable::plain(spec.vars);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--vars: ") + e.what());
  }
  if (spec.r < 2) throw UsageError("--order: r must be at least 2, got " + std::to_string(spec.r));
  ctx.ell = spec.ell.value_or(spec.r);
  if (ctx.ell < spec.r) throw UsageError("--ell: must be at least the order r = " + std::to_string(spec.r));
  if (spec.jobs < 1) throw UsageError("--jobs: must be at least 1");

  const int nvars = static_cast<int>(spec.vars.size());
  if (spec.params && (*spec.params < 0 || *spec.params >= nvars)) {
    throw UsageError("--params: must lie in [0, " + std::to_string(nvars - 1) + "], got " +
                     std::to_string(*spec.params));
  }
  if (spec.map_text.empty()) {
    if (spec.command != "charts") throw UsageError("--map: required for '" + spec.command + "'");
    ctx.s = spec.params.value_or(0);
  } else {
    std::vector<Poly> comps;
    for (const auto& piece : split(spec.map_text, ';', false)) {
      try {
        comps.push_back(parse_poly(piece, ctx.vars, ParseMode::compact));
      } catch (const ParseError& e) {
        throw UsageError("--map: component " + std::to_string(comps.size() + 1) + " '" + piece + "': " + e.what());
      }
    }
    try {
      ctx.f = PolyMap::make(ctx.vars, std::move(comps), spec.params);
    } catch (const ValidationError& e) {
      throw UsageError(std::string(spec.params ? "--params: " : "--map: ") + e.what());
    }
    ctx.s = ctx.f->s();
  }
  ctx.base_dim = nvars - ctx.s;

  try {
    if (spec.collection == "default") {
      ctx.cc = default_collection(ctx.base_dim, ctx.ell);
    } else if (spec.collection == "vandermonde") {
      ctx.cc = covering_collection(ctx.base_dim, ctx.ell, CollectionStrategy::vandermonde);
    } else if (spec.collection == "coordinate") {
      ctx.cc = covering_collection(ctx.base_dim, ctx.ell, CollectionStrategy::coordinate);
    } else {
      ctx.cc = load_covering_collection(spec.collection, ctx.ell);
    }
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--collection: ") + e.what());
  }
  if (ctx.cc->n() != ctx.base_dim) {
    throw UsageError("--collection: forms have " + std::to_string(ctx.cc->n()) + " coefficients but the map has " +
                     std::to_string(ctx.base_dim) + " non-parameter variables");
  }

  auto all = multi_indices(ctx.base_dim, spec.r, ctx.ell);
  for (const auto& alpha : all) {
    if (static_cast<std::size_t>(*std::max_element(alpha.begin(), alpha.end())) > ctx.cc->size()) {
      throw UsageError("--collection: too few forms for chart " + format_multi_index(alpha));
    }
  }
  if (spec.charts.empty()) {
    ctx.selected = all;
  } else {
    for (const auto& want : spec.charts) {
      if (std::find(all.begin(), all.end(), want) == all.end()) {
        throw UsageError("--chart: " + format_multi_index(want) + " is not a chart of this atlas (" +
                         std::to_string(all.size()) + " charts, from " + format_multi_index(all.front()) + " to " +
                         format_multi_index(all.back()) + ")");
      }
    }
    for (const auto& alpha : all) {
      if (std::find(spec.charts.begin(), spec.charts.end(), alpha) != spec.charts.end()) ctx.selected.push_back(alpha);
    }
  }
  return ctx;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> rendered(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(render(p));
  return out;
}

std::string tuple_text(const std::vector<Poly>& ps) { return "(" + join(rendered(ps), ", ") + ")"; }

Json header(const Context& ctx, const std::string& schema) {
  Json j;
  j["schema"] = schema;
  j["n"] = ctx.spec.vars.size();
  j["p"] = ctx.f ? ctx.f->p() : 0;
  j["params"] = ctx.s;
  j["r"] = ctx.spec.r;
  return j;
}

void print_map_line(const Context& ctx, std::ostream& out) {
  out << "f = (" << join(rendered(ctx.f->components()), ", ") << ")\n";
  out << "n = " << ctx.spec.vars.size() << ", p = " << ctx.f->p() << ", params = " << ctx.s << ", r = " << ctx.spec.r
      << ", charts = " << ctx.selected.size() << "\n";
}

std::vector<ChartEquations> compute_equations(const Context& ctx) {
  std::vector<std::optional<ChartEquations>> slots(ctx.selected.size());
  parallel_for(ctx.selected.size(), ctx.spec.jobs,
               [&](std::size_t k) { slots[k] = chart_equations(*ctx.f, ctx.spec.r, *ctx.cc, ctx.selected[k]); });
  std::vector<ChartEquations> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

int cmd_eqs(const Context& ctx, std::ostream& out) {
  const auto eqs = compute_equations(ctx);
  if (ctx.spec.format == OutputFormat::json) {
    Json j = header(ctx, "kr-eqs/1");
    j["charts"] = Json::array();
    for (const auto& eq : eqs) {
      Json c;
      c["alpha"] = eq.chart.alpha();
      c["vars"] = eq.chart.vars()->names();
      c["generators"] = rendered(eq.generators);
      Json proj = Json::array();
      for (const auto& xj : eq.projections) proj.push_back(rendered(xj));
      c["projections"] = proj;
      c["exceptional"] = eq.chart.vars()->name(eq.chart.exceptional_var());
      j["charts"].push_back(c);
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  print_map_line(ctx, out);
  for (const auto& eq : eqs) {
    out << "\n" << ctx.bold(eq.chart.name()) << "\n";
    out << "  vars: " << join(eq.chart.vars()->names(), ", ") << "\n";
    for (const auto& g : eq.generators) out << "  " << render(g) << "\n";
  }
  return kExitOk;
}

int cmd_dim(const Context& ctx, std::ostream& out) {
  const auto eqs = compute_equations(ctx);
  std::vector<int> dims(eqs.size());
  parallel_for(eqs.size(), ctx.spec.jobs, [&](std::size_t k) { dims[k] = eqs[k].ideal().dimension(); });
  const int expected = expected_dimension(*ctx.f, ctx.spec.r);
  // An empty intersection is vacuously a complete intersection.
  auto correct = [&](int d) { return d < 0 || d == expected; };
  if (ctx.spec.format == OutputFormat::json) {
    Json j = header(ctx, "kr-dim/1");
    j["expected"] = expected;
    j["charts"] = Json::array();
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      Json c;
      c["alpha"] = eqs[k].chart.alpha();
      c["dimension"] = dims[k];
      c["empty"] = dims[k] < 0;
      c["correct"] = correct(dims[k]);
      j["charts"].push_back(c);
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  print_map_line(ctx, out);
  out << "expected dimension nr - p(r-1) = " << expected << "\n\n";
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    out << ctx.bold(eqs[k].chart.name()) << "  dim " << (dims[k] < 0 ? "empty" : std::to_string(dims[k]))
        << "  expected " << expected << "  "
        << (correct(dims[k]) ? ctx.green("correct") : ctx.red("NOT correct")) << "\n";
  }
  return kExitOk;
}

int cmd_charts(const Context& ctx, std::ostream& out) {
  const auto pnames = ctx.param_names();
  const auto bnames = ctx.base_names();
  auto base = VarTable::plain(bnames);
  auto form_text = [&](std::size_t i) {
    Poly p(base);
    const auto& c = ctx.cc->form(i).coeffs;
    for (std::size_t k = 0; k < c.size(); ++k) p += Poly::variable(base, k) * c[k];
    return render(p);
  };
  std::vector<std::string> forms;
  for (std::size_t i = 0; i < ctx.cc->size(); ++i) forms.push_back(form_text(i));

  std::vector<std::optional<Chart>> charts(ctx.selected.size());
  std::vector<std::vector<std::vector<Poly>>> projections(ctx.selected.size());
  parallel_for(ctx.selected.size(), ctx.spec.jobs, [&](std::size_t k) {
    charts[k] = build_chart(*ctx.cc, ctx.selected[k], ctx.spec.r, pnames, bnames);
    projections[k] = projection_to_Xr(*charts[k]);
  });

  if (ctx.spec.format == OutputFormat::json) {
    Json j;
    j["schema"] = "kr-charts/1";
    j["n"] = ctx.spec.vars.size();
    j["params"] = ctx.s;
    j["r"] = ctx.spec.r;
    j["ell"] = ctx.ell;
    j["forms"] = forms;
    j["charts"] = Json::array();
    for (std::size_t k = 0; k < charts.size(); ++k) {
      const Chart& chart = *charts[k];
      Json c;
      c["alpha"] = chart.alpha();
      c["vars"] = chart.vars()->names();
      c["levels"] = Json::array();
      for (int i = 1; i <= chart.depth(); ++i) {
        const auto& lv = chart.level(i);
        Json l;
        l["form"] = lv.form + 1;
        std::vector<std::size_t> comp;
        for (auto x : ctx.cc->companions(lv.form)) comp.push_back(x + 1);
        l["companions"] = comp;
        l["nu"] = rendered(lv.nu);
        c["levels"].push_back(l);
      }
      Json proj = Json::array();
      for (const auto& xj : projections[k]) proj.push_back(rendered(xj));
      c["projections"] = proj;
      c["exceptional"] = chart.vars()->name(chart.exceptional_var());
      j["charts"].push_back(c);
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "forms:";
  for (std::size_t i = 0; i < forms.size(); ++i) out << (i ? ", " : " ") << "L" << i + 1 << " = " << forms[i];
  out << "\nn = " << ctx.base_dim << " (+" << ctx.s << " params), r = " << ctx.spec.r << ", ell = " << ctx.ell
      << ", charts = " << ctx.selected.size() << "\n";
  for (std::size_t k = 0; k < charts.size(); ++k) {
    const Chart& chart = *charts[k];
    out << "\n" << ctx.bold(chart.name()) << "\n";
    out << "  vars: " << join(chart.vars()->names(), ", ") << "\n";
    for (int i = 1; i <= chart.depth(); ++i) {
      const auto& lv = chart.level(i);
      std::vector<std::string> comp;
      for (auto x : ctx.cc->companions(lv.form)) comp.push_back("L" + std::to_string(x + 1));
      out << "  level " << i << ": L" << lv.form + 1 << " = " << forms[lv.form]
          << (comp.empty() ? "" : ", companions " + join(comp, ", ")) << "\n";
      out << "    nu" << i << " = " << tuple_text(lv.nu) << "\n";
    }
    for (std::size_t j = 0; j < projections[k].size(); ++j) {
      out << "  x^(" << j << ") = " << tuple_text(projections[k][j]) << "\n";
    }
    out << "  exceptional divisor: " << chart.vars()->name(chart.exceptional_var()) << " = 0\n";
  }
  return kExitOk;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"telescoping", "strict", "kernel", "overlap", "corank1"};
  return names;
}

int emit_reports(const Context& ctx, const std::vector<VerifyReport>& reports, std::ostream& out);

int cmd_check(const Context& ctx, std::ostream& out) {
  SampleConfig cfg;
  cfg.seed = ctx.spec.seed;
  cfg.trials = ctx.spec.trials;
  std::vector<std::string> suites;
  if (ctx.spec.suite == "all") {
    suites = suite_names();
  } else {
    suites.push_back(ctx.spec.suite);
  }
  std::vector<VerifyReport> reports(suites.size());
  parallel_for(suites.size(), ctx.spec.jobs, [&](std::size_t k) {
    const auto& name = suites[k];
    const int r = ctx.spec.r;
    if (name == "telescoping") {
      reports[k] = check_telescoping(*ctx.f, r, *ctx.cc, cfg, ctx.spec.corrupt ? ChainTamper(drop_one_term) : ChainTamper());
    } else if (name == "strict") {
      reports[k] = check_strict_points(*ctx.f, r, *ctx.cc, cfg);
    } else if (name == "kernel") {
      reports[k] = check_diagonal_kernel(*ctx.f, *ctx.cc, cfg);
    } else if (name == "overlap") {
      reports[k] = check_overlap(*ctx.f, r, *ctx.cc, cfg);
    } else {
      reports[k] = check_corank1(cfg);
    }
  });
  return emit_reports(ctx, reports, out);
}

int emit_reports(const Context& ctx, const std::vector<VerifyReport>& reports, std::ostream& out) {
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const VerifyReport& r) { return r.passed(); });
  if (ctx.spec.format == OutputFormat::json) {
    Json j = header(ctx, "kr-check/1");
    j["seed"] = ctx.spec.seed;
    j["trials"] = ctx.spec.trials;
    j["suites"] = Json::array();
    for (const auto& rep : reports) {
      Json s;
      s["suite"] = rep.suite;
      s["passed"] = rep.passed();
      s["checks"] = rep.trials;
      s["skipped"] = rep.skipped;
      s["failures"] = Json::array();
      for (const auto& f : rep.failures) s["failures"].push_back({{"input", f.input}, {"expected", f.expected}, {"actual", f.actual}});
      j["suites"].push_back(s);
    }
    j["passed"] = ok;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& rep : reports) {
      std::string text = format_report(rep);
      const std::string tag = rep.passed() ? "PASS" : "FAIL";
      auto at = text.find(tag);
      text.replace(at, tag.size(), rep.passed() ? ctx.green(tag) : ctx.red(tag));
      out << text;
    }
    const auto failed = std::count_if(reports.begin(), reports.end(), [](const VerifyReport& r) { return !r.passed(); });
    out << (ok ? "all suites passed" : std::to_string(failed) + " suite(s) failed") << "\n";
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

bool stdout_wants_color() { return std::getenv("MULTIPOINT_NO_COLOR") == nullptr && isatty(STDOUT_FILENO) != 0; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Equations, dimensions and checks for multiple point spaces of polynomial maps."};
  app.name("multipoint");
  app.require_subcommand(1, 1);

  RunSpec spec;
  std::string vars_text;
  std::string params_text = "auto";
  std::string format_text = "text";
  std::vector<std::string> chart_texts;
  int ell = 0;
  std::string seed_text = "1";

  auto add_common = [&](CLI::App* sub, bool map_required) {
    auto* vars = sub->add_option("--vars", vars_text, "comma-separated source variables, parameters first");
    if (map_required) vars->required();
    auto* map = sub->add_option("--map", spec.map_text, "coordinate functions separated by ';'");
    if (map_required) map->required();
    sub->add_option("-r,--order", spec.r, "order r of K_r (default 2)");
    sub->add_option("--ell", ell, "atlas level bound (default r)");
    sub->add_option("--params", params_text, "number of leading unfolding parameters, or 'auto'");
    sub->add_option("--collection", spec.collection, "default | coordinate | vandermonde | path to a forms file");
    sub->add_option("--format", format_text, "text | json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--jobs", spec.jobs, "charts processed in parallel");
  };
  auto add_chart_filter = [&](CLI::App* sub) {
    sub->add_option("--chart", chart_texts, "restrict to chart alpha, e.g. 1,2 (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  };

  auto* eqs = app.add_subcommand("eqs", "defining equations of K_r on each chart");
  add_common(eqs, true);
  add_chart_filter(eqs);
  auto* dim = app.add_subcommand("dim", "Krull dimension of K_r on each chart");
  add_common(dim, true);
  add_chart_filter(dim);
  auto* charts = app.add_subcommand("charts", "chart atlas of B_r");
  add_common(charts, false);
  charts->get_option("--vars")->required();
  add_chart_filter(charts);
  auto* check = app.add_subcommand("check", "run verification suites");
  add_common(check, false);
  check->add_option("--suite", spec.suite, "telescoping | strict | kernel | overlap | corank1 | all");
  check->add_option("--seed", seed_text, "random seed");
  check->add_option("--trials", spec.trials, "samples per suite");
  check->add_flag("--corrupt", spec.corrupt, "tamper with the chains (negative control)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto* sub : {eqs, dim, charts, check}) {
      if (sub->parsed()) spec.command = sub->get_name();
    }
    if (!vars_text.empty()) spec.vars = split(vars_text, ',');
    if (params_text != "auto") {
      spec.params = parse_int("--params", params_text);
    }
    if (ell != 0) spec.ell = ell;
    spec.format = format_text == "json" ? OutputFormat::json : OutputFormat::text;
    for (const auto& text : chart_texts) {
      std::vector<int> alpha;
      for (const auto& part : split(text, ',')) alpha.push_back(parse_int("--chart", part));
      spec.charts.push_back(std::move(alpha));
    }
    try {
      std::size_t used = 0;
      spec.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument("seed");
    } catch (const std::logic_error&) {
      throw UsageError("--seed: expected a non-negative integer, got '" + seed_text + "'");
    }
    if (spec.command == "check") {
      const auto& names = suite_names();
      if (spec.suite != "all" && std::find(names.begin(), names.end(), spec.suite) == names.end()) {
        throw UsageError("--suite: unknown suite '" + spec.suite +
                         "' (expected telescoping, strict, kernel, overlap, corank1 or all)");
      }
      if (spec.trials < 1) throw UsageError("--trials: must be at least 1");
      if (spec.map_text.empty() && spec.suite != "corank1") {
        throw UsageError("--map: required for suite '" + spec.suite + "'");
      }
    }
    if (spec.command == "check" && spec.map_text.empty()) {
      // corank1 needs no map.
      SampleConfig cfg;
      cfg.seed = spec.seed;
      cfg.trials = spec.trials;
      Context ctx;
      ctx.spec = spec;
      ctx.color = color;
      return emit_reports(ctx, {check_corank1(cfg)}, out);
    }
    Context ctx = prepare(spec, color);
    if (spec.command == "eqs") return cmd_eqs(ctx, out);
    if (spec.command == "dim") return cmd_dim(ctx, out);
    if (spec.command == "charts") return cmd_charts(ctx, out);
    return cmd_check(ctx, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace multipoint
