#include "multipoint/verify.hpp"

#include <algorithm>
#include <set>

#include "multipoint/errors.hpp"

namespace multipoint {

void SampleConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (coeff_bound < 1) throw ValidationError("coefficient bound must be at least 1");
  if (degree_bound < 1) throw ValidationError("degree bound must be at least 1");
}

std::string format_report(const VerifyReport& report) {
  std::string out = report.suite + ": " + (report.passed() ? "PASS" : "FAIL") + " (" + std::to_string(report.trials) +
                    " checks, " + std::to_string(report.skipped) + " skipped, " +
                    std::to_string(report.failures.size()) + " failures)\n";
  for (const auto& f : report.failures) {
    out += "  input:    " + f.input + "\n";
    out += "  expected: " + f.expected + "\n";
    out += "  actual:   " + f.actual + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generation.

long Rng::uniform(long lo, long hi) {
  if (hi < lo) throw InternalError("Rng::uniform: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + static_cast<long>(x % span);
}

Rational Rng::rational(int bound) { return make_rational(uniform(-bound, bound), uniform(1, bound)); }

Rational Rng::nonzero_rational(int bound) {
  long num = 0;
  while (num == 0) num = uniform(-bound, bound);
  return make_rational(num, uniform(1, bound));
}

Poly Rng::poly(const VarTablePtr& vars, int degree, int coeff_bound, int max_terms) {
  std::vector<Term> terms;
  const long nterms = uniform(1, max_terms);
  for (long k = 0; k < nterms; ++k) {
    Monomial m(vars->size());
    const long d = uniform(0, degree);
    for (long e = 0; e < d; ++e) {
      auto v = static_cast<std::size_t>(uniform(0, static_cast<long>(vars->size()) - 1));
      m.set(v, m[v] + 1);
    }
    long c = 0;
    while (c == 0) c = uniform(-coeff_bound, coeff_bound);
    terms.push_back({std::move(m), Rational(c)});
  }
  return Poly::from_terms(vars, std::move(terms));
}

PolyMap random_map(Rng& rng, int n, int p, int s, int degree, int coeff_bound) {
  if (s < 0 || s >= n || s > p) throw ValidationError("random_map: need 0 <= s < n and s <= p");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back((i <= s ? "t" + std::to_string(i) : "x" + std::to_string(i - s)));
  auto vars = VarTable::plain(names);
  std::vector<Poly> comps;
  for (int i = 0; i < s; ++i) comps.push_back(Poly::variable(vars, static_cast<std::size_t>(i)));
  for (int i = s; i < p; ++i) comps.push_back(rng.poly(vars, degree, coeff_bound));
  return PolyMap::make(vars, std::move(comps), s);
}

PolyMap random_corank1_map(Rng& rng, int n, int p, int degree, int coeff_bound) {
  if (n < 1 || p < n) throw ValidationError("random_corank1_map: need 1 <= n <= p");
  std::vector<std::string> names;
  for (int i = 1; i < n; ++i) names.push_back("x" + std::to_string(i));
  names.emplace_back("y");
  auto vars = VarTable::plain(names);
  std::vector<Poly> comps;
  for (int i = 0; i < n - 1; ++i) comps.push_back(Poly::variable(vars, static_cast<std::size_t>(i)));
  for (int i = n - 1; i < p; ++i) comps.push_back(rng.poly(vars, degree, coeff_bound));
  return PolyMap::make(vars, std::move(comps), n - 1);
}

void drop_one_term(DifferenceChain& chain) {
  if (chain.levels.empty()) return;
  for (auto& g : chain.levels.front()) {
    if (g.is_zero()) continue;
    auto terms = g.terms();
    terms.pop_back();
    g = Poly::from_terms(g.vars(), std::move(terms));
    return;
  }
}

// ---------------------------------------------------------------------------
// Helpers.

namespace {

std::string describe(const PolyMap& f) {
  std::string out = "f=(";
  for (std::size_t i = 0; i < f.components().size(); ++i) out += (i ? "; " : "") + render(f.components()[i]);
  return out + ")";
}

std::string describe_point(const VarTable& vars, const std::vector<Rational>& pt) {
  std::string out = "{";
  for (std::size_t i = 0; i < pt.size(); ++i) out += (i ? ", " : "") + vars.name(i) + "=" + to_string(pt[i]);
  return out + "}";
}

bool all_vanish(const std::vector<Poly>& gens, const std::vector<Rational>& pt) {
  return std::all_of(gens.begin(), gens.end(), [&](const Poly& g) { return evaluate(g, pt) == 0; });
}

std::vector<std::vector<Rational>> evaluate_projections(const ChartEquations& eq, const std::vector<Rational>& pt) {
  std::vector<std::vector<Rational>> out;
  for (const auto& xj : eq.projections) {
    std::vector<Rational> v;
    for (const auto& c : xj) v.push_back(evaluate(c, pt));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Rational> params_of(const Chart& chart, const std::vector<Rational>& pt) {
  std::vector<Rational> out;
  for (auto v : chart.param_vars()) out.push_back(pt[v]);
  return out;
}

// f takes the same value on every projected source point.
bool equal_images(const PolyMap& f, const std::vector<Rational>& params,
                  const std::vector<std::vector<Rational>>& tuple) {
  std::vector<Rational> first;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    std::vector<Rational> src = params;
    src.insert(src.end(), tuple[j].begin(), tuple[j].end());
    std::vector<Rational> img;
    for (const auto& c : f.components()) img.push_back(evaluate(c, src));
    if (j == 0) {
      first = std::move(img);
    } else if (img != first) {
      return false;
    }
  }
  return true;
}

bool is_lambda(const Chart& chart, std::size_t v) { return (*chart.vars())[v].role == VarRole::lambda; }

std::vector<Rational> random_chart_point(const Chart& chart, Rng& rng, int bound) {
  std::vector<Rational> pt(chart.vars()->size());
  for (std::size_t v = 0; v < pt.size(); ++v) pt[v] = is_lambda(chart, v) ? rng.nonzero_rational(bound) : rng.rational(bound);
  return pt;
}

// Positive divisors of |n|, or nothing when |n| is too large to factor by trial division.
std::optional<std::vector<Integer>> divisors(const Integer& n) {
  Integer m = abs(n);
  if (m > 100000000) return std::nullopt;
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      if (d * d != m) out.push_back(m / d);
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_roots(const Poly& p, std::size_t var) {
  for (std::size_t v = 0; v < p.vars()->size(); ++v) {
    if (v != var && p.involves(v)) throw InternalError("rational_roots: polynomial is not univariate");
  }
  if (p.is_zero()) throw InternalError("rational_roots: zero polynomial");
  const std::uint32_t deg = p.degree_in(var);
  std::vector<Rational> coeffs(deg + 1, Rational(0));
  for (const auto& t : p.terms()) coeffs[t.monomial[var]] = t.coeff;
  std::set<Rational> roots;
  std::size_t low = 0;
  while (coeffs[low] == 0) ++low;
  if (low > 0) roots.insert(Rational(0));
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(low));
  if (coeffs.size() == 2) {
    roots.insert(Rational(-coeffs[0] / coeffs[1]));
  } else if (coeffs.size() > 2) {
    Integer den = 1;
    for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> ic;
    for (const auto& c : coeffs) ic.push_back(Integer(c * den));
    auto nums = divisors(ic.front());
    auto dens = divisors(ic.back());
    if (nums && dens) {
      for (const auto& a : *nums) {
        for (const auto& b : *dens) {
          for (int sign : {1, -1}) {
            Rational x = make_rational(Integer(a * sign), b);
            Rational acc = 0;
            for (auto it = ic.rbegin(); it != ic.rend(); ++it) acc = acc * x + Rational(*it);
            if (acc == 0) roots.insert(x);
          }
        }
      }
    }
  }
  return {roots.begin(), roots.end()};
}

bool is_strict_sample(const ChartEquations& eq, const std::vector<Rational>& point) {
  for (int i = 1; i <= eq.chart.depth(); ++i) {
    if (point[eq.chart.level(i).lambda_var] == 0) return false;
  }
  auto tuple = evaluate_projections(eq, point);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      if (tuple[i] == tuple[j]) return false;
    }
  }
  return true;
}

std::optional<std::vector<Rational>> manufacture_zero(const ChartEquations& eq, Rng& rng, int bound, int attempts) {
  const Chart& chart = eq.chart;
  const auto& vars = chart.vars();
  const std::size_t nvars = vars->size();
  auto draw = [&](std::size_t v) { return is_lambda(chart, v) ? rng.nonzero_rational(bound) : rng.rational(bound); };
  auto pick = [&](const std::vector<std::size_t>& from) {
    return from[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(from.size()) - 1))];
  };

  for (int attempt = 0; attempt < attempts; ++attempt) {
    // Generators are solved in order. A variable occurring linearly is
    // eliminated symbolically once the variables of its coefficient are
    // fixed; otherwise all but one variable are fixed and a rational root is
    // taken.
    std::vector<Poly> gens = eq.generators;
    std::vector<std::optional<Rational>> values(nvars);
    std::vector<std::pair<std::size_t, Poly>> elims;
    auto apply = [&](std::size_t from, const Assignment& a) {
      for (std::size_t k = from; k < gens.size(); ++k) gens[k] = substitute(gens[k], a);
    };
    auto fix = [&](std::size_t from, const std::vector<std::size_t>& vs) {
      Assignment a;
      for (auto v : vs) {
        values[v] = draw(v);
        a.emplace(v, Poly::constant(vars, *values[v]));
      }
      if (!a.empty()) apply(from, a);
    };
    bool ok = true;
    for (std::size_t k = 0; k < gens.size() && ok; ++k) {
      const Poly& h = gens[k];
      if (h.is_zero()) continue;
      if (h.is_constant()) {
        ok = false;
        break;
      }
      std::vector<std::size_t> free;
      for (std::size_t v = 0; v < nvars; ++v) {
        if (h.involves(v)) free.push_back(v);
      }
      // Linear candidates, scored by how many variables their coefficient uses.
      std::size_t best_score = SIZE_MAX;
      std::vector<std::size_t> linear;
      for (auto v : free) {
        if (h.degree_in(v) != 1) continue;
        std::size_t score = 0;
        for (auto w : free) {
          if (w == v) continue;
          bool in_coeff = std::any_of(h.terms().begin(), h.terms().end(),
                                      [&](const Term& t) { return t.monomial[v] == 1 && t.monomial[w] > 0; });
          if (in_coeff) ++score;
        }
        if (score < best_score) {
          best_score = score;
          linear.clear();
        }
        if (score == best_score) linear.push_back(v);
      }
      if (!linear.empty()) {
        const std::size_t v = pick(linear);
        std::vector<std::size_t> coeff_vars;
        for (auto w : free) {
          if (w == v) continue;
          if (std::any_of(h.terms().begin(), h.terms().end(),
                          [&](const Term& t) { return t.monomial[v] == 1 && t.monomial[w] > 0; })) {
            coeff_vars.push_back(w);
          }
        }
        fix(k, coeff_vars);
        const Poly& g = gens[k];
        if (!g.involves(v)) {
          if (!g.is_zero() && g.is_constant()) ok = false;
          continue;
        }
        Rational c = 0;
        std::vector<Term> rest;
        for (const auto& t : g.terms()) {
          if (t.monomial[v] == 1) {
            c += t.coeff;
          } else {
            rest.push_back(t);
          }
        }
        Poly expr = Poly::from_terms(vars, std::move(rest)) * Rational(-1 / c);
        elims.emplace_back(v, expr);
        apply(k + 1, Assignment{{v, expr}});
        continue;
      }
      const std::size_t target = pick(free);
      std::vector<std::size_t> others;
      for (auto w : free) {
        if (w != target) others.push_back(w);
      }
      fix(k, others);
      const Poly& u = gens[k];
      if (u.is_zero()) continue;
      auto roots = rational_roots(u, target);
      if (is_lambda(chart, target)) std::erase(roots, Rational(0));
      if (roots.empty()) {
        ok = false;
        break;
      }
      values[target] = roots[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(roots.size()) - 1))];
      apply(k + 1, Assignment{{target, Poly::constant(vars, *values[target])}});
    }
    if (!ok) continue;
    std::vector<Rational> pt(nvars);
    std::vector<char> eliminated(nvars, 0);
    for (const auto& e : elims) eliminated[e.first] = 1;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (!eliminated[v]) pt[v] = values[v] ? *values[v] : draw(v);
    }
    for (auto it = elims.rbegin(); it != elims.rend(); ++it) pt[it->first] = evaluate(it->second, pt);
    if (all_vanish(eq.generators, pt) && is_strict_sample(eq, pt)) return pt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Suites.

VerifyReport check_telescoping(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg,
                               const ChainTamper& tamper) {
  cfg.validate();
  VerifyReport report;
  report.suite = "telescoping";
  for (const auto& alpha : multi_indices(f.base_dim(), r, cc.ell())) {
    Chart chart = build_chart_for(f, cc, alpha, r);
    DifferenceChain chain = difference_chain(f, chart);
    if (tamper) tamper(chain);
    for (int j = 1; j <= chart.depth(); ++j) {
      ++report.trials;
      auto defect = telescoping_defect(f, chart, chain, j);
      for (std::size_t k = 0; k < defect.size(); ++k) {
        if (defect[k].is_zero()) continue;
        report.failures.push_back({describe(f) + " chart " + chart.name() + " level " + std::to_string(j) +
                                       " component " + std::to_string(k + 1),
                                   "0", render(defect[k])});
      }
    }
  }
  return report;
}

VerifyReport check_strict_points(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  report.suite = "strict";
  const auto eqs = kr_equations(f, r, cc);
  Rng rng(cfg.seed);
  auto check = [&](const ChartEquations& eq, const std::vector<Rational>& pt) {
    ++report.trials;
    const bool vanish = all_vanish(eq.generators, pt);
    const bool equal = equal_images(f, params_of(eq.chart, pt), evaluate_projections(eq, pt));
    if (vanish != equal) {
      report.failures.push_back({describe(f) + " chart " + eq.chart.name() + " at " +
                                     describe_point(*eq.chart.vars(), pt),
                                 std::string("generators vanish = ") + (equal ? "true" : "false"),
                                 std::string("generators vanish = ") + (vanish ? "true" : "false")});
    }
  };
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const auto& eq = eqs[static_cast<std::size_t>(trial) % eqs.size()];
    if (auto pt = manufacture_zero(eq, rng, cfg.coeff_bound)) {
      check(eq, *pt);
    } else {
      ++report.skipped;
    }
    auto generic = random_chart_point(eq.chart, rng, cfg.coeff_bound);
    if (is_strict_sample(eq, generic)) {
      check(eq, generic);
    } else {
      ++report.skipped;
    }
  }
  return report;
}

VerifyReport check_diagonal_kernel(const PolyMap& f, const CoveringCollection& cc, const SampleConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  report.suite = "kernel";
  for (const auto& alpha : multi_indices(f.base_dim(), 2, cc.ell())) {
    Chart chart = build_chart_for(f, cc, alpha, 2);
    DifferenceChain chain = difference_chain(f, chart, 1);
    const auto& vars = chart.vars();
    const auto& lv = chart.level(1);
    // v = Lambda^{-1}(1, a).
    std::vector<Poly> unit_gamma{Poly::constant(vars, Rational(1))};
    for (auto a : lv.a_vars) unit_gamma.push_back(Poly::variable(vars, a));
    const auto v = chart.apply_nu(1, unit_gamma);
    Assignment at_zero{{lv.lambda_var, Poly(vars)}};
    for (int i = f.s(); i < f.p(); ++i) {
      ++report.trials;
      const auto k = static_cast<std::size_t>(i - f.s());
      Poly g = embed(f.components()[static_cast<std::size_t>(i)], vars);
      Poly expected(vars);
      for (std::size_t b = 0; b < chart.base_vars().size(); ++b) expected += derivative(g, chart.base_vars()[b]) * v[b];
      Poly actual = substitute(chain.levels[0][k], at_zero);
      if (!(actual == expected)) {
        report.failures.push_back({describe(f) + " chart " + chart.name() + " component " + std::to_string(i + 1),
                                   render(expected), render(actual)});
      }
    }
  }
  return report;
}

VerifyReport check_overlap(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  report.suite = "overlap";
  const auto eqs = kr_equations(f, r, cc);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const auto& home = eqs[static_cast<std::size_t>(trial) % eqs.size()];
    std::vector<Rational> pt;
    if (auto z = manufacture_zero(home, rng, cfg.coeff_bound)) {
      pt = std::move(*z);
    } else {
      pt = random_chart_point(home.chart, rng, cfg.coeff_bound);
      if (!is_strict_sample(home, pt)) {
        ++report.skipped;
        continue;
      }
    }
    const bool vanish = all_vanish(home.generators, pt);
    const auto tuple = evaluate_projections(home, pt);
    const auto params = params_of(home.chart, pt);
    const std::string where = describe(f) + " tuple from " + home.chart.name() + " at " +
                              describe_point(*home.chart.vars(), pt);
    for (const auto& other : eqs) {
      auto coords = chart_coordinates(other.chart, params, tuple);
      if (!coords) {
        ++report.skipped;
        continue;
      }
      ++report.trials;
      if (evaluate_projections(other, *coords) != tuple) {
        report.failures.push_back({where + " in " + other.chart.name(), "same source tuple", "different tuple"});
        continue;
      }
      if (&other == &home && *coords != pt) {
        report.failures.push_back({where, describe_point(*home.chart.vars(), pt),
                                   describe_point(*home.chart.vars(), *coords)});
        continue;
      }
      const bool there = all_vanish(other.generators, *coords);
      if (there != vanish) {
        report.failures.push_back({where + " in " + other.chart.name(),
                                   std::string("vanish = ") + (vanish ? "true" : "false"),
                                   std::string("vanish = ") + (there ? "true" : "false")});
      }
    }
  }
  return report;
}

VerifyReport check_corank1(const SampleConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  report.suite = "corank1";
  Rng rng(cfg.seed);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const int n = static_cast<int>(rng.uniform(1, 3));
    const int p = static_cast<int>(rng.uniform(n, std::min(n + 2, 5)));
    const int r = static_cast<int>(rng.uniform(2, 4));
    PolyMap f = random_corank1_map(rng, n, p, cfg.degree_bound, cfg.coeff_bound);
    ++report.trials;
    auto cc = default_collection(1, r);
    Chart chart = build_chart_for(f, cc, MultiIndex(static_cast<std::size_t>(r - 1), 1), r);
    auto chain = difference_chain(f, chart);
    auto classical = classical_corank1(f, r);
    auto translated = corank1_translate(chart, chain, classical.vars);
    for (std::size_t j = 0; j < translated.size(); ++j) {
      for (std::size_t k = 0; k < translated[j].size(); ++k) {
        Poly a = normalize(translated[j][k]);
        Poly b = normalize(classical.levels[j][k]);
        if (!(a == b)) {
          report.failures.push_back({describe(f) + " r=" + std::to_string(r) + " level " + std::to_string(j + 1) +
                                         " component " + std::to_string(k + 1),
                                     render(b), render(a)});
        }
      }
    }
  }
  return report;
}

}  // namespace multipoint
