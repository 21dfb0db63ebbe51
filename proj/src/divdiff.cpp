#include "multipoint/divdiff.hpp"

#include <sstream>

#include "multipoint/errors.hpp"

namespace multipoint {

int detect_params(const VarTable& vars, const std::vector<Poly>& components) {
  const std::size_t limit = std::min(vars.size(), components.size());
  std::size_t s = 0;
  while (s < limit && components[s] == Poly::variable(components[s].vars(), s)) ++s;
  if (s == vars.size()) return 0;
  return static_cast<int>(s);
}

PolyMap PolyMap::make(VarTablePtr vars, std::vector<Poly> components, std::optional<int> params) {
  if (!vars || vars->size() == 0) throw ValidationError("map needs at least one source variable");
  if (components.empty()) throw ValidationError("map needs at least one component");
  for (const auto& c : components) {
    if (c.vars() != vars && !same_table(*c.vars(), *vars)) {
      throw TableMismatchError("map component uses a different variable table");
    }
  }
  PolyMap f;
  f.vars_ = std::move(vars);
  f.components_ = std::move(components);
  if (!params) {
    f.s_ = detect_params(*f.vars_, f.components_);
    return f;
  }
  const int s = *params;
  if (s < 0 || s >= f.n()) {
    throw ValidationError("parameter count " + std::to_string(s) + " must lie in [0, " + std::to_string(f.n() - 1) +
                          "]");
  }
  if (s > f.p()) throw ValidationError("parameter count exceeds the number of map components");
  for (int i = 0; i < s; ++i) {
    if (!(f.components_[i] == Poly::variable(f.vars_, static_cast<std::size_t>(i)))) {
      throw ValidationError("component " + std::to_string(i + 1) + " must equal variable '" + f.vars_->name(i) +
                            "' for " + std::to_string(s) + " parameters");
    }
  }
  f.s_ = s;
  return f;
}

PolyMap PolyMap::parse(const std::vector<std::string>& var_names, const std::string& map_text,
                       std::optional<int> params) {
  auto vars = VarTable::plain(var_names);
  std::vector<Poly> comps;
  std::string piece;
  std::istringstream in(map_text);
  std::size_t offset = 0;
  while (std::getline(in, piece, ';')) {
    try {
      comps.push_back(parse_poly(piece, vars, ParseMode::compact));
    } catch (const UnknownVariableError& e) {
      throw UnknownVariableError(e.name(), offset + e.position());
    } catch (const ParseError& e) {
      // Re-anchor the position to the full map text.
      std::string msg = e.what();
      auto at = msg.rfind(" at position ");
      if (at != std::string::npos) msg.erase(at);
      throw ParseError(msg, offset + e.position());
    }
    offset += piece.size() + 1;
  }
  if (!map_text.empty() && map_text.back() == ';') throw ParseError("empty map component", map_text.size());
  return make(std::move(vars), std::move(comps), params);
}

std::vector<std::string> PolyMap::param_names() const {
  std::vector<std::string> out;
  for (int i = 0; i < s_; ++i) out.push_back(vars_->name(static_cast<std::size_t>(i)));
  return out;
}

std::vector<std::string> PolyMap::base_names() const {
  std::vector<std::string> out;
  for (int i = s_; i < n(); ++i) out.push_back(vars_->name(static_cast<std::size_t>(i)));
  return out;
}

Chart build_chart_for(const PolyMap& f, const CoveringCollection& cc, const MultiIndex& alpha, int r) {
  if (cc.n() != f.base_dim()) {
    throw ValidationError("covering collection is for n=" + std::to_string(cc.n()) + " but the map has " +
                          std::to_string(f.base_dim()) + " non-parameter variables");
  }
  return build_chart(cc, alpha, r, f.param_names(), f.base_names());
}

namespace {

void check_chart(const PolyMap& f, const Chart& chart) {
  if (chart.n() != f.base_dim() || chart.param_vars().size() != static_cast<std::size_t>(f.s())) {
    throw TableMismatchError("chart does not match the map's parameter and base dimensions");
  }
}

std::vector<Poly> embedded_components(const PolyMap& f, const Chart& chart) {
  std::vector<Poly> out;
  for (int i = f.s(); i < f.p(); ++i) out.push_back(embed(f.components()[static_cast<std::size_t>(i)], chart.vars()));
  return out;
}

Assignment first_shift(const Chart& chart) {
  Assignment a;
  const auto& nu = chart.level(1).nu;
  for (std::size_t k = 0; k < chart.base_vars().size(); ++k) {
    a.emplace(chart.base_vars()[k], Poly::variable(chart.vars(), chart.base_vars()[k]) + nu[k]);
  }
  return a;
}

}  // namespace

Assignment level_shift(const Chart& chart, int j) {
  if (j < 2 || j > chart.depth()) throw InternalError("level_shift: level out of range");
  Assignment a;
  auto prev = chart.gamma(j - 1);
  auto shift = chart.apply_nu(j, chart.gamma(j));
  const auto& lv = chart.level(j - 1);
  a.emplace(lv.lambda_var, prev[0] + shift[0]);
  for (std::size_t k = 0; k < lv.a_vars.size(); ++k) a.emplace(lv.a_vars[k], prev[k + 1] + shift[k + 1]);
  return a;
}

DifferenceChain difference_chain(const PolyMap& f, const Chart& chart, int depth) {
  check_chart(f, chart);
  if (depth == 0) depth = chart.depth();
  if (depth < 1 || depth > chart.depth()) throw ValidationError("difference chain depth out of range");

  DifferenceChain chain;
  std::vector<Poly> prev = embedded_components(f, chart);
  for (int j = 1; j <= depth; ++j) {
    Assignment shift = j == 1 ? first_shift(chart) : level_shift(chart, j);
    const std::size_t lambda = chart.level(j).lambda_var;
    std::vector<Poly> level;
    level.reserve(prev.size());
    for (const auto& g : prev) level.push_back(divide_by_variable(substitute(g, shift) - g, lambda));
    chain.levels.push_back(level);
    prev = std::move(level);
  }
  return chain;
}

std::vector<Poly> telescoping_defect(const PolyMap& f, const Chart& chart, const DifferenceChain& chain, int j) {
  check_chart(f, chart);
  if (j < 1 || static_cast<std::size_t>(j) > chain.levels.size()) throw InternalError("telescoping_defect: bad level");
  const auto& prev = j == 1 ? embedded_components(f, chart) : chain.levels[static_cast<std::size_t>(j - 2)];
  const auto& cur = chain.levels[static_cast<std::size_t>(j - 1)];
  if (prev.size() != cur.size()) throw TableMismatchError("telescoping_defect: level sizes differ");
  Assignment shift = j == 1 ? first_shift(chart) : level_shift(chart, j);
  Poly lambda = Poly::variable(chart.vars(), chart.level(j).lambda_var);
  std::vector<Poly> out;
  for (std::size_t k = 0; k < cur.size(); ++k) out.push_back(lambda * cur[k] - (substitute(prev[k], shift) - prev[k]));
  return out;
}

ClassicalDifferences classical_corank1(const PolyMap& f, int r) {
  if (r < 2) throw ValidationError("classical differences need r >= 2");
  const int n = f.n();
  if (f.p() < n - 1) throw ValidationError("normal form needs at least n - 1 components");
  for (int i = 0; i < n - 1; ++i) {
    if (!(f.components()[static_cast<std::size_t>(i)] == Poly::variable(f.vars(), static_cast<std::size_t>(i)))) {
      throw ValidationError("map is not in corank-one normal form: component " + std::to_string(i + 1) +
                            " is not '" + f.vars()->name(static_cast<std::size_t>(i)) + "'");
    }
  }
  std::vector<VarInfo> infos;
  for (int i = 0; i < n; ++i) {
    infos.push_back({f.vars()->name(static_cast<std::size_t>(i)), i < n - 1 ? VarRole::param : VarRole::base, 0, 0});
  }
  const std::string y = f.vars()->name(static_cast<std::size_t>(n - 1));
  for (int j = 1; j < r; ++j) {
    std::string name = y + "_" + std::to_string(j);
    auto clash = [&] {
      for (const auto& v : infos) {
        if (v.name == name) return true;
      }
      return false;
    };
    while (clash()) name += "_";
    infos.push_back({name, VarRole::base, 0, 0});
  }
  ClassicalDifferences out;
  out.vars = VarTable::make(std::move(infos));
  auto yvar = [&](int j) { return static_cast<std::size_t>(n - 1 + j); };  // y_0 = y

  std::vector<Poly> prev;
  for (int i = n - 1; i < f.p(); ++i) prev.push_back(embed(f.components()[static_cast<std::size_t>(i)], out.vars));
  for (int j = 1; j < r; ++j) {
    Assignment a;
    a.emplace(yvar(j - 1), Poly::variable(out.vars, yvar(j)));
    Poly below = Poly::variable(out.vars, yvar(j - 1));
    std::vector<Poly> level;
    for (const auto& g : prev) level.push_back(divide_by_binomial(substitute(g, a) - g, yvar(j), below));
    out.levels.push_back(level);
    prev = std::move(level);
  }
  return out;
}

std::vector<std::vector<Poly>> corank1_translate(const Chart& chart, const DifferenceChain& chain,
                                                 const VarTablePtr& classical_vars) {
  if (chart.n() != 1) throw ValidationError("corank-one translation needs a chart with one-dimensional fibers");
  const std::size_t s = chart.param_vars().size();
  const int r = chart.r();
  if (classical_vars->size() != s + static_cast<std::size_t>(r)) {
    throw TableMismatchError("corank1_translate: classical table has the wrong size");
  }
  std::vector<Poly> images(chart.vars()->size(), Poly(classical_vars));
  for (std::size_t i = 0; i < s; ++i) images[chart.param_vars()[i]] = Poly::variable(classical_vars, i);
  images[chart.base_vars()[0]] = Poly::variable(classical_vars, s);
  for (int j = 1; j < r; ++j) {
    images[chart.level(j).lambda_var] = Poly::variable(classical_vars, s + static_cast<std::size_t>(j)) -
                                        Poly::variable(classical_vars, s + static_cast<std::size_t>(j - 1));
  }
  std::vector<std::vector<Poly>> out;
  for (const auto& level : chain.levels) {
    std::vector<Poly> t;
    for (const auto& g : level) t.push_back(change_ring(g, classical_vars, images));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace multipoint
