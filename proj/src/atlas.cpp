#include "multipoint/atlas.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "multipoint/errors.hpp"

namespace multipoint {

// ---------------------------------------------------------------------------
// Exact linear algebra over Q.

std::size_t rank(RationalMatrix m) {
  std::size_t rows = m.size();
  std::size_t cols = rows == 0 ? 0 : m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational factor = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= factor * m[r][k];
    }
    ++r;
  }
  return r;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = m;
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InternalError("inverse: matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[c]);
    std::swap(inv[pivot], inv[c]);
    Rational p = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= p;
      inv[c][k] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational factor = a[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[i][k] -= factor * a[c][k];
        inv[i][k] -= factor * inv[c][k];
      }
    }
  }
  return inv;
}

Rational LinearForm::operator()(std::span<const Rational> x) const {
  if (x.size() != coeffs.size()) throw TableMismatchError("linear form applied to a vector of the wrong length");
  Rational total = 0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) total += coeffs[j] * x[j];
  return total;
}

// ---------------------------------------------------------------------------
// Covering collections.

namespace {

// Calls fn on every k-subset of {0..m-1}, stopping early when fn returns false.
bool for_each_subset(std::size_t m, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > m) return true;
  for (;;) {
    if (!fn(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::size_t CoveringCollection::required_size(int n, int ell) {
  return static_cast<std::size_t>((ell - 1) * (n - 1) + 1);
}

CoveringCollection::CoveringCollection(int n, int ell, std::vector<LinearForm> forms,
                                       std::vector<std::vector<std::size_t>> companions)
    : n_(n), ell_(ell), forms_(std::move(forms)), companions_(std::move(companions)) {
  if (n_ < 1) throw ValidationError("covering collection: n must be positive");
  if (ell_ < 2) throw ValidationError("covering collection: ell must be at least 2");
  if (forms_.size() < required_size(n_, ell_)) {
    throw ValidationError("covering collection: need at least " + std::to_string(required_size(n_, ell_)) +
                          " forms for n=" + std::to_string(n_) + ", ell=" + std::to_string(ell_) + ", got " +
                          std::to_string(forms_.size()));
  }
  if (companions_.size() != forms_.size()) {
    throw ValidationError("covering collection: need one companion list per form");
  }
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    const auto& f = forms_[i];
    if (f.coeffs.size() != static_cast<std::size_t>(n_)) {
      throw ValidationError("covering collection: form " + std::to_string(i + 1) + " has " +
                            std::to_string(f.coeffs.size()) + " coefficients, expected " + std::to_string(n_));
    }
    if (std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const Rational& c) { return c == 0; })) {
      throw ValidationError("covering collection: form " + std::to_string(i + 1) + " is zero");
    }
    const auto& comp = companions_[i];
    if (comp.size() != static_cast<std::size_t>(n_ - 1)) {
      throw ValidationError("covering collection: form " + std::to_string(i + 1) + " needs " +
                            std::to_string(n_ - 1) + " companions");
    }
    for (std::size_t k = 0; k < comp.size(); ++k) {
      if (comp[k] >= forms_.size() || comp[k] == i) {
        throw ValidationError("covering collection: invalid companion index for form " + std::to_string(i + 1));
      }
      if (std::find(comp.begin(), comp.begin() + static_cast<std::ptrdiff_t>(k), comp[k]) !=
          comp.begin() + static_cast<std::ptrdiff_t>(k)) {
        throw ValidationError("covering collection: repeated companion for form " + std::to_string(i + 1));
      }
    }
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(n_), forms_.size());
  std::vector<std::size_t> bad;
  for_each_subset(forms_.size(), k, [&](const std::vector<std::size_t>& idx) {
    RationalMatrix m;
    for (auto i : idx) m.push_back(forms_[i].coeffs);
    if (rank(m) < k) {
      bad = idx;
      return false;
    }
    return true;
  });
  if (!bad.empty()) {
    std::string list;
    for (auto i : bad) list += (list.empty() ? "" : ",") + std::to_string(i + 1);
    throw ValidationError("covering collection: forms {" + list + "} are linearly dependent");
  }
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    if (!inverse(lambda_matrix(i))) {
      throw ValidationError("covering collection: form " + std::to_string(i + 1) +
                            " and its companions are linearly dependent");
    }
  }
}

RationalMatrix CoveringCollection::lambda_matrix(std::size_t i) const {
  RationalMatrix m;
  m.push_back(forms_.at(i).coeffs);
  for (auto c : companions_.at(i)) m.push_back(forms_.at(c).coeffs);
  return m;
}

CoveringCollection covering_collection(int n, int ell, CollectionStrategy strategy) {
  if (n < 1) throw ValidationError("covering collection: n must be positive");
  if (ell < 2) throw ValidationError("covering collection: ell must be at least 2");
  const std::size_t m = CoveringCollection::required_size(n, ell);
  std::vector<LinearForm> forms;
  std::vector<std::vector<std::size_t>> companions;
  if (strategy == CollectionStrategy::coordinate) {
    if (n > 2 || ell > 3) {
      throw ValidationError("covering collection: the standard collection only exists for n <= 2, ell <= 3");
    }
    if (n == 1) {
      forms.push_back({{Rational(1)}});
      companions.emplace_back();
    } else {
      // x, y, x + y with companions y, x, x.
      const std::vector<LinearForm> all = {{{1, 0}}, {{0, 1}}, {{1, 1}}};
      const std::vector<std::size_t> comp = {1, 0, 0};
      for (std::size_t i = 0; i < m; ++i) {
        forms.push_back(all[i]);
        companions.push_back({comp[i]});
      }
    }
    return CoveringCollection(n, ell, std::move(forms), std::move(companions));
  }
  // L_i(x) = sum_j i^(j-1) x_j; every n rows form a Vandermonde matrix.
  for (std::size_t i = 1; i <= m; ++i) {
    LinearForm f;
    Integer power = 1;
    for (int j = 0; j < n; ++j) {
      f.coeffs.emplace_back(power);
      power *= static_cast<unsigned long>(i);
    }
    forms.push_back(std::move(f));
    std::vector<std::size_t> comp;
    for (int k = 1; k < n; ++k) comp.push_back((i - 1 + static_cast<std::size_t>(k)) % m);
    companions.push_back(std::move(comp));
  }
  return CoveringCollection(n, ell, std::move(forms), std::move(companions));
}

CoveringCollection default_collection(int n, int ell) {
  if (n <= 2 && ell <= 3) return covering_collection(n, ell, CollectionStrategy::coordinate);
  return covering_collection(n, ell, CollectionStrategy::vandermonde);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

CoveringCollection parse_covering_collection(std::istream& in, int ell) {
  std::vector<LinearForm> forms;
  std::vector<std::vector<std::size_t>> companions;
  bool have_companions = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ValidationError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string tag = "companions:";
    if (line.rfind(tag, 0) == 0) {
      if (have_companions) fail("duplicate companions line");
      have_companions = true;
      std::string body = trim(line.substr(tag.size()));
      auto lists = body.empty() ? std::vector<std::string>{} : split(body, ';');
      if (lists.size() != forms.size() && !(forms.size() == 1 && lists.empty())) {
        fail("expected " + std::to_string(forms.size()) + " companion lists, got " + std::to_string(lists.size()));
      }
      for (const auto& l : lists) {
        std::vector<std::size_t> comp;
        if (!l.empty()) {
          for (const auto& tok : split(l, ',')) {
            try {
              std::size_t used = 0;
              long v = std::stol(tok, &used);
              if (used != tok.size() || v < 1) fail("bad companion index '" + tok + "'");
              comp.push_back(static_cast<std::size_t>(v - 1));
            } catch (const std::logic_error&) {
              fail("bad companion index '" + tok + "'");
            }
          }
        }
        companions.push_back(std::move(comp));
      }
      continue;
    }
    if (have_companions) fail("form listed after the companions line");
    LinearForm f;
    for (const auto& tok : split(line, ',')) {
      try {
        f.coeffs.push_back(parse_rational(tok));
      } catch (const ValidationError& e) {
        fail(e.what());
      }
    }
    if (!forms.empty() && f.coeffs.size() != forms.front().coeffs.size()) {
      fail("form has " + std::to_string(f.coeffs.size()) + " coefficients, previous forms have " +
           std::to_string(forms.front().coeffs.size()));
    }
    forms.push_back(std::move(f));
  }
  if (forms.empty()) throw ValidationError("covering collection file lists no forms");
  const int n = static_cast<int>(forms.front().coeffs.size());
  if (!have_companions) {
    if (n != 1) throw ValidationError("line " + std::to_string(lineno) + ": missing companions line");
    companions.assign(forms.size(), {});
  }
  if (companions.size() < forms.size()) companions.resize(forms.size());
  return CoveringCollection(n, ell, std::move(forms), std::move(companions));
}

CoveringCollection load_covering_collection(const std::string& path, int ell) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open covering collection file '" + path + "'");
  return parse_covering_collection(in, ell);
}

std::string format_covering_collection(const CoveringCollection& cc) {
  std::string out;
  for (const auto& f : cc.forms()) {
    for (std::size_t j = 0; j < f.coeffs.size(); ++j) out += (j ? "," : "") + to_string(f.coeffs[j]);
    out += '\n';
  }
  out += "companions:";
  for (std::size_t i = 0; i < cc.size(); ++i) {
    out += i ? ";" : " ";
    const auto& comp = cc.companions(i);
    for (std::size_t k = 0; k < comp.size(); ++k) out += (k ? "," : "") + std::to_string(comp[k] + 1);
  }
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Multi-indices.

namespace {

int level_bound(int n, int ell, int i) { return (ell - i) * (n - 1) + 1; }

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int r, int ell) {
  if (n < 1 || r < 2 || ell < r) throw ValidationError("multi_indices: need n >= 1, r >= 2, ell >= r");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(r - 1), 1);
  for (;;) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 1 && cur[static_cast<std::size_t>(i - 1)] == level_bound(n, ell, i)) {
      cur[static_cast<std::size_t>(i - 1)] = 1;
      --i;
    }
    if (i == 0) return out;
    ++cur[static_cast<std::size_t>(i - 1)];
  }
}

std::size_t multi_index_count(int n, int r, int ell) {
  std::size_t count = 1;
  for (int i = 1; i <= r - 1; ++i) count *= static_cast<std::size_t>(level_bound(n, ell, i));
  return count;
}

std::string format_multi_index(const MultiIndex& alpha) {
  std::string out = "U(";
  for (std::size_t i = 0; i < alpha.size(); ++i) out += (i ? "," : "") + std::to_string(alpha[i]);
  return out + ")";
}

// ---------------------------------------------------------------------------
// Charts.

std::vector<Poly> Chart::gamma(int i) const {
  const auto& lv = level(i);
  std::vector<Poly> g;
  g.push_back(Poly::variable(vars_, lv.lambda_var));
  for (auto v : lv.a_vars) g.push_back(Poly::variable(vars_, v));
  return g;
}

std::vector<Poly> Chart::apply_nu(int i, std::span<const Poly> gamma) const {
  const auto& lv = level(i);
  if (gamma.size() != static_cast<std::size_t>(n_)) throw InternalError("apply_nu: gamma has the wrong length");
  std::vector<Poly> scaled;
  scaled.push_back(gamma[0]);
  for (std::size_t k = 1; k < gamma.size(); ++k) scaled.push_back(gamma[0] * gamma[k]);
  std::vector<Poly> out;
  for (std::size_t row = 0; row < static_cast<std::size_t>(n_); ++row) {
    Poly acc(vars_);
    for (std::size_t k = 0; k < scaled.size(); ++k) {
      const Rational& c = lv.lambda_inverse[row][k];
      if (c != 0) acc += scaled[k] * c;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

std::string unique_name(std::string name, const std::vector<VarInfo>& taken, const std::vector<std::string>& reserved) {
  auto clash = [&](const std::string& s) {
    return std::any_of(taken.begin(), taken.end(), [&](const VarInfo& v) { return v.name == s; }) ||
           std::find(reserved.begin(), reserved.end(), s) != reserved.end();
  };
  while (clash(name)) name += "_";
  return name;
}

}  // namespace

Chart build_chart(const CoveringCollection& cc, const MultiIndex& alpha, int r,
                  const std::vector<std::string>& param_names, const std::vector<std::string>& base_names) {
  const int n = cc.n();
  if (static_cast<int>(base_names.size()) != n) {
    throw ValidationError("build_chart: collection is for n=" + std::to_string(n) + " but " +
                          std::to_string(base_names.size()) + " base variables were given");
  }
  if (r < 2) throw ValidationError("build_chart: r must be at least 2");
  if (cc.ell() < r) throw ValidationError("build_chart: collection ell is smaller than r");
  if (alpha.size() != static_cast<std::size_t>(r - 1)) {
    throw ValidationError("build_chart: multi-index " + format_multi_index(alpha) + " must have r-1 entries");
  }
  for (int i = 1; i <= r - 1; ++i) {
    int a = alpha[static_cast<std::size_t>(i - 1)];
    if (a < 1 || a > level_bound(n, cc.ell(), i) || static_cast<std::size_t>(a) > cc.size()) {
      throw ValidationError("build_chart: multi-index " + format_multi_index(alpha) + " is out of range");
    }
  }

  Chart chart;
  chart.alpha_ = alpha;
  chart.n_ = n;
  chart.r_ = r;

  std::vector<std::string> user;
  user.insert(user.end(), param_names.begin(), param_names.end());
  user.insert(user.end(), base_names.begin(), base_names.end());

  std::vector<VarInfo> infos;
  for (const auto& p : param_names) {
    chart.param_vars_.push_back(infos.size());
    infos.push_back({p, VarRole::param, 0, 0});
  }
  for (const auto& b : base_names) {
    chart.base_vars_.push_back(infos.size());
    infos.push_back({b, VarRole::base, 0, 0});
  }
  chart.levels_.resize(static_cast<std::size_t>(r - 1));
  for (int i = 1; i <= r - 1; ++i) {
    auto& lv = chart.levels_[static_cast<std::size_t>(i - 1)];
    lv.lambda_var = infos.size();
    infos.push_back({unique_name("l" + std::to_string(i), infos, user), VarRole::lambda, i, 0});
    for (int k = 1; k <= n - 1; ++k) {
      std::string base = n == 2 ? "a" + std::to_string(i) : "a" + std::to_string(i) + "_" + std::to_string(k);
      lv.a_vars.push_back(infos.size());
      infos.push_back({unique_name(base, infos, user), VarRole::a, i, k});
    }
  }
  chart.vars_ = VarTable::make(std::move(infos));

  for (int i = 1; i <= r - 1; ++i) {
    auto& lv = chart.levels_[static_cast<std::size_t>(i - 1)];
    lv.form = static_cast<std::size_t>(alpha[static_cast<std::size_t>(i - 1)] - 1);
    lv.lambda = cc.lambda_matrix(lv.form);
    auto inv = inverse(lv.lambda);
    if (!inv) throw InternalError("build_chart: singular Lambda matrix for form " + std::to_string(lv.form + 1));
    lv.lambda_inverse = std::move(*inv);
  }
  for (int i = 1; i <= r - 1; ++i) {
    auto g = chart.gamma(i);
    chart.levels_[static_cast<std::size_t>(i - 1)].nu = chart.apply_nu(i, g);
  }
  return chart;
}

Chart build_chart(const CoveringCollection& cc, const MultiIndex& alpha, int n, int r, int params) {
  if (n != cc.n()) throw ValidationError("build_chart: n does not match the covering collection");
  std::vector<std::string> pnames;
  std::vector<std::string> bnames;
  for (int i = 1; i <= params; ++i) pnames.push_back("t" + std::to_string(i));
  for (int i = 1; i <= n; ++i) bnames.push_back("x" + std::to_string(i));
  return build_chart(cc, alpha, r, pnames, bnames);
}

std::vector<std::vector<Poly>> projection_to_Xr(const Chart& chart) {
  const auto& vars = chart.vars();
  std::vector<Poly> x;
  for (auto v : chart.base_vars()) x.push_back(Poly::variable(vars, v));

  std::vector<std::vector<Poly>> out;
  out.push_back(x);
  for (int j = 1; j <= chart.r() - 1; ++j) {
    // gamma^(j,j) is free; descend gamma^(i,j) = gamma^(i,i) + nu_{i+1}(gamma^(i+1,j)).
    std::vector<Poly> g = chart.gamma(j);
    for (int i = j - 1; i >= 1; --i) {
      auto shift = chart.apply_nu(i + 1, g);
      auto gi = chart.gamma(i);
      for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += shift[k];
      g = std::move(gi);
    }
    auto delta = chart.apply_nu(1, g);
    std::vector<Poly> xj;
    for (std::size_t k = 0; k < x.size(); ++k) xj.push_back(x[k] + delta[k]);
    out.push_back(std::move(xj));
  }
  return out;
}

std::optional<std::vector<Rational>> chart_coordinates(const Chart& chart, std::span<const Rational> params,
                                                       const std::vector<std::vector<Rational>>& points) {
  const int n = chart.n();
  const int r = chart.r();
  if (points.size() != static_cast<std::size_t>(r)) throw TableMismatchError("chart_coordinates: need r points");
  if (params.size() != chart.param_vars().size()) throw TableMismatchError("chart_coordinates: wrong parameter count");
  for (const auto& p : points) {
    if (p.size() != static_cast<std::size_t>(n)) throw TableMismatchError("chart_coordinates: wrong point length");
  }
  // gamma[j] holds gamma^(i,j) for the current row i; gamma^(0,j) = x^(j) - x.
  std::vector<std::vector<Rational>> gamma(static_cast<std::size_t>(r), std::vector<Rational>(n));
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < n; ++k) gamma[j][k] = points[j][k] - points[0][k];
  }
  std::vector<Rational> coords(chart.vars()->size());
  for (std::size_t k = 0; k < params.size(); ++k) coords[chart.param_vars()[k]] = params[k];
  for (int k = 0; k < n; ++k) coords[chart.base_vars()[static_cast<std::size_t>(k)]] = points[0][k];

  std::vector<Rational> diag(n, Rational(0));  // gamma^(i-1,i-1); zero for i = 1
  for (int i = 1; i <= r - 1; ++i) {
    const auto& lv = chart.level(i);
    std::vector<std::vector<Rational>> next(static_cast<std::size_t>(r), std::vector<Rational>(n));
    for (int j = i; j <= r - 1; ++j) {
      std::vector<Rational> delta(n);
      for (int k = 0; k < n; ++k) delta[k] = gamma[j][k] - diag[k];
      Rational lam = 0;
      for (int k = 0; k < n; ++k) lam += lv.lambda[0][k] * delta[k];
      if (lam == 0) return std::nullopt;
      next[j][0] = lam;
      for (int row = 1; row < n; ++row) {
        Rational v = 0;
        for (int k = 0; k < n; ++k) v += lv.lambda[row][k] * delta[k];
        next[j][row] = v / lam;
      }
    }
    coords[lv.lambda_var] = next[i][0];
    for (int k = 1; k < n; ++k) coords[lv.a_vars[static_cast<std::size_t>(k - 1)]] = next[i][k];
    diag = next[i];
    gamma = std::move(next);
  }
  return coords;
}

}  // namespace multipoint
