// Buchberger's algorithm over Q, run on primitive integer polynomials.
// Pairs are chosen by sugar degree and pruned with the Gebauer-Moeller
// criteria (which include the coprime leading monomial test).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>

#include "multipoint/errors.hpp"
#include "multipoint/ideals.hpp"

namespace multipoint {

namespace {

struct ITerm {
  Monomial m;
  Integer c;
};
using IPoly = std::vector<ITerm>;  // sorted by decreasing degrevlex, no zero coefficients

IPoly to_integer(const Poly& p) {
  Poly q = normalize(p);
  IPoly out;
  out.reserve(q.size());
  for (const auto& t : q.terms()) out.push_back({t.monomial, t.coeff.get_num()});
  return out;
}

void make_primitive(IPoly& p, IPoly* also = nullptr) {
  if (p.empty() && (!also || also->empty())) return;
  Integer g = 0;
  for (const auto& t : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) return;
  }
  if (also) {
    for (const auto& t : *also) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
      if (g == 1) return;
    }
  }
  if (g == 0) return;
  for (auto& t : p) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
  if (also) {
    for (auto& t : *also) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
  }
}

// a * p[from..] - b * (shift * q[qfrom..]); leading terms were already cancelled.
IPoly combine(const IPoly& p, std::size_t from, const Integer& a, const IPoly& q, std::size_t qfrom,
              const Integer& b, const Monomial& shift) {
  IPoly out;
  out.reserve(p.size() - from + q.size() - qfrom);
  std::size_t i = from;
  std::size_t j = qfrom;
  Monomial qm;
  bool have_qm = false;
  while (i < p.size() || j < q.size()) {
    if (j < q.size() && !have_qm) {
      qm = q[j].m * shift;
      have_qm = true;
    }
    std::strong_ordering ord = std::strong_ordering::equal;
    if (i == p.size()) {
      ord = std::strong_ordering::less;
    } else if (j == q.size()) {
      ord = std::strong_ordering::greater;
    } else {
      ord = degrevlex(p[i].m, qm);
    }
    if (ord > 0) {
      out.push_back({p[i].m, a * p[i].c});
      ++i;
    } else if (ord < 0) {
      out.push_back({std::move(qm), -(b * q[j].c)});
      have_qm = false;
      ++j;
    } else {
      Integer c = a * p[i].c - b * q[j].c;
      if (c != 0) out.push_back({p[i].m, std::move(c)});
      ++i;
      ++j;
      have_qm = false;
    }
  }
  return out;
}

class Reducer {
 public:
  Reducer(const std::vector<IPoly>& polys, const std::vector<std::size_t>& active) : polys_(polys), active_(active) {}

  const IPoly* divisor_of(const Monomial& m, std::size_t skip = SIZE_MAX) const {
    for (auto k : active_) {
      if (k == skip) continue;
      if (polys_[k].front().m.divides(m)) return &polys_[k];
    }
    return nullptr;
  }

  // Full reduction; the result is primitive with positive leading coefficient.
  IPoly reduce(IPoly p, std::size_t skip = SIZE_MAX) const {
    IPoly rem;
    while (!p.empty()) {
      const IPoly* g = divisor_of(p.front().m, skip);
      if (!g) {
        rem.push_back(std::move(p.front()));
        p.erase(p.begin());
        continue;
      }
      Integer d;
      mpz_gcd(d.get_mpz_t(), p.front().c.get_mpz_t(), g->front().c.get_mpz_t());
      Integer a = g->front().c / d;
      Integer b = p.front().c / d;
      Monomial shift = p.front().m / g->front().m;
      p = combine(p, 1, a, *g, 1, b, shift);
      if (a != 1) {
        for (auto& t : rem) t.c *= a;
      }
      make_primitive(p, &rem);
    }
    make_primitive(rem);
    if (!rem.empty() && rem.front().c < 0) {
      for (auto& t : rem) t.c = -t.c;
    }
    return rem;
  }

  // Reduces every non-leading term of g, scaling the head along.
  IPoly reduce_tail(const IPoly& g, std::size_t skip) const {
    IPoly rest(g.begin() + 1, g.end());
    IPoly rem{g.front()};
    while (!rest.empty()) {
      const IPoly* d = divisor_of(rest.front().m, skip);
      if (!d) {
        rem.push_back(std::move(rest.front()));
        rest.erase(rest.begin());
        continue;
      }
      Integer gc;
      mpz_gcd(gc.get_mpz_t(), rest.front().c.get_mpz_t(), d->front().c.get_mpz_t());
      Integer a = d->front().c / gc;
      Integer b = rest.front().c / gc;
      Monomial shift = rest.front().m / d->front().m;
      rest = combine(rest, 1, a, *d, 1, b, shift);
      if (a != 1) {
        for (auto& t : rem) t.c *= a;
      }
      make_primitive(rest, &rem);
    }
    make_primitive(rem);
    if (rem.front().c < 0) {
      for (auto& t : rem) t.c = -t.c;
    }
    return rem;
  }

 private:
  const std::vector<IPoly>& polys_;
  const std::vector<std::size_t>& active_;
};

struct Pair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
  std::uint32_t sugar;
};

class Buchberger {
 public:
  // Returns false once the unit ideal is detected.
  bool add_input(IPoly p) {
    Reducer red(polys_, active_);
    auto sugar = total_degree(p);
    p = red.reduce(std::move(p));
    if (p.empty()) return true;
    return insert(std::move(p), sugar);
  }

  bool run() {
    while (!pairs_.empty()) {
      auto best = std::min_element(pairs_.begin(), pairs_.end(), [](const Pair& a, const Pair& b) {
        if (a.sugar != b.sugar) return a.sugar < b.sugar;
        return degrevlex(a.lcm, b.lcm) < 0;
      });
      Pair pr = std::move(*best);
      *best = std::move(pairs_.back());
      pairs_.pop_back();
      IPoly s = spoly(pr);
      Reducer red(polys_, active_);
      s = red.reduce(std::move(s));
      if (s.empty()) continue;
      if (!insert(std::move(s), pr.sugar)) return false;
    }
    return true;
  }

  // Reduced basis: interreduce the active (already minimal) set.
  std::vector<IPoly> reduced() const {
    std::vector<IPoly> out;
    Reducer red(polys_, active_);
    for (auto k : active_) out.push_back(red.reduce_tail(polys_[k], k));
    std::sort(out.begin(), out.end(),
              [](const IPoly& a, const IPoly& b) { return degrevlex(a.front().m, b.front().m) < 0; });
    return out;
  }

 private:
  static std::uint32_t total_degree(const IPoly& p) {
    std::uint32_t d = 0;
    for (const auto& t : p) d = std::max(d, t.m.degree());
    return d;
  }

  IPoly spoly(const Pair& pr) const {
    const IPoly& f = polys_[pr.i];
    const IPoly& g = polys_[pr.j];
    Integer d;
    mpz_gcd(d.get_mpz_t(), f.front().c.get_mpz_t(), g.front().c.get_mpz_t());
    Integer a = g.front().c / d;
    Integer b = f.front().c / d;
    Monomial sf = pr.lcm / f.front().m;
    Monomial sg = pr.lcm / g.front().m;
    IPoly fs;
    fs.reserve(f.size());
    for (const auto& t : f) fs.push_back({t.m * sf, t.c});
    IPoly out = combine(fs, 1, a, g, 1, b, sg);
    make_primitive(out);
    return out;
  }

  bool insert(IPoly h, std::uint32_t sugar) {
    if (h.front().m.is_one()) return false;
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    sugars_.push_back(std::max(sugar, total_degree(polys_.back())));
    const Monomial& lh = polys_[hi].front().m;

    std::vector<std::size_t> c = active_;
    std::vector<std::size_t> d;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
      const Monomial& lg = polys_[c[idx]].front().m;
      bool keep = lh.coprime(lg);
      if (!keep) {
        Monomial l1 = lcm(lh, lg);
        keep = true;
        for (std::size_t k = idx + 1; k < c.size() && keep; ++k) {
          if (lcm(lh, polys_[c[k]].front().m).divides(l1)) keep = false;
        }
        for (std::size_t k = 0; k < d.size() && keep; ++k) {
          if (lcm(lh, polys_[d[k]].front().m).divides(l1)) keep = false;
        }
      }
      if (keep) d.push_back(c[idx]);
    }
    std::vector<Pair> fresh;
    for (auto g : d) {
      const Monomial& lg = polys_[g].front().m;
      if (lh.coprime(lg)) continue;
      Monomial l = lcm(lh, lg);
      std::uint32_t s = std::max(sugars_[g] + (l.degree() - lg.degree()), sugars_[hi] + (l.degree() - lh.degree()));
      fresh.push_back({g, hi, std::move(l), s});
    }
    std::erase_if(pairs_, [&](const Pair& p) {
      if (!lh.divides(p.lcm)) return false;
      const Monomial& li = polys_[p.i].front().m;
      const Monomial& lj = polys_[p.j].front().m;
      return !(lcm(li, lh) == p.lcm) && !(lcm(lj, lh) == p.lcm);
    });
    for (auto& p : fresh) pairs_.push_back(std::move(p));
    std::erase_if(active_, [&](std::size_t g) { return lh.divides(polys_[g].front().m); });
    active_.push_back(hi);
    return true;
  }

  std::vector<IPoly> polys_;
  std::vector<std::uint32_t> sugars_;
  std::vector<std::size_t> active_;
  std::vector<Pair> pairs_;
};

Poly to_monic(const VarTablePtr& vars, const IPoly& p) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  const Integer& lc = p.front().c;
  for (const auto& t : p) terms.push_back({t.m, make_rational(t.c, lc)});
  return Poly::from_terms(vars, std::move(terms));
}

}  // namespace

std::vector<Poly> groebner_basis(const VarTablePtr& vars, const std::vector<Poly>& generators) {
  std::vector<IPoly> inputs;
  for (const auto& g : generators) {
    if (g.vars() != vars && !same_table(*g.vars(), *vars)) throw TableMismatchError("groebner: generator table mismatch");
    if (g.is_zero()) continue;
    if (g.is_constant()) return {Poly::constant(vars, Rational(1))};
    inputs.push_back(to_integer(g));
  }
  if (inputs.empty()) return {};
  // Smaller inputs first tends to shorten the run.
  std::stable_sort(inputs.begin(), inputs.end(), [](const IPoly& a, const IPoly& b) {
    return degrevlex(a.front().m, b.front().m) < 0;
  });
  Buchberger bb;
  for (auto& p : inputs) {
    if (!bb.add_input(std::move(p))) return {Poly::constant(vars, Rational(1))};
  }
  if (!bb.run()) return {Poly::constant(vars, Rational(1))};
  std::vector<Poly> out;
  for (const auto& p : bb.reduced()) out.push_back(to_monic(vars, p));
  return out;
}

Poly reduce(const Poly& p, const std::vector<Poly>& basis) {
  Poly rem(p.vars());
  Poly cur = p;
  while (!cur.is_zero()) {
    const Term& lt = cur.leading_term();
    const Poly* div = nullptr;
    for (const auto& g : basis) {
      if (!g.is_zero() && g.leading_monomial().divides(lt.monomial)) {
        div = &g;
        break;
      }
    }
    if (!div) {
      rem += Poly::from_terms(p.vars(), {lt});
      cur -= Poly::from_terms(p.vars(), {lt});
      continue;
    }
    Term factor{lt.monomial / div->leading_monomial(), lt.coeff / div->leading_coeff()};
    cur -= Poly::from_terms(p.vars(), {factor}) * *div;
  }
  return rem;
}

int dimension_from_basis(std::size_t nvars, const std::vector<Poly>& basis) {
  if (basis.empty()) return static_cast<int>(nvars);
  std::vector<std::vector<std::size_t>> supports;
  for (const auto& g : basis) {
    if (g.is_zero()) continue;
    if (g.leading_monomial().is_one()) return -1;
    supports.push_back(g.leading_monomial().support());
  }
  // dim = nvars - (minimum number of variables meeting every support).
  std::vector<char> chosen(nvars, 0);
  std::size_t best = nvars;
  std::function<void(std::size_t)> search = [&](std::size_t count) {
    if (count >= best) return;
    const std::vector<std::size_t>* open = nullptr;
    for (const auto& s : supports) {
      bool hit = std::any_of(s.begin(), s.end(), [&](std::size_t v) { return chosen[v] != 0; });
      if (!hit && (!open || s.size() < open->size())) open = &s;
    }
    if (!open) {
      best = count;
      return;
    }
    for (auto v : *open) {
      chosen[v] = 1;
      search(count + 1);
      chosen[v] = 0;
    }
  };
  search(0);
  return static_cast<int>(nvars - best);
}

struct IdealHandle::Cache {
  std::once_flag once;
  std::atomic<bool> ready{false};
  std::vector<Poly> basis;
};

IdealHandle::IdealHandle(VarTablePtr vars, std::vector<Poly> generators)
    : vars_(std::move(vars)), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  for (const auto& g : generators_) {
    if (g.vars() != vars_ && !same_table(*g.vars(), *vars_)) throw TableMismatchError("ideal generator table mismatch");
  }
}

const std::vector<Poly>& IdealHandle::groebner() const {
  std::call_once(cache_->once, [this] {
    cache_->basis = groebner_basis(vars_, generators_);
    cache_->ready = true;
  });
  return cache_->basis;
}

bool IdealHandle::has_basis() const { return cache_->ready; }

int IdealHandle::dimension() const { return dimension_from_basis(vars_->size(), groebner()); }

bool IdealHandle::contains(const Poly& p) const {
  if (p.vars() != vars_ && !same_table(*p.vars(), *vars_)) throw TableMismatchError("contains: table mismatch");
  return reduce(p, groebner()).is_zero();
}

IdealHandle IdealHandle::extended(const std::vector<Poly>& more) const {
  auto gens = generators_;
  gens.insert(gens.end(), more.begin(), more.end());
  return IdealHandle(vars_, std::move(gens));
}

}  // namespace multipoint
