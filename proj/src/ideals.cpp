#include "multipoint/ideals.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "multipoint/errors.hpp"

namespace multipoint {

ChartEquations chart_equations(const PolyMap& f, int r, const CoveringCollection& cc, const MultiIndex& alpha) {
  Chart chart = build_chart_for(f, cc, alpha, r);
  DifferenceChain chain = difference_chain(f, chart);
  std::vector<Poly> gens;
  for (const auto& level : chain.levels) {
    for (const auto& g : level) gens.push_back(normalize(g));
  }
  auto proj = projection_to_Xr(chart);
  return ChartEquations{std::move(chart), std::move(gens), std::move(proj)};
}

std::vector<ChartEquations> kr_equations(const PolyMap& f, int r, const CoveringCollection& cc, int jobs) {
  if (r < 2) throw ValidationError("order r must be at least 2");
  const auto indices = multi_indices(f.base_dim(), r, cc.ell());
  std::vector<std::optional<ChartEquations>> slots(indices.size());
  std::vector<std::exception_ptr> errors(indices.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < indices.size(); k = next++) {
      try {
        slots[k] = chart_equations(f, r, cc, indices[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(indices.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  std::vector<ChartEquations> out;
  out.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    out.push_back(std::move(*slots[k]));
  }
  return out;
}

int expected_dimension(const PolyMap& f, int r) { return f.n() * r - f.p() * (r - 1); }

int diagonal_fiber_dimension(const PolyMap& f, int r, const std::vector<Rational>& point,
                             const CoveringCollection& cc) {
  if (point.size() != static_cast<std::size_t>(f.n())) {
    throw ValidationError("point has " + std::to_string(point.size()) + " coordinates, the source has " +
                          std::to_string(f.n()));
  }
  int best = -1;
  for (const auto& alpha : multi_indices(f.base_dim(), r, cc.ell())) {
    ChartEquations eq = chart_equations(f, r, cc, alpha);
    const Chart& chart = eq.chart;
    const auto& vars = chart.vars();
    std::vector<Poly> extra;
    const std::size_t s = chart.param_vars().size();
    for (std::size_t k = 0; k < s; ++k) {
      extra.push_back(Poly::variable(vars, chart.param_vars()[k]) - Poly::constant(vars, point[k]));
    }
    // Every projected point x^(j) must sit at `point`, not only x^(0).
    for (const auto& xj : eq.projections) {
      for (std::size_t k = 0; k < xj.size(); ++k) extra.push_back(xj[k] - Poly::constant(vars, point[s + k]));
    }
    best = std::max(best, eq.ideal().extended(extra).dimension());
  }
  return best;
}

}  // namespace multipoint
