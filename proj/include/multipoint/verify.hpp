#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "multipoint/atlas.hpp"
#include "multipoint/divdiff.hpp"
#include "multipoint/ideals.hpp"

namespace multipoint {

struct SampleConfig {
  std::uint64_t seed = 1;
  int trials = 20;
  int coeff_bound = 5;
  int degree_bound = 3;

  /// Throws ValidationError.
  void validate() const;
};

struct Failure {
  std::string input;
  std::string expected;
  std::string actual;
};

struct VerifyReport {
  std::string suite;
  int trials = 0;
  /// Samples that could not be used (not representable in a chart, no
  /// rational root found, ...). Never counted as failures.
  int skipped = 0;
  std::vector<Failure> failures;

  bool passed() const noexcept { return failures.empty(); }
};

std::string format_report(const VerifyReport& report);

/// Deterministic source of small random rationals and polynomials. The
/// distributions are implemented here rather than through <random>'s
/// distribution classes, whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [lo, hi].
  long uniform(long lo, long hi);
  bool coin() { return uniform(0, 1) == 1; }
  /// p/q with p in [-bound, bound], q in [1, bound].
  Rational rational(int bound);
  Rational nonzero_rational(int bound);
  Poly poly(const VarTablePtr& vars, int degree, int coeff_bound, int max_terms = 5);

 private:
  std::mt19937_64 engine_;
};

/// Map with s leading parameter components and p - s random components of
/// degree <= `degree`. Requires s < n and s <= p.
PolyMap random_map(Rng& rng, int n, int p, int s, int degree, int coeff_bound);
/// Corank-one normal form (x_1..x_{n-1}, y) -> (x, g_n, ..., g_p), with s = n - 1.
PolyMap random_corank1_map(Rng& rng, int n, int p, int degree, int coeff_bound);

/// Test hook applied to each chain before it is checked.
using ChainTamper = std::function<void(DifferenceChain&)>;
/// Drops the last term of the first nonzero level-1 difference.
void drop_one_term(DifferenceChain& chain);

VerifyReport check_telescoping(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg,
                               const ChainTamper& tamper = {});

/// A chart point whose generators all vanish, found by solving the
/// generators in order: linear variables are eliminated symbolically, and
/// otherwise a rational root in a single remaining variable is taken.
std::optional<std::vector<Rational>> manufacture_zero(const ChartEquations& eq, Rng& rng, int bound,
                                                      int attempts = 16);
/// Chart point with every lambda nonzero and pairwise distinct projections.
bool is_strict_sample(const ChartEquations& eq, const std::vector<Rational>& point);

VerifyReport check_strict_points(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg);
VerifyReport check_diagonal_kernel(const PolyMap& f, const CoveringCollection& cc, const SampleConfig& cfg);
VerifyReport check_overlap(const PolyMap& f, int r, const CoveringCollection& cc, const SampleConfig& cfg);
VerifyReport check_corank1(const SampleConfig& cfg);

/// Rational roots of a polynomial that only involves `var`.
std::vector<Rational> rational_roots(const Poly& p, std::size_t var);

}  // namespace multipoint
