#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace multipoint {

/// Dense exponent vector, one slot per variable of the ambient table.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps);

  std::size_t size() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t degree() const noexcept { return degree_; }
  const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }
  bool is_one() const noexcept { return degree_ == 0; }

  void set(std::size_t i, std::uint32_t e);

  /// True when this monomial divides `other`.
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  /// Indices of the variables with positive exponent.
  std::vector<std::size_t> support() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial lcm(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) = default;

 private:
  std::vector<std::uint32_t> exps_;
  std::uint32_t degree_ = 0;
};

/// Degree-reverse-lexicographic comparison with variable 0 the largest.
std::strong_ordering degrevlex(const Monomial& a, const Monomial& b);

struct DegRevLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return degrevlex(a, b) > 0; }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

}  // namespace multipoint
