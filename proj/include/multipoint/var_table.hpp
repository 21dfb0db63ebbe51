#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace multipoint {

enum class VarRole { param, base, lambda, a };

/// One variable of a polynomial ring. `level` is the blowup level i of a
/// lambda/a coordinate (>= 1); `slot` is the index k of an a-coordinate (>= 1).
struct VarInfo {
  std::string name;
  VarRole role = VarRole::base;
  int level = 0;
  int slot = 0;
};

class VarTable;
using VarTablePtr = std::shared_ptr<const VarTable>;

/// Ordered, immutable list of distinct variable names. The order is the
/// variable order of the degree-reverse-lexicographic term order.
class VarTable {
 public:
  /// Throws ValidationError on duplicate/invalid names or bad role levels.
  static VarTablePtr make(std::vector<VarInfo> vars);
  /// All variables tagged as base.
  static VarTablePtr plain(const std::vector<std::string>& names);

  std::size_t size() const noexcept { return vars_.size(); }
  const VarInfo& operator[](std::size_t i) const { return vars_[i]; }
  const std::string& name(std::size_t i) const { return vars_[i].name; }
  const std::vector<VarInfo>& vars() const noexcept { return vars_; }

  std::optional<std::size_t> index_of(const std::string& name) const;
  /// Like index_of but throws ValidationError when absent.
  std::size_t require(const std::string& name) const;

  std::vector<std::string> names() const;

 private:
  explicit VarTable(std::vector<VarInfo> vars);

  std::vector<VarInfo> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// True when `name` matches letter (letter | digit | '_')*.
bool is_identifier(const std::string& name);

}  // namespace multipoint
