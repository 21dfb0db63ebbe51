#include "multipoint/var_table.hpp"

#include <cctype>

#include "multipoint/errors.hpp"

namespace multipoint {

bool is_identifier(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

VarTable::VarTable(std::vector<VarInfo> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i].name, i);
}

VarTablePtr VarTable::make(std::vector<VarInfo> vars) {
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& v : vars) {
    if (!is_identifier(v.name)) throw ValidationError("invalid variable name '" + v.name + "'");
    if (!seen.emplace(v.name, 0).second) throw ValidationError("duplicate variable name '" + v.name + "'");
    bool leveled = v.role == VarRole::lambda || v.role == VarRole::a;
    if (leveled && v.level < 1) throw ValidationError("variable '" + v.name + "' needs a level >= 1");
    if (v.role == VarRole::a && v.slot < 1) throw ValidationError("variable '" + v.name + "' needs a slot >= 1");
  }
  return VarTablePtr(new VarTable(std::move(vars)));
}

VarTablePtr VarTable::plain(const std::vector<std::string>& names) {
  std::vector<VarInfo> vars;
  vars.reserve(names.size());
  for (const auto& n : names) vars.push_back({n, VarRole::base, 0, 0});
  return make(std::move(vars));
}

std::optional<std::size_t> VarTable::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VarTable::require(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw ValidationError("no variable named '" + name + "'");
  return *i;
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

}  // namespace multipoint
