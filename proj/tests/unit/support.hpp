#pragma once

#include <string>
#include <vector>

#include "multipoint/poly.hpp"

namespace testing_support {

inline multipoint::VarTablePtr table(const std::vector<std::string>& names) {
  return multipoint::VarTable::plain(names);
}

inline multipoint::Poly P(const multipoint::VarTablePtr& vars, const std::string& text) {
  return multipoint::parse_poly(text, vars, multipoint::ParseMode::compact);
}

}  // namespace testing_support
