#pragma once

#include <string>

#include "qtj/field.hpp"

namespace qtj::detail {

// One "c*T^e" term; prefixed with " + " unless it is the first.
inline std::string format_term(const Field& F, Fq c, long long e, bool first) {
  std::string s;
  const std::string cs = F.to_string(c);
  if (e == 0) {
    s = cs;
  } else {
    if (c != Field::one()) s = cs + "*";
    s += (e == 1) ? "T" : "T^" + std::to_string(e);
  }
  return first ? s : " + " + s;
}

}  // namespace qtj::detail
