#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace mires {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat ratio(long a, long b) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Rat parse_rational(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0) throw InputError("bad rational: '" + s + "'");
  if (r.get_den() == 0) throw InputError("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace mires
