#pragma once

#include <stdexcept>
#include <string>

namespace mires {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input that cannot be parsed or has inconsistent dimensions.
struct InputError : Error {
  using Error::Error;
};

struct UnsupportedLocus : Error {
  using Error::Error;
};

struct NotNice : Error {
  using Error::Error;
};

struct NotPermissible : Error {
  int pair = -1;
  NotPermissible(const std::string& what, int pair_index = -1) : Error(what), pair(pair_index) {}
};

struct ConditionIotaFails : Error {
  using Error::Error;
};

struct UndecidableMembership : Error {
  using Error::Error;
};

struct NonTermination : Error {
  using Error::Error;
};

}  // namespace mires
