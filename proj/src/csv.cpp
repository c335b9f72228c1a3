#include "hsrsched/csv.hpp"

#include <cmath>
#include <cstdio>

namespace hsrsched::csv {

std::string real(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  // The C locale is never changed by this library, so '.' is the separator.
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace hsrsched::csv
