#pragma once

#include <string>

namespace hsrsched::csv {

/// Locale-independent "%.9g" rendering used for every real-valued column.
std::string real(double value);

}  // namespace hsrsched::csv
