#pragma once

#include <string>

namespace dhlab {

/// Shortest round-trippable text for a double ("nan", "inf" spelled out).
std::string fmt_double(double v);

/// CSV field quoting when needed.
std::string csv_field(const std::string& s);

}  // namespace dhlab
