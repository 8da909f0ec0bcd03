#pragma once

#include <string>

namespace drw {

// Shortest decimal that parses back to the same double. Integral values keep
// a trailing ".0" so columns read as floating point.
std::string format_double(double v);

// 64-bit FNV-1a, stable across platforms; printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace drw
