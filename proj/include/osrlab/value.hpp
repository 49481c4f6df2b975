#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace osrlab {

/// Program values are arbitrary-precision integers; comparisons yield 0/1.
using Value = boost::multiprecision::cpp_int;

}  // namespace osrlab
