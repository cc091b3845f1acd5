#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace pvmerge::lp {

/// Arbitrary-precision rational used by the exact LP oracle.
using Rational = boost::multiprecision::cpp_rational;

}  // namespace pvmerge::lp
