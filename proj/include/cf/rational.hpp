// Exact rationals backed by GMP.
#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace cf {

using Q = mpq_class;

// "p/q" with q > 0, e.g. "-8/1".
std::string to_string(const Q& q);
Q parse_rational(const std::string& s);

// Exact conversion; every finite double is a dyadic rational.
Q exact(double d);

inline int sign(const Q& q) { return sgn(q); }

}  // namespace cf
