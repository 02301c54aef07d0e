#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qsc {

// Exact arbitrary-precision rational scalar. All symbolic coefficients in
// the library are Rational; floating point enters only in the path and
// sequence backends.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Prints "p" for integers and "p/q" otherwise.
inline std::string rational_str(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

// Binomial coefficient C(n, k) as an exact integer.
inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

}  // namespace qsc
