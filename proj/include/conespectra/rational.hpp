#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "conespectra/errors.hpp"

namespace conespectra {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Prints "p" for integers, "p/q" otherwise.
inline std::string to_pq(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline Rational parse_pq(const std::string& text) {
    auto slash = text.find('/');
    BigInt num, den = 1;
    try {
        if (slash == std::string::npos) {
            num = BigInt(text);
        } else {
            num = BigInt(text.substr(0, slash));
            den = BigInt(text.substr(slash + 1));
        }
    } catch (const std::runtime_error&) {
        throw ParseError("invalid rational literal '" + text + "'");
    }
    if (den == 0) throw ParseError("zero denominator in rational '" + text + "'");
    return Rational(num, den);
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt out = 1;
    for (unsigned j = 1; j <= k; ++j) {
        out *= n - k + j;
        out /= j;
    }
    return out;
}

}  // namespace conespectra
