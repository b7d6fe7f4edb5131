// Exact rational scalar used by the DoF optimizer and its certificates.

#ifndef CAIA_RATIONAL_HPP
#define CAIA_RATIONAL_HPP

#include <stdexcept>
#include <string>
#include <vector>
#include <boost/multiprecision/cpp_int.hpp>

namespace caia {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders "p/q", or just "p" when q == 1.
inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on junk.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational '" + text + "': " + e.what());
    }
}

/// Least common multiple of the canonical denominators.
inline BigInt lcm_denominators(const std::vector<Rational>& values) {
    BigInt acc = 1;
    for (const auto& v : values)
        acc = boost::multiprecision::lcm(acc, boost::multiprecision::denominator(v));
    return acc;
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace caia

#endif
