#ifndef COHPAIR_SCALAR_HPP
#define COHPAIR_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "cohpair/errors.hpp"

namespace cohpair {

// Exact backend: arbitrary-size rationals, always canonical (lowest terms,
// positive denominator -- maintained by GMP).
using Rational = boost::multiprecision::mpq_rational;

// Float backend: arbitrary-precision binary float. Precision is process-wide
// and set once per run via set_float_precision_bits(); comparisons against it
// always go through an explicit tolerance.
using Real = boost::multiprecision::mpfr_float;

template <class S>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline void set_float_precision_bits(unsigned bits) {
    // mpfr_float precision is configured in decimal digits
    const auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398119)) + 2;
    Real::default_precision(digits10);
}

inline unsigned float_precision_digits() { return Real::default_precision(); }

template <class S>
S abs_val(const S& x) {
    return x < 0 ? S(-x) : x;
}

// Tolerance-aware zero test. `scale` is the natural magnitude of the
// surrounding computation; exact backend ignores both knobs.
template <class S>
bool near_zero(const S& x, const S& tol = S(0), const S& scale = S(1)) {
    if constexpr (is_exact_v<S>) {
        return x == 0;
    } else {
        S s = abs_val(scale);
        if (s < 1) s = S(1);
        return abs_val(x) <= tol * s;
    }
}

template <class S>
bool near_equal(const S& a, const S& b, const S& tol = S(0), const S& scale = S(1)) {
    return near_zero(S(a - b), tol, scale);
}

// Rising factorial (alpha)_n.
template <class S>
S pochhammer(const S& alpha, int n) {
    S r(1);
    for (int i = 0; i < n; ++i) r *= (alpha + i);
    return r;
}

template <class S>
S binomial(int n, int k) {
    if (k < 0 || k > n) return S(0);
    S r(1);
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

template <class S>
S factorial(int n) {
    S r(1);
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Accepts "p/q", plain integers, and plain decimals ("-3", "1/2", "0.25").
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(text);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(text);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto frac_len = text.size() - dot - 1;
    Rational den(1);
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(boost::multiprecision::mpz_int(digits)) / den;
}

// Canonical "p/q" form, "0/1" for zero.
inline std::string format_rational(const Rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    return numerator(q).str() + "/" + denominator(q).str();
}

template <class S>
S scalar_from_string(const std::string& text) {
    if constexpr (is_exact_v<S>) {
        return parse_rational(text);
    } else {
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            return S(Real(text.substr(0, slash)) / Real(text.substr(slash + 1)));
        }
        return S(text);
    }
}

template <class S>
std::string scalar_to_string(const S& x, unsigned digits = 0) {
    if constexpr (is_exact_v<S>) {
        return format_rational(x);
    } else {
        return x.str(digits == 0 ? Real::default_precision() : digits);
    }
}

template <class S>
S rational_as(const Rational& q) {
    if constexpr (is_exact_v<S>) {
        return q;
    } else {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        return S(Real(numerator(q)) / Real(denominator(q)));
    }
}

} // namespace cohpair

#endif
