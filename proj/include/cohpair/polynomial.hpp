#ifndef COHPAIR_POLYNOMIAL_HPP
#define COHPAIR_POLYNOMIAL_HPP

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohpair/scalar.hpp"

namespace cohpair {

// Dense univariate polynomial, ascending coefficients. The zero polynomial is
// the empty coefficient list; trailing exact zeros are always trimmed, so
// degree() == -1 identifies zero and the leading coefficient is nonzero
// otherwise.
template <class S>
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    Polynomial(std::initializer_list<S> coeffs) : coeffs_(coeffs) { trim(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(const S& c) { return Polynomial({c}); }
    static Polynomial one() { return constant(S(1)); }

    // c * x^k
    static Polynomial monomial(int k, const S& c = S(1)) {
        std::vector<S> v(static_cast<std::size_t>(k) + 1, S(0));
        v.back() = c;
        return Polynomial(std::move(v));
    }

    static Polynomial x() { return monomial(1); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    const S& leading() const {
        if (is_zero()) throw std::logic_error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    bool is_monic() const { return !is_zero() && leading() == 1; }

    S coeff(int i) const {
        if (i < 0 || i > degree()) return S(0);
        return coeffs_[static_cast<std::size_t>(i)];
    }

    const std::vector<S>& coeffs() const { return coeffs_; }

    Polynomial operator-() const {
        std::vector<S> r(coeffs_);
        for (auto& c : r) c = -c;
        return Polynomial(std::move(r));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), S(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), S(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<S> r(a.coeffs_.size() + b.coeffs_.size() - 1, S(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator*(const S& s, const Polynomial& p) { return p.scaled(s); }
    friend Polynomial operator*(const Polynomial& p, const S& s) { return p.scaled(s); }

    Polynomial scaled(const S& s) const {
        if (s == 0) return Polynomial();
        std::vector<S> r(coeffs_);
        for (auto& c : r) c *= s;
        return Polynomial(std::move(r));
    }

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Iterated formal derivative; order past the degree yields zero.
    Polynomial derivative(int order = 1) const {
        if (order < 0) throw std::invalid_argument("negative derivative order");
        Polynomial p = *this;
        for (int it = 0; it < order; ++it) {
            if (p.is_zero()) return p;
            std::vector<S> r;
            r.reserve(p.coeffs_.size());
            for (std::size_t i = 1; i < p.coeffs_.size(); ++i)
                r.push_back(S(static_cast<int>(i)) * p.coeffs_[i]);
            p = Polynomial(std::move(r));
        }
        return p;
    }

    S evaluate(const S& x) const {
        S acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // x |-> p(s x); with monic_preserving, divides by s^deg so that monic
    // inputs stay monic.
    Polynomial dilate(const S& s, bool monic_preserving = false) const {
        if (s == 0) throw std::invalid_argument("dilation scale must be nonzero");
        if (is_zero()) return Polynomial();
        std::vector<S> r(coeffs_);
        S pw(1);
        for (std::size_t i = 1; i < r.size(); ++i) {
            pw *= s;
            r[i] *= pw;
        }
        if (monic_preserving) {
            for (auto& c : r) c /= pw; // pw == s^deg here
        }
        return Polynomial(std::move(r));
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (coeff(i) == 0) continue;
            if (!s.empty()) s += " + ";
            s += "(" + scalar_to_string(coeff(i)) + ")";
            if (i >= 1) s += "*x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<S> coeffs_;
};

// Quotient of an exact division; throws if the division leaves a remainder.
// Used by the fraction-free elimination, where divisibility is guaranteed.
template <class S>
Polynomial<S> divide_exact(const Polynomial<S>& num, const Polynomial<S>& den) {
    if (den.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (num.is_zero()) return Polynomial<S>();
    if (num.degree() < den.degree())
        throw std::logic_error("inexact polynomial division (degree)");
    std::vector<S> rem = num.coeffs();
    std::vector<S> quot(static_cast<std::size_t>(num.degree() - den.degree()) + 1, S(0));
    const S& lead = den.leading();
    for (int d = num.degree(); d >= den.degree(); --d) {
        S c = rem[static_cast<std::size_t>(d)] / lead;
        quot[static_cast<std::size_t>(d - den.degree())] = c;
        if (c == 0) continue;
        for (int i = 0; i <= den.degree(); ++i)
            rem[static_cast<std::size_t>(d - den.degree() + i)] -= c * den.coeff(i);
    }
    for (const auto& c : rem)
        if (c != 0) throw std::logic_error("inexact polynomial division (remainder)");
    return Polynomial<S>(std::move(quot));
}

} // namespace cohpair

#endif
