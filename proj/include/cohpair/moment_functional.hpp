#ifndef COHPAIR_MOMENT_FUNCTIONAL_HPP
#define COHPAIR_MOMENT_FUNCTIONAL_HPP

#include <string>
#include <vector>

#include "cohpair/errors.hpp"
#include "cohpair/polynomial.hpp"

namespace cohpair {

// A moment linear functional truncated to a finite degree budget: the moments
// w_0..w_d determine the action on every polynomial of degree <= d. All
// operations compute the exact resulting budget, so identity checks can state
// precisely how many moment equations they certified.
template <class S>
class MomentFunctional {
public:
    MomentFunctional() : moments_(1, S(0)) {}

    explicit MomentFunctional(std::vector<S> moments) : moments_(std::move(moments)) {
        if (moments_.empty()) throw std::invalid_argument("a functional needs moment 0");
    }

    int max_degree() const { return static_cast<int>(moments_.size()) - 1; }

    const S& moment(int n) const {
        if (n < 0) throw std::invalid_argument("negative moment index");
        if (n > max_degree())
            throw budget_error("moment " + std::to_string(n) + " beyond budget " +
                               std::to_string(max_degree()));
        return moments_[static_cast<std::size_t>(n)];
    }

    const std::vector<S>& moments() const { return moments_; }

    S bracket(const Polynomial<S>& p) const {
        if (p.degree() > max_degree())
            throw budget_error("bracket needs degree " + std::to_string(p.degree()) +
                               " but budget is " + std::to_string(max_degree()));
        S acc(0);
        for (int i = 0; i <= p.degree(); ++i) acc += p.coeff(i) * moments_[static_cast<std::size_t>(i)];
        return acc;
    }

    // Scale so that moment 0 = 1.
    MomentFunctional normalized() const {
        if (moments_[0] == 0) throw regularity_error("moment 0 vanishes", 0);
        std::vector<S> m(moments_);
        S inv = S(1) / m[0];
        for (auto& v : m) v *= inv;
        return MomentFunctional(std::move(m));
    }

    MomentFunctional truncated(int d) const {
        if (d < 0 || d > max_degree()) throw budget_error("truncation beyond budget");
        return MomentFunctional(std::vector<S>(moments_.begin(), moments_.begin() + d + 1));
    }

    friend MomentFunctional operator+(const MomentFunctional& a, const MomentFunctional& b) {
        const int d = std::min(a.max_degree(), b.max_degree());
        std::vector<S> m(static_cast<std::size_t>(d) + 1);
        for (int i = 0; i <= d; ++i) m[static_cast<std::size_t>(i)] = a.moments_[i] + b.moments_[i];
        return MomentFunctional(std::move(m));
    }

    MomentFunctional scaled(const S& s) const {
        std::vector<S> m(moments_);
        for (auto& v : m) v *= s;
        return MomentFunctional(std::move(m));
    }

private:
    std::vector<S> moments_;
};

// (Phi w)_n = <w, Phi x^n>; the budget shrinks by deg Phi. A zero multiplier
// yields the zero functional on the same budget.
template <class S>
MomentFunctional<S> left_multiply(const Polynomial<S>& phi, const MomentFunctional<S>& w) {
    if (phi.is_zero())
        return MomentFunctional<S>(std::vector<S>(static_cast<std::size_t>(w.max_degree()) + 1, S(0)));
    const int d = w.max_degree() - phi.degree();
    if (d < 0)
        throw budget_error("left product by degree " + std::to_string(phi.degree()) +
                           " exceeds budget " + std::to_string(w.max_degree()));
    std::vector<S> m(static_cast<std::size_t>(d) + 1, S(0));
    for (int n = 0; n <= d; ++n)
        for (int i = 0; i <= phi.degree(); ++i)
            m[static_cast<std::size_t>(n)] += phi.coeff(i) * w.moment(n + i);
    return MomentFunctional<S>(std::move(m));
}

// (Dw)_n = -n w_{n-1}; each application extends the budget by one since the
// new moment n needs only w_{n-1}.
template <class S>
MomentFunctional<S> derivative(const MomentFunctional<S>& w, int order = 1) {
    if (order < 0) throw std::invalid_argument("negative derivative order");
    MomentFunctional<S> cur = w;
    for (int it = 0; it < order; ++it) {
        std::vector<S> m(static_cast<std::size_t>(cur.max_degree()) + 2, S(0));
        for (int n = 1; n <= cur.max_degree() + 1; ++n)
            m[static_cast<std::size_t>(n)] = S(-n) * cur.moment(n - 1);
        cur = MomentFunctional<S>(std::move(m));
    }
    return cur;
}

// moments_n -> s^n w_n  (i.e. <h_s w, x^n> = <w, (s x)^n>)
template <class S>
MomentFunctional<S> dilate(const MomentFunctional<S>& w, const S& s) {
    if (s == 0) throw std::invalid_argument("dilation scale must be nonzero");
    std::vector<S> m(w.moments());
    S pw(1);
    for (std::size_t n = 1; n < m.size(); ++n) {
        pw *= s;
        m[n] *= pw;
    }
    return MomentFunctional<S>(std::move(m));
}

// Momentwise agreement for n <= d, optionally up to a common nonzero factor.
// Exact backend compares exactly; float backend uses `tol` relative to the
// moment scale.
template <class S>
bool equals_up_to(const MomentFunctional<S>& w1, const MomentFunctional<S>& w2, int d,
                  bool scale_free = false, const S& tol = S(0)) {
    if (d > w1.max_degree() || d > w2.max_degree())
        throw budget_error("comparison degree exceeds a budget");
    S scale(0);
    for (int n = 0; n <= d; ++n) {
        S a = abs_val(w1.moment(n)), b = abs_val(w2.moment(n));
        if (a > scale) scale = a;
        if (b > scale) scale = b;
    }
    if (!scale_free) {
        for (int n = 0; n <= d; ++n)
            if (!near_zero(S(w1.moment(n) - w2.moment(n)), tol, scale)) return false;
        return true;
    }
    // cross-ratio test: w1_i w2_j == w1_j w2_i for all i, j <= d
    int pivot = -1;
    for (int n = 0; n <= d; ++n) {
        if (!near_zero(w1.moment(n), tol, scale) || !near_zero(w2.moment(n), tol, scale)) {
            pivot = n;
            break;
        }
    }
    if (pivot < 0) return true; // both zero through degree d
    const S a = w1.moment(pivot), b = w2.moment(pivot);
    if (near_zero(a, tol, scale) || near_zero(b, tol, scale)) return false;
    const S cross_scale = scale * scale;
    for (int n = 0; n <= d; ++n) {
        if (!near_zero(S(w1.moment(n) * b - w2.moment(n) * a), tol, cross_scale)) return false;
    }
    return true;
}

// Hankel determinant Delta_k = det [w_{i+j}]_{i,j=0..k} via plain elimination
// over the field (sizes stay small; used only for regularity diagnosis).
template <class S>
S hankel_determinant(const MomentFunctional<S>& w, int k) {
    if (2 * k > w.max_degree()) throw budget_error("Hankel determinant exceeds budget");
    const int n = k + 1;
    std::vector<std::vector<S>> m(static_cast<std::size_t>(n), std::vector<S>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = w.moment(i + j);
    S det(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) { p = r; break; }
        if (p < 0) return S(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            S f = m[r][c] / m[c][c];
            for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

template <class S>
bool hankel_regular(const MomentFunctional<S>& w, int n, const S& tol = S(0)) {
    for (int k = 0; k <= n; ++k) {
        if (near_zero(hankel_determinant(w, k), tol)) return false;
    }
    return true;
}

// --- classical exact moment sequences (normalized to moment 0 = 1) ---

// weight e^{-x^2}: w_{n+2} = (n+1) w_n / 2
template <class S>
MomentFunctional<S> hermite_moments(int d) {
    std::vector<S> m(static_cast<std::size_t>(d) + 1, S(0));
    m[0] = S(1);
    for (int n = 0; n + 2 <= d; ++n) m[static_cast<std::size_t>(n) + 2] = S(n + 1) * m[n] / 2;
    return MomentFunctional<S>(std::move(m));
}

// weight x^alpha e^{-x} on (0,inf): w_{n+1} = (n+alpha+1) w_n
template <class S>
MomentFunctional<S> laguerre_moments(const S& alpha, int d) {
    std::vector<S> m(static_cast<std::size_t>(d) + 1, S(0));
    m[0] = S(1);
    for (int n = 0; n + 1 <= d; ++n) m[static_cast<std::size_t>(n) + 1] = (alpha + n + 1) * m[n];
    return MomentFunctional<S>(std::move(m));
}

// weight (1-x)^alpha (1+x)^beta on (-1,1):
// (n+alpha+beta+2) w_{n+1} = (beta-alpha) w_n + n w_{n-1}
template <class S>
MomentFunctional<S> jacobi_moments(const S& alpha, const S& beta, int d) {
    std::vector<S> m(static_cast<std::size_t>(d) + 1, S(0));
    m[0] = S(1);
    for (int n = 0; n + 1 <= d; ++n) {
        S prev = (n >= 1) ? m[static_cast<std::size_t>(n) - 1] : S(0);
        S den = alpha + beta + n + 2;
        if (den == 0) throw gate_error("jacobi moment recurrence singular at n=" + std::to_string(n));
        m[static_cast<std::size_t>(n) + 1] = ((beta - alpha) * m[n] + S(n) * prev) / den;
    }
    return MomentFunctional<S>(std::move(m));
}

} // namespace cohpair

#endif
