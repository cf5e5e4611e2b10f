#ifndef COHPAIR_MONIC_OPS_HPP
#define COHPAIR_MONIC_OPS_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cohpair/moment_functional.hpp"
#include "cohpair/polynomial.hpp"

namespace cohpair {

// Monic orthogonal polynomial sequence, eagerly built up to a fixed index.
// Carries the recurrence (beta_n, gamma_n), the polynomial cache, and the
// norms h_n = <u, P_n^2> = gamma_1...gamma_n h_0. Convention: P_{-1} = 0 and
// gamma_0 = 0.
template <class S>
class MonicOPS {
public:
    // Stieltjes-style construction from moments. Needs the budget
    // max_degree >= 2 n_max + 1 (for beta_{n_max}); reports the failing index
    // on a regularity breakdown (h_n = 0).
    static MonicOPS from_functional(const MomentFunctional<S>& u, int n_max,
                                    const S& tol = S(0)) {
        if (u.max_degree() < 2 * n_max + 1)
            throw budget_error("OPS to depth " + std::to_string(n_max) + " needs " +
                               std::to_string(2 * n_max + 1) + " moments, budget is " +
                               std::to_string(u.max_degree()));
        MonicOPS ops;
        ops.source_ = u;
        ops.polys_.push_back(Polynomial<S>::one());
        ops.norms_.push_back(u.moment(0));
        ops.gamma_.push_back(S(0));
        if (near_zero(ops.norms_[0], tol)) throw regularity_error("h_0 = moment 0 vanishes", 0);
        const Polynomial<S> x = Polynomial<S>::x();
        for (int n = 0; n < n_max; ++n) {
            const Polynomial<S>& pn = ops.polys_.back();
            S beta_n = u.bracket(x * (pn * pn)) / ops.norms_.back();
            ops.beta_.push_back(beta_n);
            Polynomial<S> next = x * pn - beta_n * pn;
            if (n >= 1) next -= ops.gamma_.back() * ops.polys_[static_cast<std::size_t>(n) - 1];
            S h = u.bracket(next * next);
            S scale = abs_val(ops.norms_.back());
            if (near_zero(h, tol, scale))
                throw regularity_error("regularity breakdown: h_" + std::to_string(n + 1) + " = 0",
                                       n + 1);
            ops.gamma_.push_back(h / ops.norms_.back());
            ops.norms_.push_back(h);
            ops.polys_.push_back(std::move(next));
        }
        return ops;
    }

    // Build the cache from given recurrence coefficients. beta has entries
    // 0..n_max-1 (or more), gamma entries 1..n_max-1 indexed from 1 (gamma[0]
    // ignored if present as the gamma_0 = 0 convention slot).
    static MonicOPS from_recurrence(std::vector<S> beta, std::vector<S> gamma, const S& h0 = S(1)) {
        MonicOPS ops;
        if (!gamma.empty() && gamma.front() != 0)
            throw std::invalid_argument("gamma_0 must be 0 by convention");
        if (gamma.empty()) gamma.push_back(S(0));
        const int n_max = static_cast<int>(beta.size());
        if (static_cast<int>(gamma.size()) < n_max)
            throw std::invalid_argument("gamma sequence too short for beta sequence");
        for (int n = 1; n < n_max; ++n)
            if (gamma[static_cast<std::size_t>(n)] == 0)
                throw regularity_error("gamma_" + std::to_string(n) + " = 0", n);
        ops.beta_ = std::move(beta);
        ops.gamma_ = std::move(gamma);
        ops.polys_.push_back(Polynomial<S>::one());
        ops.norms_.push_back(h0);
        const Polynomial<S> x = Polynomial<S>::x();
        for (int n = 0; n < n_max; ++n) {
            Polynomial<S> next = x * ops.polys_.back() - ops.beta_[static_cast<std::size_t>(n)] * ops.polys_.back();
            if (n >= 1)
                next -= ops.gamma_[static_cast<std::size_t>(n)] * ops.polys_[static_cast<std::size_t>(n) - 1];
            ops.polys_.push_back(std::move(next));
            if (n >= 1) ops.norms_.push_back(ops.norms_.back() * ops.gamma_[static_cast<std::size_t>(n)]);
        }
        // norms_ currently holds h_0..h_{n_max-1}; extend with gamma_{n_max}
        // unavailable, so recompute: h_n = h_{n-1} gamma_n for n = 1..n_max-1
        // (the loop above already did that); h_{n_max} needs gamma_{n_max}.
        if (static_cast<int>(ops.gamma_.size()) >= n_max + 1 && n_max >= 1)
            ops.norms_.push_back(ops.norms_.back() * ops.gamma_[static_cast<std::size_t>(n_max)]);
        return ops;
    }

    // Highest cached polynomial index.
    int depth() const { return static_cast<int>(polys_.size()) - 1; }

    const Polynomial<S>& poly(int n) const {
        if (n < 0 || n > depth()) throw std::out_of_range("P_" + std::to_string(n) + " not cached");
        return polys_[static_cast<std::size_t>(n)];
    }

    const S& beta(int n) const {
        if (n < 0 || n >= static_cast<int>(beta_.size()))
            throw std::out_of_range("beta_" + std::to_string(n) + " not cached");
        return beta_[static_cast<std::size_t>(n)];
    }

    // gamma(0) = 0 by convention.
    const S& gamma(int n) const {
        if (n < 0 || n >= static_cast<int>(gamma_.size()))
            throw std::out_of_range("gamma_" + std::to_string(n) + " not cached");
        return gamma_[static_cast<std::size_t>(n)];
    }

    // h_n = <u, P_n^2>
    const S& norm(int n) const {
        if (n < 0 || n >= static_cast<int>(norms_.size()))
            throw std::out_of_range("h_" + std::to_string(n) + " not cached");
        return norms_[static_cast<std::size_t>(n)];
    }

    int norms_depth() const { return static_cast<int>(norms_.size()) - 1; }

    // P_n^[m] = P_{n+m}^(m) / (n+1)_m : monic of degree n.
    Polynomial<S> normalized_derivative(int m, int n) const {
        if (m < 0 || n < 0) throw std::invalid_argument("normalized_derivative needs m, n >= 0");
        if (n + m > depth())
            throw std::out_of_range("P_" + std::to_string(n + m) + " not cached");
        if (m == 0) return poly(n);
        return poly(n + m).derivative(m).scaled(S(1) / pochhammer(S(n + 1), m));
    }

    // gamma_n > 0 for 1 <= n <= through; the positive-definite certificate.
    bool positive_definite(int through) const {
        for (int n = 1; n <= through; ++n)
            if (!(gamma(n) > 0)) return false;
        return true;
    }

    const std::optional<MomentFunctional<S>>& source() const { return source_; }

private:
    MonicOPS() = default;

    std::vector<S> beta_;          // beta_0..
    std::vector<S> gamma_;         // gamma_0 = 0, gamma_1..
    std::vector<Polynomial<S>> polys_;
    std::vector<S> norms_;         // h_0..
    std::optional<MomentFunctional<S>> source_;
};

// Coefficients of p in a graded monic basis (basis[d] has degree d, monic),
// by back-substitution from the top degree.
template <class S>
std::vector<S> expand_in_basis(const Polynomial<S>& p, std::span<const Polynomial<S>> basis) {
    const int d = p.degree();
    for (int i = 0; i <= d; ++i) {
        if (i >= static_cast<int>(basis.size()))
            throw std::invalid_argument("basis does not reach degree " + std::to_string(d));
        if (basis[static_cast<std::size_t>(i)].degree() != i ||
            !basis[static_cast<std::size_t>(i)].is_monic())
            throw std::invalid_argument("basis is not graded monic at degree " + std::to_string(i));
    }
    std::vector<S> coef(static_cast<std::size_t>(d >= 0 ? d + 1 : 0), S(0));
    Polynomial<S> rem = p;
    for (int k = d; k >= 0; --k) {
        S c = rem.coeff(k);
        coef[static_cast<std::size_t>(k)] = c;
        if (c != 0) rem -= c * basis[static_cast<std::size_t>(k)];
    }
    return coef;
}

// Moments <u, x^n> recovered from the OPS of u: only the degree-0 basis
// coefficient of x^n survives the bracket, scaled by h_0.
template <class S>
MomentFunctional<S> recover_moments(const MonicOPS<S>& ops, int d) {
    if (d > ops.depth()) throw std::out_of_range("recover_moments needs cache to degree d");
    std::vector<Polynomial<S>> basis;
    for (int i = 0; i <= d; ++i) basis.push_back(ops.poly(i));
    std::vector<S> m(static_cast<std::size_t>(d) + 1);
    for (int n = 0; n <= d; ++n) {
        auto coef = expand_in_basis(Polynomial<S>::monomial(n), std::span<const Polynomial<S>>(basis));
        m[static_cast<std::size_t>(n)] = coef[0] * ops.norm(0);
    }
    return MomentFunctional<S>(std::move(m));
}

// --- classical families as closed-form recurrences (test fixtures) ---

template <class S>
MonicOPS<S> hermite_ops(int n_max) {
    std::vector<S> beta(static_cast<std::size_t>(n_max), S(0));
    std::vector<S> gamma;
    gamma.push_back(S(0));
    for (int n = 1; n <= n_max; ++n) gamma.push_back(S(n) / 2);
    return MonicOPS<S>::from_recurrence(std::move(beta), std::move(gamma));
}

template <class S>
MonicOPS<S> laguerre_ops(const S& alpha, int n_max) {
    std::vector<S> beta, gamma;
    gamma.push_back(S(0));
    for (int n = 0; n < n_max; ++n) beta.push_back(S(2 * n + 1) + alpha);
    for (int n = 1; n <= n_max; ++n) gamma.push_back(S(n) * (S(n) + alpha));
    return MonicOPS<S>::from_recurrence(std::move(beta), std::move(gamma));
}

template <class S>
MonicOPS<S> jacobi_ops(const S& alpha, const S& beta_par, int n_max) {
    std::vector<S> b, g;
    g.push_back(S(0));
    for (int n = 0; n < n_max; ++n) {
        if (n == 0) {
            b.push_back((beta_par - alpha) / (alpha + beta_par + 2));
        } else {
            S s = alpha + beta_par + 2 * n;
            b.push_back((beta_par * beta_par - alpha * alpha) / (s * (s + 2)));
        }
    }
    for (int n = 1; n <= n_max; ++n) {
        S s = alpha + beta_par + 2 * n;
        if (n == 1) {
            // the generic formula has a removable 0/0 at alpha+beta = -1
            g.push_back(S(4) * (alpha + 1) * (beta_par + 1) /
                        ((alpha + beta_par + 2) * (alpha + beta_par + 2) * (alpha + beta_par + 3)));
        } else {
            g.push_back(S(4) * n * (alpha + n) * (beta_par + n) * (alpha + beta_par + n) /
                        (s * s * (s + 1) * (s - 1)));
        }
    }
    return MonicOPS<S>::from_recurrence(std::move(b), std::move(g));
}

} // namespace cohpair

#endif
