#ifndef COHPAIR_COHERENCE_HPP
#define COHPAIR_COHERENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cohpair/monic_ops.hpp"

namespace cohpair {

// Full expansion coefficients of pi * P_n^[m] in the graded monic basis
// {Q_j^[k]}: rows[n][j] = c_{n,j} for j = 0..n+N. No band shape is assumed;
// verify_coherence tests vanishing afterwards.
template <class S>
struct CoherenceBand {
    int m = 0;
    int k = 0;
    int N = 0;
    std::vector<std::vector<S>> rows;

    int n_max() const { return static_cast<int>(rows.size()) - 1; }

    // c_{n,j}; entries outside the stored range are zero (convention
    // Q_j == 0 for j < 0 and strict degree bound above n+N).
    S at(int n, int j) const {
        if (n < 0 || n > n_max()) throw std::out_of_range("band row " + std::to_string(n));
        const auto& r = rows[static_cast<std::size_t>(n)];
        if (j < 0 || j >= static_cast<int>(r.size())) return S(0);
        return r[static_cast<std::size_t>(j)];
    }

    // Largest magnitude in row n (the tolerance scale for zero tests).
    S row_scale(int n) const {
        S s(0);
        for (const auto& c : rows[static_cast<std::size_t>(n)])
            if (abs_val(c) > s) s = abs_val(c);
        return s;
    }
};

template <class S>
CoherenceBand<S> compute_band(const MonicOPS<S>& P, const MonicOPS<S>& Q,
                              const Polynomial<S>& pi, int m, int k, int n_max) {
    if (pi.is_zero() || !pi.is_monic())
        throw std::invalid_argument("pi must be a monic polynomial");
    const int N = pi.degree();
    if (P.depth() < n_max + m)
        throw budget_error("P cache must reach " + std::to_string(n_max + m));
    if (Q.depth() < n_max + N + k)
        throw budget_error("Q cache must reach " + std::to_string(n_max + N + k));
    CoherenceBand<S> band;
    band.m = m;
    band.k = k;
    band.N = N;
    std::vector<Polynomial<S>> basis;
    for (int j = 0; j <= n_max + N; ++j) basis.push_back(Q.normalized_derivative(k, j));
    for (int n = 0; n <= n_max; ++n) {
        Polynomial<S> lhs = pi * P.normalized_derivative(m, n);
        auto coef = expand_in_basis(lhs, std::span<const Polynomial<S>>(basis.data(),
                                                                        static_cast<std::size_t>(n + N) + 1));
        coef.resize(static_cast<std::size_t>(n + N) + 1, S(0));
        band.rows.push_back(std::move(coef));
    }
    return band;
}

struct CoherenceVerdict {
    bool holds = true;
    int n = -1;
    int j = -1;
    std::string reason;
};

// Checks, for all n <= n_check: c_{n,n+N} = 1, support within [n-M, n+N], and
// cond1 (c_{n,n-M} != 0 for n >= M). Rows with n < M carry no cond1
// constraint. Violations are verdicts, not errors.
template <class S>
CoherenceVerdict verify_coherence(const CoherenceBand<S>& band, int index_M, int n_check,
                                  const S& tol = S(0)) {
    if (n_check > band.n_max()) throw budget_error("band not computed to requested depth");
    for (int n = 0; n <= n_check; ++n) {
        const S scale = band.row_scale(n);
        if (!near_equal(band.at(n, n + band.N), S(1), tol, scale))
            return {false, n, n + band.N, "leading coefficient c_{n,n+N} != 1"};
        for (int j = 0; j < n - index_M; ++j) {
            if (!near_zero(band.at(n, j), tol, scale))
                return {false, n, j, "support exceeds index M (nonzero below n-M)"};
        }
        if (n >= index_M && near_zero(band.at(n, n - index_M), tol, scale))
            return {false, n, n - index_M, "cond1 fails: c_{n,n-M} = 0"};
    }
    return {};
}

// Smallest index M whose verdict holds up to n_check, if any. N is pinned by
// deg pi, so only M is swept.
template <class S>
std::optional<int> minimal_index(const CoherenceBand<S>& band, int n_check, const S& tol = S(0)) {
    for (int M = 0; M <= n_check + band.N; ++M) {
        if (verify_coherence(band, M, n_check, tol).holds) return M;
    }
    return std::nullopt;
}

} // namespace cohpair

#endif
