#ifndef COHPAIR_SEMICLASSICAL_HPP
#define COHPAIR_SEMICLASSICAL_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohpair/coherence.hpp"
#include "cohpair/moment_functional.hpp"
#include "cohpair/monic_ops.hpp"
#include "cohpair/poly_matrix.hpp"

namespace cohpair {

// A coherent pair with everything the derivations need: both OPS (with
// norms), both functionals, pi, the integer data (M, m, k; N = deg pi), and
// the expansion band.
template <class S>
struct CoherentPair {
    MonicOPS<S> P, Q;
    MomentFunctional<S> u, v;
    Polynomial<S> pi;
    int index_M = 0;
    int m = 0;
    int k = 0;
    CoherenceBand<S> band;

    int N() const { return pi.degree(); }
};

// Builds OPS caches and the band deep enough that psi(.;n) exists for
// n <= n_band - M and phi(.;n,j) for n <= n_band.
template <class S>
CoherentPair<S> make_coherent_pair(const MomentFunctional<S>& u, const MomentFunctional<S>& v,
                                   const Polynomial<S>& pi, int m, int k, int index_M,
                                   int n_band, const S& tol = S(0)) {
    const int N = pi.degree();
    CoherentPair<S> pair{MonicOPS<S>::from_functional(u, n_band + m, tol),
                         MonicOPS<S>::from_functional(v, n_band + N + k, tol),
                         u,
                         v,
                         pi,
                         index_M,
                         m,
                         k,
                         {}};
    pair.band = compute_band(pair.P, pair.Q, pi, m, k, n_band);
    return pair;
}

// psi(x;n) = sum_{j=n-N}^{n+M} (-1)^m (j+1)_m c_{j,n} P_{m+j} / <u, P_{m+j}^2>,
// reading column n of the band across rows j; rows j < 0 are absent by the
// Q_j == 0 convention.
template <class S>
Polynomial<S> build_psi(const CoherentPair<S>& pair, int n) {
    const int N = pair.N();
    if (n + pair.index_M > pair.band.n_max())
        throw budget_error("psi(.;n) needs band rows to " + std::to_string(n + pair.index_M));
    Polynomial<S> acc;
    const S sign = (pair.m % 2 == 0) ? S(1) : S(-1);
    for (int j = std::max(0, n - N); j <= n + pair.index_M; ++j) {
        const S c = pair.band.at(j, n);
        if (c == 0) continue;
        acc += pair.P.poly(pair.m + j)
                   .scaled(sign * pochhammer(S(j + 1), pair.m) * c / pair.P.norm(pair.m + j));
    }
    return acc;
}

// phi(x;n,j) = (-1)^k (n+1)_k / <v, Q_{n+k}^2> *
//   sum_{l=0}^{N-j} binom(k+N, l) binom(N-l, N-j-l) pi^(l) Q_{n+k}^(N-j-l)
template <class S>
Polynomial<S> build_phi(const CoherentPair<S>& pair, int n, int j) {
    const int N = pair.N();
    if (j < 0 || j > N) throw std::invalid_argument("phi(.;n,j) needs 0 <= j <= N");
    Polynomial<S> acc;
    for (int l = 0; l <= N - j; ++l) {
        const S coef = binomial<S>(pair.k + N, l) * binomial<S>(N - l, N - j - l);
        if (coef == 0) continue;
        acc += coef * (pair.pi.derivative(l) * pair.Q.poly(n + pair.k).derivative(N - j - l));
    }
    const S sign = (pair.k % 2 == 0) ? S(1) : S(-1);
    return acc.scaled(sign * pochhammer(S(n + 1), pair.k) / pair.Q.norm(n + pair.k));
}

template <class S>
struct IdentityCheck {
    std::string name;
    int certified_degree = -1;
    S residual{0}; // max absolute momentwise difference
    S scale{0};    // max moment magnitude across both sides
    bool pass = false;
};

template <class S>
IdentityCheck<S> check_momentwise(std::string name, const MomentFunctional<S>& lhs,
                                  const MomentFunctional<S>& rhs, int d_request,
                                  const S& tol = S(0)) {
    IdentityCheck<S> out;
    out.name = std::move(name);
    const int d = std::min({lhs.max_degree(), rhs.max_degree(), d_request});
    if (d < 0) throw budget_error("identity '" + out.name + "' has no shared moment range");
    out.certified_degree = d;
    out.pass = true;
    for (int n = 0; n <= d; ++n) {
        const S a = lhs.moment(n), b = rhs.moment(n);
        if (abs_val(a) > out.scale) out.scale = abs_val(a);
        if (abs_val(b) > out.scale) out.scale = abs_val(b);
        if (abs_val(S(a - b)) > out.residual) out.residual = abs_val(S(a - b));
    }
    for (int n = 0; n <= d && out.pass; ++n)
        if (!near_zero(S(lhs.moment(n) - rhs.moment(n)), tol, out.scale)) out.pass = false;
    return out;
}

template <class S>
struct LemmaReport {
    std::vector<IdentityCheck<S>> checks; // one per n
    bool all_pass = true;
};

// Lemma identities: if m >= k+N,  psi(.;n) u = D^{m-k-N}( sum_j phi(.;n,j) D^j v );
// otherwise D^{k+N-m}( psi(.;n) u ) = sum_j phi(.;n,j) D^j v. Verified
// momentwise for each n <= n_check up to degree d_check (or the available
// budget, whichever is smaller; the certified degree is reported).
template <class S>
LemmaReport<S> verify_lemma_identities(const CoherentPair<S>& pair, int n_check, int d_check,
                                       const S& tol = S(0)) {
    const int N = pair.N();
    LemmaReport<S> report;
    for (int n = 0; n <= n_check; ++n) {
        MomentFunctional<S> lhs = left_multiply(build_psi(pair, n), pair.u);
        std::optional<MomentFunctional<S>> rhs;
        for (int j = 0; j <= N; ++j) {
            auto term = left_multiply(build_phi(pair, n, j), derivative(pair.v, j));
            rhs = rhs ? (*rhs + term) : term;
        }
        if (pair.m >= pair.k + N) {
            *rhs = derivative(*rhs, pair.m - pair.k - N);
        } else {
            lhs = derivative(lhs, pair.k + N - pair.m);
        }
        auto chk = check_momentwise("lemma(n=" + std::to_string(n) + ")", lhs, *rhs, d_check, tol);
        report.all_pass = report.all_pass && chk.pass;
        report.checks.push_back(std::move(chk));
    }
    return report;
}

enum class DerivationCase { m_ge_k_plus_N, m_lt_k_plus_N, k_zero };

inline std::string to_string(DerivationCase c) {
    switch (c) {
        case DerivationCase::m_ge_k_plus_N: return "m_ge_k_plus_N";
        case DerivationCase::m_lt_k_plus_N: return "m_lt_k_plus_N";
        case DerivationCase::k_zero: return "k_zero";
    }
    return "?";
}

// max(deg Phi - 2, deg Psi - 1), returned raw (may be negative; reports clamp).
template <class S>
int class_bound(const Polynomial<S>& phi, const Polynomial<S>& psi) {
    if (phi.is_zero() || psi.is_zero())
        throw std::invalid_argument("class bound needs nonzero Phi and Psi");
    return std::max(phi.degree() - 2, psi.degree() - 1);
}

template <class S>
struct Certificate {
    std::string target; // "u" or "v"
    Polynomial<S> Phi, Psi;
    int class_bound_raw = 0;
    int class_bound = 0; // clamped at 0
    IdentityCheck<S> pearson;
};

template <class S>
Certificate<S> make_certificate(std::string target, Polynomial<S> Phi, Polynomial<S> Psi,
                                const MomentFunctional<S>& w, int d_check, const S& tol) {
    Certificate<S> cert;
    cert.target = std::move(target);
    cert.Phi = std::move(Phi);
    cert.Psi = std::move(Psi);
    cert.class_bound_raw = class_bound(cert.Phi, cert.Psi);
    cert.class_bound = std::max(cert.class_bound_raw, 0);
    cert.pearson = check_momentwise("D(Phi " + cert.target + ") = Psi " + cert.target,
                                    derivative(left_multiply(cert.Phi, w)),
                                    left_multiply(cert.Psi, w), d_check, tol);
    return cert;
}

template <class S>
struct SemiclassicalResult {
    DerivationCase kase = DerivationCase::m_ge_k_plus_N;
    bool hypothesis_ok = true; // false: determinant identically zero
    std::string note;
    std::optional<PolyMatrix<S>> matrix;
    std::vector<std::pair<std::string, Polynomial<S>>> determinants;
    std::vector<Polynomial<S>> phi_chain; // k = 0 only
    std::vector<std::pair<std::string, int>> claimed_class_bounds; // k = 0 only
    std::vector<IdentityCheck<S>> identities;
    std::vector<Certificate<S>> certificates;

    bool all_pass() const {
        if (!hypothesis_ok) return false;
        for (const auto& c : identities)
            if (!c.pass) return false;
        for (const auto& c : certificates)
            if (!c.pearson.pass) return false;
        return true;
    }
};

namespace detail {

// varphi(x;n,i) = sum_{j+l=i, 0<=j<=N, 0<=l<=r} binom(r,l) phi(x;n,j)^(r-l)
// with r = m-k-N (the Leibniz range; the ell-range is what the expansion of
// D^r produces).
template <class S>
Polynomial<S> build_varphi(const CoherentPair<S>& pair, int n, int i) {
    const int N = pair.N();
    const int r = pair.m - pair.k - N;
    Polynomial<S> acc;
    for (int j = 0; j <= N; ++j) {
        const int l = i - j;
        if (l < 0 || l > r) continue;
        acc += binomial<S>(r, l) * build_phi(pair, n, j).derivative(r - l);
    }
    return acc;
}

} // namespace detail

// Theorem for m >= k+N (and m > k when N = 0): assemble the (m-k+1)-square
// matrix of varphi polynomials, take determinants A, A1, A2, verify
// A v = A1 u and A Dv = A2 u, and emit the Pearson certificates
// D(AA1 u) = (2A'A1 + AA2) u and D(AA1 v) = ((AA1)' + AA2) v.
template <class S>
SemiclassicalResult<S> derive_case_m_ge(const CoherentPair<S>& pair, int d_check,
                                        const S& tol = S(0)) {
    const int N = pair.N();
    if (pair.m < pair.k + N)
        throw hypothesis_error("derive_case_m_ge requires m >= k+N");
    if (N == 0 && pair.m == pair.k)
        throw hypothesis_error("m > k is required when N = 0");
    SemiclassicalResult<S> res;
    res.kase = DerivationCase::m_ge_k_plus_N;
    const int size = pair.m - pair.k + 1;
    PolyMatrix<S> A(size, size);
    std::vector<Polynomial<S>> psis;
    for (int n = 0; n < size; ++n) {
        psis.push_back(build_psi(pair, n));
        for (int i = 0; i < size; ++i) A.at(n, i) = detail::build_varphi(pair, n, i);
    }
    res.matrix = A;
    Polynomial<S> detA = A.determinant();
    Polynomial<S> A1 = A.with_column(0, psis).determinant();
    Polynomial<S> A2 = A.with_column(1, psis).determinant();
    res.determinants = {{"A", detA}, {"A1", A1}, {"A2", A2}};
    if (detA.is_zero()) {
        res.hypothesis_ok = false;
        res.note = "A(x) vanishes identically; the theorem does not apply";
        return res;
    }
    res.identities.push_back(check_momentwise("A v = A1 u", left_multiply(detA, pair.v),
                                              left_multiply(A1, pair.u), d_check, tol));
    res.identities.push_back(check_momentwise("A Dv = A2 u",
                                              left_multiply(detA, derivative(pair.v)),
                                              left_multiply(A2, pair.u), d_check, tol));
    Polynomial<S> AA1 = detA * A1;
    res.certificates.push_back(make_certificate<S>(
        "u", AA1, S(2) * detA.derivative() * A1 + detA * A2, pair.u, d_check, tol));
    res.certificates.push_back(make_certificate<S>(
        "v", AA1, AA1.derivative() + detA * A2, pair.v, d_check, tol));
    return res;
}

// Theorem for m < k+N: xi(x;n,j) = binom(k-m+N, j) psi(x;n)^(k-m+N-j); the
// (k-m+2N+1)-square system in (v, Dv, .., D^N v, Du, .., D^{k-m+N} u) with
// right-hand side xi(x;i,0) u. Column c (0-based) holds D^c v for c <= N and
// D^{c-N} u for c > N, so B_2 certifies Dv only when N >= 1.
template <class S>
SemiclassicalResult<S> derive_case_m_lt(const CoherentPair<S>& pair, int d_check,
                                        const S& tol = S(0)) {
    const int N = pair.N();
    if (pair.m >= pair.k + N)
        throw hypothesis_error("derive_case_m_lt requires m < k+N");
    SemiclassicalResult<S> res;
    res.kase = DerivationCase::m_lt_k_plus_N;
    const int K = pair.k - pair.m + N;
    const int size = pair.k - pair.m + 2 * N + 1;
    auto xi = [&](int n, int j) {
        return binomial<S>(K, j) * build_psi(pair, n).derivative(K - j);
    };
    PolyMatrix<S> B(size, size);
    std::vector<Polynomial<S>> rhs;
    for (int i = 0; i < size; ++i) {
        rhs.push_back(xi(i, 0));
        for (int j = 0; j < size; ++j)
            B.at(i, j) = (j <= N) ? build_phi(pair, i, j) : -xi(i, j - N);
    }
    res.matrix = B;
    Polynomial<S> detB = B.determinant();
    Polynomial<S> B1 = B.with_column(0, rhs).determinant();
    Polynomial<S> B2 = B.with_column(1, rhs).determinant();
    Polynomial<S> BN2 = B.with_column(N + 1, rhs).determinant();
    res.determinants = {{"B", detB}, {"B1", B1}, {"B2", B2}, {"BN+2", BN2}};
    if (detB.is_zero()) {
        res.hypothesis_ok = false;
        res.note = "B(x) vanishes identically; the theorem does not apply";
        return res;
    }
    res.identities.push_back(check_momentwise("B v = B1 u", left_multiply(detB, pair.v),
                                              left_multiply(B1, pair.u), d_check, tol));
    if (N >= 1)
        res.identities.push_back(check_momentwise("B Dv = B2 u",
                                                  left_multiply(detB, derivative(pair.v)),
                                                  left_multiply(B2, pair.u), d_check, tol));
    res.identities.push_back(check_momentwise("B Du = BN+2 u",
                                              left_multiply(detB, derivative(pair.u)),
                                              left_multiply(BN2, pair.u), d_check, tol));
    res.certificates.push_back(
        make_certificate<S>("u", detB, detB.derivative() + BN2, pair.u, d_check, tol));
    if (N >= 1) {
        Polynomial<S> BB1 = detB * B1;
        res.certificates.push_back(make_certificate<S>(
            "v", BB1, BB1.derivative() + detB * B2, pair.v, d_check, tol));
    }
    return res;
}

// k = 0 chain: Phi(x;j) = ( <v,Q_j^2> psi(x;j)
//   - sum_{l<j} binom(m,l) Q_j^(l) Phi(x;l) ) / ( j! binom(m,j) ), j = 0..m.
// Verifies D(Phi(.;1) u) = Phi(.;0) u, pi v = Phi(.;m) u, and
// D(Phi(.;m) pi v) = (Phi(.;m)' + Phi(.;m-1)) pi v; claims the class bounds
// s(u) <= M+m-1 and s(v) <= N+M+2(m-1).
template <class S>
SemiclassicalResult<S> derive_kzero(const CoherentPair<S>& pair, int d_check,
                                    const S& tol = S(0)) {
    const int N = pair.N();
    if (pair.k != 0) throw hypothesis_error("derive_kzero requires k = 0");
    if (N == 0 && pair.m < 1) throw hypothesis_error("m >= 1 is required when N = 0");
    SemiclassicalResult<S> res;
    res.kase = DerivationCase::k_zero;
    const int m = pair.m;
    for (int j = 0; j <= m; ++j) {
        Polynomial<S> num = pair.Q.norm(j) * build_psi(pair, j);
        for (int l = 0; l < j; ++l)
            num -= binomial<S>(m, l) * (pair.Q.poly(j).derivative(l) * res.phi_chain[static_cast<std::size_t>(l)]);
        res.phi_chain.push_back(num.scaled(S(1) / (factorial<S>(j) * binomial<S>(m, j))));
    }
    const MomentFunctional<S> pi_v = left_multiply(pair.pi, pair.v);
    res.identities.push_back(check_momentwise("pi v = Phi(.;m) u", pi_v,
                                              left_multiply(res.phi_chain.back(), pair.u),
                                              d_check, tol));
    if (m >= 1) {
        res.identities.push_back(check_momentwise(
            "D(Phi(.;1) u) = Phi(.;0) u", derivative(left_multiply(res.phi_chain[1], pair.u)),
            left_multiply(res.phi_chain[0], pair.u), d_check, tol));
        const Polynomial<S>& Pm = res.phi_chain[static_cast<std::size_t>(m)];
        const Polynomial<S>& Pm1 = res.phi_chain[static_cast<std::size_t>(m) - 1];
        res.identities.push_back(check_momentwise(
            "D(Phi(.;m) pi v) = (Phi(.;m)' + Phi(.;m-1)) pi v",
            derivative(left_multiply(Pm, pi_v)), left_multiply(Pm.derivative() + Pm1, pi_v),
            d_check, tol));
        res.certificates.push_back(
            make_certificate<S>("u", res.phi_chain[1], res.phi_chain[0], pair.u, d_check, tol));
        res.certificates.push_back(make_certificate<S>("v", Pm * pair.pi,
                                                       (Pm.derivative() + Pm1) * pair.pi,
                                                       pair.v, d_check, tol));
        res.claimed_class_bounds = {{"u", pair.index_M + m - 1},
                                    {"v", N + pair.index_M + 2 * (m - 1)}};
    }
    return res;
}

// Route on the case split the way the theorems partition it: k = 0 gets the
// finer chain, otherwise by m against k+N.
template <class S>
SemiclassicalResult<S> derive_semiclassical(const CoherentPair<S>& pair, int d_check,
                                            const S& tol = S(0)) {
    if (pair.k == 0) return derive_kzero(pair, d_check, tol);
    if (pair.m >= pair.k + pair.N()) return derive_case_m_ge(pair, d_check, tol);
    return derive_case_m_lt(pair, d_check, tol);
}

} // namespace cohpair

#endif
