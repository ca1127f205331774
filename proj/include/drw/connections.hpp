#pragma once

#include "drw/frobenius_lifts.hpp"
#include "drw/matrix.hpp"

#include <optional>
#include <vector>

namespace drw {

inline void require_degree(const Matrix& a, int t, const char* what) {
    for (const auto& f : a.entries())
        for (const auto& [k, c] : f.terms())
            if (dlog_degree(k.I) != t)
                throw Error(ErrorKind::precondition, std::string(what) + ": entries must have degree " + std::to_string(t));
}

inline void require_square(const Matrix& a, const char* what) {
    if (!a.square()) throw Error(ErrorKind::precondition, std::string(what) + ": matrix must be square");
}

// N^2 + d(N)
inline Matrix curvature(const Matrix& N) {
    require_square(N, "curvature");
    require_degree(N, 1, "curvature");
    return truncate(N * N + d(N));
}

inline bool is_integrable(const Matrix& N) { return curvature(N).is_zero(); }

// N u + d(u) for a column u of degree-0 forms
inline Matrix evaluate(const Matrix& N, const Matrix& u) {
    require_square(N, "evaluate");
    if (u.cols() != 1 || u.rows() != N.rows()) throw Error(ErrorKind::precondition, "evaluate: shape mismatch");
    return truncate(N * u + d(u));
}

struct BaseChange {
    Matrix U;
    Matrix inverse;
};

namespace detail {

// inverse of an integer matrix modulo p^m; nullopt if singular mod p
inline std::optional<std::vector<mpz_class>> invert_mod(std::vector<mpz_class> a, int r, long p, const mpz_class& M) {
    std::vector<mpz_class> inv(static_cast<std::size_t>(r * r), 0);
    for (int i = 0; i < r; ++i) inv[i * r + i] = 1;
    auto at = [r](std::vector<mpz_class>& v, int i, int j) -> mpz_class& { return v[static_cast<std::size_t>(i * r + j)]; };
    for (int col = 0; col < r; ++col) {
        int piv = -1;
        for (int i = col; i < r; ++i)
            if (vp(at(a, i, col), p) == 0) {
                piv = i;
                break;
            }
        if (piv < 0) return std::nullopt;
        for (int j = 0; j < r; ++j) {
            std::swap(at(a, col, j), at(a, piv, j));
            std::swap(at(inv, col, j), at(inv, piv, j));
        }
        mpz_class s;
        mpz_invert(s.get_mpz_t(), at(a, col, col).get_mpz_t(), M.get_mpz_t());
        for (int j = 0; j < r; ++j) {
            at(a, col, j) = mod_pm(mpz_class(at(a, col, j) * s), M);
            at(inv, col, j) = mod_pm(mpz_class(at(inv, col, j) * s), M);
        }
        for (int i = 0; i < r; ++i) {
            if (i == col || at(a, i, col) == 0) continue;
            mpz_class f = at(a, i, col);
            for (int j = 0; j < r; ++j) {
                at(a, i, j) = mod_pm(mpz_class(at(a, i, j) - f * at(a, col, j)), M);
                at(inv, i, j) = mod_pm(mpz_class(at(inv, i, j) - f * at(inv, col, j)), M);
            }
        }
    }
    return inv;
}

}  // namespace detail

// Inverse modulo Fil^m: invert the constant part C modulo p^m, then U C = 1 + W and
// (1 + W)^{-1} = sum (-W)^i, truncated once the increments vanish.
inline BaseChange invert(const Matrix& U) {
    require_square(U, "invert");
    require_degree(U, 0, "invert");
    const Context& ctx = U.ctx();
    const int r = U.rows();
    const mpz_class M = ctx.pm();
    std::vector<mpz_class> c0(static_cast<std::size_t>(r * r), 0);
    const Key zero_key{Weight(ctx.n), 0};
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            auto it = U.at(i, j).terms().find(zero_key);
            if (it != U.at(i, j).terms().end()) c0[static_cast<std::size_t>(i * r + j)] = mod_pm(it->second, M);
        }
    auto ci = detail::invert_mod(c0, r, ctx.p, M);
    if (!ci) throw Error(ErrorKind::precondition, "invert: leading part is not invertible mod p");
    Matrix C(ctx, r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) C.at(i, j) = Form::constant(ctx, mpq_class((*ci)[static_cast<std::size_t>(i * r + j)]));
    const Matrix I = Matrix::identity(ctx, r);
    Matrix W = truncate(U * C - I);
    Matrix minusW = -W;
    Matrix sum = I, term = I;
    const int cap = 64 * (ctx.m + 1) * (r + 1);
    for (int it = 0;; ++it) {
        term = truncate(term * minusW);
        if (term.is_zero()) break;
        if (it >= cap) throw Error(ErrorKind::precondition, "invert: Neumann series does not terminate at this precision");
        sum = sum + term;
    }
    Matrix inv = truncate(C * sum);
    if (!(truncate(inv * U) == I)) throw Error(ErrorKind::internal, "invert: left inverse check failed");
    return {U, inv};
}

// U^{-1} N U + U^{-1} d(U)
inline Matrix base_change(const Matrix& N, const BaseChange& B) {
    require_square(N, "base_change");
    N.check_shape(B.U, true);
    return truncate(B.inverse * N * B.U + B.inverse * d(B.U));
}

inline Matrix base_change(const Matrix& N, const Matrix& U) { return base_change(N, invert(U)); }

// N = A - d(P) P, after checking P^2 = P, P A = A and A P + P d(P) = A modulo Fil^m
inline Matrix lift_connection(const Matrix& A, const Matrix& P) {
    require_square(P, "lift_connection");
    A.check_shape(P, true);
    std::string bad;
    if (!congruent(P * P, P)) bad += " P^2 != P;";
    if (!congruent(P * A, A)) bad += " PA != A;";
    if (!congruent(A * P + P * d(P), A)) bad += " AP + P d(P) != A;";
    if (!bad.empty()) throw Error(ErrorKind::precondition, "lift_connection:" + bad);
    return truncate(A - d(P) * P);
}

// phi^* on representative matrices: p F entrywise
inline Matrix frobenius_pullback(const Matrix& N) {
    require_degree(N, 1, "frobenius_pullback");
    return truncate(N.map([](const Form& f) { return phi_twist(f); }));
}

// d(G) = G E - Fm G modulo Fil^m
inline bool horizontal_check(const Matrix& E, const Matrix& Fm, const Matrix& G) {
    require_square(E, "horizontal_check");
    require_square(Fm, "horizontal_check");
    if (G.rows() != Fm.rows() || G.cols() != E.rows()) throw Error(ErrorKind::precondition, "horizontal_check: shape mismatch");
    return congruent(d(G), G * E - Fm * G);
}

struct StepResult {
    BaseChange U;
    Matrix N;
    long s_in = 0;
    long s_out = 0;
};

// U = 1 - d^{-1}(N|dfrp)
inline StepResult normalize_step(const Matrix& N) {
    require_square(N, "normalize_step");
    if (!is_integrable(N)) throw Error(ErrorKind::precondition, "normalize_step: connection is not integrable");
    Matrix Nt = truncate(N);
    long s = vp(frac_part(Nt));
    const Matrix I = Matrix::identity(N.ctx(), N.rows());
    if (s == kInfinity) return {{I, I}, Nt, s, s};
    if (s < 1) throw Error(ErrorKind::precondition, "normalize_step: frac part has valuation 0, apply frobenius_pullback first");
    Matrix W = dfrp_part(Nt).map([](const Form& f) { return d_inverse(f); });
    BaseChange B = invert(truncate(I - W));
    Matrix out = base_change(Nt, B);
    return {B, out, s, vp(frac_part(out))};
}

struct NormalizeResult {
    Matrix N;
    BaseChange U;
    int iterations = 0;
    std::vector<Matrix> trace;  // N_0, N_1, ...
};

inline NormalizeResult normalize(const Matrix& N, int max_iter) {
    require_square(N, "normalize");
    const Context& ctx = N.ctx();
    if (!is_integrable(N)) throw Error(ErrorKind::precondition, "normalize: connection is not integrable");
    Matrix cur = truncate(N);
    long s = vp(frac_part(cur));
    if (s != kInfinity && s < 1)
        throw Error(ErrorKind::precondition, "normalize: frac part has valuation 0, apply frobenius_pullback first");
    Matrix Ucum = Matrix::identity(ctx, N.rows());
    Matrix Uinv = Ucum;
    NormalizeResult res{cur, {Ucum, Uinv}, 0, {cur}};
    while (!frac_part(cur).is_zero()) {
        if (res.iterations >= max_iter) throw Error(ErrorKind::internal, "normalize: iteration budget exhausted");
        StepResult st = normalize_step(cur);
        Ucum = truncate(Ucum * st.U.U);
        Uinv = truncate(st.U.inverse * Uinv);
        if (coefficient_scale(Ucum) < -ctx.m || coefficient_scale(st.N) < -ctx.m)
            throw Error(ErrorKind::precondition, "normalize: p-scale dropped below -m");
        cur = st.N;
        ++res.iterations;
        res.trace.push_back(cur);
    }
    res.N = cur;
    res.U = {Ucum, Uinv};
    return res;
}

// zeta_check bounds -1/4, 1/2, 3/4 on the int, frp and d(frp) parts, minimized over entries
inline bool overconvergence_condition(const Matrix& N, const mpq_class& eps) {
    OvercvBounds b;
    return zeta_check(int_part(N), eps) >= XRational::of(b.int_min) && zeta_check(frp_part(N), eps) >= XRational::of(b.frp_min) &&
           zeta_check(dfrp_part(N), eps) >= XRational::of(b.dfrp_min);
}

// prod (x_i + y_i) - (prod x_i - sum_f prod f_i), f_i in {x_i + y_i, -y_i}, at least one -y_i.
// Zero in any rng; ordered products, so non-commutative rngs are fine.
template <class R>
R rng_expansion_check(const std::vector<R>& xs, const std::vector<R>& ys) {
    if (xs.size() != ys.size() || xs.empty()) throw Error(ErrorKind::precondition, "rng_expansion_check: length mismatch");
    const std::size_t t1 = xs.size();
    if (t1 > 20) throw Error(ErrorKind::precondition, "rng_expansion_check: too many factors");
    R lhs = xs[0] + ys[0];
    for (std::size_t i = 1; i < t1; ++i) lhs = lhs * (xs[i] + ys[i]);
    R px = xs[0];
    for (std::size_t i = 1; i < t1; ++i) px = px * xs[i];
    R sum = px - px;
    for (std::uint64_t f = 1; f < (std::uint64_t{1} << t1); ++f) {
        auto pick = [&](std::size_t i) { return ((f >> i) & 1u) ? R(-ys[i]) : (xs[i] + ys[i]); };
        R prod = pick(0);
        for (std::size_t i = 1; i < t1; ++i) prod = prod * pick(i);
        sum = sum + prod;
    }
    return lhs - (px - sum);
}

enum class IdempotentFrobenius { holds, fails, not_applicable };

// P = F(P) forces d(P) = p^r F^r d(P) for every r, hence d(P) = 0 mod Fil^m
inline IdempotentFrobenius idempotent_frobenius_check(const Matrix& P) {
    require_square(P, "idempotent_frobenius_check");
    require_degree(P, 0, "idempotent_frobenius_check");
    if (!congruent(P * P, P)) throw Error(ErrorKind::precondition, "idempotent_frobenius_check: P is not idempotent");
    if (!congruent(F(P), P)) return IdempotentFrobenius::not_applicable;
    const Matrix dP = truncate(d(P));
    Matrix phir = dP;
    for (int r = 1; r <= P.ctx().m; ++r) {
        phir = frobenius_pullback(phir);
        if (!congruent(dP, phir)) return IdempotentFrobenius::fails;
    }
    return dP.is_zero() ? IdempotentFrobenius::holds : IdempotentFrobenius::fails;
}

struct SchanuelResult {
    Matrix Q;
    Matrix complement;
    Matrix connection;
    Matrix complement_connection;
};

// Q = diag(P, 0) on the rank-2r module, its complement, and the lifted connection of diag(A, 0)
inline SchanuelResult schanuel_complement(const Matrix& P, const Matrix& A) {
    require_square(P, "schanuel_complement");
    const Context& ctx = P.ctx();
    if (!congruent(P * P, P)) throw Error(ErrorKind::precondition, "schanuel_complement: P is not idempotent");
    if (!congruent(F(P), P)) throw Error(ErrorKind::precondition, "schanuel_complement: F(P) != P");
    const int r = P.rows();
    Matrix Q = block_diag(P, Matrix(ctx, r, r));
    Matrix one = Matrix::identity(ctx, 2 * r);
    Matrix comp = truncate(one - Q);
    Matrix N = lift_connection(block_diag(A, Matrix(ctx, r, r)), Q);
    return {Q, comp, N, truncate(comp * N * comp)};
}

}  // namespace drw
