#pragma once

#include "drw/connections.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace drw {

// Seeded generator. Draws are reduced by hand rather than through <random> distributions,
// whose output is implementation-defined, so generated bytes agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::uint64_t next() { return g_(); }
    long range(long lo, long hi) { return lo + static_cast<long>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin(int num = 1, int den = 2) { return range(0, den - 1) < num; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<long>(v.size()) - 1))];
    }

private:
    std::mt19937_64 g_;
};

struct FormShape {
    int umax = 3;        // denominator exponent of generated weights
    long jmax = 2;       // per-coordinate integer part of each factor's weight
    int terms = 3;
    int max_degree = -1; // -1: up to n
    int degree = -1;     // fixed degree if >= 0
};

// p^{u} x^k with k_i = j_i / p^u, i.e. a V^u of a Teichmuller monomial (integral)
inline Form random_basic(const Context& ctx, Rng& rng, int umax, long jmax, bool force_fractional = false) {
    for (;;) {
        int u = static_cast<int>(rng.range(force_fractional ? 1 : 0, umax));
        std::vector<mpq_class> k;
        for (int i = 0; i < ctx.n; ++i) {
            mpq_class q(mpz_class(rng.range(0, jmax * ipow(ctx.p, u))), zpow(ctx.p, u));
            q.canonicalize();
            k.push_back(q);
        }
        Weight w = Weight::from_rationals(k, ctx.p);
        if (force_fractional && w.is_integral()) continue;
        return Form::monomial(ctx, mpq_class(zpow(ctx.p, w.u())), w);
    }
}

inline mpq_class random_unit_or_p(const Context& ctx, Rng& rng) {
    static const std::vector<long> base{1, 1, 1, -1, 2};
    long c = rng.coin(1, 5) ? ctx.p : rng.pick(base);
    return mpq_class(c);
}

// integral form: sums of scalar * basic * d(basic) * ... (exact, not truncated)
inline Form random_form(const Context& ctx, Rng& rng, const FormShape& sh = {}) {
    Form r(ctx);
    int top = sh.max_degree < 0 ? ctx.n : std::min(sh.max_degree, ctx.n);
    for (int t = 0; t < sh.terms; ++t) {
        Form f = random_basic(ctx, rng, sh.umax, sh.jmax);
        int deg = sh.degree >= 0 ? sh.degree : static_cast<int>(rng.range(0, top));
        for (int i = 0; i < deg; ++i) f = f * d(random_basic(ctx, rng, sh.umax, sh.jmax));
        r += random_unit_or_p(ctx, rng) * f;
    }
    return r;
}

inline Form random_truncated_form(const Context& ctx, Rng& rng, const FormShape& sh = {}) { return truncate(random_form(ctx, rng, sh)); }

// polynomial over F_p, coefficients in {1..p-1}
inline Poly random_poly(int n, long p, Rng& rng, int terms = 2, long maxdeg = 2) {
    Poly g;
    for (int t = 0; t < terms; ++t) {
        Exps e;
        for (int i = 0; i < n; ++i) e.push_back(rng.range(0, maxdeg));
        poly_add_term(g, e, mpz_class(rng.range(1, p - 1)));
    }
    return poly_reduce(g, mpz_class(p));
}

// degree-t classical form over Z with small coefficients
inline CharZeroForm random_cz_form(int n, int t, Rng& rng, int terms = 2, long maxdeg = 2, long cmax = 3) {
    CharZeroForm w;
    for (int k = 0; k < terms; ++k) {
        Exps e;
        for (int i = 0; i < n; ++i) e.push_back(rng.range(0, maxdeg));
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(rng.range(0, i))]);
        DlogSet I = 0;
        for (int i = 0; i < t; ++i) I |= 1u << idx[static_cast<std::size_t>(i)];
        cz_add_term(w, e, I, mpz_class(rng.range(1, cmax)));
    }
    return w;
}

// pure fractional degree-0 form p^extra * sum of V^u([x]^j), u >= 1
inline Form random_frp0(const Context& ctx, Rng& rng, int umax, long jmax, int extra = 0, int terms = 2) {
    Form r(ctx);
    for (int t = 0; t < terms; ++t) r += random_unit_or_p(ctx, rng) * random_basic(ctx, rng, umax, jmax, true);
    return truncate(mpq_class(zpow(ctx.p, extra)) * r);
}

// ---- matrices ----

// upper unitriangular with integral degree-0 entries
inline Matrix random_unipotent(const Context& ctx, int r, Rng& rng, int umax = 1, long jmax = 1) {
    Matrix U = Matrix::identity(ctx, r);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) U.at(i, j) = random_truncated_form(ctx, rng, {umax, jmax, 1, 0, 0});
    return U;
}

// 1 + W with W pure fractional of degree 0 (entries p^extra-divisible), the "overconvergent perturbation"
inline Matrix random_frp_perturbation(const Context& ctx, int r, Rng& rng, int extra = 0, int umax = 2, long jmax = 1) {
    Matrix U = Matrix::identity(ctx, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (rng.coin(2, 3)) U.at(i, j) = truncate(U.at(i, j) + random_frp0(ctx, rng, umax, jmax, extra, 1));
    return U;
}

inline Matrix diagonal_exact(const Context& ctx, int r, Rng& rng) {
    Matrix N(ctx, r, r);
    for (int i = 0; i < r; ++i) N.at(i, i) = truncate(d(random_form(ctx, rng, {1, 2, 2, 0, 0})));
    return N;
}

// classical integrable connection over Z: G^{-1} D G + G^{-1} dG, D a diagonal of exact forms, G unipotent polynomial
struct ClassicalConnection {
    int r = 0;
    std::vector<CharZeroForm> entries;  // row-major, degree-1 classical forms
};

inline ClassicalConnection random_classical_integrable(int n, int r, Rng& rng) {
    const auto R = static_cast<std::size_t>(r);
    auto mul = [&](const std::vector<CharZeroForm>& a, const std::vector<CharZeroForm>& b) {
        std::vector<CharZeroForm> c(R * R);
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t j = 0; j < R; ++j)
                for (std::size_t k = 0; k < R; ++k)
                    for (const auto& [key, v] : cz_mul(a[i * R + k], b[k * R + j])) cz_add_term(c[i * R + j], key.first, key.second, v);
        return c;
    };
    auto add = [](std::vector<CharZeroForm>& acc, const std::vector<CharZeroForm>& b) {
        for (std::size_t a = 0; a < acc.size(); ++a)
            for (const auto& [k, v] : b[a]) cz_add_term(acc[a], k.first, k.second, v);
    };
    // G = 1 + T, T strictly upper triangular; G^{-1} = sum (-T)^i
    std::vector<CharZeroForm> T(R * R), D(R * R), dT(R * R), minusT(R * R);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = i + 1; j < R; ++j)
            if (rng.coin(3, 4)) T[i * R + j] = cz_from_poly(random_poly(n, 3, rng, 1, 2));
    for (std::size_t i = 0; i < R; ++i) D[i * R + i] = cz_d(cz_from_poly(random_poly(n, 3, rng, 1, 2)));
    std::vector<CharZeroForm> G(R * R), Ginv(R * R), term(R * R);
    const Exps zero(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < R; ++i) {
        cz_add_term(G[i * R + i], zero, 0, 1);
        cz_add_term(Ginv[i * R + i], zero, 0, 1);
        cz_add_term(term[i * R + i], zero, 0, 1);
    }
    add(G, T);
    for (std::size_t a = 0; a < R * R; ++a) {
        dT[a] = cz_d(T[a]);
        for (const auto& [k, v] : T[a]) cz_add_term(minusT[a], k.first, k.second, -v);
    }
    for (int i = 1; i < r; ++i) {
        term = mul(term, minusT);
        add(Ginv, term);
    }
    ClassicalConnection C{r, mul(mul(Ginv, D), G)};
    add(C.entries, mul(Ginv, dT));
    return C;
}

inline Matrix tF_matrix(const ClassicalConnection& C, const TFMap& tf, const Context& ctx) {
    Matrix N(ctx, C.r, C.r);
    for (int i = 0; i < C.r; ++i)
        for (int j = 0; j < C.r; ++j) N.at(i, j) = tf(C.entries[static_cast<std::size_t>(i * C.r + j)]);
    return N;
}

// ---- connection instances ----

// gauge G^{-1} dG + block of exact diagonal forms conjugated by G
inline Matrix random_integrable(const Context& ctx, int r, Rng& rng) {
    Matrix D = diagonal_exact(ctx, r, rng);
    Matrix G = random_unipotent(ctx, r, rng);
    return base_change(D, G);
}

struct FrobeniusInstance {
    Matrix N;           // input to normalize (already pulled back once)
    Matrix classical;   // phi(t_F(N0)) in the same basis family
    Matrix gauge;       // F(U): base_change(classical, gauge) == N
};

// base_change(t_F(N0), U) with U an frp perturbation, then one Frobenius pullback
inline FrobeniusInstance random_frobenius_structured(const Context& ctx, int r, Rng& rng) {
    FrobeniusLift lift = FrobeniusLift::linear_perturbation(ctx.n, ctx.p);
    TFMap tf(lift, ctx);
    // redraw until the pulled-back input still has a fractional part to remove
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ClassicalConnection C = random_classical_integrable(ctx.n, r, rng);
        Matrix T = tF_matrix(C, tf, ctx);
        Matrix U = random_frp_perturbation(ctx, r, rng);
        Matrix N = frobenius_pullback(base_change(T, U));
        if (!frac_part(N).is_zero()) return {N, frobenius_pullback(T), truncate(F(U))};
    }
    throw Error(ErrorKind::internal, "no Frobenius-structured instance with a fractional part");
}

// integrable N with vp(N|frac) = s, built as base_change(t_F-image, 1 + p^s W).
// p^s V^u(..) lies in Fil^{s+u}, so a fractional perturbation survives only when m >= s + 2.
inline Matrix random_integrable_with_frac_valuation(const Context& ctx, int r, int s, Rng& rng) {
    if (s < 1 || ctx.m < s + 2) throw Error(ErrorKind::precondition, "frac valuation s needs 1 <= s <= m - 2");
    FrobeniusLift lift = FrobeniusLift::canonical(ctx.n, ctx.p);
    TFMap tf(lift, ctx);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ClassicalConnection C = random_classical_integrable(ctx.n, r, rng);
        Matrix T = tF_matrix(C, tf, ctx);
        Matrix U = random_frp_perturbation(ctx, r, rng, s, ctx.m - s - 1);
        Matrix N = base_change(T, U);
        if (vp(frac_part(N)) == s) return N;
    }
    throw Error(ErrorKind::internal, "no instance with the requested frac valuation");
}

struct ProjectorInstance {
    Matrix P;
    Matrix A;
};

// P = U^{-1} E U, connection data A = P N with N = U^{-1} D U + U^{-1} dU, D diagonal exact
// (P is horizontal for N, so the image of P carries an integrable connection)
inline ProjectorInstance random_projector_instance(const Context& ctx, int r, Rng& rng) {
    Matrix E(ctx, r, r);
    int rank = static_cast<int>(rng.range(1, std::max(1, r - 1)));
    for (int i = 0; i < rank; ++i) E.at(i, i) = Form::constant(ctx, 1);
    Matrix D = diagonal_exact(ctx, r, rng);
    BaseChange B = invert(random_unipotent(ctx, r, rng));
    Matrix P = truncate(B.inverse * E * B.U);
    Matrix N = base_change(D, B);
    return {P, truncate(P * N)};
}

// constant idempotent over Z/p^m: C^{-1} diag(1..1,0..0) C with C a constant unipotent matrix
inline Matrix random_constant_idempotent(const Context& ctx, int r, Rng& rng) {
    Matrix E(ctx, r, r);
    int rank = static_cast<int>(rng.range(0, r));
    for (int i = 0; i < rank; ++i) E.at(i, i) = Form::constant(ctx, 1);
    Matrix C = Matrix::identity(ctx, r);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) C.at(i, j) = Form::constant(ctx, mpq_class(rng.range(0, ctx.p * ctx.p)));
    BaseChange B = invert(C);
    return truncate(B.inverse * E * B.U);
}

}  // namespace drw
