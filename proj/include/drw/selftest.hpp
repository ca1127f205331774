#pragma once

// Seeded invariant suites shared by the CLI `selftest` command and the acceptance runner.

#include "drw/classical_witt.hpp"
#include "drw/generate.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace drw::selftest {

struct Counterexample {
    std::string property;
    long case_index = 0;
    std::vector<std::variant<Form, Matrix>> inputs;
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    long cases = 0;
    std::map<std::string, long> checks;
    std::map<std::string, long> failures;
    std::vector<Counterexample> counterexamples;
    std::map<std::string, std::string> notes;
    double seconds = 0;

    long total_failures() const {
        long s = 0;
        for (const auto& [k, v] : failures) s += v;
        return s;
    }
    bool ok() const { return total_failures() == 0; }

    void check(const std::string& prop, bool ok, long idx, std::vector<std::variant<Form, Matrix>> inputs = {}) {
        ++checks[prop];
        if (ok) return;
        ++failures[prop];
        if (counterexamples.size() < 8) counterexamples.push_back({prop, idx, std::move(inputs)});
    }
};

namespace detail {

inline SuiteResult timed(const std::string& name, std::uint64_t seed, const std::function<void(SuiteResult&)>& body) {
    SuiteResult r;
    r.name = name;
    r.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) { return seed * 0x9E3779B97F4A7C15ull ^ salt; }

inline int sign_of_degrees(int a, int b) { return (a * b) % 2 ? -1 : 1; }

}  // namespace detail

// ---- dga axioms, per (p, n) in {2,3} x {1,2} with `cases` forms each ----

inline SuiteResult dga_axioms(std::uint64_t seed, long cases) {
    return detail::timed("dga_axioms", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 1));
        long idx = 0;
        for (long p : {2L, 3L})
            for (int n : {1, 2})
                for (long c = 0; c < cases; ++c, ++idx) {
                    auto ctx = Context::make(p, n, static_cast<int>(rng.range(1, 4)));
                    int da = static_cast<int>(rng.range(0, n)), db = static_cast<int>(rng.range(0, n));
                    // total weight |k| <= 6 on every input monomial
                    auto draw = [&](int deg) {
                        for (;;) {
                            Form f = random_form(ctx, rng, {3, 2, 3, -1, deg});
                            bool small = true;
                            for (const auto& [k, c] : f.terms()) small = small && k.w.total(p) <= 6;
                            if (small) return f;
                        }
                    };
                    Form a = draw(da), b = draw(db);
                    const mpq_class pq(p);
                    R.check("d_squared", d(d(a)).is_zero(), idx, {a});
                    R.check("leibniz", d(a * b) == d(a) * b + mpq_class(da % 2 ? -1 : 1) * (a * d(b)), idx, {a, b});
                    R.check("graded_commutativity", a * b == mpq_class(detail::sign_of_degrees(da, db)) * (b * a), idx, {a, b});
                    R.check("dF_eq_pFd", d(F(a)) == pq * F(d(a)), idx, {a});
                    R.check("Vd_eq_pdV", V(d(a)) == pq * d(V(a)), idx, {a});
                    R.check("FV_eq_p", F(V(a)) == pq * a, idx, {a});
                    R.check("VF_eq_p", V(F(a)) == pq * a, idx, {a});
                    R.check("projection_formula", V(a * F(b)) == V(a) * b, idx, {a, b});
                    R.check("closure", is_integral(a + b) && is_integral(a * b) && is_integral(d(a)) && is_integral(F(a)) && is_integral(V(a)),
                            idx, {a, b});
                    Form ta = truncate(a), tb = truncate(b);
                    R.check("truncation_congruence",
                            truncate(ta * tb) == truncate(a * b) && truncate(d(ta)) == truncate(d(a)) && truncate(V(ta)) == truncate(V(a)),
                            idx, {a, b});
                }
        R.cases = idx;
    });
}

// ---- Witt coordinate bridge against classical Witt vectors ----

inline SuiteResult witt_oracle(std::uint64_t seed, long cases) {
    return detail::timed("witt_oracle", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 2));
        for (long idx = 0; idx < cases; ++idx) {
            long p = rng.coin() ? 2 : 3;
            int n = static_cast<int>(rng.range(1, 2)), m = static_cast<int>(rng.range(1, 4));
            auto ctx = Context::make(p, n, m);
            auto coords = [&] {
                std::vector<Poly> c;
                for (int i = 0; i < m; ++i) c.push_back(rng.coin(1, 4) ? Poly{} : random_poly(n, p, rng, 2, 1));
                return c;
            };
            auto a = coords(), b = coords();
            Form A = from_witt_coordinates(a, ctx), B = from_witt_coordinates(b, ctx);
            bool gh = true;
            for (int r = 0; r < m; ++r) gh = gh && ghost(A, r) == classical_witt::ghost(a, r, p, n);
            R.check("ghost_components", gh, idx, {A});
            R.check("sum", from_witt_coordinates(classical_witt::combine(a, b, classical_witt::Op::sum, p, n), ctx) == truncate(A + B), idx, {A, B});
            R.check("product", from_witt_coordinates(classical_witt::combine(a, b, classical_witt::Op::product, p, n), ctx) == truncate(A * B), idx,
                    {A, B});
            R.check("to_from", to_witt_coordinates(A) == a, idx, {A});
            Form f = random_truncated_form(ctx, rng, {2, 2, 3, 0, 0});
            R.check("from_to", from_witt_coordinates(to_witt_coordinates(f), ctx) == f, idx, {f});
        }
        R.cases = cases;
    });
}

// ---- canonical splitting ----

inline SuiteResult decomposition(std::uint64_t seed, long cases) {
    return detail::timed("decomposition", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 3));
        static const std::vector<long> ps{2, 3, 5};
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.pick(ps), static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(2, 4)));
            Form a = random_form(ctx, rng);
            auto D = decompose(a);
            R.check("sum", D.total() == a, idx, {a});
            R.check("integral_parts", is_integral(D.int_part) && is_integral(D.frp) && is_integral(D.dfrp), idx, {a});
            auto Di = decompose(D.int_part), Df = decompose(D.frp), Dd = decompose(D.dfrp);
            R.check("int_idempotent", Di.int_part == D.int_part && Di.frac().is_zero(), idx, {a});
            R.check("frp_idempotent", Df.frp == D.frp && Df.int_part.is_zero() && Df.dfrp.is_zero(), idx, {a});
            R.check("dfrp_idempotent", Dd.dfrp == D.dfrp && Dd.int_part.is_zero() && Dd.frp.is_zero(), idx, {a});
            Form dx = d(D.frp);
            auto Ddx = decompose(dx);
            R.check("d_of_frp_is_dfrp", Ddx.int_part.is_zero() && Ddx.frp.is_zero() && Ddx.dfrp == dx, idx, {a});
            R.check("dinv_after_d", d_inverse(dx) == D.frp, idx, {a});
            R.check("d_after_dinv", d(d_inverse(D.dfrp)) == D.dfrp, idx, {a});
        }
        R.cases = cases;
    });
}

// ---- inequality suite for zeta at the epsilon chosen by find_delta ----

inline SuiteResult inequalities(std::uint64_t seed, long cases) {
    return detail::timed("inequalities", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 4));
        static const std::vector<long> ps{2, 3, 5};
        const mpq_class q14(1, 4), q12(1, 2), q34(3, 4);
        const auto grid = default_epsilon_grid();
        long no_delta = 0;
        for (long idx = 0; idx < cases; ++idx) {
            const long p = rng.pick(ps);
            const int n = static_cast<int>(rng.range(1, 2));
            auto ctx = Context::make(p, n, static_cast<int>(rng.range(2, 3)));
            FrobeniusLift L = FrobeniusLift::linear_perturbation(n, p);
            TFMap tf(L, ctx);

            Form a = random_truncated_form(ctx, rng), b = random_truncated_form(ctx, rng);
            Form xi = decompose(random_truncated_form(ctx, rng, {3, 2, 3, -1, static_cast<int>(rng.range(1, n))})).int_part;
            Form yf = decompose(b).frp;
            Poly g = random_poly(n, p, rng);
            Form tg = tF_scalar(g, L, ctx), g0 = truncate(poly_to_form(ctx, g));
            CharZeroForm om = random_cz_form(n, static_cast<int>(rng.range(0, n)), rng, 2, 2, p - 1);
            Form tom = tf(om);
            const int te = static_cast<int>(rng.range(0, n - 1));
            Form xs(ctx);
            for (int k = 0; k < 2; ++k) {
                Form e = decompose(random_form(ctx, rng, {3, 2, 1, -1, te})).frp;
                xs += tF_scalar(random_poly(n, p, rng), L, ctx) * e;
            }
            xs = truncate(xs);

            std::vector<Form> samples{a, b, xi, yf, tg, tom, xs};
            auto delta = find_delta(samples, grid);
            if (!delta) ++no_delta;
            // every epsilon in ]0, delta]: check at delta and at the bottom of the grid
            std::vector<mpq_class> epss{delta ? *delta : grid.back()};
            if (epss.front() != grid.back()) epss.push_back(grid.back());
            for (const auto& eps : epss) {
                auto z = [&](const Form& f) { return zeta(f, eps); };
                auto zc = [&](const Form& f) { return zeta_check(f, eps); };
                auto D = decompose(a);
                R.check("d_raises_zeta", z(d(a)) >= z(a), idx, {a});
                R.check("frp_and_its_d_agree", zc(D.frp) == zc(d(D.frp)), idx, {a});
                R.check("int_part_bound", zc(D.int_part) >= z(a) - q12, idx, {a});
                R.check("frp_part_bound", zc(D.frp) >= z(a) - q12, idx, {a});
                R.check("dfrp_part_bound", zc(D.dfrp) >= z(a) - q12, idx, {a});
                R.check("check_below_zeta", z(a) >= zc(a), idx, {a});
                R.check("tF_minus_identity", z(truncate(tg - g0)) >= z(tg) + q34, idx, {tg, g0});
                {
                    auto T = decompose(tom);
                    XRational zt = z(tom);
                    R.check("tF_higher_degree_int", z(T.int_part) >= zt, idx, {tom});
                    R.check("tF_higher_degree_frp", z(T.frp) >= zt + q34, idx, {tom});
                    R.check("tF_higher_degree_dfrp", z(T.dfrp) >= zt + q34, idx, {tom});
                }
                if (!xs.is_zero()) {
                    auto X = decompose(xs);
                    XRational zx = z(xs);
                    R.check("xfrp_minoration_int", z(X.int_part) >= zx + q34, idx, {xs});
                    R.check("xfrp_minoration_frp", z(X.frp) >= zx, idx, {xs});
                    R.check("xfrp_minoration_dfrp", z(X.dfrp) >= zx + q34, idx, {xs});
                }
                if (!xi.is_zero() && !yf.is_zero())
                    R.check("controlling_int_frp", zc(truncate(xi * yf)) >= zc(xi) + zc(yf) + q14, idx, {xi, yf});
            }
            if (!yf.is_zero()) {
                auto P = decompose(yf * a);
                R.check("frp_times_anything", vp_form(P.int_part) > 0 && vp_form(P.dfrp) > 0, idx, {yf, a});
            }
        }
        R.cases = cases;
        R.notes["cases_without_delta"] = std::to_string(no_delta);
    });
}

// ---- zeta as a pseudovaluation: sums, and products with one integral-weight factor ----

inline SuiteResult pseudovaluation(std::uint64_t seed, long cases) {
    return detail::timed("pseudovaluation", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 5));
        static const std::vector<long> ps{2, 3, 5};
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.pick(ps), static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(2, 3)));
            Form a = random_truncated_form(ctx, rng), b = random_truncated_form(ctx, rng);
            auto eps = find_delta({a, b}).value_or(default_epsilon_grid().back());
            R.check("sum", zeta(a + b, eps) >= xmin(zeta(a, eps), zeta(b, eps)), idx, {a, b});
            Form ai = decompose(a).int_part;
            if (!ai.is_zero()) R.check("product_integral_factor", zeta(ai * b, eps) >= zeta(ai, eps) + zeta(b, eps), idx, {ai, b});
        }
        R.cases = cases;
    });
}

// ---- rng identity ----

namespace detail {

struct ModRng {
    long v = 0;
    long mod = 1;
    ModRng operator+(const ModRng& o) const { return {(v + o.v) % mod, mod}; }
    ModRng operator-(const ModRng& o) const { return {((v - o.v) % mod + mod) % mod, mod}; }
    ModRng operator-() const { return {(mod - v) % mod, mod}; }
    ModRng operator*(const ModRng& o) const { return {(v * o.v) % mod, mod}; }
};

// strictly upper triangular 3x3 over Z/8: entries (0,1), (0,2), (1,2)
struct Nil3 {
    long a = 0, b = 0, c = 0;
    static long md(long x) { return ((x % 8) + 8) % 8; }
    Nil3 operator+(const Nil3& o) const { return {md(a + o.a), md(b + o.b), md(c + o.c)}; }
    Nil3 operator-(const Nil3& o) const { return {md(a - o.a), md(b - o.b), md(c - o.c)}; }
    Nil3 operator-() const { return {md(-a), md(-b), md(-c)}; }
    Nil3 operator*(const Nil3& o) const { return {0, md(a * o.c), 0}; }
    bool is_zero() const { return a == 0 && b == 0 && c == 0; }
};

// Nil3 with polynomial entries: the indeterminates stand for every tuple at once, so a zero
// result mod 8 certifies the identity for all 8^(6(t+1)) inputs
struct SymNil3 {
    using P = classical_witt::ZPoly;
    P a, b, c;
    static inline const mpz_class M = 8;
    SymNil3 operator+(const SymNil3& o) const { return {classical_witt::add(a, o.a, M), classical_witt::add(b, o.b, M), classical_witt::add(c, o.c, M)}; }
    SymNil3 operator-(const SymNil3& o) const {
        return {classical_witt::add(a, o.a, M, -1), classical_witt::add(b, o.b, M, -1), classical_witt::add(c, o.c, M, -1)};
    }
    SymNil3 operator-() const { return SymNil3{} - *this; }
    SymNil3 operator*(const SymNil3& o) const { return {{}, classical_witt::mul(a, o.c, M), {}}; }
    bool is_zero() const { return a.empty() && b.empty() && c.empty(); }

    static P var(int nvars, int i) {
        classical_witt::Mono e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(i)] = 1;
        return {{e, 1}};
    }
};

inline bool nil3_symbolic_identity(int t) {
    const int nv = 6 * (t + 1);
    std::vector<SymNil3> xs, ys;
    for (int i = 0; i <= t; ++i) {
        xs.push_back({SymNil3::var(nv, 6 * i), SymNil3::var(nv, 6 * i + 1), SymNil3::var(nv, 6 * i + 2)});
        ys.push_back({SymNil3::var(nv, 6 * i + 3), SymNil3::var(nv, 6 * i + 4), SymNil3::var(nv, 6 * i + 5)});
    }
    return rng_expansion_check(xs, ys).is_zero();
}

// all tuples of 2Z/32Z with t = 3, each of the 15 sign functions multiplied out along its own path
inline long rng_2z32_t3_failures() {
    unsigned char X3[256], A3[256], B3[256];
    for (int i = 0; i < 256; ++i) {
        unsigned char x = static_cast<unsigned char>((i >> 4) * 2), y = static_cast<unsigned char>((i & 15) * 2);
        X3[i] = x;
        A3[i] = static_cast<unsigned char>((x + y) & 31);
        B3[i] = static_cast<unsigned char>((32 - y) & 31);
    }
    long bad = 0;
    for (int x0 = 0; x0 < 32; x0 += 2)
        for (int y0 = 0; y0 < 32; y0 += 2)
            for (int x1 = 0; x1 < 32; x1 += 2)
                for (int y1 = 0; y1 < 32; y1 += 2)
                    for (int x2 = 0; x2 < 32; x2 += 2)
                        for (int y2 = 0; y2 < 32; y2 += 2) {
                            const int f0[2] = {(x0 + y0) & 31, (32 - y0) & 31}, f1[2] = {(x1 + y1) & 31, (32 - y1) & 31},
                                      f2[2] = {(x2 + y2) & 31, (32 - y2) & 31};
                            unsigned char P[8];
                            for (int f = 0; f < 8; ++f) P[f] = static_cast<unsigned char>((f0[f & 1] * f1[(f >> 1) & 1] * f2[(f >> 2) & 1]) & 31);
                            const unsigned char px = static_cast<unsigned char>((x0 * x1 * x2) & 31);
                            for (int i = 0; i < 256; ++i) {
                                const unsigned char a = A3[i], b = B3[i];
                                unsigned char s = 0;
                                for (int f = 1; f < 8; ++f) s = static_cast<unsigned char>(s + P[f] * a);
                                for (int f = 0; f < 8; ++f) s = static_cast<unsigned char>(s + P[f] * b);
                                const unsigned char lhs = static_cast<unsigned char>(P[0] * a);
                                const unsigned char rhs = static_cast<unsigned char>(px * X3[i] - s);
                                bad += ((lhs - rhs) & 31) != 0;
                            }
                        }
    return bad;
}

}  // namespace detail

// exhaustive over 2Z/32Z for t <= 3 by enumeration and over Nil3 for t <= 3 by symbolic entries; sampled Nil3 tuples as a cross-check
inline SuiteResult rng_identity(std::uint64_t seed, long cases) {
    return detail::timed("rng_identity", seed, [&](SuiteResult& R) {
        using detail::ModRng;
        std::vector<ModRng> evens;
        for (long v = 0; v < 32; v += 2) evens.push_back({v, 32});
        for (int t = 0; t <= 2; ++t) {
            const int k = t + 1;
            long total = 1;
            for (int i = 0; i < 2 * k; ++i) total *= 16;
            long bad = 0;
            std::vector<ModRng> xs(static_cast<std::size_t>(k)), ys(static_cast<std::size_t>(k));
            for (long code = 0; code < total; ++code) {
                long c = code;
                for (int i = 0; i < k; ++i) {
                    xs[static_cast<std::size_t>(i)] = evens[static_cast<std::size_t>(c % 16)];
                    c /= 16;
                    ys[static_cast<std::size_t>(i)] = evens[static_cast<std::size_t>(c % 16)];
                    c /= 16;
                }
                if (rng_expansion_check(xs, ys).v != 0) ++bad;
            }
            R.checks["2Z/32Z_t" + std::to_string(t)] += total;
            if (bad) R.failures["2Z/32Z_t" + std::to_string(t)] += bad;
        }
        R.checks["2Z/32Z_t3"] += 1L << 32;
        if (long bad = detail::rng_2z32_t3_failures()) R.failures["2Z/32Z_t3"] += bad;

        for (int t = 0; t <= 3; ++t) {
            ++R.checks["nil3x3_mod8_all_tuples_t" + std::to_string(t)];
            if (!detail::nil3_symbolic_identity(t)) ++R.failures["nil3x3_mod8_all_tuples_t" + std::to_string(t)];
        }

        Rng rng(detail::mix(seed, 6));
        for (int t = 0; t <= 3; ++t)
            for (long idx = 0; idx < cases; ++idx) {
                std::vector<detail::Nil3> xs, ys;
                for (int i = 0; i <= t; ++i) {
                    xs.push_back({rng.range(0, 7), rng.range(0, 7), rng.range(0, 7)});
                    ys.push_back({rng.range(0, 7), rng.range(0, 7), rng.range(0, 7)});
                }
                ++R.checks["nil3x3_mod8_t" + std::to_string(t)];
                if (!rng_expansion_check(xs, ys).is_zero()) ++R.failures["nil3x3_mod8_t" + std::to_string(t)];
            }
        R.cases = cases;
    });
}

// ---- connection calculus ----

inline SuiteResult connection_calculus(std::uint64_t seed, long cases) {
    return detail::timed("connection_calculus", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 7));
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.coin() ? 2 : 3, 2, static_cast<int>(rng.range(2, 4)));
            const int r = static_cast<int>(rng.range(1, 3));
            Matrix N = random_integrable(ctx, r, rng);
            Matrix U = random_unipotent(ctx, r, rng);
            Matrix U2 = random_frp_perturbation(ctx, r, rng, 1);
            BaseChange B = invert(U);
            R.check("invert", truncate(B.inverse * U) == Matrix::identity(ctx, r) && truncate(U * B.inverse) == Matrix::identity(ctx, r), idx, {U});
            Matrix M(ctx, r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) M.at(i, j) = random_truncated_form(ctx, rng, {2, 1, 2, 1, 1});
            R.check("curvature_covariance", curvature(base_change(M, B)) == truncate(B.inverse * curvature(M) * U), idx, {M, U});
            Matrix N2 = base_change(N, B);
            R.check("integrable_preserved", is_integrable(N) && is_integrable(N2), idx, {N, U});
            R.check("group_law", base_change(N2, U2) == base_change(N, truncate(U * U2)), idx, {N, U, U2});
            R.check("horizontal_base_change", horizontal_check(N2, N, U), idx, {N, U});
            Form g = random_truncated_form(ctx, rng, {2, 1, 2, 0, 0});
            Matrix u(ctx, r, 1);
            for (int i = 0; i < r; ++i) u.at(i, 0) = random_truncated_form(ctx, rng, {2, 1, 2, 0, 0});
            auto times = [](const Form& s, const Matrix& X) { return X.map([&](const Form& f) { return s * f; }); };
            Matrix lhs = evaluate(N, truncate(times(g, u)));
            Matrix rhs = truncate(times(g, evaluate(N, u)) + u.map([&](const Form& f) { return d(g) * f; }));
            R.check("evaluate_leibniz", lhs == rhs, idx, {N});
            R.check("evaluate_base_change", truncate(B.inverse * evaluate(N, truncate(U * u))) == evaluate(N2, u), idx, {N, U});
            Matrix C = curvature(M);
            R.check("curvature_linear", truncate(C * times(g, u)) == truncate(times(g, C * u)), idx, {M});
            Matrix Np = frobenius_pullback(N);
            R.check("pullback", is_integrable(Np) && (vp(N) == kInfinity ? Np.is_zero() : vp(Np) >= vp(N) + 1), idx, {N});
        }
        R.cases = cases;
    });
}

// ---- one normalization step ----

inline SuiteResult normalize_step_gain(std::uint64_t seed, long cases) {
    return detail::timed("normalize_step_gain", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 8));
        for (long idx = 0; idx < cases; ++idx) {
            const int s = static_cast<int>(rng.range(1, 2));
            auto ctx = Context::make(rng.coin() ? 2 : 3, static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(s + 2, 4)));
            Matrix N = random_integrable_with_frac_valuation(ctx, static_cast<int>(rng.range(1, 2)), s, rng);
            auto st = normalize_step(N);
            R.check("input_valuation", st.s_in == s, idx, {N});
            R.check("gains_one", st.s_out >= s + 1, idx, {N});
            R.check("stays_integrable", is_integrable(st.N), idx, {N});
            R.check("is_base_change", base_change(N, st.U) == st.N, idx, {N});
        }
        R.cases = cases;
    });
}

// ---- full normalization on Frobenius-structured instances ----

inline SuiteResult normalize_main(std::uint64_t seed, long cases) {
    return detail::timed("normalize", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 9));
        long iters = 0;
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.coin() ? 2 : 3, static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(3, 4)));
            const int r = static_cast<int>(rng.range(1, 3));
            auto inst = random_frobenius_structured(ctx, r, rng);
            R.check("input_integrable", is_integrable(inst.N), idx, {inst.N});
            R.check("input_frac_valuation", vp(frac_part(inst.N)) >= 1, idx, {inst.N});
            NormalizeResult res;
            try {
                res = normalize(inst.N, 4 * ctx.m);
            } catch (const Error& e) {
                R.check("terminates", false, idx, {inst.N});
                continue;
            }
            iters += res.iterations;
            R.check("terminates", res.iterations <= ctx.m, idx, {inst.N});
            R.check("frac_zero", frac_part(res.N).is_zero(), idx, {inst.N});
            R.check("base_change", base_change(inst.N, res.U) == res.N, idx, {inst.N});
            R.check("curvature_zero", is_integrable(res.N), idx, {inst.N});
            R.check("horizontal_to_tF_image", horizontal_check(res.N, inst.classical, truncate(inst.gauge * res.U.U)), idx,
                    {inst.N, inst.classical, inst.gauge});
            bool loop = true;
            for (std::size_t l = 0; l < res.trace.size(); ++l) {
                const Matrix& Nl = res.trace[l];
                loop = loop && vp(Nl) >= 0 && vp(frac_part(Nl)) > static_cast<long>(l);
                if (l + 1 < res.trace.size()) loop = loop && truncate(res.trace[l + 1] - Nl, static_cast<int>(l) + 1).is_zero();
            }
            R.check("loop_invariants", loop, idx, {inst.N});
        }
        R.cases = cases;
        R.notes["total_iterations"] = std::to_string(iters);
    });
}

// ---- lifting along projectors ----

inline SuiteResult lifting(std::uint64_t seed, long cases) {
    return detail::timed("lifting", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 10));
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.coin() ? 2 : 3, 2, static_cast<int>(rng.range(2, 3)));
            auto inst = random_projector_instance(ctx, static_cast<int>(rng.range(2, 3)), rng);
            Matrix N = lift_connection(inst.A, inst.P);
            R.check("restricts", truncate(inst.P * N) == inst.A, idx, {inst.A, inst.P});
            R.check("leibniz_compatible", truncate(N * inst.P + d(inst.P)) == inst.A, idx, {inst.A, inst.P});
            R.check("curvature_dPPdP", curvature(N) == truncate(d(inst.P) * inst.P * d(inst.P)), idx, {inst.A, inst.P});
        }
        R.cases = cases;
    });
}

// ---- overconvergence under frp base change ----

inline SuiteResult overconvergence(std::uint64_t seed, long cases) {
    return detail::timed("overconvergence", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 11));
        const mpq_class q34(3, 4);
        long tried = 0, rejected = 0;
        while (tried < cases) {
            auto ctx = Context::make(rng.coin() ? 2 : 3, 2, static_cast<int>(rng.range(2, 3)));
            const int r = static_cast<int>(rng.range(1, 2));
            Matrix U = random_frp_perturbation(ctx, r, rng, 0, 2, 2);
            Matrix W = truncate(U - Matrix::identity(ctx, r));
            Matrix N(ctx, r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) N.at(i, j) = random_truncated_form(ctx, rng, {2, 2, 2, 1, 1});
            std::vector<Form> samples(N.entries());
            samples.insert(samples.end(), W.entries().begin(), W.entries().end());
            auto eps = find_delta(samples);
            if (!eps || W.is_zero() || !overconvergence_condition(N, *eps) || zeta_check(W, *eps) < XRational::of(q34)) {
                ++rejected;
                continue;
            }
            const long idx = tried++;
            BaseChange B = invert(U);
            R.check("left_multiplication", overconvergence_condition(truncate(U * N), *eps), idx, {N, U});
            R.check("conjugation", overconvergence_condition(truncate(B.inverse * N * U), *eps), idx, {N, U});
            R.check("special_product", zeta_check(truncate(B.inverse * d(U)), *eps) >= XRational::of(q34), idx, {U});
        }
        R.cases = cases;
        R.notes["rejected_draws"] = std::to_string(rejected);
    });
}

// ---- idempotents fixed by F ----

inline SuiteResult idempotents(std::uint64_t seed, long cases) {
    return detail::timed("idempotents", seed, [&](SuiteResult& R) {
        Rng rng(detail::mix(seed, 12));
        for (long idx = 0; idx < cases; ++idx) {
            auto ctx = Context::make(rng.coin() ? 2 : 3, static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(1, 4)));
            const int r = static_cast<int>(rng.range(1, 3));
            Matrix P = random_constant_idempotent(ctx, r, rng);
            R.check("d_vanishes", idempotent_frobenius_check(P) == IdempotentFrobenius::holds, idx, {P});
            auto s = schanuel_complement(P, Matrix(ctx, r, r));
            R.check("block_projectors",
                    congruent(s.Q * s.Q, s.Q) && truncate(s.complement * s.Q).is_zero() &&
                        truncate(s.Q + s.complement) == Matrix::identity(ctx, 2 * r),
                    idx, {P});
        }
        R.cases = cases;
    });
}

struct SuiteSpec {
    const char* name;
    SuiteResult (*run)(std::uint64_t, long);
};

inline const std::vector<SuiteSpec>& all_suites() {
    static const std::vector<SuiteSpec> s{
        {"dga_axioms", dga_axioms},
        {"witt_oracle", witt_oracle},
        {"decomposition", decomposition},
        {"inequalities", inequalities},
        {"pseudovaluation", pseudovaluation},
        {"rng_identity", rng_identity},
        {"connection_calculus", connection_calculus},
        {"normalize_step_gain", normalize_step_gain},
        {"normalize", normalize_main},
        {"lifting", lifting},
        {"overconvergence", overconvergence},
        {"idempotents", idempotents},
    };
    return s;
}

}  // namespace drw::selftest
