#pragma once

#include "drw/form.hpp"
#include "drw/koszul.hpp"
#include "drw/poly.hpp"

namespace drw {

// Canonical representative modulo Fil^level = V^level + dV^level.
// Integral-weight and frp coefficients are reduced into [0, p^level); the d(frp) part is
// reduced through its frp preimage, so that its class mod dV^level is kept exactly.
inline Form truncate(const Form& a, int level) {
    require_integral(a, "truncate");
    const Context& ctx = a.ctx();
    Form r(ctx);
    if (level <= 0) return r;
    const mpz_class M = zpow(ctx.p, level);
    Form frac(ctx);
    for (const auto& [k, c] : a.terms()) {
        if (k.w.is_integral())
            r.add_term(k, mpq_class(mod_pm(c, M)));
        else
            frac.add_term(k, c);
    }
    Form b = homotopy(frac);
    Form frp = frac - d(b);
    for (const auto& [k, c] : frp.terms()) r.add_term(k, mpq_class(mod_pm(c, M)));
    Form bred(ctx);
    for (const auto& [k, c] : b.terms()) bred.add_term(k, mpq_class(mod_pm(c, M)));
    r += d(bred);
    return r;
}

inline Form truncate(const Form& a) { return truncate(a, a.ctx().m); }

inline bool congruent(const Form& a, const Form& b, int level) { return truncate(a - b, level).is_zero(); }
inline bool congruent(const Form& a, const Form& b) { return congruent(a, b, a.ctx().m); }

// reduce polynomial coefficients into {0, ..., p-1}
inline Poly reduce_mod_p(const Poly& f, long p) { return poly_reduce(f, mpz_class(p)); }

inline Form poly_to_form(const Context& ctx, const Poly& g) {
    Form r(ctx);
    for (const auto& [e, c] : g) r.add_term({Weight::integral(e), 0}, mpq_class(c));
    return r;
}

// Teichmuller representative [f] mod Fil^level:
// (f~(x^{1/q}))^q with q = p^{level-1}, f~ the lift with coefficients in {0..p-1}
inline Form teichmuller(const Poly& f, const Context& ctx, int level) {
    Form r(ctx);
    if (level <= 0) return r;
    const long p = ctx.p;
    const unsigned long q = static_cast<unsigned long>(ipow(p, level - 1));
    Poly pw = poly_pow(reduce_mod_p(f, p), q, ctx.n, zpow(p, level));
    for (const auto& [e, c] : pw) {
        std::vector<mpq_class> qs;
        for (long ei : e) {
            mpq_class x(ei, static_cast<long>(q));
            x.canonicalize();
            qs.push_back(x);
        }
        Weight w = Weight::from_rationals(qs, p);
        check_weight_caps(ctx, w);
        r.add_term({std::move(w), 0}, mpq_class(c));
    }
    return truncate(r, level);
}

inline Form teichmuller(const Poly& f, const Context& ctx) { return teichmuller(f, ctx, ctx.m); }

}  // namespace drw
