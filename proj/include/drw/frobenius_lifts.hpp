#pragma once

#include "drw/model.hpp"

#include <utility>
#include <vector>

namespace drw {

// sum of c x^beta dx_{i1} ^ ... ^ dx_{it} over Z, indices as a bitmask
using CharZeroForm = std::map<std::pair<Exps, DlogSet>, mpz_class>;

inline void cz_add_term(CharZeroForm& w, const Exps& e, DlogSet I, const mpz_class& c) {
    if (c == 0) return;
    auto [it, fresh] = w.try_emplace({e, I}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) w.erase(it);
    }
}

inline CharZeroForm cz_reduce(const CharZeroForm& w, const mpz_class& M) {
    CharZeroForm r;
    for (const auto& [k, c] : w) cz_add_term(r, k.first, k.second, mod_pm(c, M));
    return r;
}

inline CharZeroForm cz_from_poly(const Poly& g) {
    CharZeroForm r;
    for (const auto& [e, c] : g) cz_add_term(r, e, 0, c);
    return r;
}

inline CharZeroForm cz_mul(const CharZeroForm& a, const CharZeroForm& b) {
    CharZeroForm r;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            int s = merge_sign(ka.second, kb.second);
            if (s == 0) continue;
            Exps e(ka.first.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ka.first[i] + kb.first[i];
            cz_add_term(r, e, ka.second | kb.second, s * ca * cb);
        }
    return r;
}

// classical de Rham differential
inline CharZeroForm cz_d(const CharZeroForm& w) {
    CharZeroForm r;
    for (const auto& [k, c] : w) {
        const auto& [e, I] = k;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if ((I >> j) & 1u || e[j] == 0) continue;
            Exps e2 = e;
            --e2[j];
            mpz_class cj = c * e[j];
            if (std::popcount(I & ((1u << j) - 1u)) & 1) cj = -cj;
            cz_add_term(r, e2, I | (1u << j), cj);
        }
    }
    return r;
}

struct FrobeniusLift {
    std::vector<Poly> F;

    static FrobeniusLift canonical(int n, long p) {
        FrobeniusLift L;
        for (int i = 0; i < n; ++i) L.F.push_back(poly_pow(poly_var(n, i), static_cast<unsigned long>(p), n));
        return L;
    }

    // F(x_i) = x_i^p + p x_i
    static FrobeniusLift linear_perturbation(int n, long p) {
        FrobeniusLift L = canonical(n, p);
        for (int i = 0; i < n; ++i) L.F[i] = poly_add(L.F[i], poly_scale(poly_var(n, i), p));
        return L;
    }

    void validate(const Context& ctx) const {
        if (static_cast<int>(F.size()) != ctx.n) throw Error(ErrorKind::precondition, "lift has wrong number of polynomials");
        for (int i = 0; i < ctx.n; ++i) {
            Poly diff = poly_add(F[i], poly_pow(poly_var(ctx.n, i), static_cast<unsigned long>(ctx.p), ctx.n), mpz_class(ctx.p), -1);
            if (!diff.empty()) throw Error(ErrorKind::precondition, "lift does not reduce to x_i^p mod p");
        }
    }

    // pullback of a classical form: x^beta -> F^beta, dx_i -> d(F_i)
    CharZeroForm apply(const CharZeroForm& w, const mpz_class& M) const {
        int n = static_cast<int>(F.size());
        std::vector<CharZeroForm> dF;
        for (int i = 0; i < n; ++i) dF.push_back(cz_d(cz_from_poly(F[i])));
        CharZeroForm r;
        for (const auto& [k, c] : w) {
            CharZeroForm t = cz_from_poly(poly_scale(poly_compose(Poly{{k.first, 1}}, F, M), c, M));
            for (int i : dlog_indices(k.second)) t = cz_reduce(cz_mul(t, dF[i]), M);
            for (const auto& [kt, ct] : t) cz_add_term(r, kt.first, kt.second, ct);
        }
        return cz_reduce(r, M);
    }
};

inline void require_degree_zero(const Form& a, const char* op) {
    for (const auto& [k, c] : a.terms())
        if (k.I != 0) throw Error(ErrorKind::precondition, std::string(op) + ": form must have degree 0");
}

// integral-weight part of F^r(a), mod p^{r+1}
inline Poly ghost(const Form& a, int r) {
    require_degree_zero(a, "ghost");
    require_integral(a, "ghost");
    if (r < 0) throw Error(ErrorKind::precondition, "ghost: negative index");
    Form fa = a;
    for (int i = 0; i < r; ++i) fa = F(fa);
    const mpz_class M = zpow(a.ctx().p, r + 1);
    Poly g;
    for (const auto& [k, c] : fa.terms())
        if (k.w.is_integral()) poly_add_term(g, k.w.exponents(), mod_pm(c, M));
    return poly_reduce(g, M);
}

inline Form from_witt_coordinates(const std::vector<Poly>& coords, const Context& ctx) {
    if (static_cast<int>(coords.size()) != ctx.m) throw Error(ErrorKind::precondition, "from_witt_coordinates: need m coordinates");
    Form r(ctx);
    for (int i = 0; i < ctx.m; ++i) {
        Form t = teichmuller(coords[i], ctx, ctx.m - i);
        for (int j = 0; j < i; ++j) t = V(t);
        r += t;
    }
    return truncate(r);
}

namespace detail {

inline void peel_witt(const Form& b, int level, std::vector<Poly>& out) {
    const Context& ctx = b.ctx();
    Poly a0;
    for (const auto& [k, c] : b.terms())
        if (k.w.is_integral()) poly_add_term(a0, k.w.exponents(), mod_pm(c, mpz_class(ctx.p)));
    a0 = poly_reduce(a0, mpz_class(ctx.p));
    out.push_back(a0);
    if (level == 1) return;
    Form rest = truncate(b - teichmuller(a0, ctx, level), level);
    Form next = mpq_class(mpz_class(1), mpz_class(ctx.p)) * F(rest);
    if (!is_integral(next)) throw Error(ErrorKind::precondition, "to_witt_coordinates: peeling residue is not integral");
    peel_witt(truncate(next, level - 1), level - 1, out);
}

}  // namespace detail

inline std::vector<Poly> to_witt_coordinates(const Form& a) {
    require_degree_zero(a, "to_witt_coordinates");
    require_integral(a, "to_witt_coordinates");
    std::vector<Poly> out;
    detail::peel_witt(truncate(a), a.ctx().m, out);
    return out;
}

// Witt coordinates of the element whose ghost components are given (ghosts[r] known mod p^{r+1})
inline std::vector<Poly> witt_from_ghosts(const std::vector<Poly>& ghosts, const Context& ctx) {
    const long p = ctx.p;
    std::vector<Poly> coords;
    for (int r = 0; r < static_cast<int>(ghosts.size()); ++r) {
        const mpz_class mod = zpow(p, r + 1);
        Poly acc = poly_reduce(ghosts[r], mod);
        for (int i = 0; i < r; ++i) {
            Poly t = poly_pow(coords[i], static_cast<unsigned long>(ipow(p, r - i)), ctx.n, mod);
            acc = poly_add(acc, poly_scale(t, zpow(p, i), mod), mod, -1);
        }
        const mpz_class pr = zpow(p, r);
        Poly ar;
        for (const auto& [e, c] : acc) {
            if (!mpz_divisible_p(c.get_mpz_t(), pr.get_mpz_t()))
                throw Error(ErrorKind::internal, "ghost components violate the Dwork congruence");
            poly_add_term(ar, e, mpz_class(c / pr));
        }
        coords.push_back(poly_reduce(ar, mpz_class(p)));
    }
    return coords;
}

// t_F(g): the integral degree-0 form whose r-th ghost is F^r(g) mod p^{r+1}
inline Form tF_scalar(const Poly& g, const FrobeniusLift& lift, const Context& ctx) {
    lift.validate(ctx);
    const mpz_class M = ctx.pm();
    std::vector<Poly> ghosts{poly_reduce(g, M)};
    for (int r = 1; r < ctx.m; ++r) ghosts.push_back(poly_compose(ghosts.back(), lift.F, M));
    return from_witt_coordinates(witt_from_ghosts(ghosts, ctx), ctx);
}

// dga extension: coefficients through t_F, dx_i -> d(t_F(x_i))
class TFMap {
public:
    TFMap(const FrobeniusLift& lift, const Context& ctx) : ctx_(ctx) {
        for (int i = 0; i < ctx.n; ++i) {
            xs_.push_back(tF_scalar(poly_var(ctx.n, i), lift, ctx));
            dxs_.push_back(truncate(d(xs_.back())));
        }
    }

    Form scalar_monomial(const Exps& e) const {
        Form t = Form::constant(ctx_, 1);
        for (int i = 0; i < ctx_.n; ++i)
            for (long k = 0; k < e[static_cast<std::size_t>(i)]; ++k) t = truncate(t * xs_[i]);
        return t;
    }

    Form operator()(const CharZeroForm& w) const {
        Form r(ctx_);
        for (const auto& [k, c] : w) {
            Form t = scalar_monomial(k.first);
            for (int i : dlog_indices(k.second)) t = truncate(t * dxs_[i]);
            r += mpq_class(c) * t;
        }
        return truncate(r);
    }

    const Form& x(int i) const { return xs_[i]; }

private:
    Context ctx_;
    std::vector<Form> xs_;
    std::vector<Form> dxs_;
};

inline Form tF_form(const CharZeroForm& w, const FrobeniusLift& lift, const Context& ctx) { return TFMap(lift, ctx)(w); }

// phi = p^i F on degree i
inline Form phi_twist(const Form& a) {
    Form r(a.ctx());
    for (const auto& [k, c] : a.terms())
        r.add_term({k.w.times_p(a.ctx().p), k.I}, c * zpow(a.ctx().p, dlog_degree(k.I)));
    return r;
}

}  // namespace drw
