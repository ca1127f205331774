#pragma once

#include "drw/arith.hpp"

#include <map>
#include <vector>

namespace drw {

// sparse polynomial over Z in n variables, exponent vector -> coefficient
using Exps = std::vector<long>;
using Poly = std::map<Exps, mpz_class>;

inline void poly_add_term(Poly& a, const Exps& e, const mpz_class& c) {
    if (c == 0) return;
    auto [it, fresh] = a.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) a.erase(it);
    }
}

// reduce coefficients into [0, M); M == 0 means no reduction
inline Poly poly_reduce(const Poly& a, const mpz_class& M) {
    if (M == 0) return a;
    Poly r;
    for (const auto& [e, c] : a) {
        mpz_class v = mod_pm(c, M);
        if (v != 0) r.emplace(e, v);
    }
    return r;
}

inline Poly poly_add(const Poly& a, const Poly& b, const mpz_class& M = 0, long sign = 1) {
    Poly r = a;
    for (const auto& [e, c] : b) poly_add_term(r, e, sign * c);
    return poly_reduce(r, M);
}

inline Poly poly_mul(const Poly& a, const Poly& b, const mpz_class& M = 0) {
    Poly r;
    Exps e;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            e.resize(ea.size());
            for (std::size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
            poly_add_term(r, e, ca * cb);
        }
    return poly_reduce(r, M);
}

inline Poly poly_one(int n) { return Poly{{Exps(static_cast<std::size_t>(n), 0), 1}}; }

inline Poly poly_var(int n, int i) {
    Exps e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return Poly{{e, 1}};
}

inline Poly poly_pow(Poly base, unsigned long k, int n, const mpz_class& M = 0) {
    Poly r = poly_one(n);
    while (k) {
        if (k & 1) r = poly_mul(r, base, M);
        k >>= 1;
        if (k) base = poly_mul(base, base, M);
    }
    return poly_reduce(r, M);
}

inline Poly poly_scale(const Poly& a, const mpz_class& s, const mpz_class& M = 0) {
    Poly r;
    for (const auto& [e, c] : a) poly_add_term(r, e, c * s);
    return poly_reduce(r, M);
}

// g(F_1, ..., F_n)
inline Poly poly_compose(const Poly& g, const std::vector<Poly>& subs, const mpz_class& M = 0) {
    int n = static_cast<int>(subs.size());
    Poly r;
    std::vector<std::map<long, Poly>> cache(static_cast<std::size_t>(n));
    for (const auto& [e, c] : g) {
        Poly t{{Exps(static_cast<std::size_t>(n), 0), c}};
        for (int i = 0; i < n; ++i) {
            long ei = e[static_cast<std::size_t>(i)];
            if (ei == 0) continue;
            auto& slot = cache[static_cast<std::size_t>(i)];
            auto it = slot.find(ei);
            if (it == slot.end()) it = slot.emplace(ei, poly_pow(subs[static_cast<std::size_t>(i)], static_cast<unsigned long>(ei), n, M)).first;
            t = poly_mul(t, it->second, M);
        }
        for (const auto& [et, ct] : t) poly_add_term(r, et, ct);
    }
    return poly_reduce(r, M);
}

}  // namespace drw
