#pragma once

// Classical Witt vectors over F_p[x_1..x_n], by ghost-component recursion over Z.
// Deliberately self-contained: its own polynomial arithmetic, nothing from the model.

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <vector>

namespace drw::classical_witt {

using Mono = std::vector<long>;
using ZPoly = std::map<Mono, mpz_class>;

inline void reduce(ZPoly& a, const mpz_class& M) {
    for (auto it = a.begin(); it != a.end();) {
        mpz_class c;
        mpz_fdiv_r(c.get_mpz_t(), it->second.get_mpz_t(), M.get_mpz_t());
        if (c == 0) {
            it = a.erase(it);
        } else {
            it->second = c;
            ++it;
        }
    }
}

inline ZPoly add(const ZPoly& a, const ZPoly& b, const mpz_class& M, int sign = 1) {
    ZPoly r = a;
    for (const auto& [e, c] : b) r[e] += sign * c;
    reduce(r, M);
    return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const mpz_class& M) {
    ZPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Mono e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r[e] += ca * cb;
        }
    reduce(r, M);
    return r;
}

inline ZPoly scale(const ZPoly& a, const mpz_class& s, const mpz_class& M) {
    ZPoly r;
    for (const auto& [e, c] : a) r[e] = c * s;
    reduce(r, M);
    return r;
}

inline ZPoly power(ZPoly b, unsigned long k, int n, const mpz_class& M) {
    ZPoly r{{Mono(static_cast<std::size_t>(n), 0), 1}};
    reduce(r, M);
    while (k) {
        if (k & 1) r = mul(r, b, M);
        k >>= 1;
        if (k) b = mul(b, b, M);
    }
    return r;
}

inline mpz_class ppow(long p, int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

// w_r = sum_{i<=r} p^i a_i^{p^{r-i}} mod p^{r+1}
inline ZPoly ghost(const std::vector<ZPoly>& a, int r, long p, int n) {
    const mpz_class M = ppow(p, r + 1);
    ZPoly w;
    for (int i = 0; i <= r; ++i) {
        unsigned long e = ppow(p, r - i).get_ui();
        w = add(w, scale(power(a[static_cast<std::size_t>(i)], e, n, M), ppow(p, i), M), M);
    }
    return w;
}

// coordinates mod p from ghost components (w_r known mod p^{r+1})
inline std::vector<ZPoly> from_ghosts(const std::vector<ZPoly>& w, long p, int n) {
    std::vector<ZPoly> a;
    for (int r = 0; r < static_cast<int>(w.size()); ++r) {
        const mpz_class M = ppow(p, r + 1);
        ZPoly acc = w[static_cast<std::size_t>(r)];
        reduce(acc, M);
        for (int i = 0; i < r; ++i) {
            unsigned long e = ppow(p, r - i).get_ui();
            acc = add(acc, scale(power(a[static_cast<std::size_t>(i)], e, n, M), ppow(p, i), M), M, -1);
        }
        ZPoly ar;
        const mpz_class pr = ppow(p, r);
        for (const auto& [e, c] : acc) {
            if (!mpz_divisible_p(c.get_mpz_t(), pr.get_mpz_t())) throw std::logic_error("ghost vector is not a Witt vector");
            ar[e] = c / pr;
        }
        reduce(ar, mpz_class(p));
        a.push_back(ar);
    }
    return a;
}

enum class Op { sum, product };

// Witt sum/product of coordinate vectors of length m over F_p[x]
inline std::vector<ZPoly> combine(const std::vector<ZPoly>& a, const std::vector<ZPoly>& b, Op op, long p, int n) {
    const int m = static_cast<int>(a.size());
    std::vector<ZPoly> w;
    for (int r = 0; r < m; ++r) {
        const mpz_class M = ppow(p, r + 1);
        ZPoly ga = ghost(a, r, p, n), gb = ghost(b, r, p, n);
        w.push_back(op == Op::sum ? add(ga, gb, M) : mul(ga, gb, M));
    }
    return from_ghosts(w, p, n);
}

}  // namespace drw::classical_witt
