#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace drw {

enum class ErrorKind { context_mismatch, non_integral, precondition, overflow, parse, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline constexpr long kInfinity = std::numeric_limits<long>::max();

inline bool is_prime(long p) {
    if (p < 2) return false;
    for (long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

inline mpz_class zpow(long p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

// p-adic valuation; kInfinity for zero
inline long vp(const mpz_class& x, long p) {
    if (x == 0) return kInfinity;
    mpz_class t(x), pz(p);
    return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t()));
}

inline long vp(const mpq_class& x, long p) {
    if (x == 0) return kInfinity;
    return vp(x.get_num(), p) - vp(x.get_den(), p);
}

// residue of an element of Z_(p) in [0, M); M must be a power of p
inline mpz_class mod_pm(const mpq_class& c, const mpz_class& M) {
    mpz_class r;
    if (c.get_den() == 1) {
        mpz_fdiv_r(r.get_mpz_t(), c.get_num_mpz_t(), M.get_mpz_t());
        return r;
    }
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), c.get_den_mpz_t(), M.get_mpz_t()) == 0)
        throw Error(ErrorKind::non_integral, "coefficient has p in its denominator");
    r = c.get_num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
    return r;
}

inline mpz_class mod_pm(const mpz_class& c, const mpz_class& M) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), M.get_mpz_t());
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::overflow, "weight numerator overflow");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::overflow, "weight numerator overflow");
    return r;
}

inline std::int64_t ipow(std::int64_t p, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, p);
    return r;
}

// Extended rational with +infinity, used for valuations and zeta values.
struct XRational {
    bool inf = true;
    mpq_class v = 0;

    static XRational infinity() { return {}; }
    static XRational of(const mpq_class& q) { return {false, q}; }

    friend bool operator==(const XRational& a, const XRational& b) {
        return a.inf == b.inf && (a.inf || a.v == b.v);
    }
    friend bool operator<(const XRational& a, const XRational& b) {
        if (a.inf) return false;
        if (b.inf) return true;
        return a.v < b.v;
    }
    friend bool operator<=(const XRational& a, const XRational& b) { return !(b < a); }
    friend bool operator>=(const XRational& a, const XRational& b) { return !(a < b); }
    friend bool operator>(const XRational& a, const XRational& b) { return b < a; }
    friend XRational operator+(const XRational& a, const XRational& b) {
        if (a.inf || b.inf) return infinity();
        return of(a.v + b.v);
    }
    friend XRational operator+(const XRational& a, const mpq_class& b) {
        if (a.inf) return a;
        return of(a.v + b);
    }
    friend XRational operator-(const XRational& a, const mpq_class& b) {
        if (a.inf) return a;
        return of(a.v - b);
    }
    std::string str() const { return inf ? std::string("inf") : v.get_str(); }
};

inline XRational xmin(const XRational& a, const XRational& b) { return b < a ? b : a; }

}  // namespace drw
