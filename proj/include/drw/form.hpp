#pragma once

#include "drw/arith.hpp"
#include "drw/weight.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace drw {

struct Context {
    long p = 2;
    int n = 1;
    int m = 1;
    int umax = 1;
    std::optional<long> dmax;

    static Context make(long p, int n, int m, std::optional<int> umax = std::nullopt,
                        std::optional<long> dmax = std::nullopt) {
        Context c{p, n, m, umax.value_or(std::max(m, 8)), dmax};
        c.validate();
        return c;
    }

    void validate() const {
        if (!is_prime(p)) throw Error(ErrorKind::precondition, "p must be prime");
        if (n < 1 || n > 30) throw Error(ErrorKind::precondition, "n must be in [1, 30]");
        if (m < 1) throw Error(ErrorKind::precondition, "m must be >= 1");
        if (umax < m) throw Error(ErrorKind::precondition, "u_max must be >= m");
        if (dmax && *dmax < 0) throw Error(ErrorKind::precondition, "d_max must be >= 0");
    }

    mpz_class pm() const { return zpow(p, m); }

    bool operator==(const Context&) const = default;
};

// dlog index set as a bitmask, bit i <-> dlog x_{i+1}
using DlogSet = std::uint32_t;

inline int dlog_degree(DlogSet I) { return std::popcount(I); }

inline std::vector<int> dlog_indices(DlogSet I) {
    std::vector<int> r;
    for (int i = 0; I >> i; ++i)
        if ((I >> i) & 1u) r.push_back(i);
    return r;
}

// sign of the shuffle bringing I ++ J into sorted order; 0 if they overlap
inline int merge_sign(DlogSet I, DlogSet J) {
    if (I & J) return 0;
    int inv = 0;
    for (DlogSet rest = J; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        inv += std::popcount(I >> (j + 1));
    }
    return (inv & 1) ? -1 : 1;
}

struct Key {
    Weight w;
    DlogSet I = 0;
    auto operator<=>(const Key&) const = default;
    bool operator==(const Key&) const = default;
};

class Form {
public:
    using Terms = std::map<Key, mpq_class>;

    Form() = default;
    explicit Form(const Context& c) : ctx_(c) {}

    static Form monomial(const Context& c, const mpq_class& coeff, const Weight& w, DlogSet I = 0) {
        Form f(c);
        f.add_term({w, I}, coeff);
        return f;
    }
    static Form constant(const Context& c, const mpq_class& v) { return monomial(c, v, Weight(c.n)); }
    static Form variable(const Context& c, int i) {
        std::vector<long> e(static_cast<std::size_t>(c.n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        return monomial(c, 1, Weight::integral(e));
    }

    const Context& ctx() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Key& k, const mpq_class& c) {
        if (c == 0) return;
        if (k.w.size() != ctx_.n) throw Error(ErrorKind::context_mismatch, "weight length differs from n");
        if (k.I >> ctx_.n) throw Error(ErrorKind::context_mismatch, "dlog index out of range");
        for (int i : dlog_indices(k.I))
            if (k.w[i].j == 0) throw Error(ErrorKind::precondition, "dlog x_i with zero exponent in x_i");
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // -1 for the zero form
    int max_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, dlog_degree(k.I));
        return d;
    }

    Form degree_part(int t) const {
        Form r(ctx_);
        for (const auto& [k, c] : terms_)
            if (dlog_degree(k.I) == t) r.terms_.emplace(k, c);
        return r;
    }

    template <class Pred>
    Form filter(Pred pred) const {
        Form r(ctx_);
        for (const auto& [k, c] : terms_)
            if (pred(k, c)) r.terms_.emplace(k, c);
        return r;
    }

    bool operator==(const Form& o) const { return ctx_ == o.ctx_ && terms_ == o.terms_; }

    Form& operator+=(const Form& o) {
        check_same(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check_same(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }

    void check_same(const Form& o) const {
        if (!(ctx_ == o.ctx_)) throw Error(ErrorKind::context_mismatch, "forms from different contexts");
    }

private:
    Context ctx_;
    Terms terms_;
};

inline Form operator+(Form a, const Form& b) { return a += b; }
inline Form operator-(Form a, const Form& b) { return a -= b; }
inline Form operator-(const Form& a) {
    Form r(a.ctx());
    for (const auto& [k, c] : a.terms()) r.add_term(k, -c);
    return r;
}
inline Form operator*(const mpq_class& s, const Form& a) {
    Form r(a.ctx());
    if (s == 0) return r;
    for (const auto& [k, c] : a.terms()) r.add_term(k, s * c);
    return r;
}

inline void check_weight_caps(const Context& ctx, const Weight& w) {
    if (w.u() > ctx.umax) throw Error(ErrorKind::overflow, "weight denominator exceeds u_max");
    if (ctx.dmax && w.total(ctx.p) > *ctx.dmax) throw Error(ErrorKind::overflow, "weight exceeds d_max");
}

// graded-commutative product
inline Form operator*(const Form& a, const Form& b) {
    a.check_same(b);
    const Context& ctx = a.ctx();
    Form r(ctx);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            int s = merge_sign(ka.I, kb.I);
            if (s == 0) continue;
            Weight w = Weight::sum(ka.w, kb.w, ctx.p);
            check_weight_caps(ctx, w);
            mpq_class c = ca * cb;
            if (s < 0) c = -c;
            r.add_term({std::move(w), ka.I | kb.I}, c);
        }
    return r;
}

// d(c x^k dlog_I) = sum_{i not in I} c k_i x^k dlog_i ^ dlog_I
inline Form d(const Form& a) {
    const Context& ctx = a.ctx();
    Form r(ctx);
    for (const auto& [k, c] : a.terms()) {
        for (int i = 0; i < ctx.n; ++i) {
            if ((k.I >> i) & 1u) continue;
            if (k.w[i].j == 0) continue;
            mpq_class ci = c * k.w.coord(i, ctx.p);
            if (std::popcount(k.I & ((1u << i) - 1u)) & 1) ci = -ci;
            r.add_term({k.w, k.I | (1u << i)}, ci);
        }
    }
    return r;
}

inline Form F(const Form& a) {
    Form r(a.ctx());
    for (const auto& [k, c] : a.terms()) r.add_term({k.w.times_p(a.ctx().p), k.I}, c);
    return r;
}

inline Form V(const Form& a) {
    const Context& ctx = a.ctx();
    Form r(ctx);
    for (const auto& [k, c] : a.terms()) {
        Weight w = k.w.div_p(ctx.p);
        check_weight_caps(ctx, w);
        r.add_term({std::move(w), k.I}, c * ctx.p);
    }
    return r;
}

inline long min_coeff_vp(const Form& a) {
    long v = kInfinity;
    for (const auto& [k, c] : a.terms()) v = std::min(v, vp(c, a.ctx().p));
    return v;
}

// all coefficients of a and of d(a) are p-integral
inline bool is_integral(const Form& a) { return min_coeff_vp(a) >= 0 && min_coeff_vp(d(a)) >= 0; }

// largest s with p^{-s} a integral; kInfinity for zero
inline long vp_form(const Form& a) {
    long v = std::min(min_coeff_vp(a), min_coeff_vp(d(a)));
    if (v < 0 && v != kInfinity) throw Error(ErrorKind::non_integral, "vp_form of a non-integral form");
    return v;
}

inline void require_integral(const Form& a, const char* op) {
    if (!is_integral(a)) throw Error(ErrorKind::non_integral, std::string(op) + ": input is not integral");
}

}  // namespace drw
