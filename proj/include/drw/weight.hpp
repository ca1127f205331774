#pragma once

#include "drw/arith.hpp"

#include <compare>
#include <cstdint>
#include <vector>

namespace drw {

// one coordinate k_i = j / p^u, canonical: j == 0 => u == 0, u > 0 => p does not divide j
struct Coord {
    std::int64_t j = 0;
    int u = 0;
    auto operator<=>(const Coord&) const = default;
};

class Weight {
public:
    Weight() = default;
    explicit Weight(int n) : c_(static_cast<std::size_t>(n)) {}

    static Weight integral(const std::vector<long>& e) {
        Weight w(static_cast<int>(e.size()));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0) throw Error(ErrorKind::precondition, "negative exponent");
            w.c_[i] = {e[i], 0};
        }
        return w;
    }

    // throws on non-canonical pairs
    static Weight from_pairs(const std::vector<Coord>& cs, long p) {
        Weight w;
        w.c_ = cs;
        for (const auto& c : cs) {
            if (c.j < 0 || c.u < 0) throw Error(ErrorKind::parse, "negative weight entry");
            if (c.j == 0 && c.u != 0) throw Error(ErrorKind::parse, "zero weight must have u = 0");
            if (c.u > 0 && c.j % p == 0)
                throw Error(ErrorKind::parse, "weight numerator divisible by p with u > 0");
        }
        return w;
    }

    // exact rationals q_i with p-power denominators
    static Weight from_rationals(const std::vector<mpq_class>& qs, long p) {
        Weight w(static_cast<int>(qs.size()));
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const mpq_class& q = qs[i];
            if (q < 0) throw Error(ErrorKind::precondition, "negative exponent");
            long u = -vp(mpz_class(q.get_den()), p);
            mpz_class den = q.get_den();
            if (den != zpow(p, -u)) throw Error(ErrorKind::precondition, "exponent denominator is not a power of p");
            if (!q.get_num().fits_slong_p()) throw Error(ErrorKind::overflow, "weight too large");
            w.c_[i] = {q.get_num().get_si(), static_cast<int>(-u)};
        }
        return w;
    }

    int size() const { return static_cast<int>(c_.size()); }
    const Coord& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<Coord>& coords() const { return c_; }

    int u() const {
        int r = 0;
        for (const auto& c : c_) r = std::max(r, c.u);
        return r;
    }
    bool is_integral() const { return u() == 0; }

    // coordinate of maximal denominator exponent, smallest index on ties
    int i0() const {
        int best = 0;
        for (int i = 1; i < size(); ++i)
            if (c_[i].u > c_[best].u) best = i;
        return best;
    }

    mpq_class coord(int i, long p) const {
        const Coord& c = c_[static_cast<std::size_t>(i)];
        mpq_class q(mpz_class(static_cast<long>(c.j)), zpow(p, c.u));
        q.canonicalize();
        return q;
    }

    mpq_class total(long p) const {
        mpq_class s = 0;
        for (int i = 0; i < size(); ++i) s += coord(i, p);
        return s;
    }

    bool is_zero() const {
        for (const auto& c : c_)
            if (c.j != 0) return false;
        return true;
    }

    // integer exponents (requires integral weight)
    std::vector<long> exponents() const {
        std::vector<long> e;
        for (const auto& c : c_) e.push_back(static_cast<long>(c.j));
        return e;
    }

    static Weight sum(const Weight& a, const Weight& b, long p) {
        Weight r(a.size());
        for (int i = 0; i < a.size(); ++i) r.c_[i] = add_coord(a.c_[i], b.c_[i], p);
        return r;
    }

    Weight times_p(long p) const {
        Weight r(*this);
        for (auto& c : r.c_) {
            if (c.j == 0) continue;
            if (c.u > 0)
                --c.u;
            else
                c.j = checked_mul(c.j, p);
        }
        return r;
    }

    Weight div_p(long p) const {
        Weight r(*this);
        for (auto& c : r.c_) {
            if (c.j == 0) continue;
            if (c.j % p == 0 && c.u == 0)
                c.j /= p;
            else
                ++c.u;
        }
        return r;
    }

    auto operator<=>(const Weight&) const = default;
    bool operator==(const Weight&) const = default;

private:
    static Coord add_coord(const Coord& a, const Coord& b, long p) {
        if (a.j == 0) return b;
        if (b.j == 0) return a;
        int U = std::max(a.u, b.u);
        std::int64_t J = checked_add(checked_mul(a.j, ipow(p, U - a.u)), checked_mul(b.j, ipow(p, U - b.u)));
        while (U > 0 && J % p == 0) {
            J /= p;
            --U;
        }
        return {J, U};
    }

    std::vector<Coord> c_;
};

}  // namespace drw
