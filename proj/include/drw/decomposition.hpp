#pragma once

#include "drw/model.hpp"

#include <algorithm>
#include <vector>

namespace drw {

struct Decomposition {
    Form int_part;
    Form frp;
    Form dfrp;
    Form frac() const { return frp + dfrp; }
    Form total() const { return int_part + frp + dfrp; }
};

// W Omega = int + frp + d(frp): per fractional weight, dfrp = d(h(a_k)) and frp = a_k - dfrp
inline Decomposition decompose(const Form& a) {
    require_integral(a, "decompose");
    Form frac = fractional_weight_part(a);
    Form dfrp = d(homotopy(frac));
    return {integral_weight_part(a), frac - dfrp, dfrp};
}

inline bool is_frp_type(const Form& a) {
    for (const auto& [k, c] : a.terms())
        if (k.w.is_integral()) return false;
    return homotopy(a).is_zero();
}

inline bool is_dfrp_type(const Form& a) {
    for (const auto& [k, c] : a.terms())
        if (k.w.is_integral()) return false;
    return d(homotopy(a)) == a;
}

// the frp preimage under d of a d(frp)-type form
inline Form d_inverse(const Form& a) {
    Form b = homotopy(a);
    if (!(d(b) == a) || !is_integral(b))
        throw Error(ErrorKind::precondition, "d_inverse: input is not of d(frp) type");
    return b;
}

// Per-monomial weights of the pseudovaluation. v = v_p(coefficient), u = u(k), t = degree:
//   integral weight: v + int_bonus(t) - eps|k|
//   frp:             v + t/4 - u/8 - eps|k|
//   d(frp):          evaluated on the frp preimage h(.)
struct ZetaCalibration {
    mpq_class degree_slope{1, 4};
    mpq_class depth_slope{1, 8};
    mpq_class int_bonus_high{1, 4};
    int int_bonus_from = 2;

    mpq_class int_bonus(int t) const { return t >= int_bonus_from ? int_bonus_high : mpq_class(0); }
};

inline const ZetaCalibration& zeta_calibration() {
    static const ZetaCalibration c;
    return c;
}

namespace detail {

inline XRational zeta_int_terms(const Form& a, const mpq_class& eps) {
    const auto& cal = zeta_calibration();
    XRational z;
    for (const auto& [k, c] : a.terms())
        z = xmin(z, XRational::of(mpq_class(vp(c, a.ctx().p)) + cal.int_bonus(dlog_degree(k.I)) - eps * k.w.total(a.ctx().p)));
    return z;
}

inline XRational zeta_frp_terms(const Form& a, const mpq_class& eps) {
    const auto& cal = zeta_calibration();
    XRational z;
    for (const auto& [k, c] : a.terms())
        z = xmin(z, XRational::of(mpq_class(vp(c, a.ctx().p)) + cal.degree_slope * dlog_degree(k.I) -
                                  cal.depth_slope * k.w.u() - eps * k.w.total(a.ctx().p)));
    return z;
}

}  // namespace detail

inline XRational zeta(const Decomposition& D, const mpq_class& eps) {
    XRational z = detail::zeta_int_terms(D.int_part, eps);
    z = xmin(z, detail::zeta_frp_terms(D.frp, eps));
    z = xmin(z, detail::zeta_frp_terms(homotopy(D.dfrp), eps));
    return z;
}

inline XRational zeta(const Form& a, const mpq_class& eps) { return zeta(decompose(a), eps); }

// identity presentation: the sup over the fibre is attained at the element itself
inline XRational zeta_check(const Form& a, const mpq_class& eps) { return zeta(a, eps); }

struct OvercvBounds {
    mpq_class int_min{-1, 4};
    mpq_class frp_min{1, 2};
    mpq_class dfrp_min{3, 4};
};

inline bool satisfies_overconvergence_bounds(const Decomposition& D, const mpq_class& eps, const OvercvBounds& b = {}) {
    return zeta_check(D.int_part, eps) >= XRational::of(b.int_min) && zeta_check(D.frp, eps) >= XRational::of(b.frp_min) &&
           zeta_check(D.dfrp, eps) >= XRational::of(b.dfrp_min);
}

inline std::vector<mpq_class> default_epsilon_grid() {
    std::vector<mpq_class> g;
    for (int i = 1; i <= 12; ++i) g.emplace_back(mpz_class(1), zpow(2, i));
    return g;
}

// p^{-vp(a)} a
inline Form valuation_normalized(const Form& a) {
    long v = vp_form(a);
    if (v == 0 || v == kInfinity) return a;
    return mpq_class(mpz_class(1), zpow(a.ctx().p, v)) * a;
}

// largest grid epsilon for which every valuation-normalized sample meets the three bounds
inline std::optional<mpq_class> find_delta(const std::vector<Form>& samples, std::vector<mpq_class> grid = default_epsilon_grid()) {
    if (grid.empty()) throw Error(ErrorKind::precondition, "find_delta: empty grid");
    std::sort(grid.begin(), grid.end(), [](const mpq_class& x, const mpq_class& y) { return x > y; });
    std::vector<Decomposition> ds;
    for (const auto& s : samples) {
        require_integral(s, "find_delta");
        if (!s.is_zero()) ds.push_back(decompose(valuation_normalized(s)));
    }
    for (const auto& eps : grid) {
        if (eps <= 0) throw Error(ErrorKind::precondition, "find_delta: epsilon must be positive");
        bool ok = std::all_of(ds.begin(), ds.end(), [&](const Decomposition& D) { return satisfies_overconvergence_bounds(D, eps); });
        if (ok) return eps;
    }
    return std::nullopt;
}

}  // namespace drw
