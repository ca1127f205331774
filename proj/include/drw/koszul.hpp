#pragma once

#include "drw/form.hpp"

namespace drw {

// Contracting homotopy for d on one fractional weight k: h = (1/k_{i0}) * interior product with dlog_{i0}.
// d h + h d = id on fractional weights; h vanishes on integral weights.
inline Form homotopy(const Form& a) {
    const Context& ctx = a.ctx();
    Form r(ctx);
    for (const auto& [k, c] : a.terms()) {
        if (k.w.is_integral()) continue;
        int i0 = k.w.i0();
        if (!((k.I >> i0) & 1u)) continue;
        mpq_class ci = c / k.w.coord(i0, ctx.p);
        if (std::popcount(k.I & ((1u << i0) - 1u)) & 1) ci = -ci;
        r.add_term({k.w, k.I & ~(1u << i0)}, ci);
    }
    return r;
}

inline Form integral_weight_part(const Form& a) {
    return a.filter([](const Key& k, const mpq_class&) { return k.w.is_integral(); });
}

inline Form fractional_weight_part(const Form& a) {
    return a.filter([](const Key& k, const mpq_class&) { return !k.w.is_integral(); });
}

}  // namespace drw
