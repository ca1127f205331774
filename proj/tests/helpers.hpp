#pragma once

#include "drw/form.hpp"

#include <initializer_list>
#include <utility>

namespace drw::testing {

inline Form mono(const Context& ctx, const mpq_class& c, std::initializer_list<std::pair<long, int>> k, DlogSet I = 0) {
    std::vector<Coord> cs;
    for (auto [j, u] : k) cs.push_back({j, u});
    return Form::monomial(ctx, c, Weight::from_pairs(cs, ctx.p), I);
}

inline Form X(const Context& ctx, int i) { return Form::variable(ctx, i); }

}  // namespace drw::testing
