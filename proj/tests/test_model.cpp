#include <catch_amalgamated.hpp>

#include "drw/model.hpp"
#include "helpers.hpp"

using namespace drw;
using namespace drw::testing;

TEST_CASE("sums and scalar arithmetic") {
    auto ctx = Context::make(3, 1, 3);
    Form x = X(ctx, 0);
    CHECK((x + Form(ctx)) == x);
    CHECK((x - x).is_zero());
    Form v = mono(ctx, 3, {{1, 1}});
    CHECK(v + v == mono(ctx, 6, {{1, 1}}));
}

TEST_CASE("products") {
    auto ctx = Context::make(3, 2, 3);
    CHECK(mono(ctx, 3, {{1, 1}, {0, 0}}) * mono(ctx, 3, {{2, 1}, {0, 0}}) == mono(ctx, 9, {{1, 0}, {0, 0}}));
    Form xdl = mono(ctx, 1, {{1, 0}, {0, 0}}, 0b01);
    CHECK((xdl * xdl).is_zero());
    Form ydl = mono(ctx, 1, {{0, 0}, {1, 0}}, 0b10);
    CHECK(ydl * xdl == mono(ctx, -1, {{1, 0}, {1, 0}}, 0b11));
    Form one = Form::constant(ctx, 1);
    CHECK(one * ydl == ydl);
}

TEST_CASE("differential") {
    auto ctx = Context::make(3, 1, 3);
    CHECK(d(X(ctx, 0)) == mono(ctx, 1, {{1, 0}}, 1));
    CHECK(d(mono(ctx, 3, {{1, 1}})) == mono(ctx, 1, {{1, 1}}, 1));
    CHECK(d(mono(ctx, 1, {{1, 1}}, 1)).is_zero());
    auto c2 = Context::make(3, 2, 3);
    // d(y dlog1) = y dlog2 ^ dlog1 = -y dlog1 ^ dlog2
    CHECK(d(mono(c2, 1, {{1, 0}, {1, 0}}, 0b01)) == mono(c2, -1, {{1, 0}, {1, 0}}, 0b11));
}

TEST_CASE("Frobenius and Verschiebung") {
    auto ctx = Context::make(3, 1, 3);
    CHECK(F(X(ctx, 0)) == mono(ctx, 1, {{3, 0}}));
    CHECK(F(mono(ctx, 1, {{1, 1}}, 1)) == mono(ctx, 1, {{1, 0}}, 1));
    CHECK(F(Form::constant(ctx, 1)) == Form::constant(ctx, 1));
    CHECK(V(X(ctx, 0)) == mono(ctx, 3, {{1, 1}}));
    Form w = mono(ctx, 1, {{2, 0}}, 1);
    CHECK(F(V(w)) == mpq_class(3) * w);
    CHECK(V(Form::constant(ctx, 1)) == Form::constant(ctx, 3));
}

TEST_CASE("integrality and valuation") {
    auto ctx = Context::make(3, 1, 3);
    CHECK_FALSE(is_integral(mono(ctx, 1, {{1, 1}})));
    CHECK(is_integral(mono(ctx, 3, {{1, 1}})));
    CHECK(is_integral(mono(ctx, 1, {{1, 1}}, 1)));
    CHECK(vp_form(Form(ctx)) == kInfinity);
    CHECK(vp_form(mono(ctx, 3, {{1, 1}})) == 0);
    CHECK(vp_form(mono(ctx, 9, {{2, 1}})) == 1);
    CHECK_THROWS_AS(vp_form(mono(ctx, 1, {{1, 1}})), Error);
}

TEST_CASE("truncation") {
    auto c2 = Context::make(3, 1, 2);
    CHECK(truncate(mono(c2, 9, {{1, 0}})).is_zero());
    Form w = mono(c2, 1, {{1, 1}}, 1);
    CHECK(truncate(w) == w);
    auto c1 = Context::make(3, 1, 1);
    CHECK(truncate(mono(c1, 1, {{1, 1}}, 1)).is_zero());
    CHECK_THROWS_AS(truncate(mono(c2, 1, {{1, 1}})), Error);
}

TEST_CASE("Teichmuller representatives") {
    auto ctx = Context::make(2, 2, 2);
    Poly f = poly_add(poly_var(2, 0), poly_var(2, 1));
    Form expect = X(ctx, 0) + X(ctx, 1) + mono(ctx, 2, {{1, 1}, {1, 1}});
    CHECK(teichmuller(f, ctx) == expect);
    CHECK(teichmuller(poly_one(2), ctx) == Form::constant(ctx, 1));
    Poly x2 = poly_pow(poly_var(2, 0), 2, 2);
    CHECK(teichmuller(x2, ctx) == mono(ctx, 1, {{2, 0}, {0, 0}}));
}
