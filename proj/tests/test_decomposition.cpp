#include <catch_amalgamated.hpp>

#include "drw/generate.hpp"
#include "helpers.hpp"

using namespace drw;
using namespace drw::testing;

namespace {
mpq_class q(long a, long b) {
    mpq_class r(a, b);
    r.canonicalize();
    return r;
}
}  // namespace

TEST_CASE("decompose worked examples") {
    auto c2 = Context::make(3, 2, 3);
    Form a = mono(c2, 1, {{2, 0}, {0, 0}}, 0b01);
    auto D = decompose(a);
    CHECK(D.int_part == a);
    CHECK(D.frp.is_zero());
    CHECK(D.dfrp.is_zero());

    Form b = mono(c2, 3, {{1, 1}, {1, 0}}, 0b10);
    D = decompose(b);
    CHECK(D.int_part.is_zero());
    CHECK(D.frp == b);
    CHECK(D.dfrp.is_zero());

    Form c = mono(c2, 1, {{1, 1}, {1, 0}}, 0b01);
    D = decompose(c);
    CHECK(D.frp == mono(c2, -3, {{1, 1}, {1, 0}}, 0b10));
    CHECK(D.dfrp == c + mono(c2, 3, {{1, 1}, {1, 0}}, 0b10));
}

TEST_CASE("d_inverse worked examples") {
    auto c1 = Context::make(3, 1, 3);
    CHECK(d_inverse(Form(c1)).is_zero());
    CHECK(d_inverse(mono(c1, 1, {{1, 1}}, 1)) == mono(c1, 3, {{1, 1}}));
    auto c2 = Context::make(3, 2, 3);
    Form x = mono(c2, 1, {{1, 1}, {1, 0}}, 0b01) + mono(c2, 3, {{1, 1}, {1, 0}}, 0b10);
    CHECK(d_inverse(x) == mono(c2, 3, {{1, 1}, {1, 0}}));
    // unit denominators appear: k = 2/3 gives 1/k = 3/2
    CHECK(d_inverse(mono(c1, 1, {{2, 1}}, 1)) == mono(c1, q(3, 2), {{2, 1}}));
    CHECK_THROWS_AS(d_inverse(mono(c2, 3, {{1, 1}, {1, 0}}, 0b10)), Error);
}

TEST_CASE("zeta values") {
    auto c1 = Context::make(3, 1, 3);
    mpq_class eps = q(1, 8);
    CHECK(zeta(Form::constant(c1, 1), eps) == XRational::of(0));
    CHECK(zeta(X(c1, 0), eps) == XRational::of(-eps));
    // frp of degree 0 and depth 1: v - u/8 - eps|k|
    CHECK(zeta(mono(c1, 3, {{1, 1}}), eps) == XRational::of(q(7, 8) - eps / 3));
    CHECK(zeta(Form(c1), eps) == XRational::infinity());
    CHECK(zeta_check(Form(c1), eps) == XRational::infinity());
    Form f = mono(c1, 3, {{1, 1}});
    CHECK(zeta_check(f, eps) == zeta(f, eps));
    // d(frp) is valued through its preimage
    CHECK(zeta(d(f), eps) == zeta(f, eps));
}

TEST_CASE("find_delta") {
    auto c1 = Context::make(3, 1, 3);
    CHECK(find_delta({Form::constant(c1, 1)}) == q(1, 2));
    CHECK(find_delta({mono(c1, 3, {{1, 1}})}) == q(1, 2));
    CHECK(find_delta({X(c1, 0)}) == q(1, 4));
    CHECK(find_delta({mono(c1, 1, {{8, 0}})}) == q(1, 32));
    CHECK_THROWS_AS(find_delta({X(c1, 0)}, {}), Error);
}

TEST_CASE("projector laws on random forms") {
    Rng rng(11);
    for (long p : {2L, 3L, 5L})
        for (int n : {1, 2}) {
            auto ctx = Context::make(p, n, 3);
            for (int it = 0; it < 40; ++it) {
                Form a = random_form(ctx, rng);
                auto D = decompose(a);
                REQUIRE(D.total() == a);
                CHECK(is_integral(D.int_part));
                CHECK(is_integral(D.frp));
                CHECK(is_integral(D.dfrp));
                auto Df = decompose(D.frp);
                CHECK(Df.frp == D.frp);
                CHECK(Df.int_part.is_zero());
                CHECK(Df.dfrp.is_zero());
                auto Dd = decompose(D.dfrp);
                CHECK(Dd.dfrp == D.dfrp);
                CHECK(Dd.frp.is_zero());
                auto Ddf = decompose(d(D.frp));
                CHECK(Ddf.int_part.is_zero());
                CHECK(Ddf.frp.is_zero());
                CHECK(Ddf.dfrp == d(D.frp));
                CHECK(d_inverse(d(D.frp)) == D.frp);
                CHECK(d(d_inverse(D.dfrp)) == D.dfrp);
            }
        }
}

TEST_CASE("truncation is a congruence") {
    Rng rng(5);
    for (long p : {2L, 3L})
        for (int n : {1, 2})
            for (int m : {1, 2, 3}) {
                auto ctx = Context::make(p, n, m);
                for (int it = 0; it < 15; ++it) {
                    Form a = random_form(ctx, rng), b = random_form(ctx, rng);
                    Form ta = truncate(a), tb = truncate(b);
                    CHECK(truncate(ta) == ta);
                    CHECK(truncate(a * b) == truncate(ta * tb));
                    CHECK(truncate(a + b) == truncate(ta + tb));
                    CHECK(truncate(d(a)) == truncate(d(ta)));
                    CHECK(truncate(V(a)) == truncate(V(ta)));
                    // F lowers the filtration by one step in positive degree
                    CHECK(truncate(F(a), m - 1) == truncate(F(ta), m - 1));
                    CHECK(truncate(F(a.degree_part(0))) == truncate(F(ta.degree_part(0))));
                    CHECK(truncate(phi_twist(a)) == truncate(phi_twist(ta)));
                }
            }
}

TEST_CASE("frp times anything is frp mod p") {
    Rng rng(21);
    for (long p : {2L, 3L, 5L})
        for (int n : {1, 2}) {
            auto ctx = Context::make(p, n, 3);
            for (int it = 0; it < 30; ++it) {
                Form x = decompose(random_form(ctx, rng)).frp;
                Form y = random_form(ctx, rng);
                if (x.is_zero()) continue;
                auto D = decompose(x * y);
                CHECK(vp_form(D.int_part) > 0);
                CHECK(vp_form(D.dfrp) > 0);
            }
        }
}

// the product estimate zeta(ab) >= zeta(a) + zeta(b) does not survive two fractional factors;
// pinned so a change of the zeta weights that alters this is noticed
TEST_CASE("zeta product estimate fails for frac times frac") {
    auto c = Context::make(2, 1, 4);
    const mpq_class eps = q(1, 8);
    Form b = mono(c, 2, {{3, 1}});  // 2 x^{3/2}
    Form a = d(b);                  // 3 x^{3/2} dlog1
    CHECK(a == mono(c, 3, {{3, 1}}, 0b1));
    CHECK(zeta(b, eps) == XRational::of(q(11, 16)));
    CHECK(zeta(a, eps) == XRational::of(q(11, 16)));
    Form ab = a * b;
    CHECK(ab == mono(c, 6, {{3, 0}}, 0b1));
    CHECK(zeta(ab, eps) == XRational::of(q(5, 8)));
    CHECK(zeta(ab, eps) < zeta(a, eps) + zeta(b, eps));
    // with an integral-weight factor the estimate holds
    Form xi = mono(c, 1, {{1, 0}});
    CHECK(zeta(xi * b, eps) >= zeta(xi, eps) + zeta(b, eps));
}
