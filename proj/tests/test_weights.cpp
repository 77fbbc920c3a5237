#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfreud/errors.hpp"
#include "qfreud/qcore.hpp"
#include "qfreud/weights.hpp"

#include "test_support.hpp"

using namespace qfreud;
using namespace qfreud::testing;

TEST_CASE("quartic and general forms agree at c = -1") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 50);
    for (long k : {0, 1, 2, 5, 20, 100}) {
        Real x = ctx.q_pow(k);
        Real general = weight(ctx, x, WeightKind::General);
        Real quartic = weight(ctx, x, WeightKind::Quartic);
        CHECK(abs(general - quartic) < pow10(-(50 - 10)) * quartic);
    }
}

TEST_CASE("point evaluation: special values and poles") {
    ModelContext a0 = make_ctx("0.8", "0", "0", 40);
    // alpha = 0, c = 0 at x = 1: (q^2; q^2)_inf
    Real got = weight(a0, Real(1));
    Real expected = q_pochhammer_inf(a0.q_sq(), a0.q_sq(), a0);
    CHECK(close_rel(got, expected, -35));
    // constant prefactor at x = 0 when alpha = 0
    CHECK(weight(a0, Real(0)) == 1);

    ModelContext a2 = make_ctx("0.8", "2", "0", 40);
    CHECK(weight(a2, Real(0)) == 0);

    ContextSettings neg;
    neg.q = "0.8";
    neg.alpha = "-0.5";
    neg.c = "0";
    neg.digits = 40;
    ModelContext an(neg);
    CHECK_THROWS_AS(weight(an, Real(0)), DomainError);
    CHECK_THROWS_AS(weight(an, Real(2)), DomainError);
}

TEST_CASE("weight is even and positive on the lattice") {
    ModelContext ctx = make_ctx("0.7", "1.5", "-0.4", 40);
    for (long k : {0, 1, 3, 9, 40}) {
        Real x = ctx.q_pow(k);
        Real wp = weight(ctx, x);
        Real wm = weight(ctx, -x);
        CHECK(wp == wm);  // exact: evaluation only sees x^2 and |x|
        CHECK(wp > 0);
    }
}

TEST_CASE("pearson residual vanishes to roundoff on the lattice") {
    struct Case {
        const char *q, *alpha, *c;
        long k;
        int sign;
    };
    for (const Case& t : {Case{"0.9", "5", "-1", 3, +1},
                          Case{"0.7", "0", "0", 4, +1},
                          Case{"0.5", "2", "-0.33333333333333333333333333333333333333333333333333", 2, -1}}) {
        ModelContext ctx = make_ctx(t.q, t.alpha, t.c, 50);
        Real x = t.sign * ctx.q_pow(t.k);
        Real res = pearson_residual(ctx, x);
        CHECK(abs(res) / weight(ctx, x) < pow10(-(50 - 10)));
    }

    ModelContext ctx = make_ctx("0.9", "5", "-1", 50);
    CHECK_THROWS_AS(pearson_residual(ctx, Real(1)), DomainError);       // k = 0
    CHECK_THROWS_AS(pearson_residual(ctx, Real("0.5")), DomainError);   // off-lattice
}

TEST_CASE("moments: parity, monotonicity, closed ratios") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 50);
    CHECK(moment(ctx, 1) == 0);
    CHECK(moment(ctx, 7) == 0);

    Real m0 = moment(ctx, 0);
    Real m2 = moment(ctx, 2);
    Real m4 = moment(ctx, 4);
    CHECK(m0 > 0);
    CHECK(m2 > 0);
    CHECK(m4 < m2);
    CHECK(m2 < m0);

    // m2/m0 at c = -1 equals (q^(alpha+1); q^4)_inf / (q^(alpha+3); q^4)_inf
    Real ratio = m2 / m0;
    Real closed = q_pochhammer_inf(ctx.q_pow(ctx.alpha() + 1), ctx.q_four(), ctx) /
                  q_pochhammer_inf(ctx.q_pow(ctx.alpha() + 3), ctx.q_four(), ctx);
    CHECK(close_rel(ratio, closed, -(50 - 10)));

    // m2/m0 at c = 0 equals 1 - q^(alpha+1)
    ModelContext c0 = make_ctx("0.7", "2", "0", 50);
    Real ratio0 = moment(c0, 2) / moment(c0, 0);
    CHECK(close_rel(ratio0, Real(1 - c0.q_pow(c0.alpha() + 1)), -(50 - 10)));
}

TEST_CASE("moment sums match the generic q-integral") {
    ModelContext ctx = make_ctx("0.6", "1", "-0.5", 40);
    for (unsigned k : {0u, 2u, 4u}) {
        Real direct = q_integral(
            [&](const Real& x) { return Real(pow(x, static_cast<int>(k)) * weight(ctx, x)); },
            ctx);
        CHECK(close_rel(moment(ctx, k), direct, -(40 - 5)));
    }
}

TEST_CASE("weight table matches point evaluation") {
    ModelContext ctx = make_ctx("0.85", "2.5", "-0.7", 40);
    WeightTable table = build_weight_table(ctx);
    CHECK(table.cutoff == ctx.lattice_cutoff());
    for (long k : {0L, 1L, 7L, table.cutoff / 2, table.cutoff}) {
        Real direct = weight(ctx, table.node[k]);
        CHECK(abs(table.w[k] - direct) < pow10(-(40 + 5)) * direct);
    }
}

TEST_CASE("q -> 1 limit approaches the modified Freud weight") {
    // w((1-q^4)^(1/4) x) -> |x|^alpha exp(-x^4 - 2 a x^2) with
    // c = -1 + a sqrt(1-q^4); checked at x = 1/2 over a q-grid.
    for (const char* a_str : {"0", "1"}) {
        PrecisionGuard guard(60);
        Real a(a_str);
        Real alpha("1.5");
        Real x("0.5");
        Real target = pow(x, alpha) * exp(-pow(x, 4) - 2 * a * x * x);
        Real prev_err(-1);
        for (const char* q_str : {"0.9", "0.99", "0.999"}) {
            Real q(q_str);
            Real root4 = pow(1 - pow(q, 4), Real(1) / 4);
            Real c = -1 + a * sqrt(1 - pow(q, 4));
            ModelContext ctx(q, alpha, c, 40);
            Real err = abs(weight(ctx, root4 * x) - target);
            if (prev_err >= 0) CHECK(err < prev_err);
            prev_err = err;
        }
    }
}
