#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfreud/errors.hpp"
#include "qfreud/painleve.hpp"
#include "qfreud/qcore.hpp"
#include "qfreud/weights.hpp"

#include "test_support.hpp"

#include <random>

using namespace qfreud;
using namespace qfreud::testing;

namespace {

Real recurrence_lhs(const ModelContext& ctx, long n, const Real& y_prev,
                    const Real& y_cur, const Real& y_next) {
    const Real& qa = ctx.q_alpha();
    return ctx.q_pow(n) / qa * (-ctx.c() * y_cur * y_next + qa) *
           (-ctx.c() * y_cur * y_prev + qa);
}

Real recurrence_rhs(const ModelContext& ctx, long n, const Real& y_cur) {
    const Real& qa = ctx.q_alpha();
    return n % 2 == 0 ? Real((qa - y_cur) * (qa - ctx.c() * y_cur) / qa)
                      : Real((1 - y_cur) * (1 - ctx.c() * y_cur));
}

}  // namespace

TEST_CASE("closed form for the first coefficient") {
    // c = 0 collapses to 1 - q^(alpha+1)
    ModelContext c0 = make_ctx("0.7", "2", "0", 50);
    CHECK(close_rel(y1_closed(c0), Real(1 - c0.q_pow(c0.alpha() + 1)), -(50 - 10)));

    // c = -1 equals the lattice moment ratio (also cross-checked internally)
    ModelContext cm1 = make_ctx("0.9", "5", "-1", 50);
    Real y1 = y1_closed(cm1);
    CHECK(close_rel(y1, Real(moment(cm1, 2) / moment(cm1, 0)), -(50 - 10)));

    // alpha = 0, c = -1: (q; q^4)_inf / (q^3; q^4)_inf
    ModelContext a0 = make_ctx("0.9", "0", "-1", 50);
    Real expected = q_pochhammer_inf(a0.q(), a0.q_four(), a0) /
                    q_pochhammer_inf(a0.q_pow(3), a0.q_four(), a0);
    CHECK(close_rel(y1_closed(a0), expected, -(50 - 10)));

    // generic c goes through the series ratio and still matches the moments
    ModelContext gen = make_ctx("0.5", "2", "-2.5", 50);
    CHECK(close_rel(y1_closed(gen), Real(moment(gen, 2) / moment(gen, 0)),
                    -(50 - 10)));
}

TEST_CASE("forward step solves the recurrence") {
    ModelContext ctx = make_ctx("0.5", "2", "-0.33333333333333333333333333333333333333333333333333", 50);
    Real y1 = y1_closed(ctx);
    Real y2 = forward_step(ctx, 1, Real(0), y1);

    // n = 1 closed form: (q^alpha - (1-y1)(1-c y1)/q) / (c y1)
    Real direct = (ctx.q_alpha() - (1 - y1) * (1 - ctx.c() * y1) / ctx.q()) /
                  (ctx.c() * y1);
    CHECK(close_rel(y2, direct, -(50 - 5)));

    // substituting back satisfies the recurrence at n = 1 to roundoff
    Real lhs = recurrence_lhs(ctx, 1, Real(0), y1, y2);
    Real rhs = recurrence_rhs(ctx, 1, y1);
    CHECK(abs(lhs - rhs) < pow10(-(50 + 3)));

    // c = -1: the quartic-case factorized equation holds as printed
    ModelContext cm1 = make_ctx("0.9", "5", "-1", 50);
    Real z1 = y1_closed(cm1);
    Real z2 = forward_step(cm1, 1, Real(0), z1);
    Real quartic_lhs = cm1.q_pow(1) / cm1.q_alpha() *
                       (z1 * z2 + cm1.q_alpha()) * (z1 * 0 + cm1.q_alpha());
    Real quartic_rhs = 1 - z1 * z1;
    CHECK(abs(quartic_lhs - quartic_rhs) < pow10(-(50 + 3)));

    CHECK_THROWS_AS(forward_step(ctx, 0, Real(0), y1), DomainError);
    CHECK_THROWS_AS(forward_step(ctx, 3, y1, Real(0)), SingularityError);
    ModelContext c0 = make_ctx("0.7", "2", "0", 50);
    CHECK_THROWS_AS(forward_step(c0, 1, Real(0), Real("0.5")), DomainError);
}

TEST_CASE("forward step reproduces the oracle") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 80);
    LatticeTable table = stieltjes(ctx, 12);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);
    for (long n : {1L, 4L, 9L}) {
        Real stepped = forward_step(ctx, n, oracle.y[n - 1], oracle.y[n]);
        CHECK(close_rel(stepped, oracle.y[n + 1], -(80 - 2 * 12 - 10)));
    }
}

TEST_CASE("c = 0 forward run returns the exact closed-form sequence") {
    ModelContext ctx = make_ctx("0.7", "2", "0", 60);
    CoefficientSequence seq = forward_run(ctx, 40);
    CHECK(seq.method == Method::closed_form);
    CHECK(!seq.first_anomaly);
    CHECK(seq.y[0] == 0);
    LatticeTable table = stieltjes(ctx, 12);
    for (unsigned n = 1; n <= 12; ++n)
        CHECK(close_rel(seq.y[n] * ctx.q_pow(static_cast<long>(n) - 1),
                        table.a_sq[n], -40));
}

TEST_CASE("lower-precision forward runs depart earlier") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 90);
    LatticeTable table = stieltjes(ctx, 24);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);

    auto divergence_index = [&](unsigned run_digits) {
        CoefficientSequence run =
            forward_run_from(ctx, oracle.y[1], 24, run_digits);
        for (long n = 2; n <= run.max_index(); ++n)
            if (abs(run.y[n] - oracle.y[n]) > pow10(-3)) return n;
        return run.max_index() + 1;
    };
    long low = divergence_index(15);
    long high = divergence_index(30);
    CHECK(low >= 2);
    CHECK(high > low);
}

TEST_CASE("recurrence residual: oracle sequence passes, a poke is localized") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 70);
    LatticeTable table = stieltjes(ctx, 16);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);

    ResidualReport clean = painleve_residual(ctx, oracle);
    CHECK(clean.max_abs() < pow10(-(70 - 2 * 16 - 10)));

    CoefficientSequence poked = oracle;
    poked.y[5] += pow10(-8);
    ResidualReport spiked = painleve_residual(ctx, poked);
    for (const auto& e : spiked.entries()) {
        if (e.index >= 4 && e.index <= 6)
            CHECK(abs(e.value) > pow10(-9));
        else
            CHECK(abs(e.value) < pow10(-12));
    }
}

TEST_CASE("critical factor stays away from zero on oracle data") {
    ModelContext ctx = make_ctx("0.5", "2", "-2.5", 60);
    LatticeTable table = stieltjes(ctx, 14);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);
    Real floor = ctx.q_alpha();  // -c y y' >= 0 keeps the factor above q^alpha
    for (long n = 1; n < oracle.max_index(); ++n) {
        Real pivot = -ctx.c() * oracle.y[n] * oracle.y[n - 1] + ctx.q_alpha();
        CHECK(pivot >= floor * Real("0.999"));
    }
}

TEST_CASE("uv transform: round trips and residuals") {
    ModelContext ctx = make_ctx("0.5", "2", "-0.5", 60);
    LatticeTable table = stieltjes(ctx, 13);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);

    UVRows rows = to_uv(ctx, oracle, UVVariant::General);
    CHECK(rows.u.size() == 7);
    CHECK(rows.v.size() == 7);
    CoefficientSequence back = from_uv(ctx, rows, oracle.method);
    for (long n = 0; n <= 13; ++n)
        CHECK(abs(back.y[n] - oracle.y[n]) <= abs(oracle.y[n]) * pow10(-65));

    ResidualReport general = uv_residual(ctx, rows);
    CHECK(general.max_abs() < pow10(-(60 - 2 * 13 - 10)));

    CHECK_THROWS_AS(to_uv(ctx, oracle, UVVariant::Quartic), DomainError);

    ModelContext cm1 = make_ctx("0.9", "5", "-1", 60);
    LatticeTable tm1 = stieltjes(cm1, 13);
    CoefficientSequence om1 = CoefficientSequence::from_oracle(cm1, tm1);
    ResidualReport quartic = uv_residual(cm1, to_uv(cm1, om1, UVVariant::Quartic));
    CHECK(quartic.max_abs() < pow10(-(60 - 2 * 13 - 10)));
    // at c = -1 the general form must agree with the quartic one
    ResidualReport same = uv_residual(cm1, to_uv(cm1, om1, UVVariant::General));
    CHECK(same.max_abs() < pow10(-(60 - 2 * 13 - 10)));
}

TEST_CASE("scaled-coefficient views are consistent") {
    ModelContext ctx = make_ctx("0.8", "1", "-1", 50);
    LatticeTable table = stieltjes(ctx, 8);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);
    for (unsigned n = 1; n <= 8; ++n)
        CHECK(close_rel(oracle.a_sq(ctx, n), table.a_sq[n], -(50 + 2)));
}

TEST_CASE("asymptote gaps for the c = 0 closed form are pure q-powers") {
    ModelContext ctx = make_ctx("0.7", "2", "0", 50);
    CoefficientSequence seq = forward_run(ctx, 30);
    AsymptoteGapReport report = asymptote_gap(ctx, seq);
    CHECK(report.monotone_from <= 2);
    for (const auto& e : report.gaps.entries()) {
        // gap at index m is exactly q^(m+alpha) for either parity
        Real expected = ctx.q_pow(e.index) * ctx.q_alpha();
        CHECK(close_rel(e.value, expected, -(50 - 5)));
    }
}

TEST_CASE("oracle gaps close onto the parity limits") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 90);
    LatticeTable table = stieltjes(ctx, 28);
    CoefficientSequence oracle = CoefficientSequence::from_oracle(ctx, table);
    AsymptoteGapReport report = asymptote_gap(ctx, oracle);
    CHECK(report.monotone_from <= 8);
    // even entries head to q^alpha, odd entries to 1; both shrink with n
    Real early_even, late_even, early_odd, late_odd;
    for (const auto& e : report.gaps.entries()) {
        if (e.index == 6) early_even = e.value;
        if (e.index == 28) late_even = e.value;
        if (e.index == 7) early_odd = e.value;
        if (e.index == 27) late_odd = e.value;
    }
    CHECK(late_even < early_even / 4);
    CHECK(late_odd < early_odd / 4);
}

TEST_CASE("alpha = 0 makes the two parity branches of the recurrence identical") {
    ModelContext ctx = make_ctx("0.8", "0", "-0.7", 50);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.01, 1.2);
    for (int trial = 0; trial < 25; ++trial) {
        Real y(dist(rng));
        Real even_rhs = (ctx.q_alpha() - y) * (ctx.q_alpha() - ctx.c() * y) /
                        ctx.q_alpha();
        Real odd_rhs = (1 - y) * (1 - ctx.c() * y);
        CHECK(abs(even_rhs - odd_rhs) < pow10(-55));
    }
}

TEST_CASE("confinement probe: orders and the recovered value") {
    ModelContext ctx = make_ctx("0.9", "5", "-1", 100);
    for (auto [n, parity] : {std::pair<long, Parity>{6, Parity::Even},
                             std::pair<long, Parity>{7, Parity::Odd}}) {
        SingularityTrace trace =
            confinement_probe(ctx, n, parity, Real("0.8"), pow10(-10));
        CHECK(std::abs(trace.fitted_orders[0] + 1) < 0.1);
        CHECK(std::abs(trace.fitted_orders[1] + 1) < 0.1);
        CHECK(std::abs(trace.fitted_orders[2] - 1) < 0.1);
        CHECK(std::abs(trace.fitted_orders[3]) < 0.1);
        Real rel_err = abs(trace.y_values[4] - trace.predicted_y4) /
                       abs(trace.predicted_y4);
        CHECK(rel_err < pow10(3) * trace.epsilon);
    }

    CHECK_THROWS_AS(confinement_probe(ctx, 6, Parity::Odd, Real(1), pow10(-10)),
                    DomainError);
    CHECK_THROWS_AS(confinement_probe(ctx, 6, Parity::Even, Real(1), Real("0.1")),
                    DomainError);
    CHECK_THROWS_AS(confinement_probe(ctx, 1, Parity::Odd, Real(1), pow10(-10)),
                    DomainError);
}

TEST_CASE("worst-case confinement chain clears after eight steps") {
    ModelContext ctx = make_ctx("0.5", "2", "-0.33333333333333333333333333333333333333333333333333", 100);
    long n = 6;
    // critical pre-singularity value: the O(1) coefficient of y_{n+4} cancels
    Real critical = (1 + ctx.c()) * (1 - 1 / ctx.q_sq()) /
                    (ctx.c() * (1 - ctx.q_pow(n)));
    CHECK(critical > 0);

    auto run = [&](const Real& eps) {
        std::vector<Real> y{critical, eps};
        for (int i = 0; i < 8; ++i)
            y.push_back(forward_step(ctx, n + i, y[y.size() - 2], y.back()));
        return y;  // y[0] = y_{n-1}, y[1] = y_n, ..., y[9] = y_{n+8}
    };
    Real eps = pow10(-12);
    std::vector<Real> at = run(eps);
    std::vector<Real> half = run(eps / 2);
    auto order = [&](size_t i) {
        return (log(abs(at[i]) / abs(half[i])) / log(Real(2))).convert_to<double>();
    };
    CHECK(std::abs(order(5) - 1) < 0.1);   // y_{n+4} = O(eps): the worst case
    CHECK(std::abs(order(6) + 1) < 0.1);   // y_{n+5}
    CHECK(std::abs(order(7) + 1) < 0.1);   // y_{n+6}
    CHECK(std::abs(order(8) - 1) < 0.1);   // y_{n+7}
    CHECK(std::abs(order(9)) < 0.1);       // y_{n+8}: singularity cleared
    CHECK(isfinite(at[9]));
    CHECK(abs(at[9]) > pow10(-6));
}

TEST_CASE("additive limit residuals shrink as q -> 1") {
    ContextSettings base;
    base.alpha = "0";
    base.digits = 42;
    Dp1LimitReport report = dp1_limit_residual(base, "0", 4, {"0.9", "0.99"});
    CHECK(report.per_q.size() == 2);
    CHECK(report.decrease_violations.empty());

    // alpha = 0, a = 0 reduces the target to n/(4 x_n): check directly at n=2
    const auto& entries = report.per_q[0].entries();
    CHECK(entries.size() == 4);
}

TEST_CASE("qpv parameter substitution: degenerate product and limit gaps") {
    ModelContext ctx = make_ctx("0.9", "2", "-0.5", 50);
    Real kappa = pow10(-3);
    // p r s t = 1 . c . kappa . 1/(c kappa) = 1 identically
    Real prst = 1 * ctx.c() * kappa * (1 / (ctx.c() * kappa));
    CHECK(abs(prst - 1) < pow10(-(50 + 5)));

    // v = -0.3 keeps the linear-in-kappa coefficients of both gaps at O(1);
    // near-cancellations (a measure-zero set) would push the doubling ratio
    // off 2 at finite kappa.
    std::pair<Real, Real> v_pair{Real("-0.3"), Real("-0.4")};
    auto [gap_u, gap_v] = qpv_limit_gap(ctx, 2, Real("0.7"), v_pair, kappa);
    auto [gap_u2, gap_v2] = qpv_limit_gap(ctx, 2, Real("0.7"), v_pair, kappa / 2);
    CHECK(abs(gap_u) / abs(gap_u2) > Real("1.8"));
    CHECK(abs(gap_u) / abs(gap_u2) < Real("2.2"));
    CHECK(abs(gap_v) / abs(gap_v2) > Real("1.8"));
    CHECK(abs(gap_v) / abs(gap_v2) < Real("2.2"));

    // u = 1: the shared factor (u-1) kills the target and the rational side
    auto [one_u, one_v] = qpv_limit_gap(ctx, 2, Real(1), v_pair, kappa);
    (void)one_v;
    CHECK(abs(one_u) < pow10(-45));

    // sitting on a pole is refused
    Real pole = ctx.c() * kappa * ctx.q_pow(4);
    CHECK_THROWS_AS(qpv_limit_gap(ctx, 2, pole, v_pair, kappa), DomainError);
    CHECK_THROWS_AS(qpv_limit_gap(ctx, 2, Real("0.7"), v_pair, Real("0.5")),
                    DomainError);
}
