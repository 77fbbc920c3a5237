#include "qfreud/painleve.hpp"

#include "qfreud/errors.hpp"
#include "qfreud/qcore.hpp"
#include "qfreud/weights.hpp"

namespace qfreud {

const char* method_name(Method m) {
    switch (m) {
        case Method::oracle: return "oracle";
        case Method::forward: return "forward";
        case Method::fixedpoint: return "fixedpoint";
        case Method::closed_form: return "closed_form";
    }
    return "?";
}

CoefficientSequence CoefficientSequence::from_oracle(const ModelContext& ctx,
                                                     const LatticeTable& table) {
    PrecisionGuard guard = ctx.guard();
    CoefficientSequence seq;
    seq.method = Method::oracle;
    seq.y.resize(table.degree + 1);
    seq.y[0] = Real(0);
    for (unsigned n = 1; n <= table.degree; ++n)
        seq.y[n] = table.a_sq[n] * ctx.q_pow(1 - static_cast<long>(n));
    return seq;
}

Real y1_closed(const ModelContext& ctx) {
    PrecisionGuard guard = ctx.guard();
    Real value;
    if (ctx.c() == -1) {
        value = q_pochhammer_inf(ctx.q_pow(ctx.alpha() + 1), ctx.q_four(), ctx) /
                q_pochhammer_inf(ctx.q_pow(ctx.alpha() + 3), ctx.q_four(), ctx);
    } else {
        auto series = [&](long shift) {
            Real ratio_base = ctx.q_pow(ctx.alpha() + shift);
            Real term(1), sum(1), q2k = ctx.q_sq();
            for (long k = 1;; ++k) {
                Real prev = abs(term);
                term *= ratio_base / ((1 - q2k) * (1 - ctx.c() * q2k));
                if (abs(term) < ctx.series_tol()) break;
                if (k > 16 && abs(term) > prev && abs(term) > pow10(10))
                    throw SeriesDivergenceError(
                        "y1_closed: series terms fail to decay (exploratory c?)");
                sum += term;
                q2k *= ctx.q_sq();
            }
            return sum;
        };
        value = series(3) / series(1);
    }

    Real by_moments = moment(ctx, 2) / moment(ctx, 0);
    Real scale = abs(value) > 1 ? abs(value) : Real(1);
    if (abs(value - by_moments) >
        scale * pow10(10 - static_cast<long>(ctx.digits())))
        throw PrecisionError("y1_closed: closed form disagrees with lattice moments",
                             1);
    return value;
}

namespace {

// Solve the factorized recurrence at index n for y_{n+1}; all inputs are
// taken at whatever precision the caller prepared (this is what lets
// forward_run emulate low-precision arithmetic).
Real step_impl(const Real& c, const Real& q_alpha, long n,
               const Real& q_pow_neg_n, const Real& y_prev, const Real& y_cur,
               const Real& threshold) {
    if (abs(y_cur) < threshold)
        throw SingularityError("forward step: y_n below singularity threshold", n,
                               "y_n");
    Real pivot = -c * y_cur * y_prev + q_alpha;
    if (abs(pivot) < threshold)
        throw SingularityError(
            "forward step: -c y_n y_{n-1} + q^alpha below singularity threshold", n,
            "-c y_n y_{n-1} + q^alpha");
    Real rhs = n % 2 == 0
                   ? Real((q_alpha - y_cur) * (q_alpha - c * y_cur) / q_alpha)
                   : Real((1 - y_cur) * (1 - c * y_cur));
    return (q_alpha - rhs * q_alpha * q_pow_neg_n / pivot) / (c * y_cur);
}

CoefficientSequence closed_form_run(const ModelContext& ctx, unsigned N) {
    CoefficientSequence seq;
    seq.method = Method::closed_form;
    seq.y.resize(N + 1);
    seq.y[0] = Real(0);
    for (unsigned n = 1; n <= N; ++n) {
        // c = 0 collapse of the recurrence: q^alpha (1-q^n) for even n,
        // 1 - q^(n+alpha) for odd n (the lattice oracle confirms this form).
        seq.y[n] = n % 2 == 0
                       ? Real(ctx.q_alpha() * (1 - ctx.q_pow(n)))
                       : Real(1 - ctx.q_alpha() * ctx.q_pow(n));
    }
    return seq;
}

}  // namespace

Real forward_step(const ModelContext& ctx, long n, const Real& y_prev,
                  const Real& y_cur) {
    PrecisionGuard guard = ctx.guard();
    if (n < 1) throw DomainError("forward_step: n must be >= 1");
    if (ctx.c() == 0)
        throw DomainError("forward_step: c = 0 degenerates; use the closed form");
    return step_impl(ctx.c(), ctx.q_alpha(), n, ctx.q_pow(-n), y_prev, y_cur,
                     ctx.singular_threshold());
}

CoefficientSequence forward_run_from(const ModelContext& ctx, const Real& y1,
                                     unsigned N, std::optional<unsigned> run_digits) {
    if (ctx.c() == 0) return closed_form_run(ctx, N);

    const bool emulate = run_digits && *run_digits < ctx.working_digits();
    const unsigned prec = emulate ? *run_digits : ctx.working_digits();
    if (prec < 10) throw DomainError("forward_run: run_digits must be >= 10");
    PrecisionGuard guard(prec);

    Real q = round_to(ctx.q(), prec);
    Real c = round_to(ctx.c(), prec);
    Real q_alpha = emulate ? pow(q, round_to(ctx.alpha(), prec))
                           : Real(ctx.q_alpha());
    Real threshold = pow10(-static_cast<long>(prec / 2));

    CoefficientSequence seq;
    seq.method = Method::forward;
    seq.y.reserve(N + 1);
    seq.y.push_back(Real(0));
    if (N >= 1) seq.y.push_back(round_to(y1, prec));

    Real q_pow_neg_n = 1 / q;  // q^(-n) at n = 1
    for (unsigned n = 1; n < N; ++n) {
        if (n % 4096 == 0) q_pow_neg_n = pow(1 / q, n);
        Real next;
        try {
            next = round_to(step_impl(c, q_alpha, n, q_pow_neg_n, seq.y[n - 1],
                                      seq.y[n], threshold),
                            prec);
        } catch (const SingularityError& e) {
            seq.first_anomaly = e.index;
            seq.anomaly_note = std::string("singularity guard: ") + e.factor;
            return seq;
        }
        seq.y.push_back(next);
        if (!seq.first_anomaly && !(next > 0)) {
            seq.first_anomaly = n + 1;
            seq.anomaly_note = "positivity lost";
        }
        q_pow_neg_n /= q;
    }
    return seq;
}

CoefficientSequence forward_run(const ModelContext& ctx, unsigned N,
                                std::optional<unsigned> run_digits) {
    if (ctx.c() == 0) return closed_form_run(ctx, N);
    return forward_run_from(ctx, y1_closed(ctx), N, run_digits);
}

ResidualReport painleve_residual(const ModelContext& ctx,
                                 const CoefficientSequence& seq) {
    PrecisionGuard guard = ctx.guard();
    if (seq.y.size() < 3)
        throw DomainError("painleve_residual: sequence needs length >= 3");
    ResidualReport report("painleve");
    const Real& c = ctx.c();
    const Real& qa = ctx.q_alpha();
    for (long n = 1; n + 1 <= seq.max_index(); ++n) {
        Real lhs = ctx.q_pow(n) / qa * (-c * seq.y[n] * seq.y[n + 1] + qa) *
                   (-c * seq.y[n] * seq.y[n - 1] + qa);
        Real rhs = n % 2 == 0 ? Real((qa - seq.y[n]) * (qa - c * seq.y[n]) / qa)
                              : Real((1 - seq.y[n]) * (1 - c * seq.y[n]));
        Real scale = abs(rhs) > 1 ? abs(rhs) : Real(1);
        report.add(n, (lhs - rhs) / scale);
    }
    return report;
}

UVRows to_uv(const ModelContext& ctx, const CoefficientSequence& seq,
             UVVariant variant) {
    PrecisionGuard guard = ctx.guard();
    if (variant == UVVariant::Quartic && ctx.c() != -1)
        throw DomainError("to_uv: the Quartic variant requires c = -1");
    UVRows rows;
    rows.variant = variant;
    for (long m = 0; 2 * m <= seq.max_index(); ++m)
        rows.u.push_back(seq.y[2 * m] / ctx.q_alpha());
    for (long m = 0; 2 * m + 1 <= seq.max_index(); ++m)
        rows.v.push_back(variant == UVVariant::Quartic ? Real(-seq.y[2 * m + 1])
                                                       : Real(ctx.c() * seq.y[2 * m + 1]));
    return rows;
}

CoefficientSequence from_uv(const ModelContext& ctx, const UVRows& rows,
                            Method method) {
    PrecisionGuard guard = ctx.guard();
    if (rows.variant == UVVariant::General && ctx.c() == 0)
        throw DomainError("from_uv: the General variant is not invertible at c = 0");
    CoefficientSequence seq;
    seq.method = method;
    seq.y.resize(rows.u.size() + rows.v.size());
    for (size_t m = 0; m < rows.u.size(); ++m)
        seq.y[2 * m] = rows.u[m] * ctx.q_alpha();
    for (size_t m = 0; m < rows.v.size(); ++m)
        seq.y[2 * m + 1] = rows.variant == UVVariant::Quartic
                               ? Real(-rows.v[m])
                               : Real(rows.v[m] / ctx.c());
    return seq;
}

ResidualReport uv_residual(const ModelContext& ctx, const UVRows& rows) {
    PrecisionGuard guard = ctx.guard();
    if (rows.variant == UVVariant::Quartic && ctx.c() != -1)
        throw DomainError("uv_residual: the Quartic variant requires c = -1");
    if (rows.variant == UVVariant::General && ctx.c() == 0)
        throw DomainError("uv_residual: the General variant requires c != 0");

    ResidualReport report("uv");
    const long len_u = static_cast<long>(rows.u.size());
    const long len_v = static_cast<long>(rows.v.size());
    auto add_rel = [&](long idx, const Real& lhs, const Real& rhs) {
        Real scale = abs(rhs) > 1 ? abs(rhs) : Real(1);
        report.add(idx, (lhs - rhs) / scale);
    };
    for (long m = 1; m < len_u && m < len_v; ++m) {
        const Real& u = rows.u[m];
        Real lhs = ctx.q_pow(2 * m) * (1 - u * rows.v[m]) * (1 - u * rows.v[m - 1]);
        Real rhs = rows.variant == UVVariant::Quartic
                       ? Real(1 - u * u)
                       : Real((1 - u) * (1 - ctx.c() * u));
        add_rel(2 * m, lhs, rhs);
    }
    for (long m = 0; m < len_v && m + 1 < len_u; ++m) {
        const Real& v = rows.v[m];
        Real lhs = ctx.q_pow(2 * m + 1) * ctx.q_alpha() * (1 - rows.u[m] * v) *
                   (1 - rows.u[m + 1] * v);
        Real rhs = rows.variant == UVVariant::Quartic
                       ? Real(1 - v * v)
                       : Real((1 - v) * (1 - v / ctx.c()));
        add_rel(2 * m + 1, lhs, rhs);
    }
    return report;
}

AsymptoteGapReport asymptote_gap(const ModelContext& ctx,
                                 const CoefficientSequence& seq) {
    PrecisionGuard guard = ctx.guard();
    for (long n = 1; n <= seq.max_index(); ++n)
        if (!(seq.y[n] > 0))
            throw DomainError("asymptote_gap: sequence must be positive past index 1");

    AsymptoteGapReport out{ResidualReport("asymptote_gap"), 0};
    std::vector<std::pair<long, Real>> even_gaps, odd_gaps;
    for (long n = 2; n <= seq.max_index(); n += 2)
        even_gaps.emplace_back(n, abs(seq.y[n] - ctx.q_alpha()));
    for (long n = 1; n <= seq.max_index(); n += 2)
        odd_gaps.emplace_back(n, abs(seq.y[n] - 1));

    auto monotone_start = [](const std::vector<std::pair<long, Real>>& g) {
        if (g.empty()) return 0L;
        long start = g.front().first;
        for (size_t i = 1; i < g.size(); ++i)
            if (!(g[i].second < g[i - 1].second)) start = g[i].first;
        return start;
    };
    out.monotone_from = std::max(monotone_start(even_gaps), monotone_start(odd_gaps));
    for (const auto& [idx, gap] : even_gaps) out.gaps.add(idx, gap);
    for (const auto& [idx, gap] : odd_gaps) out.gaps.add(idx, gap);
    return out;
}

Real confinement_prediction(const ModelContext& ctx, long n, Parity parity,
                            const Real& y_before) {
    PrecisionGuard guard = ctx.guard();
    if (ctx.c() == 0)
        throw DomainError("confinement_prediction: requires c != 0");
    const Real& c = ctx.c();
    const Real& qa = ctx.q_alpha();
    Real common = (1 + c) * (1 - 1 / ctx.q_sq());
    if (parity == Parity::Even) {
        return ctx.q_sq() * qa / (c * (1 - qa * ctx.q_pow(n + 3))) *
               (c * y_before * (1 - ctx.q_pow(n)) - common);
    }
    return ctx.q_sq() / qa / (c * (1 - ctx.q_pow(n + 3))) *
           (c * y_before * (1 - qa * ctx.q_pow(n)) - common * qa);
}

SingularityTrace confinement_probe(const ModelContext& ctx, long n, Parity parity,
                                   const Real& y_before, const Real& epsilon) {
    PrecisionGuard guard = ctx.guard();
    if (!(epsilon > 0) || epsilon >= pow10(-5))
        throw DomainError("confinement_probe: epsilon must lie in (0, 1e-5)");
    if (n < 2) throw DomainError("confinement_probe: n must be >= 2");
    if ((n % 2 == 0) != (parity == Parity::Even))
        throw DomainError("confinement_probe: n does not match the stated parity");

    auto chain = [&](const Real& eps) {
        std::array<Real, 5> vals;
        vals[0] = eps;
        Real y_prev = y_before, y_cur = eps;
        for (int i = 0; i < 4; ++i) {
            Real next = forward_step(ctx, n + i, y_prev, y_cur);
            vals[i + 1] = next;
            y_prev = y_cur;
            y_cur = next;
        }
        return vals;
    };

    SingularityTrace trace;
    trace.parity = parity;
    trace.n = n;
    trace.epsilon = epsilon;
    trace.y_values = chain(epsilon);
    std::array<Real, 5> halved = chain(epsilon / 2);
    for (int i = 0; i < 4; ++i) {
        Real ratio = abs(trace.y_values[i + 1]) / abs(halved[i + 1]);
        trace.fitted_orders[i] = (log(ratio) / log(Real(2))).convert_to<double>();
    }
    trace.predicted_y4 = confinement_prediction(ctx, n, parity, y_before);
    return trace;
}

Dp1LimitReport dp1_limit_residual(const ContextSettings& base, const std::string& a,
                                  unsigned n_max,
                                  const std::vector<std::string>& q_grid) {
    Dp1LimitReport out;
    out.q_grid = q_grid;
    for (const std::string& q_str : q_grid) {
        PrecisionGuard guard(base.digits + kGuardDigits);
        Real q(q_str), a_shift(a), alpha(base.alpha);
        Real root = sqrt(1 - pow(q, 4));
        Real c = -1 + a_shift * root;
        ModelContext ctx(q, alpha, c, base.digits, Real(), 0, base.exploratory);

        StieltjesOptions options;
        options.keep_polynomials = false;
        LatticeTable table = stieltjes(ctx, n_max + 1, options);

        std::vector<Real> x(n_max + 2);
        x[0] = Real(0);
        for (unsigned n = 1; n <= n_max + 1; ++n) x[n] = table.a_sq[n] / root;

        ResidualReport report("dp1_q" + q_str);
        for (unsigned n = 1; n <= n_max; ++n) {
            int sign = n % 2 == 0 ? 1 : -1;
            Real target = (2 * static_cast<long>(n) + alpha - alpha * sign) /
                          (8 * x[n]);
            report.add(n, x[n + 1] + x[n] + x[n - 1] - target + a_shift);
        }
        out.per_q.push_back(std::move(report));
    }
    for (unsigned n = 1; n <= n_max; ++n) {
        bool decreasing = true;
        for (size_t i = 1; i < out.per_q.size(); ++i) {
            const Real& prev = out.per_q[i - 1].entries()[n - 1].value;
            const Real& cur = out.per_q[i].entries()[n - 1].value;
            if (!(abs(cur) < abs(prev))) decreasing = false;
        }
        if (!decreasing) out.decrease_violations.push_back(n);
    }
    return out;
}

std::pair<Real, Real> qpv_limit_gap(const ModelContext& ctx, long n, const Real& u,
                                    const std::pair<Real, Real>& v_pair,
                                    const Real& kappa) {
    PrecisionGuard guard = ctx.guard();
    if (!(kappa > 0) || kappa >= pow10(-1))
        throw DomainError("qpv_limit_gap: kappa must lie in (0, 0.1)");
    if (!(ctx.c() < 0)) throw DomainError("qpv_limit_gap: requires c < 0");

    const Real& c = ctx.c();
    Real rho = ctx.q_pow(2 * n);                      // q^(2n)
    Real w = ctx.q_pow(2 * n + 1) * ctx.q_alpha();    // q^(2n+1+alpha)
    Real b = c * kappa;

    auto check_pole = [&](const Real& value, const Real& pole, const char* what) {
        Real scale = abs(value) > 1 ? abs(value) : Real(1);
        if (abs(value - pole) < ctx.singular_threshold() * scale)
            throw DomainError(std::string("qpv_limit_gap: ") + what +
                              " coincides with a pole of the right side");
    };
    check_pole(u, b * rho, "u");
    check_pole(u, rho / b, "u");
    const Real& v = v_pair.first;
    for (const Real* vv : {&v_pair.first, &v_pair.second}) {
        check_pole(*vv, kappa * w, "v");
        check_pole(*vv, w / kappa, "v");
    }

    // u-equation right side with parameter zeros 1/p, 1/r, 1/s, 1/t.
    Real rhs_u = (u - 1) * (u - 1 / c) * (u - 1 / kappa) * (u - c * kappa) /
                 ((u - b * rho) * (u - rho / b));
    Real target_u = (1 - u) * (1 - c * u) / rho;

    // v-equation right side with zeros p, r, s, t.
    Real rhs_v = (v - 1) * (v - c) * (v - kappa) * (v - 1 / (c * kappa)) /
                 ((v - kappa * w) * (v - w / kappa));
    Real target_v = (1 - v) * (1 - v / c) / w;

    return {rhs_u - target_u, rhs_v - target_v};
}

}  // namespace qfreud
