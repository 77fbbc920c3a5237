#include "qfreud/fixedpoint.hpp"

#include "qfreud/errors.hpp"

namespace qfreud {

RowPair RowPair::zeros(long window) {
    RowPair rows;
    rows.xi.assign(window, Real(0));
    rows.eta.assign(window, Real(0));
    return rows;
}

namespace {

Real positive_root(const ModelContext& ctx, long n, const Real& x, const Real& y,
                   const Real& one_minus_qpow, const Real& denom_scale) {
    Real disc = x * x + 4 * one_minus_qpow * y;
    if (disc < 0)
        throw DomainError("positive root: negative discriminant at n = " +
                          std::to_string(n) + ", x = " + to_decimal_string(x, 8) +
                          ", y = " + to_decimal_string(y, 8));
    if (abs(y) < ctx.singular_threshold()) {
        if (abs(x) < ctx.singular_threshold())
            throw DomainError("positive root: both x and y vanish at n = " +
                              std::to_string(n));
        return one_minus_qpow / (denom_scale * x);
    }
    return (-x + sqrt(disc)) / (2 * denom_scale * y);
}

}  // namespace

Real xi_root(const ModelContext& ctx, long n, const Real& x, const Real& y) {
    PrecisionGuard guard = ctx.guard();
    // denominator 2 q^(-alpha) y; the y->0 branch is q^alpha (1-q^(2n))/x
    return positive_root(ctx, n, x, y, 1 - ctx.q_pow(2 * n), 1 / ctx.q_alpha());
}

Real eta_root(const ModelContext& ctx, long n, const Real& x, const Real& y) {
    PrecisionGuard guard = ctx.guard();
    return positive_root(ctx, n, x, y, 1 - ctx.q_pow(2 * n + 1) * ctx.q_alpha(),
                         Real(1));
}

RowPair apply_T(const ModelContext& ctx, const RowPair& rows, TailPolicy policy) {
    PrecisionGuard guard = ctx.guard();
    const long w = rows.window();
    if (w < 2) throw DomainError("apply_T: window must be >= 2");
    for (long i = 0; i < w; ++i)
        if (rows.xi[i] < 0 || rows.eta[i] < 0)
            throw DomainError("apply_T: rows must be non-negative (index " +
                              std::to_string(i) + ")");

    const Real& c = ctx.c();
    const Real c_sq = c * c;
    const long out_w = policy == TailPolicy::Shrink ? w - 1 : w;

    RowPair out;
    out.iteration_count = rows.iteration_count + 1;
    out.xi.resize(out_w);
    out.eta.resize(out_w);

    // Clamp policy: indices beyond the stored window read the limit values.
    auto xi_at = [&](long i) { return i < w ? rows.xi[i] : ctx.q_alpha(); };
    auto eta_at = [&](long i) { return i < w ? rows.eta[i] : Real(1); };

    out.xi[0] = Real(0);
    Real q2n = ctx.q_sq();  // q^(2n), n starting at 1
    for (long n = 1; n < out_w; ++n) {
        if (n % 4096 == 0) q2n = ctx.q_pow(2 * n);
        Real x = -c * q2n * (eta_at(n) + eta_at(n - 1)) + c + 1;
        Real y = c_sq * q2n * eta_at(n) * eta_at(n - 1) - c;
        out.xi[n] = positive_root(ctx, n, x, y, 1 - q2n, 1 / ctx.q_alpha());
        q2n *= ctx.q_sq();
    }
    Real q2n1 = ctx.q();  // q^(2n+1), n starting at 0
    for (long n = 0; n < out_w; ++n) {
        if (n > 0 && n % 4096 == 0) q2n1 = ctx.q_pow(2 * n + 1);
        Real x = -c * q2n1 * (xi_at(n) + xi_at(n + 1)) + c + 1;
        Real y = c_sq * q2n1 / ctx.q_alpha() * xi_at(n) * xi_at(n + 1) - c;
        out.eta[n] = positive_root(ctx, n, x, y, 1 - q2n1 * ctx.q_alpha(), Real(1));
        q2n1 *= ctx.q_sq();
    }
    return out;
}

std::pair<CoefficientSequence, BracketReport> solve(const ModelContext& ctx,
                                                    unsigned N, unsigned max_iter,
                                                    const Real& tol,
                                                    TailPolicy policy) {
    PrecisionGuard guard = ctx.guard();
    if (max_iter < 2) throw DomainError("solve: max_iter must be >= 2");
    // Entries feeding y_0..y_N: xi_0..xi_{N/2}, eta_0..eta_{(N-1)/2}.
    const long needed = static_cast<long>(N) / 2 + 2;
    const long window0 =
        policy == TailPolicy::Shrink ? needed + static_cast<long>(max_iter) : needed;

    BracketReport report;
    RowPair lower = RowPair::zeros(window0);  // even iterates
    RowPair upper;                            // odd iterates
    RowPair cur = lower;
    bool have_upper = false;

    // Entries that have converged to the working-precision floor flip order
    // by a last-place unit; only differences above this floor count as
    // violations of the bracket structure.
    const Real noise_floor = pow10(3 - static_cast<long>(ctx.working_digits()));
    auto record_violation = [&](unsigned iter, long idx, bool xi_row, const Real& mag) {
        if (abs(mag) > noise_floor)
            report.violations.push_back({iter, idx, xi_row, mag});
    };

    for (unsigned iter = 1; iter <= max_iter && !report.converged; ++iter) {
        cur = apply_T(ctx, cur, policy);
        report.iterations = iter;
        report.y1_trace.push_back(cur.eta[0]);

        const bool is_even_iterate = iter % 2 == 0;
        RowPair& same = is_even_iterate ? lower : upper;
        // Termwise monotonicity against the previous iterate of equal parity.
        if (is_even_iterate || have_upper) {
            long common = std::min(cur.window(), same.window());
            for (long i = 0; i < common; ++i) {
                Real dxi = cur.xi[i] - same.xi[i];
                Real deta = cur.eta[i] - same.eta[i];
                if (is_even_iterate) {
                    if (dxi < 0) record_violation(iter, i, true, dxi);
                    if (deta < 0) record_violation(iter, i, false, deta);
                } else {
                    if (dxi > 0) record_violation(iter, i, true, dxi);
                    if (deta > 0) record_violation(iter, i, false, deta);
                }
            }
        }
        same = cur;
        if (!is_even_iterate) have_upper = true;

        // Sandwich plus convergence width on the retained working prefix.
        if (have_upper) {
            long common = std::min(lower.window(), upper.window());
            Real width(0);
            for (long i = 0; i < common; ++i) {
                Real wxi = upper.xi[i] - lower.xi[i];
                Real weta = upper.eta[i] - lower.eta[i];
                if (wxi < 0) record_violation(iter, i, true, wxi);
                if (weta < 0) record_violation(iter, i, false, weta);
                if (i < needed) {
                    if (abs(wxi) > width) width = abs(wxi);
                    if (abs(weta) > width) width = abs(weta);
                }
            }
            report.width_trace.push_back(width);
            report.width_max = width;
            if (width < tol && iter >= 2) report.converged = true;
        }
    }

    const long keep = std::min(lower.window(), upper.window());
    report.lower_xi.assign(lower.xi.begin(), lower.xi.begin() + keep);
    report.lower_eta.assign(lower.eta.begin(), lower.eta.begin() + keep);
    report.upper_xi.assign(upper.xi.begin(), upper.xi.begin() + keep);
    report.upper_eta.assign(upper.eta.begin(), upper.eta.begin() + keep);

    CoefficientSequence seq;
    seq.method = Method::fixedpoint;
    seq.y.resize(N + 1);
    seq.y[0] = Real(0);
    for (unsigned n = 1; n <= N; ++n) {
        long m = n / 2;
        if (n % 2 == 0)
            seq.y[n] = (report.lower_xi[m] + report.upper_xi[m]) / 2;
        else
            seq.y[n] = (report.lower_eta[m] + report.upper_eta[m]) / 2;
    }
    return {std::move(seq), std::move(report)};
}

Real admissible_upper(const ModelContext& ctx, const Real& margin) {
    PrecisionGuard guard = ctx.guard();
    Real upper(1);
    if (ctx.q_alpha() > upper) upper = ctx.q_alpha();
    if (ctx.c() < 0) {
        Real inv = 1 / abs(ctx.c());
        if (inv > upper) upper = inv;
        Real qa_inv = ctx.q_alpha() / abs(ctx.c());
        if (qa_inv > upper) upper = qa_inv;
    }
    return upper * (1 + margin);
}

}  // namespace qfreud
