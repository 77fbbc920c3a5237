#include "qfreud/ortho.hpp"

#include "qfreud/errors.hpp"

#include <cmath>

namespace qfreud {

namespace {

// Single Fourier coefficient ∫ D_q p_n · p_j w d_q x, both lattice sides
// summed explicitly.
Real dq_fourier_coeff(const ModelContext& ctx, const LatticeTable& table,
                      unsigned n, unsigned j) {
    const Real& q = ctx.q();
    Real sum(0);
    for (long k = 0; k <= table.cutoff; ++k) {
        Real denom = table.nodes[k] * (q - 1);
        Real dq_pos = (table.poly[n][k + 1] - table.poly[n][k]) / denom;
        Real dq_neg =
            (table.poly_at(n, k + 1, -1) - table.poly_at(n, k, -1)) / -denom;
        Real common = table.nodes[k] * table.weights[k];
        sum += common * (dq_pos * table.poly[j][k] + dq_neg * table.poly_at(j, k, -1));
    }
    return (1 - q) * sum;
}

std::vector<Real> prefix_a_sq(const LatticeTable& table) {
    std::vector<Real> s(table.degree + 1);
    s[0] = Real(0);
    for (unsigned m = 1; m <= table.degree; ++m) s[m] = s[m - 1] + table.a_sq[m];
    return s;
}

Real rel(const Real& lhs, const Real& rhs) {
    Real scale = abs(rhs);
    if (scale < 1) scale = Real(1);
    return (lhs - rhs) / scale;
}

// The three-term construction loses about 8 N log10(1/q) digits on this
// lattice (measured across q = 0.5..0.9); carry that much extra precision so
// the returned table is accurate at the context's working precision.
unsigned construction_digits(const ModelContext& ctx, unsigned N) {
    double qd = ctx.q().convert_to<double>();
    double extra = 8.0 * N * std::log10(1.0 / qd);
    return ctx.working_digits() + static_cast<unsigned>(std::ceil(extra)) + 5;
}

}  // namespace

LatticeTable stieltjes(const ModelContext& ctx, unsigned N,
                       const StieltjesOptions& options) {
    PrecisionGuard guard(construction_digits(ctx, N));
    LatticeTable table;
    table.degree = N;
    if (ctx.digits() < 30 + 2 * N)
        table.warnings.push_back(
            "stieltjes: digits = " + std::to_string(ctx.digits()) +
            " below the recommended 30 + 2N = " + std::to_string(30 + 2 * N) +
            "; expect degraded accuracy at high degree");

    WeightTable wt = build_weight_table(ctx);
    table.cutoff = wt.cutoff;
    table.nodes = std::move(wt.node);
    table.weights = std::move(wt.w);
    const long K = table.cutoff;

    table.quad.resize(K + 1);
    Real two_one_minus_q = 2 * (1 - ctx.q());
    for (long k = 0; k <= K; ++k)
        table.quad[k] = two_one_minus_q * table.weights[k] * table.nodes[k];

    table.a_sq.assign(N + 1, Real(0));
    table.leading.assign(N + 1, Real(0));
    table.subleading.assign(N + 1, Real(0));

    Real m0(0);
    for (long k = 0; k <= K; ++k) m0 += table.quad[k];

    const long size = K + 2;
    std::vector<Real> prev(size), cur(size, 1 / sqrt(m0)), next(size);
    table.leading[0] = cur[0];

    if (options.keep_polynomials) {
        table.poly.resize(N + 1);
        table.poly[0] = cur;
    }

    std::vector<Real> a(N + 1, Real(0));
    for (unsigned n = 0; n < N; ++n) {
        Real s(0);
        for (long k = 0; k < size; ++k) {
            Real r = table.nodes[k] * cur[k];
            if (n >= 1) r -= a[n] * prev[k];
            next[k] = r;
            if (k <= K) s += table.quad[k] * r * r;
        }
        if (!(s > 0))
            throw PrecisionError(
                "stieltjes: precision exhausted, a^2 <= 0 at degree " +
                    std::to_string(n + 1),
                n + 1);
        table.a_sq[n + 1] = s;
        a[n + 1] = sqrt(s);
        for (long k = 0; k < size; ++k) next[k] /= a[n + 1];

        table.leading[n + 1] = table.leading[n] / a[n + 1];
        table.subleading[n + 1] =
            n == 0 ? Real(0)
                   : (table.subleading[n] - a[n] * table.leading[n - 1]) / a[n + 1];

        prev.swap(cur);
        cur.swap(next);
        if (options.keep_polynomials) table.poly[n + 1] = cur;
    }
    return table;
}

ResidualReport gram_residual(const ModelContext& ctx, const LatticeTable& table) {
    PrecisionGuard guard = ctx.guard();
    const unsigned N = table.degree;
    ResidualReport report("gram");
    for (unsigned i = 0; i <= N; ++i) {
        for (unsigned j = i; j <= N; ++j) {
            long idx = static_cast<long>(i) * (N + 1) + j;
            if ((i + j) % 2 == 1) {
                // Odd integrand: both lattice sides cancel identically.
                report.add(idx, Real(0));
                continue;
            }
            Real g(0);
            for (long k = 0; k <= table.cutoff; ++k)
                g += table.quad[k] * table.poly[i][k] * table.poly[j][k];
            if (i == j) g -= 1;
            report.add(idx, g);
        }
    }
    return report;
}

ResidualReport bn_residual(const ModelContext& ctx, const LatticeTable& table) {
    PrecisionGuard guard = ctx.guard();
    ResidualReport report("bn");
    for (unsigned n = 0; n <= table.degree; ++n) {
        Real sum(0);
        for (long k = 0; k <= table.cutoff; ++k) {
            Real pp = table.poly[n][k];
            Real pm = table.poly_at(n, k, -1);
            Real w = table.weights[k];
            sum += table.nodes[k] *
                   (table.nodes[k] * pp * pp * w + -table.nodes[k] * pm * pm * w);
        }
        report.add(n, (1 - ctx.q()) * sum);
    }
    return report;
}

LeadingCoeffReport leading_coeff_check(const ModelContext& ctx,
                                       const LatticeTable& table) {
    const unsigned N = table.degree;
    if (static_cast<long>(N) + 1 > table.cutoff)
        throw DomainError("leading_coeff_check: interpolation needs N+1 <= K nodes");

    // Interpolation is ill-conditioned on the geometric nodes; run it well
    // above the working precision so the recovered coefficients are limited
    // by the node-value accuracy, not by the recovery route.
    const unsigned elevated = 2 * construction_digits(ctx, N);
    std::vector<std::vector<Real>> coeffs(N + 1);
    {
        PrecisionGuard guard(elevated);
        for (unsigned n = 0; n <= N; ++n) {
            std::vector<Real> x(n + 1), dd(n + 1);
            for (unsigned k = 0; k <= n; ++k) {
                x[k] = round_to(table.nodes[k], elevated);
                dd[k] = round_to(table.poly[n][k], elevated);
            }
            for (unsigned j = 1; j <= n; ++j)
                for (unsigned i = n; i >= j; --i)
                    dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - j]);
            // Expand the Newton form to monomial coefficients.
            std::vector<Real> c(n + 1, Real(0));
            c[0] = dd[n];
            for (long i = static_cast<long>(n) - 1; i >= 0; --i) {
                for (long d = static_cast<long>(n) - i; d >= 1; --d)
                    c[d] = c[d - 1] - x[i] * c[d];
                c[0] = dd[i] - x[i] * c[0];
            }
            coeffs[n] = std::move(c);
        }
    }

    PrecisionGuard guard = ctx.guard();
    LeadingCoeffReport out{ResidualReport("leading_ratio"),
                           ResidualReport("subleading_sum")};
    std::vector<Real> s = prefix_a_sq(table);
    for (unsigned n = 1; n <= N; ++n) {
        Real gamma_n = round_to(coeffs[n][n], ctx.working_digits());
        Real gamma_prev = round_to(coeffs[n - 1][n - 1], ctx.working_digits());
        out.ratio.add(n, gamma_prev / gamma_n - sqrt(table.a_sq[n]));
        Real delta_n = n >= 2 ? round_to(coeffs[n][n - 2], ctx.working_digits())
                              : Real(0);
        out.subleading_sum.add(n, delta_n / gamma_n + s[n - 1]);
    }
    return out;
}

std::vector<Real> fourier_dq_coeffs(const ModelContext& ctx,
                                    const LatticeTable& table, unsigned n) {
    PrecisionGuard guard = ctx.guard();
    if (n > table.degree) throw DomainError("fourier_dq_coeffs: n exceeds table degree");
    std::vector<Real> out;
    out.reserve(n);
    for (unsigned j = 0; j < n; ++j) out.push_back(dq_fourier_coeff(ctx, table, n, j));
    return out;
}

ResidualReport structure_residuals(const ModelContext& ctx,
                                   const LatticeTable& table, unsigned n) {
    PrecisionGuard guard = ctx.guard();
    if (n < 3 || n + 1 > table.degree)
        throw DomainError("structure_residuals: need 3 <= n <= N-1");

    std::vector<Real> s = prefix_a_sq(table);
    const Real& c = ctx.c();
    Real a_n = sqrt(table.a_sq[n]);
    Real a_n1 = sqrt(table.a_sq[n - 1]);
    Real a_n2 = sqrt(table.a_sq[n - 2]);
    Real q_an1 = ctx.q_alpha() * ctx.q_pow(n - 1);  // q^(alpha+n-1)
    Real q_an3 = ctx.q_alpha() * ctx.q_pow(n - 3);  // q^(alpha+n-3)

    Real a_hat, b_hat;
    if (n % 2 == 0) {
        a_hat = -c * a_n * a_n1 * a_n2 / q_an3;
        b_hat = a_n / q_an1 * (c + 1 - c * s[n + 1] + c * ctx.q_sq() * s[n - 2]);
    } else {
        Real parity_term = 1 - 1 / ctx.q_alpha();  // 1 - q^(-alpha)
        a_hat = -c * a_n * a_n1 * a_n2 / q_an3 + -parity_term * a_n1 / (a_n * a_n2);
        b_hat = -c * a_n / q_an1 * (s[n + 1] - ctx.q_sq() * s[n - 2]) +
                parity_term / a_n + (c + 1) * a_n / q_an1;
    }

    ResidualReport report("structure_n" + std::to_string(n));
    Real one_minus_q = 1 - ctx.q();
    report.add(n - 1, rel(dq_fourier_coeff(ctx, table, n, n - 1), b_hat / one_minus_q));
    report.add(n - 3, rel(dq_fourier_coeff(ctx, table, n, n - 3), a_hat / one_minus_q));
    return report;
}

ResidualReport intermediate_residuals(const ModelContext& ctx,
                                      const LatticeTable& table, unsigned n) {
    PrecisionGuard guard = ctx.guard();
    if (n < 2 || n + 1 > table.degree)
        throw DomainError("intermediate_residuals: need 2 <= n <= N-1");

    std::vector<Real> s = prefix_a_sq(table);
    const Real& c = ctx.c();
    bool even = n % 2 == 0;
    Real q_an1 = ctx.q_alpha() * ctx.q_pow(n - 1);

    ResidualReport report("intermediate_n" + std::to_string(n));
    // Coefficient of x^(n-1).
    Real lhs1 = table.a_sq[n] *
                (c + 1 - c * s[n + 1] + c * ctx.q_sq() * s[n - 2]);
    Real rhs1 = even ? Real((1 - ctx.q_pow(n)) * q_an1)
                     : Real((1 / ctx.q_alpha() - ctx.q_pow(n)) * q_an1);
    report.add(1, rel(lhs1, rhs1));

    // Coefficient of x^(n-3).
    if (n >= 3) {
        Real lhs3 = -c * table.a_sq[n] * table.a_sq[n - 1] * table.a_sq[n - 2] /
                    (ctx.q_alpha() * ctx.q_pow(n - 3));
        Real drop = even ? Real(1 - ctx.q_pow(n - 2))
                         : Real(1 / ctx.q_alpha() - ctx.q_pow(n - 2));
        Real rhs3 = ctx.q_pow(n - 2) * (1 - ctx.q_sq()) * s[n - 2] -
                    drop * table.a_sq[n - 1];
        report.add(3, rel(lhs3, rhs3));
    }
    return report;
}

}  // namespace qfreud
