#include "qfreud/weights.hpp"

#include "qfreud/errors.hpp"
#include "qfreud/qcore.hpp"

namespace qfreud {

namespace {
constexpr long kPowerRefresh = 8192;  // re-anchor iterated powers via pow()
}

Real weight(const ModelContext& ctx, const Real& x, WeightKind kind) {
    PrecisionGuard guard = ctx.guard();
    Real ax = abs(x);
    if (ax > 1) throw DomainError("weight: |x| must be <= 1");
    if (ax == 0) {
        if (ctx.alpha() > 0) return Real(0);
        if (ctx.alpha() == 0) return 1 / ctx.weight_norm();
        throw DomainError("weight: pole at x = 0 for alpha < 0");
    }
    Real xa = pow(ax, ctx.alpha());
    Real xsq = x * x;
    Real prod;
    if (kind == WeightKind::Quartic) {
        prod = q_pochhammer_inf(ctx.q_four() * xsq * xsq, ctx.q_four(), ctx);
    } else {
        prod = q_pochhammer_inf(ctx.q_sq() * xsq, ctx.q_sq(), ctx) *
               q_pochhammer_inf(ctx.c() * ctx.q_sq() * xsq, ctx.q_sq(), ctx);
    }
    return xa * prod / ctx.weight_norm();
}

Real pearson_residual(const ModelContext& ctx, const Real& x) {
    PrecisionGuard guard = ctx.guard();
    Real ax = abs(x);
    if (!(ax > 0) || ax > ctx.q())
        throw DomainError("pearson_residual: x must be a lattice point ±q^k, k >= 1");
    long k = static_cast<long>((round(log(ax) / log(ctx.q()))).convert_to<long>());
    Real node = ctx.q_pow(k);
    if (k < 1 || abs(ax - node) > node * pow10(3 - static_cast<long>(ctx.working_digits())))
        throw DomainError("pearson_residual: x must be a lattice point ±q^k, k >= 1");
    Real xsq = x * x;
    return weight(ctx, x / ctx.q()) -
           (1 - xsq) * (1 - ctx.c() * xsq) / ctx.q_alpha() * weight(ctx, x);
}

Real moment(const ModelContext& ctx, unsigned k) {
    if (k % 2 == 1) return Real(0);
    PrecisionGuard guard = ctx.guard();
    WeightTable table = build_weight_table(ctx);
    Real qk1 = ctx.q_pow(static_cast<long>(k) + 1);
    Real t(1);  // q^(j(k+1))
    Real sum(0);
    for (long j = 0; j <= table.cutoff; ++j) {
        if (j > 0 && j % kPowerRefresh == 0) t = pow(qk1, j);
        sum += t * table.w[j];
        t *= qk1;
    }
    return 2 * (1 - ctx.q()) * sum;
}

WeightTable build_weight_table(const ModelContext& ctx) {
    PrecisionGuard guard = ctx.guard();
    const long K = ctx.lattice_cutoff();
    WeightTable table;
    table.cutoff = K;
    const long size = K + 2;

    table.node.resize(size);
    Real qa = ctx.q_alpha();
    std::vector<Real> xa(size);  // q^(k alpha)
    Real nk(1), ak(1);
    for (long k = 0; k < size; ++k) {
        if (k > 0 && k % kPowerRefresh == 0) {
            nk = ctx.q_pow(k);
            ak = pow(ctx.q(), ctx.alpha() * k);
        }
        table.node[k] = nk;
        xa[k] = ak;
        nk *= ctx.q();
        ak *= qa;
    }

    // Suffix products of (1 - q^(2j)) and (1 - c q^(2j)), truncated at the
    // same indices as the per-point infinite products.
    std::vector<Real> q2m;  // (q^2)^m
    q2m.reserve(size);
    Real cm = abs(ctx.c()) > 1 ? abs(ctx.c()) : Real(1);
    Real p(1);
    for (long m = 0;; ++m) {
        if (m > 0 && m % kPowerRefresh == 0) p = pow(ctx.q_sq(), m);
        q2m.push_back(p);
        if (cm * p < ctx.series_tol() && m >= size) break;
        p *= ctx.q_sq();
    }
    const long m_max = static_cast<long>(q2m.size()) - 1;

    auto suffix_product = [&](const Real& coeff) {
        std::vector<Real> s(size, Real(1));
        if (coeff == 0) return s;
        // largest j with |coeff| q^(2j) >= series_tol
        long j_top = m_max;
        while (j_top >= 1 && abs(coeff) * q2m[j_top] < ctx.series_tol()) --j_top;
        Real acc(1);
        for (long j = j_top; j >= 1; --j) {
            acc *= 1 - coeff * q2m[j];
            if (j - 1 < size) s[j - 1] = acc;
        }
        return s;
    };

    std::vector<Real> main_part = suffix_product(Real(1));
    std::vector<Real> c_part = suffix_product(ctx.c());

    table.w.resize(size);
    for (long k = 0; k < size; ++k)
        table.w[k] = xa[k] * main_part[k] * c_part[k] / ctx.weight_norm();
    return table;
}

}  // namespace qfreud
