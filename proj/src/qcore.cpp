#include "qfreud/qcore.hpp"

#include "qfreud/errors.hpp"

namespace qfreud {

Real q_pochhammer(const Real& a, const Real& q, unsigned n) {
    Real prod(1);
    Real aqj = a;
    for (unsigned j = 0; j < n; ++j) {
        prod *= 1 - aqj;
        aqj *= q;
    }
    return prod;
}

Real q_pochhammer_inf(const Real& a, const Real& q, const ModelContext& ctx) {
    if (!(abs(q) < 1))
        throw DomainError("q_pochhammer_inf requires |q| < 1");
    PrecisionGuard guard = ctx.guard();
    Real prod(1);
    Real aqj = a;
    while (abs(aqj) >= ctx.series_tol()) {
        prod *= 1 - aqj;
        aqj *= q;
    }
    return prod;
}

QIntegral q_integral_with_tail(const LatticeFunction& f, const ModelContext& ctx) {
    PrecisionGuard guard = ctx.guard();
    Real sum(0);
    Real qk(1);
    Real fmax(0);
    for (long k = 0; k <= ctx.lattice_cutoff(); ++k) {
        Real fp = f(qk);
        Real fm = f(-qk);
        if (!isfinite(fp) || !isfinite(fm))
            throw DomainError("q_integral: integrand overflows at lattice index " +
                              std::to_string(k));
        Real m = abs(fp) + abs(fm);
        if (m > fmax) fmax = m;
        sum += (fp + fm) * qk;
        qk *= ctx.q();
    }
    QIntegral r;
    r.value = (1 - ctx.q()) * sum;
    r.tail_bound = qk * fmax;  // qk is now q^(K+1); (1-q) * sum_{k>K} q^k = q^(K+1)
    return r;
}

Real q_integral(const LatticeFunction& f, const ModelContext& ctx) {
    return q_integral_with_tail(f, ctx).value;
}

Real q_derivative(const LatticeFunction& f, const Real& x, const ModelContext& ctx,
                  std::optional<Real> derivative_at_zero) {
    PrecisionGuard guard = ctx.guard();
    if (x == 0) {
        if (derivative_at_zero) return *derivative_at_zero;
        throw DomainError("q_derivative at x = 0 needs an explicit derivative value");
    }
    return (f(ctx.q() * x) - f(x)) / (x * (ctx.q() - 1));
}

}  // namespace qfreud
