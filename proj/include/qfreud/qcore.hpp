#pragma once

#include "qfreud/context.hpp"
#include "qfreud/real.hpp"

#include <functional>
#include <optional>

namespace qfreud {

using LatticeFunction = std::function<Real(const Real&)>;

/// Finite q-Pochhammer symbol: product of (1 - a q^j) for j = 0..n-1.
/// The empty product (n = 0) is 1.
Real q_pochhammer(const Real& a, const Real& q, unsigned n);

/// Infinite q-Pochhammer symbol, truncated at the first j with
/// |a| q^j < ctx.series_tol(). Requires |q| < 1. The dropped tail multiplies
/// the result by 1 + delta with |delta| <= 2 * series_tol / (1 - q).
Real q_pochhammer_inf(const Real& a, const Real& q, const ModelContext& ctx);

struct QIntegral {
    Real value;
    /// Heuristic bound on the dropped tail: 2 q^(K+1) * max sampled |f|.
    Real tail_bound;
};

/// Jackson integral over [-1,1] on the lattice {±q^k}:
/// (1-q) * sum_{k=0..K} [f(q^k) + f(-q^k)] q^k with K = ctx.lattice_cutoff().
QIntegral q_integral_with_tail(const LatticeFunction& f, const ModelContext& ctx);
Real q_integral(const LatticeFunction& f, const ModelContext& ctx);

/// q-difference operator (f(qx) - f(x)) / (x (q-1)). At x = 0 the caller must
/// supply the value of f'(0) (for polynomials, the coefficient of x);
/// without it, x = 0 is an error.
Real q_derivative(const LatticeFunction& f, const Real& x, const ModelContext& ctx,
                  std::optional<Real> derivative_at_zero = std::nullopt);

}  // namespace qfreud
