#pragma once

#include "qfreud/context.hpp"
#include "qfreud/real.hpp"

#include <vector>

namespace qfreud {

/// Quartic is the c = -1 specialization written as a single quartic
/// q-Pochhammer product; General is the two-factor form with parameter c.
/// They agree at c = -1 to working tolerance.
enum class WeightKind { Quartic, General };

/// Weight value at x in [-1,1]:
///   General: |x|^alpha (q^2 x^2; q^2)_inf (c q^2 x^2; q^2)_inf / (1-q^4)^(alpha/4)
///   Quartic: |x|^alpha (q^4 x^4; q^4)_inf / (1-q^4)^(alpha/4)
/// Strictly positive for 0 < |x| <= 1 when c <= 0. At x = 0: 0 for alpha > 0,
/// the constant prefactor for alpha = 0, a pole error for alpha < 0. Each
/// infinite product is evaluated from scratch, so this evaluation is
/// independent of the Pearson relation.
Real weight(const ModelContext& ctx, const Real& x,
            WeightKind kind = WeightKind::General);

/// Pearson residual w(x/q) - (1-x^2)(1-c x^2) q^(-alpha) w(x) at a lattice
/// point x = ±q^k, k >= 1. Bounded by roundoff at working precision.
Real pearson_residual(const ModelContext& ctx, const Real& x);

/// k-th moment of the weight on the lattice. Exactly 0 for odd k (the
/// symmetrized terms cancel identically); positive for even k.
Real moment(const ModelContext& ctx, unsigned k);

/// Weight values on the positive lattice nodes q^0..q^(K+1) where
/// K = ctx.lattice_cutoff(); node index k holds w(q^k). The infinite products
/// are evaluated as shared suffix products (identical factors and truncation
/// to the per-point form, O(K) total work). Negative nodes follow from
/// evenness: w(-q^k) = w(q^k).
struct WeightTable {
    std::vector<Real> node;  // q^k
    std::vector<Real> w;     // w(q^k)
    long cutoff;             // K; arrays hold K+2 entries
};

WeightTable build_weight_table(const ModelContext& ctx);

}  // namespace qfreud
