#pragma once

#include "qfreud/context.hpp"
#include "qfreud/real.hpp"
#include "qfreud/residual.hpp"
#include "qfreud/weights.hpp"

#include <string>
#include <vector>

namespace qfreud {

/// Orthonormal polynomials on the truncated lattice, stored as node values
/// on the positive nodes q^k (negative nodes follow from the exact parity
/// p_n(-q^k) = (-1)^n p_n(q^k)). Built by the discretized Stieltjes
/// procedure; serves as the ground-truth source of recurrence coefficients.
struct LatticeTable {
    unsigned degree = 0;  // N
    long cutoff = 0;      // quadratures sum k = 0..cutoff; arrays hold cutoff+2

    std::vector<Real> nodes;    // q^k
    std::vector<Real> weights;  // w(q^k)
    std::vector<Real> quad;     // 2 (1-q) w(q^k) q^k, quadrature for even integrands

    /// poly[n][k] = p_n(q^k); empty when built with keep_polynomials = false.
    std::vector<std::vector<Real>> poly;

    std::vector<Real> a_sq;        // a_n^2, n = 1..N (index 0 unused, = 0)
    std::vector<Real> leading;     // gamma_n, built via gamma_n = gamma_{n-1}/a_n
    std::vector<Real> subleading;  // delta_n (coefficient of x^(n-2))

    std::vector<std::string> warnings;

    Real poly_at(unsigned n, long k, int sign) const {
        const Real& v = poly[n][k];
        return (sign < 0 && n % 2 == 1) ? Real(-v) : v;
    }
};

struct StieltjesOptions {
    bool keep_polynomials = true;
};

/// Build orthonormal p_0..p_N by the three-term recurrence with b_n = 0:
/// p_0 = 1/sqrt(m_0); r = x p_n - a_n p_{n-1}; a_{n+1} = sqrt(∫ r^2 w);
/// p_{n+1} = r / a_{n+1}. The construction itself runs above the working
/// precision (the lattice conditioning costs about 8 N log10(1/q) digits),
/// so table entries are good at the context's working precision. Throws
/// PrecisionError if some a_{n+1}^2 <= 0. Warns (table.warnings) when
/// digits < 30 + 2N.
LatticeTable stieltjes(const ModelContext& ctx, unsigned N,
                       const StieltjesOptions& options = {});

/// Max over 0 <= i <= j <= N of |∫ p_i p_j w - delta_ij|. Entry index
/// encodes the pair as i*(N+1)+j.
ResidualReport gram_residual(const ModelContext& ctx, const LatticeTable& table);

/// |∫ x p_n^2 w| for n = 0..N, summing both lattice sides explicitly.
ResidualReport bn_residual(const ModelContext& ctx, const LatticeTable& table);

struct LeadingCoeffReport {
    /// gamma_{n-1}/gamma_n - a_n, n = 1..N, with gamma recovered by
    /// interpolation on the lattice nodes.
    ResidualReport ratio;
    /// delta_n/gamma_n + sum_{j<n} a_j^2, n = 1..N.
    ResidualReport subleading_sum;
};

/// Re-derive leading/subleading coefficients from node values by Newton
/// interpolation on q^0..q^n (independent of the construction rule) and
/// check both identities relating them to the a_n.
LeadingCoeffReport leading_coeff_check(const ModelContext& ctx,
                                       const LatticeTable& table);

/// Expansion coefficients of the q-derivative of p_n over p_0..p_{n-1},
/// by lattice quadrature over both signs.
std::vector<Real> fourier_dq_coeffs(const ModelContext& ctx,
                                    const LatticeTable& table, unsigned n);

/// Structure-relation check at index n (3 <= n <= N-1): compares the
/// quadrature coefficients of p_{n-1} and p_{n-3} in the expansion of the
/// q-derivative of p_n against the closed forms assembled from the table's
/// a_j^2. Residuals are normalized by max(1, |closed form|); entry indices
/// are n-1 and n-3.
ResidualReport structure_residuals(const ModelContext& ctx,
                                   const LatticeTable& table, unsigned n);

/// The two coefficient-comparison identities behind the recurrence, checked
/// directly from the table's a_j^2 (parity-appropriate forms, partial sums
/// included). Entry index 1 is the x^(n-1) identity (n >= 2), index 3 the
/// x^(n-3) identity (n >= 3). Residuals normalized by max(1, |RHS|).
ResidualReport intermediate_residuals(const ModelContext& ctx,
                                      const LatticeTable& table, unsigned n);

}  // namespace qfreud
