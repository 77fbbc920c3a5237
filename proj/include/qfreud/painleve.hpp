#pragma once

#include "qfreud/context.hpp"
#include "qfreud/ortho.hpp"
#include "qfreud/real.hpp"
#include "qfreud/residual.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qfreud {

enum class Method { oracle, forward, fixedpoint, closed_form };
const char* method_name(Method m);

/// The scaled recurrence-coefficient sequence y_n = a_n^2 q^(1-n), with
/// y_0 = 0 by convention. `first_anomaly` records the first index where the
/// forward recursion lost positivity or hit a singularity guard.
struct CoefficientSequence {
    std::vector<Real> y;
    Method method = Method::oracle;
    std::optional<long> first_anomaly;
    std::string anomaly_note;

    long max_index() const { return static_cast<long>(y.size()) - 1; }
    Real a_sq(const ModelContext& ctx, unsigned n) const {
        return y[n] * ctx.q_pow(static_cast<long>(n) - 1);
    }

    static CoefficientSequence from_oracle(const ModelContext& ctx,
                                           const LatticeTable& table);
};

/// Closed form for y_1 = a_1^2: a q-Pochhammer ratio at c = -1, otherwise the
/// ratio of two basic hypergeometric-type series; always cross-checked
/// against the lattice moments m_2/m_0 (PrecisionError on mismatch).
Real y1_closed(const ModelContext& ctx);

/// One step of the forward recursion: the unique y_{n+1} solving the
/// factorized recurrence at index n (linear in y_{n+1}). Requires c != 0 and
/// |y_cur|, |-c y_cur y_prev + q^alpha| above the singularity threshold.
Real forward_step(const ModelContext& ctx, long n, const Real& y_prev,
                  const Real& y_cur);

/// Iterate the forward recursion from y_0 = 0, y_1 = y1_closed. At c = 0 the
/// recurrence degenerates and the exact closed-form sequence is returned
/// instead (method = closed_form). `run_digits`, when set below the working
/// precision, emulates a lower-precision run: constants and every iterate are
/// rounded to that many digits (this is the knob that exposes the forward
/// method's instability).
CoefficientSequence forward_run(const ModelContext& ctx, unsigned N,
                                std::optional<unsigned> run_digits = std::nullopt);

/// Same, but seeded with a caller-provided y_1 (e.g. oracle-accurate).
CoefficientSequence forward_run_from(const ModelContext& ctx, const Real& y1,
                                     unsigned N,
                                     std::optional<unsigned> run_digits = std::nullopt);

/// Residual of the parity-appropriate factorized recurrence at each
/// 1 <= n <= N-1, normalized by max(1, |RHS|).
ResidualReport painleve_residual(const ModelContext& ctx,
                                 const CoefficientSequence& seq);

/// Quartic: u_n = q^(-alpha) y_2n, v_n = -y_{2n+1} (requires c = -1).
/// General: u_n = q^(-alpha) y_2n, v_n = c y_{2n+1}.
enum class UVVariant { Quartic, General };

struct UVRows {
    std::vector<Real> u, v;
    UVVariant variant = UVVariant::General;
};

UVRows to_uv(const ModelContext& ctx, const CoefficientSequence& seq,
             UVVariant variant);
CoefficientSequence from_uv(const ModelContext& ctx, const UVRows& rows,
                            Method method);

/// Residuals of both displayed equations of the chosen asymmetric form.
/// Entry index 2m is the u-equation at m, 2m+1 the v-equation at m;
/// values normalized by max(1, |RHS|).
ResidualReport uv_residual(const ModelContext& ctx, const UVRows& rows);

struct AsymptoteGapReport {
    /// Entry at even index 2n: |y_2n - q^alpha|; odd index 2n+1: |y_{2n+1} - 1|.
    ResidualReport gaps;
    /// Largest index past which both parity classes decrease strictly.
    long monotone_from = 0;
};
AsymptoteGapReport asymptote_gap(const ModelContext& ctx,
                                 const CoefficientSequence& seq);

enum class Parity { Even, Odd };

struct SingularityTrace {
    Parity parity = Parity::Even;
    long n = 0;
    Real epsilon;
    std::array<Real, 5> y_values;       // y_n .. y_{n+4}
    Real predicted_y4;                  // the confinement formula's value
    std::array<double, 4> fitted_orders;  // order in epsilon of y_{n+1}..y_{n+4}
};

/// Seed y_{n-1} = y_before, y_n = epsilon, run four forward steps, fit the
/// order in epsilon of each value by comparing with the run at epsilon/2,
/// and record the confinement formula's prediction for y_{n+4}.
SingularityTrace confinement_probe(const ModelContext& ctx, long n, Parity parity,
                                   const Real& y_before, const Real& epsilon);

/// The O(1) coefficient of y_{n+4} after a y_n = 0 singularity at index n
/// with pre-singularity value y_before.
Real confinement_prediction(const ModelContext& ctx, long n, Parity parity,
                            const Real& y_before);

struct Dp1LimitReport {
    std::vector<std::string> q_grid;
    std::vector<ResidualReport> per_q;
    /// n values whose |r_n| fails to decrease strictly along the q grid.
    std::vector<long> decrease_violations;
};

/// Residuals of the additive discrete-Painleve limit target
/// x_{n+1}+x_n+x_{n-1} - (2n+alpha-alpha(-1)^n)/(8 x_n) + a with
/// x_n = a_n^2/sqrt(1-q^4), a_n^2 from the oracle, and c tied to a via
/// c = -1 + a sqrt(1-q^4) for each q in the grid.
Dp1LimitReport dp1_limit_residual(const ContextSettings& base, const std::string& a,
                                  unsigned n_max,
                                  const std::vector<std::string>& q_grid = {
                                      "0.9", "0.99", "0.999"});

/// Gaps between the two asymmetric q-Painleve-V right sides (under the
/// degenerating parameter substitution with small kappa) and their limit
/// targets (1-u)(1-cu)/q^(2n) and (1-v)(1-v/c)/q^(2n+1+alpha). Each gap is
/// O(kappa). v_pair carries the two consecutive v-row entries entering the
/// n-th pair of equations; the second entry is only pole-checked.
std::pair<Real, Real> qpv_limit_gap(const ModelContext& ctx, long n, const Real& u,
                                    const std::pair<Real, Real>& v_pair,
                                    const Real& kappa);

}  // namespace qfreud
