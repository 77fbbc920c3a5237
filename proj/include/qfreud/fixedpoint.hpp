#pragma once

#include "qfreud/context.hpp"
#include "qfreud/painleve.hpp"
#include "qfreud/real.hpp"

#include <utility>
#include <vector>

namespace qfreud {

/// The double row (xi, eta) the bracketing operator acts on: xi_n plays the
/// role of y_2n and eta_n of y_{2n+1}. Rows are kept at equal length
/// (= window); all entries are >= 0 in valid states and xi_0 = 0 after every
/// application of the operator.
struct RowPair {
    std::vector<Real> xi, eta;
    unsigned iteration_count = 0;

    long window() const { return static_cast<long>(xi.size()); }
    static RowPair zeros(long window);
};

/// Positive root of the quadratic driving the xi-row:
/// (-x + sqrt(x^2 + 4(1-q^(2n)) y)) / (2 q^(-alpha) y). For |y| below the
/// singularity threshold the analytic y->0 branch q^alpha (1-q^(2n))/x is
/// used (requires x away from 0).
Real xi_root(const ModelContext& ctx, long n, const Real& x, const Real& y);

/// Positive root for the eta-row: (-x + sqrt(x^2 + 4(1-q^(2n+1+alpha)) y))/(2y),
/// with y->0 branch (1-q^(2n+1+alpha))/x.
Real eta_root(const ModelContext& ctx, long n, const Real& x, const Real& y);

/// Boundary closure for one application of the operator. Shrink drops one
/// trailing index per application (no boundary influence on the retained
/// prefix); Clamp pads the rows with their limit values q^alpha and 1.
enum class TailPolicy { Shrink, Clamp };

/// One application of the order-reversing operator: the new xi-row is built
/// from the old eta-row and vice versa. Output entries are all >= 0 and
/// xi'_0 = 0.
RowPair apply_T(const ModelContext& ctx, const RowPair& rows,
                TailPolicy policy = TailPolicy::Shrink);

struct BracketReport {
    std::vector<Real> lower_xi, lower_eta;  // final even iterate (lower bound)
    std::vector<Real> upper_xi, upper_eta;  // final odd iterate (upper bound)
    Real width_max;                         // termwise max(upper - lower) on the retained window

    struct Violation {
        unsigned iteration;
        long index;
        bool xi_row;
        Real magnitude;
    };
    /// Monotonicity/sandwich failures above the working-precision floor
    /// 10^(3 - working_digits); expected empty.
    std::vector<Violation> violations;

    bool converged = false;
    unsigned iterations = 0;

    std::vector<Real> y1_trace;     // eta_0 after each application
    std::vector<Real> width_trace;  // bracket width after each complete even/odd pair
};

/// Iterate the operator from (0,0), checking that even iterates are
/// termwise nondecreasing, odd iterates nonincreasing, and that the even/odd
/// bracket stays ordered. Stops when the termwise bracket width on the
/// entries feeding y_0..y_N drops below tol, or after max_iter applications
/// (converged = false; the report is returned either way, since the bracket
/// limits are not known to coincide non-convergence is a report, not an
/// error). The returned sequence interleaves the bracket midpoint back into
/// y-indexing.
std::pair<CoefficientSequence, BracketReport> solve(const ModelContext& ctx,
                                                    unsigned N, unsigned max_iter,
                                                    const Real& tol,
                                                    TailPolicy policy = TailPolicy::Shrink);

/// Upper bound of the row region on which order reversal is exercised by the
/// property tests: max(1, q^alpha, 1/|c|, q^alpha/|c|) * (1 + margin)
/// (the 1/c factors only for c < 0).
Real admissible_upper(const ModelContext& ctx, const Real& margin);

}  // namespace qfreud
