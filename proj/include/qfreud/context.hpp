#pragma once

#include "qfreud/real.hpp"

#include <string>

namespace qfreud {

/// User-facing parameters, parsed exactly at working precision.
struct ContextSettings {
    std::string q = "0.9";
    std::string alpha = "5";
    std::string c = "-1";
    unsigned digits = 50;
    std::string series_tol{};   // empty: 10^(-digits)
    long lattice_cutoff = 0;    // 0: smallest K with q^K < series_tol
    bool exploratory = false;   // permit c > 0
};

/// Immutable bundle of model parameters (q, alpha, c), working precision and
/// truncation controls. Single source of configuration for every operation;
/// safe to share freely.
///
/// Invariants enforced at construction:
///   0 < q < 1,  alpha > -1,  c <= 0 unless exploratory,
///   digits >= 30,  series_tol <= 10^(-digits),  q^lattice_cutoff < series_tol.
class ModelContext {
public:
    explicit ModelContext(const ContextSettings& settings);

    /// Programmatic constructor; values are adopted as given (they should be
    /// at least `digits`-precise).
    ModelContext(const Real& q, const Real& alpha, const Real& c,
                 unsigned digits, const Real& series_tol = Real(),
                 long lattice_cutoff = 0, bool exploratory = false);

    const Real& q() const { return q_; }
    const Real& alpha() const { return alpha_; }
    const Real& c() const { return c_; }
    unsigned digits() const { return digits_; }
    const Real& series_tol() const { return series_tol_; }
    long lattice_cutoff() const { return cutoff_; }
    bool exploratory() const { return exploratory_; }

    /// Internal arithmetic runs at digits + kGuardDigits.
    unsigned working_digits() const { return digits_ + kGuardDigits; }
    PrecisionGuard guard() const { return PrecisionGuard(working_digits()); }

    // Cached powers, computed once at working precision.
    const Real& q_sq() const { return q_sq_; }
    const Real& q_four() const { return q_four_; }
    const Real& q_alpha() const { return q_alpha_; }  // q^alpha
    /// The constant weight denominator (1-q^4)^(alpha/4).
    const Real& weight_norm() const { return weight_norm_; }

    Real q_pow(long k) const;          // q^k, integer k (k may be negative)
    Real q_pow(const Real& e) const;   // q^e, real exponent

    /// Division guard separating genuine singularities from precision
    /// exhaustion: 10^(-digits/2).
    const Real& singular_threshold() const { return singular_threshold_; }

private:
    void validate_and_finish();

    Real q_, alpha_, c_;
    unsigned digits_;
    Real series_tol_;
    long cutoff_;
    bool exploratory_;

    Real q_sq_, q_four_, q_alpha_, weight_norm_, singular_threshold_;
};

}  // namespace qfreud
