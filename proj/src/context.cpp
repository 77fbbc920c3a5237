#include "qfreud/context.hpp"

#include "qfreud/errors.hpp"


namespace qfreud {

std::string to_decimal_string(const Real& v, unsigned digits) {
    if (!isfinite(v)) {
        if (isnan(v)) return "nan";
        return v < 0 ? "-inf" : "inf";
    }
    return v.str(digits, std::ios_base::scientific);
}

ModelContext::ModelContext(const ContextSettings& s) : digits_(s.digits) {
    if (digits_ < 30)
        throw DomainError("digits must be >= 30, got " + std::to_string(digits_));
    PrecisionGuard guard(working_digits());
    q_ = Real(s.q);
    alpha_ = Real(s.alpha);
    c_ = Real(s.c);
    series_tol_ = s.series_tol.empty() ? Real(0) : Real(s.series_tol.c_str());
    cutoff_ = s.lattice_cutoff;
    exploratory_ = s.exploratory;
    validate_and_finish();
}

ModelContext::ModelContext(const Real& q, const Real& alpha, const Real& c,
                           unsigned digits, const Real& series_tol,
                           long lattice_cutoff, bool exploratory)
    : q_(q), alpha_(alpha), c_(c), digits_(digits), series_tol_(series_tol),
      cutoff_(lattice_cutoff), exploratory_(exploratory) {
    if (digits_ < 30)
        throw DomainError("digits must be >= 30, got " + std::to_string(digits_));
    PrecisionGuard guard(working_digits());
    validate_and_finish();
}

void ModelContext::validate_and_finish() {
    if (!(q_ > 0 && q_ < 1))
        throw DomainError("q must lie in (0,1)");
    if (!(alpha_ > -1))
        throw DomainError("alpha must be > -1");
    if (c_ > 0 && !exploratory_)
        throw DomainError("c > 0 requires the exploratory flag");

    Real digits_floor = pow10(-static_cast<long>(digits_));
    if (isnan(series_tol_) || series_tol_ == 0) {
        series_tol_ = digits_floor;
    } else if (!(series_tol_ > 0) || series_tol_ > digits_floor) {
        throw DomainError("series_tol must lie in (0, 10^-digits]");
    }

    if (cutoff_ == 0) {
        // Smallest K with q^K < series_tol.
        Real ratio = log(series_tol_) / log(q_);
        cutoff_ = static_cast<long>(ceil(ratio).convert_to<long>());
        while (pow(q_, cutoff_) >= series_tol_) ++cutoff_;
    } else if (pow(q_, cutoff_) >= series_tol_) {
        throw DomainError("lattice_cutoff K must satisfy q^K < series_tol");
    }

    q_sq_ = q_ * q_;
    q_four_ = q_sq_ * q_sq_;
    q_alpha_ = pow(q_, alpha_);
    weight_norm_ = pow(1 - q_four_, alpha_ / 4);
    singular_threshold_ = pow10(-static_cast<long>(digits_ / 2));
}

Real ModelContext::q_pow(long k) const {
    if (k >= 0) return pow(q_, static_cast<unsigned>(k));
    return 1 / pow(q_, static_cast<unsigned>(-k));
}

Real ModelContext::q_pow(const Real& e) const { return pow(q_, e); }

}  // namespace qfreud
