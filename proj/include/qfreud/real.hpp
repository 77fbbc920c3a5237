#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace qfreud {

/// Configurable-precision real number. Every value carries its own
/// precision; arithmetic never rounds below the precision of its operands.
using Real = boost::multiprecision::mpfr_float;

/// Guard digits carried internally beyond the requested working precision.
inline constexpr unsigned kGuardDigits = 10;

/// Scoped default precision (decimal digits). Freshly constructed values
/// and string conversions pick up the active default; restoring on exit
/// keeps nested computations at different precisions from leaking.
class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned decimal_digits)
        : saved_(Real::default_precision()) {
        Real::default_precision(decimal_digits);
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }

    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

/// 10^e at the current default precision.
inline Real pow10(long e) { return pow(Real(10), e); }

/// Copy of `v` rounded to `decimal_digits` precision.
inline Real round_to(const Real& v, unsigned decimal_digits) {
    Real r(v);
    r.precision(decimal_digits);
    return r;
}

/// Serialize with `digits` significant digits in scientific notation, so the
/// string is lossless at working precision regardless of magnitude.
std::string to_decimal_string(const Real& v, unsigned digits);

}  // namespace qfreud
