#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace bary {

/// Scalar stored as sign plus log-magnitude. Radial integrands carry powers
/// like rho^(n-1) at n of several hundred, which overflow doubles; all moment
/// accumulation runs on this type instead.
///
/// Invariant: sign == 0  <=>  logmag == -infinity.
struct SignedLog {
    double logmag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog zero() { return {}; }

    static SignedLog make(int s, double lm) {
        if (s == 0 || lm == -std::numeric_limits<double>::infinity()) return {};
        return {lm, s > 0 ? 1 : -1};
    }

    static SignedLog from_double(double x) {
        if (x == 0.0 || std::isnan(x)) return {};
        return {std::log(std::fabs(x)), x > 0 ? 1 : -1};
    }

    /// Positive value given directly in log form: exp(lm).
    static SignedLog from_log(double lm) { return make(1, lm); }

    bool is_zero() const { return sign == 0; }

    /// May overflow to +/-inf for |logmag| beyond double range; that is the
    /// caller's concern (ratios and signs never get here).
    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(logmag);
    }

    SignedLog operator-() const { return {logmag, -sign}; }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return {};
        return {logmag + o.logmag, sign * o.sign};
    }

    SignedLog operator*(double x) const { return *this * from_double(x); }

    SignedLog operator+(const SignedLog& o) const;
    SignedLog operator-(const SignedLog& o) const { return *this + (-o); }

    /// |a| < |b| in magnitude.
    static bool abs_less(const SignedLog& a, const SignedLog& b) {
        return a.logmag < b.logmag;
    }
};

/// Exact-sign, log-stable sum: positive and negative terms are accumulated
/// as separate log-sum-exp passes and combined once at the end. Cancellation
/// below relative 1e-14 snaps to an exact zero so that sign tests of
/// near-cancelling integrals report an abstention instead of noise.
SignedLog signedlog_sum(std::span<const SignedLog> values);

inline SignedLog signedlog_sum(const std::vector<SignedLog>& values) {
    return signedlog_sum(std::span<const SignedLog>(values));
}

} // namespace bary
