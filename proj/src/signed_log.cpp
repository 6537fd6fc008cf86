#include "barytope/signed_log.hpp"

#include <algorithm>

namespace bary {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative cancellation threshold: |x| - |y| combining to less than 1e-14 of
// the larger magnitude is treated as an exact zero.
constexpr double kCancelEps = 1e-14;

// Combine one positive log-magnitude and one negative one.
SignedLog combine(double log_pos, double log_neg) {
    if (log_pos == -kInf && log_neg == -kInf) return SignedLog::zero();
    if (log_neg == -kInf) return SignedLog::make(1, log_pos);
    if (log_pos == -kInf) return SignedLog::make(-1, log_neg);
    const double hi = std::max(log_pos, log_neg);
    const double lo = std::min(log_pos, log_neg);
    const double d = lo - hi; // <= 0
    const double residue = -std::expm1(d); // 1 - e^d, in [0,1]
    if (residue < kCancelEps) return SignedLog::zero();
    return SignedLog::make(log_pos > log_neg ? 1 : -1, hi + std::log(residue));
}

} // namespace

SignedLog SignedLog::operator+(const SignedLog& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    if (sign == o.sign) {
        const double hi = std::max(logmag, o.logmag);
        const double lo = std::min(logmag, o.logmag);
        return make(sign, hi + std::log1p(std::exp(lo - hi)));
    }
    const double lp = sign > 0 ? logmag : o.logmag;
    const double ln = sign > 0 ? o.logmag : logmag;
    return combine(lp, ln);
}

SignedLog signedlog_sum(std::span<const SignedLog> values) {
    double max_pos = -kInf, max_neg = -kInf;
    for (const auto& v : values) {
        if (v.sign > 0) max_pos = std::max(max_pos, v.logmag);
        if (v.sign < 0) max_neg = std::max(max_neg, v.logmag);
    }
    double acc_pos = 0.0, acc_neg = 0.0;
    for (const auto& v : values) {
        if (v.sign > 0) acc_pos += std::exp(v.logmag - max_pos);
        if (v.sign < 0) acc_neg += std::exp(v.logmag - max_neg);
    }
    const double log_pos = max_pos == -kInf ? -kInf : max_pos + std::log(acc_pos);
    const double log_neg = max_neg == -kInf ? -kInf : max_neg + std::log(acc_neg);
    return combine(log_pos, log_neg);
}

} // namespace bary
