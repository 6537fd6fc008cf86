#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barytope/bodies.hpp"
#include "barytope/signed_log.hpp"

namespace bary {

/// integral over [t_lo, t_hi] of (a + s t)^(n-1) t^k dt, k in {0, 1}, via the
/// closed-form antiderivative under u = a + s t, evaluated in the log domain.
/// The radius a + s t must be nonnegative on the segment.
SignedLog segment_moment(double a, double s, double t_lo, double t_hi, int n, int k);

/// Sum of segment moments over a profile, for k = 0 and k = 1.
/// M0 is never negative.
std::pair<SignedLog, SignedLog> profile_moments(const SliceProfile& profile, int n);

/// Mass of the profile above and below the cut: (integral of rho^{n-1} over
/// t > cut, same over t < cut). Used by the half-volume sign test.
std::pair<SignedLog, SignedLog> profile_mass_split(const SliceProfile& profile,
                                                   int n, double cut);

struct MomentEstimate {
    SignedLog value;      // ratio estimates store the plain ratio via from_double
    SignedLog stderr_;    // same scale as value, sign is 0 or +1
    long n_samples = 0;
    std::uint64_t seed = 0;

    double value_as_double() const { return value.to_double(); }
    double stderr_as_double() const { return stderr_.to_double(); }

    /// +1 / -1 when |value| clears 3 stderr, else 0 (indeterminate).
    int sign_call() const;
};

/// Monte Carlo centroid height: theta_j from stream (seed, j) uniform on the
/// sphere, per-theta closed-form (M0, M1), ratio estimate sum(M1)/sum(M0) with
/// the delta-method standard error. Identical (seed, N) give identical output
/// for any thread count.
MomentEstimate centroid_height(const ProfileFamily& family, long n_samples,
                               std::uint64_t seed, int threads = 1);

/// Estimate of M1 - R M0 (the centered first moment). value's sign certifies
/// the centroid side of R once it clears 3 stderr.
MomentEstimate sign_integral_F(const ProfileFamily& family, double R, long n_samples,
                               std::uint64_t seed, int threads = 1);

/// Estimate of integral of rho^{n-1} sign(t - R): positive means more than
/// half of the volume sits above the cut at R.
MomentEstimate half_volume_sign(const ProfileFamily& family, double R, long n_samples,
                                std::uint64_t seed, int threads = 1);

struct SweepRow {
    int n = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    double t_hat = 0.0;
    double stderr_ = 0.0;
    double gap = 0.0;       // n - t_hat
    double gap_norm = 0.0;  // gap / sqrt(n log n)
};

/// Centroid-height sweep over a list of dimensions for one body kind.
std::vector<SweepRow> sweep(const std::string& kind, const std::vector<int>& n_list,
                            long n_samples, std::uint64_t seed, int threads = 1,
                            double epsilon_coeff = 1.0);

} // namespace bary
