#include "barytope/moments.hpp"

#include <cmath>

#include "barytope/errors.hpp"
#include "barytope/parallel.hpp"
#include "barytope/sampling.hpp"

namespace bary {

namespace {

// One antiderivative evaluation for integral (a + s t)^(n-1) t^k dt, s != 0,
// as a function of u = a + s t:
//   k = 0:  u^n / (n s)
//   k = 1:  u^n (n u - (n+1) a) / (n (n+1) s^2)
// The linear factor is computed in plain doubles, so the cancellation at
// u = a (n+1)/n costs no log-domain precision.
SignedLog antiderivative(double u, double a, double s, int n, int k) {
    if (u <= 0.0) return SignedLog::zero();
    const SignedLog power = SignedLog::from_log(n * std::log(u));
    if (k == 0) return power * SignedLog::from_double(1.0 / (n * s));
    const double lin = n * u - (n + 1.0) * a;
    return power * SignedLog::from_double(lin / (n * (n + 1.0) * s * s));
}

} // namespace

SignedLog segment_moment(double a, double s, double t_lo, double t_hi, int n, int k) {
    if (k != 0 && k != 1) throw input_error("segment_moment: k must be 0 or 1");
    if (n < 2) throw input_error("segment_moment: n must be at least 2");
    if (!(t_lo < t_hi)) throw input_error("segment_moment: empty range");
    const double r_lo = a + s * t_lo;
    const double r_hi = a + s * t_hi;
    const double tol = 1e-12 * (1.0 + std::fabs(a));
    if (r_lo < -tol || r_hi < -tol)
        throw input_error("segment_moment: negative radius on the segment");

    if (s == 0.0) {
        if (a <= 0.0) return SignedLog::zero();
        const double poly = (std::pow(t_hi, k + 1) - std::pow(t_lo, k + 1)) / (k + 1);
        return SignedLog::from_log((n - 1.0) * std::log(a)) * SignedLog::from_double(poly);
    }
    const double u_lo = std::max(r_lo, 0.0);
    const double u_hi = std::max(r_hi, 0.0);
    return antiderivative(u_hi, a, s, n, k) - antiderivative(u_lo, a, s, n, k);
}

std::pair<SignedLog, SignedLog> profile_moments(const SliceProfile& profile, int n) {
    std::vector<SignedLog> m0, m1;
    m0.reserve(profile.segments().size());
    m1.reserve(profile.segments().size());
    for (const auto& seg : profile.segments()) {
        m0.push_back(segment_moment(seg.intercept, seg.slope, seg.t_lo, seg.t_hi, n, 0));
        m1.push_back(segment_moment(seg.intercept, seg.slope, seg.t_lo, seg.t_hi, n, 1));
    }
    return {signedlog_sum(m0), signedlog_sum(m1)};
}

std::pair<SignedLog, SignedLog> profile_mass_split(const SliceProfile& profile,
                                                   int n, double cut) {
    if (cut < profile.tmin() || cut > profile.tmax())
        throw input_error("profile_mass_split: cut outside the projection range");
    std::vector<SignedLog> upper, lower;
    for (const auto& seg : profile.segments()) {
        if (seg.t_lo < cut) {
            const double hi = std::min(seg.t_hi, cut);
            if (seg.t_lo < hi)
                lower.push_back(segment_moment(seg.intercept, seg.slope, seg.t_lo, hi, n, 0));
        }
        if (seg.t_hi > cut) {
            const double lo = std::max(seg.t_lo, cut);
            if (lo < seg.t_hi)
                upper.push_back(segment_moment(seg.intercept, seg.slope, lo, seg.t_hi, n, 0));
        }
    }
    return {signedlog_sum(upper), signedlog_sum(lower)};
}

int MomentEstimate::sign_call() const {
    if (value.is_zero()) return 0;
    if (stderr_.is_zero()) return value.sign;
    return value.logmag > std::log(3.0) + stderr_.logmag ? value.sign : 0;
}

namespace {

struct PairSample {
    SignedLog m0, m1;
};

std::vector<PairSample> collect_samples(const ProfileFamily& family, long n_samples,
                                        std::uint64_t seed, int threads) {
    if (family.theta_independent) {
        if (n_samples < 1) throw input_error("moment estimate: need at least one sample");
    } else if (n_samples < 1000) {
        throw input_error("moment estimate: need at least 1000 sphere samples");
    }
    std::vector<PairSample> out(static_cast<std::size_t>(n_samples));
    if (family.theta_independent) {
        const Eigen::VectorXd dummy = Eigen::VectorXd::Unit(family.theta_dim, 0);
        const auto [m0, m1] = profile_moments(family.profile(dummy), family.n);
        for (auto& p : out) p = {m0, m1};
        return out;
    }
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        const Eigen::VectorXd theta = sample_sphere(family.theta_dim, rng);
        const auto [m0, m1] = profile_moments(family.profile(theta), family.n);
        out[j] = {m0, m1};
    });
    return out;
}

SignedLog sum_component(const std::vector<PairSample>& samples, bool first) {
    std::vector<SignedLog> v;
    v.reserve(samples.size());
    for (const auto& p : samples) v.push_back(first ? p.m0 : p.m1);
    return signedlog_sum(v);
}

// Mean and standard error of per-sample SignedLog values.
void mean_and_stderr(const std::vector<SignedLog>& f, MomentEstimate& est) {
    const auto N = static_cast<double>(f.size());
    const SignedLog total = signedlog_sum(f);
    est.value = total * SignedLog::from_double(1.0 / N);
    std::vector<SignedLog> sq;
    sq.reserve(f.size());
    for (const auto& x : f) {
        const SignedLog r = x - est.value;
        sq.push_back(r * r);
    }
    const SignedLog ssq = signedlog_sum(sq);
    if (ssq.is_zero() || f.size() < 2) {
        est.stderr_ = SignedLog::zero();
    } else {
        est.stderr_ = SignedLog::from_log(0.5 * (ssq.logmag - std::log(N) - std::log(N - 1.0)));
    }
}

} // namespace

MomentEstimate centroid_height(const ProfileFamily& family, long n_samples,
                               std::uint64_t seed, int threads) {
    const auto samples = collect_samples(family, n_samples, seed, threads);
    const SignedLog s0 = sum_component(samples, true);
    const SignedLog s1 = sum_component(samples, false);
    if (s0.is_zero())
        throw geometry_error("centroid_height: zero slice mass (degenerate body)");

    const double ratio = s1.is_zero() ? 0.0
                                      : s1.sign * s0.sign * std::exp(s1.logmag - s0.logmag);

    MomentEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    est.value = SignedLog::from_double(ratio);

    // Delta-method error of the ratio of sums: sqrt(sum r_j^2) / sum m0 with
    // residuals r_j = m1_j - ratio * m0_j (their sum is zero by construction).
    const SignedLog ratio_sl = SignedLog::from_double(ratio);
    std::vector<SignedLog> sq;
    sq.reserve(samples.size());
    for (const auto& p : samples) {
        const SignedLog r = p.m1 - ratio_sl * p.m0;
        sq.push_back(r * r);
    }
    const SignedLog ssq = signedlog_sum(sq);
    if (ssq.is_zero() || n_samples < 2) {
        est.stderr_ = SignedLog::zero();
    } else {
        const double corr = 0.5 * std::log(static_cast<double>(n_samples) /
                                           static_cast<double>(n_samples - 1));
        est.stderr_ = SignedLog::from_log(0.5 * ssq.logmag - s0.logmag + corr);
    }
    return est;
}

MomentEstimate sign_integral_F(const ProfileFamily& family, double R, long n_samples,
                               std::uint64_t seed, int threads) {
    const Eigen::VectorXd probe = Eigen::VectorXd::Unit(family.theta_dim, 0);
    const SliceProfile ref = family.profile(probe);
    if (R < ref.tmin() || R > ref.tmax())
        throw input_error("sign_integral_F: R outside the projection range");

    const auto samples = collect_samples(family, n_samples, seed, threads);
    const SignedLog mR = SignedLog::from_double(-R);
    std::vector<SignedLog> f;
    f.reserve(samples.size());
    for (const auto& p : samples) f.push_back(p.m1 + mR * p.m0);

    MomentEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    mean_and_stderr(f, est);
    return est;
}

MomentEstimate half_volume_sign(const ProfileFamily& family, double R, long n_samples,
                                std::uint64_t seed, int threads) {
    const Eigen::VectorXd probe = Eigen::VectorXd::Unit(family.theta_dim, 0);
    const SliceProfile ref = family.profile(probe);
    if (R < ref.tmin() || R > ref.tmax())
        throw input_error("half_volume_sign: R outside the projection range");

    std::vector<SignedLog> f(static_cast<std::size_t>(n_samples));
    if (family.theta_independent) {
        const auto [up, down] = profile_mass_split(family.profile(probe), family.n, R);
        const SignedLog v = up - down;
        for (auto& x : f) x = v;
    } else {
        if (n_samples < 1000)
            throw input_error("moment estimate: need at least 1000 sphere samples");
        parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
            RngStream rng(seed, static_cast<std::uint64_t>(j));
            const Eigen::VectorXd theta = sample_sphere(family.theta_dim, rng);
            const auto [up, down] = profile_mass_split(family.profile(theta), family.n, R);
            f[j] = up - down;
        });
    }

    MomentEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    mean_and_stderr(f, est);
    return est;
}

std::vector<SweepRow> sweep(const std::string& kind, const std::vector<int>& n_list,
                            long n_samples, std::uint64_t seed, int threads,
                            double epsilon_coeff) {
    if (n_list.empty()) throw input_error("sweep: empty n list");
    std::vector<SweepRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        const double eps = kind == "p" ? epsilon_n(n, epsilon_coeff) : 0.0;
        const ProfileFamily family = profile_family(kind, n, eps);
        const MomentEstimate est = centroid_height(family, n_samples, seed, threads);
        SweepRow row;
        row.n = n;
        row.samples = n_samples;
        row.seed = seed;
        row.t_hat = est.value_as_double();
        row.stderr_ = est.stderr_as_double();
        row.gap = n - row.t_hat;
        row.gap_norm = row.gap / std::sqrt(n * std::log(static_cast<double>(n)));
        rows.push_back(row);
    }
    return rows;
}

} // namespace bary
