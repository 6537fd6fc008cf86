#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "barytope/bodies.hpp"
#include "barytope/rng.hpp"

namespace bary {

/// Uniform point on S^{n-1} (normalized Gaussian vector).
Eigen::VectorXd sample_sphere(int n, RngStream& rng);

/// Standard Gaussian vector in R^n.
Eigen::VectorXd sample_gaussian(int n, RngStream& rng);

struct SampleBatch {
    std::vector<Eigen::VectorXd> points;
    std::string body;
    std::string method;       // "hit-and-run" or "rejection"
    long burn_in = 0;
    long thinning = 1;
    long proposals = 0;       // rejection only: proposals consumed
};

/// Hit-and-run chain: uniform direction, chord endpoints located by bisection
/// on the membership oracle to 1e-10 along the ray, uniform step on the chord.
/// Keeps every `thin`-th state after discarding `burn_in`, so the number of
/// kept points is floor((steps - burn_in) / thin).
SampleBatch hit_and_run(const Body& body, const Eigen::VectorXd& x0, long steps,
                        long burn_in, long thin, RngStream& rng);

/// Same chain sized so that exactly `kept` points come out.
SampleBatch hit_and_run_kept(const Body& body, const Eigen::VectorXd& x0, long kept,
                             long burn_in, long thin, RngStream& rng);

/// Default chain heuristics: burn-in 10 n^2 steps, thinning n steps.
long default_burn_in(int n);
long default_thinning(int n);

/// Exact uniform samples by rejection from the body's bounding box. Guarded to
/// n <= 12; aborts if the observed acceptance rate drops below 1e-6.
/// Proposal j is drawn from stream (seed, j), so the accepted set is a fixed
/// subsequence independent of scheduling.
SampleBatch rejection_sample(const Body& body, long count, std::uint64_t seed,
                             int threads = 1);

struct NormStats {
    double median = 0.0;
    double l2 = 0.0;          // (mean |X|^2)^{1/2}
    double mean_norm = 0.0;   // |mean vector|
    double se_median = 0.0;   // bootstrap
    double se_l2 = 0.0;
    double se_mean_norm = 0.0;
    long n_points = 0;
};

/// Median of |X|, quadratic mean of |X|, and norm of the sample mean, with
/// bootstrap standard errors (200 resamples on the supplied stream).
NormStats norm_statistics(const SampleBatch& batch, RngStream& rng);

} // namespace bary
