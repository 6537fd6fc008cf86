#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "barytope/sampling.hpp"

namespace bary {

/// One empirical inequality check: a measured left side (with Monte Carlo
/// standard error where applicable) against a bound formula value.
/// passed <=> lhs <= rhs + 3 * lhs_stderr.
struct BoundCheck {
    std::string name;
    std::string parameters;
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    bool passed = false;
    double margin = 0.0; // rhs - lhs

    static BoundCheck make(std::string name, std::string parameters, double lhs,
                           double lhs_stderr, double rhs);
};

/// Exact Haar measure of the cap {theta in S^{n-1} : theta_1 > t}, t in (0,1),
/// via the regularized incomplete beta function: I_{1-t^2}((n-1)/2, 1/2) / 2.
double cap_measure_exact(int n, double t);

/// Monte Carlo cap measure with seed-indexed sphere samples.
std::pair<double, double> cap_measure_mc(int n, double t, long n_samples,
                                         std::uint64_t seed, int threads = 1);

/// Exact cap measure against 2 exp(-C3 t^2 n) on a grid, plus (when
/// mc_samples > 0) exact-vs-MC agreement checks.
std::vector<BoundCheck> check_cap_bound(const std::vector<int>& n_grid,
                                        const std::vector<double>& t_grid, double C3,
                                        long mc_samples = 0, std::uint64_t seed = 0,
                                        int threads = 1);

using SphereFunction = std::function<double(const Eigen::VectorXd&)>;

/// Empirical tail sigma(|f - mean f| >= b t) against 4 exp(-C4 t^2 n) for each
/// t in the grid. The Lipschitz claim |f(x)-f(y)| <= b |x-y| is spot-checked
/// on 1000 random pairs first and a violation is an input error.
std::vector<BoundCheck> lipschitz_concentration_check(const SphereFunction& f, double b,
                                                      int n, const std::vector<double>& t_grid,
                                                      long n_samples, std::uint64_t seed,
                                                      double C4 = 0.5, int threads = 1);

/// The bad-direction sets of the two constructions at (n, epsilon):
///   O1 = {rho_Q(theta, R0) <= rho_L(R0)}, R0 = n - (C0/2) sqrt(n log n),
///        measured against 1/2;
///   O2 = {rho_Q(theta, eps n) <= rho_L2(theta)}, against 1/4;
///   {rho_L2(theta) <= 5 sqrt(eps n)}, against 1/4;
/// plus the exact implication on O2 members: rho_Q(theta, eps n) <= 4 sqrt(eps n).
std::vector<BoundCheck> bad_set_measures(int n, double epsilon, double C0,
                                         long n_samples, std::uint64_t seed,
                                         int threads = 1);

/// Uniform-in-convex-body tail bound: with U = R B_2^n chosen so that the
/// empirical mass delta of U exceeds 1/2, the tail P(|X| > t R) is compared to
/// delta ((1-delta)/delta)^{(t+1)/2} for each t >= 1 in the grid.
std::vector<BoundCheck> borell_tail_check(const SampleBatch& batch,
                                          const std::vector<double>& t_grid,
                                          double delta_target = 2.0 / 3.0);

/// Moment comparison sandwiches on a batch:
///   per seminorm (|<., d>| for each direction, plus |.|):
///     (E|f|^p)^{1/p} <= (E|f|^q)^{1/q}, zero tolerance, with the smallest
///     ratio constant reported;
///   median/sqrt(2) <= (E|X|^2)^{1/2}, zero tolerance, fitted upper constant;
///   |mean X|^2 <= E|X|^2, zero tolerance, fitted linear-in-n constant for the
///   upper side (slope convention: unit coefficient on |mean X|^2).
std::vector<BoundCheck> moment_sandwich_checks(const SampleBatch& batch,
                                               const std::vector<Eigen::VectorXd>& directions,
                                               double p, double q);

/// Gaussian norm bounds for the two-coordinate norm at (n, epsilon):
/// pointwise ||g|| <= 2 max|g_i|, the expectation chain with fitted
/// coefficients, the extreme-value scale of E max|g_i|, and the fitted
/// sphere-to-Gaussian ratio.
std::vector<BoundCheck> gaussian_norm_bounds(int n, double epsilon, long n_samples,
                                             std::uint64_t seed, int threads = 1);

/// Small-ball linearity: with U = R B_2^n at mass b, reports mu(t U)/(t mu(U))
/// over the grid and asserts the bound with the fitted constant.
std::vector<BoundCheck> small_ball_check(const SampleBatch& batch, double b,
                                         const std::vector<double>& t_grid);

/// JSON rendering of a list of checks (used by the CLI and by file outputs).
std::string bound_checks_to_json(const std::vector<BoundCheck>& checks,
                                 const std::string& config_echo);

} // namespace bary
