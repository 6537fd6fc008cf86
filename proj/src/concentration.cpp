#include "barytope/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "barytope/bodies.hpp"
#include "barytope/errors.hpp"
#include "barytope/parallel.hpp"

namespace bary {

BoundCheck BoundCheck::make(std::string name, std::string parameters, double lhs,
                            double lhs_stderr, double rhs) {
    BoundCheck c;
    c.name = std::move(name);
    c.parameters = std::move(parameters);
    c.lhs = lhs;
    c.lhs_stderr = lhs_stderr;
    c.rhs = rhs;
    c.passed = lhs <= rhs + 3.0 * lhs_stderr;
    c.margin = rhs - lhs;
    return c;
}

double cap_measure_exact(int n, double t) {
    if (n < 2) throw input_error("cap_measure_exact: n must be at least 2");
    if (!(t > 0.0 && t < 1.0)) throw input_error("cap_measure_exact: t must be in (0,1)");
    return 0.5 * boost::math::ibeta((n - 1) / 2.0, 0.5, 1.0 - t * t);
}

std::pair<double, double> cap_measure_mc(int n, double t, long n_samples,
                                         std::uint64_t seed, int threads) {
    if (n_samples < 1) throw input_error("cap_measure_mc: need samples");
    std::atomic<long> hits{0};
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        const Eigen::VectorXd theta = sample_sphere(n, rng);
        if (theta[0] > t) hits.fetch_add(1, std::memory_order_relaxed);
    });
    const double p = static_cast<double>(hits.load()) / static_cast<double>(n_samples);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    return {p, se};
}

std::vector<BoundCheck> check_cap_bound(const std::vector<int>& n_grid,
                                        const std::vector<double>& t_grid, double C3,
                                        long mc_samples, std::uint64_t seed, int threads) {
    std::vector<BoundCheck> out;
    for (int n : n_grid) {
        for (double t : t_grid) {
            const double exact = cap_measure_exact(n, t);
            const double bound = 2.0 * std::exp(-C3 * t * t * n);
            std::ostringstream ps;
            ps << "n=" << n << " t=" << t << " C3=" << C3;
            out.push_back(BoundCheck::make("cap-bound", ps.str(), exact, 0.0, bound));
            if (mc_samples > 0) {
                const auto [p, se_hat] = cap_measure_mc(n, t, mc_samples, seed, threads);
                // Error bars from the exact probability: stable when the cap
                // is far below 1/N and the empirical count is zero.
                const double se =
                    std::sqrt(exact * (1.0 - exact) / static_cast<double>(mc_samples));
                std::ostringstream pm;
                pm << "n=" << n << " t=" << t << " samples=" << mc_samples
                   << " p_hat=" << p << " se_hat=" << se_hat;
                out.push_back(BoundCheck::make("cap-mc-agreement", pm.str(),
                                               std::fabs(p - exact), se, 0.0));
            }
        }
    }
    return out;
}

std::vector<BoundCheck> lipschitz_concentration_check(const SphereFunction& f, double b,
                                                      int n, const std::vector<double>& t_grid,
                                                      long n_samples, std::uint64_t seed,
                                                      double C4, int threads) {
    if (n < 2) throw input_error("lipschitz check: n must be at least 2");
    {
        RngStream rng(seed, 0xfeedULL);
        for (int k = 0; k < 1000; ++k) {
            const Eigen::VectorXd x = sample_sphere(n, rng);
            const Eigen::VectorXd y = sample_sphere(n, rng);
            const double dv = std::fabs(f(x) - f(y));
            if (dv > b * (x - y).norm() * (1.0 + 1e-9) + 1e-12)
                throw input_error("lipschitz check: spot check found a violating pair");
        }
    }

    std::vector<double> vals(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        vals[j] = f(sample_sphere(n, rng));
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n_samples);

    std::vector<BoundCheck> out;
    for (double t : t_grid) {
        long hits = 0;
        for (double v : vals)
            if (std::fabs(v - mean) >= b * t) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
        const double bound = 4.0 * std::exp(-C4 * t * t * n);
        std::ostringstream ps;
        ps << "n=" << n << " t=" << t << " b=" << b << " C4=" << C4
           << " samples=" << n_samples;
        out.push_back(BoundCheck::make("lipschitz-tail", ps.str(), p, se, bound));
    }
    return out;
}

std::vector<BoundCheck> bad_set_measures(int n, double epsilon, double C0,
                                         long n_samples, std::uint64_t seed, int threads) {
    if (n < 3) throw input_error("bad_set_measures: n must be at least 3");
    if (!(epsilon > 10.0 / n && epsilon < 1.0))
        throw input_error("bad_set_measures: epsilon must satisfy 10/n < epsilon < 1");
    const double R0 = n - 0.5 * C0 * std::sqrt(n * std::log(static_cast<double>(n)));
    if (R0 < -1.0 || R0 > static_cast<double>(n))
        throw input_error("bad_set_measures: R0 outside [-1, n]; n too small for C0=" +
                          std::to_string(C0));
    const double t_eps = epsilon * n;
    const double thresh_L = 5.0 * std::sqrt(epsilon * n);
    const double thresh_Q = 4.0 * std::sqrt(epsilon * n);

    std::atomic<long> c_o1{0}, c_o2{0}, c_small{0}, c_impl_bad{0};
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        const Eigen::VectorXd theta = sample_sphere(n - 1, rng);
        const double rq_R0 = rho_Q(theta, R0, n);
        if (rq_R0 <= rho_L(R0, n)) c_o1.fetch_add(1, std::memory_order_relaxed);
        const double rq = rho_Q(theta, t_eps, n);
        const double rl = rho_L2(theta, n, epsilon);
        if (rq <= rl) {
            c_o2.fetch_add(1, std::memory_order_relaxed);
            if (rq > thresh_Q) c_impl_bad.fetch_add(1, std::memory_order_relaxed);
        }
        if (rl <= thresh_L) c_small.fetch_add(1, std::memory_order_relaxed);
    });

    const auto frac = [n_samples](long c) {
        return static_cast<double>(c) / static_cast<double>(n_samples);
    };
    const auto se = [n_samples](double p) {
        return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    };

    std::ostringstream ps;
    ps << "n=" << n << " epsilon=" << epsilon << " C0=" << C0 << " R0=" << R0
       << " samples=" << n_samples;

    std::vector<BoundCheck> out;
    const double p1 = frac(c_o1.load());
    out.push_back(BoundCheck::make("bad-set-O1", ps.str(), p1, se(p1), 0.5));
    const double p2 = frac(c_o2.load());
    out.push_back(BoundCheck::make("bad-set-O2", ps.str(), p2, se(p2), 0.25));
    const double p3 = frac(c_small.load());
    out.push_back(BoundCheck::make("bad-set-Lprime-small", ps.str(), p3, se(p3), 0.25));
    // Algebraic implication: exact, no statistical slack.
    const long o2 = c_o2.load();
    const double viol = o2 == 0 ? 0.0
                               : static_cast<double>(c_impl_bad.load()) /
                                     static_cast<double>(o2);
    std::ostringstream pi;
    pi << ps.str() << " o2_members=" << o2;
    out.push_back(BoundCheck::make("O2-implication-exact", pi.str(), viol, 0.0, 0.0));
    return out;
}

namespace {

std::vector<double> batch_norms(const SampleBatch& batch) {
    std::vector<double> norms;
    norms.reserve(batch.points.size());
    for (const auto& x : batch.points) norms.push_back(x.norm());
    return norms;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const auto n = static_cast<long>(sorted.size());
    long k = static_cast<long>(std::ceil(q * static_cast<double>(n))) - 1;
    k = std::clamp(k, 0L, n - 1);
    return sorted[static_cast<std::size_t>(k)];
}

} // namespace

std::vector<BoundCheck> borell_tail_check(const SampleBatch& batch,
                                          const std::vector<double>& t_grid,
                                          double delta_target) {
    if (batch.points.empty()) throw input_error("borell check: empty batch");
    std::vector<double> norms = batch_norms(batch);
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const double R = quantile_sorted(sorted, delta_target);
    const auto N = static_cast<double>(norms.size());
    long inside = 0;
    for (double v : norms)
        if (v <= R) ++inside;
    const double delta = static_cast<double>(inside) / N;
    if (!(delta > 0.5))
        throw input_error("borell check: achieved mass delta <= 1/2");

    std::vector<BoundCheck> out;
    for (double t : t_grid) {
        if (t < 1.0) throw input_error("borell check: t grid must be >= 1");
        long hits = 0;
        for (double v : norms)
            if (v > t * R) ++hits;
        const double p = static_cast<double>(hits) / N;
        const double se = std::sqrt(p * (1.0 - p) / N);
        const double bound = delta * std::pow((1.0 - delta) / delta, 0.5 * (t + 1.0));
        std::ostringstream ps;
        ps << "body=" << batch.body << " delta=" << delta << " R=" << R << " t=" << t
           << " n_points=" << norms.size();
        out.push_back(BoundCheck::make("borell-tail", ps.str(), p, se, bound));
    }
    return out;
}

std::vector<BoundCheck> moment_sandwich_checks(const SampleBatch& batch,
                                               const std::vector<Eigen::VectorXd>& directions,
                                               double p, double q) {
    if (batch.points.empty()) throw input_error("moment sandwich: empty batch");
    if (!(q > p && p >= 1.0)) throw input_error("moment sandwich: need q > p >= 1");
    const auto N = static_cast<double>(batch.points.size());
    const int dim = static_cast<int>(batch.points[0].size());

    std::vector<BoundCheck> out;

    auto add_seminorm = [&](const std::string& label,
                            const std::function<double(const Eigen::VectorXd&)>& f) {
        double sp = 0.0, sq = 0.0;
        for (const auto& x : batch.points) {
            const double v = std::fabs(f(x));
            sp += std::pow(v, p);
            sq += std::pow(v, q);
        }
        const double mp = std::pow(sp / N, 1.0 / p);
        const double mq = std::pow(sq / N, 1.0 / q);
        const double fitted_c5 = mq / ((q / p) * mp);
        std::ostringstream ps;
        ps << "f=" << label << " p=" << p << " q=" << q << " fitted_C5=" << fitted_c5
           << " n_points=" << batch.points.size();
        out.push_back(BoundCheck::make("lp-monotone", ps.str(), mp, 0.0, mq));
        out.push_back(BoundCheck::make("lp-ratio-fitted", ps.str(), mq, 0.0,
                                       fitted_c5 * (q / p) * mp));
    };

    for (std::size_t d = 0; d < directions.size(); ++d) {
        const Eigen::VectorXd dir = directions[d].normalized();
        add_seminorm("dir" + std::to_string(d),
                     [dir](const Eigen::VectorXd& x) { return dir.dot(x); });
    }
    add_seminorm("euclid", [](const Eigen::VectorXd& x) { return x.norm(); });

    // Median / second-moment sandwich and the centroid comparison.
    std::vector<double> norms = batch_norms(batch);
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const double median = quantile_sorted(sorted, 0.5);
    double sumsq = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const auto& x : batch.points) {
        sumsq += x.squaredNorm();
        mean += x;
    }
    mean /= N;
    const double meansq = sumsq / N;
    const double l2 = std::sqrt(meansq);
    const double fitted_c9 = l2 / median;
    {
        std::ostringstream ps;
        ps << "body=" << batch.body << " median=" << median << " L2=" << l2
           << " fitted_C9=" << fitted_c9;
        out.push_back(BoundCheck::make("median-lower", ps.str(), median / std::sqrt(2.0),
                                       0.0, l2));
        out.push_back(BoundCheck::make("median-upper-fitted", ps.str(), l2, 0.0,
                                       fitted_c9 * median));
    }
    {
        const double xk2 = mean.squaredNorm();
        // Upper-side convention: unit coefficient on |x_K|^2, the dimension
        // slope is the fitted constant.
        const double fitted_c11 = std::max(0.0, (meansq - xk2) / dim);
        std::ostringstream ps;
        ps << "body=" << batch.body << " |xK|^2=" << xk2 << " E|X|^2=" << meansq
           << " fitted_C10=1 fitted_C11=" << fitted_c11;
        out.push_back(BoundCheck::make("center-jensen", ps.str(), xk2, 0.0, meansq));
        out.push_back(BoundCheck::make("second-moment-upper-fitted", ps.str(), meansq, 0.0,
                                       xk2 + fitted_c11 * dim));
    }
    return out;
}

std::vector<BoundCheck> gaussian_norm_bounds(int n, double epsilon, long n_samples,
                                             std::uint64_t seed, int threads) {
    if (n < 3) throw input_error("gaussian_norm_bounds: n must be at least 3");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw input_error("gaussian_norm_bounds: epsilon must be in (0, 1)");
    const int m = n - 1;
    const double pcoef = 1.0 - epsilon;
    const double qcoef = std::sqrt(1.0 - pcoef * pcoef);

    auto two_norm = [&](const Eigen::VectorXd& y) {
        double m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < y.size(); ++i) {
            const double a = std::fabs(y[i]);
            if (a > m1) {
                m2 = m1;
                m1 = a;
            } else if (a > m2) {
                m2 = a;
            }
        }
        return std::max(pcoef * m1 + qcoef * m2, qcoef * m1 + pcoef * m2);
    };

    std::vector<double> norm_g(static_cast<std::size_t>(n_samples));
    std::vector<double> max_g(static_cast<std::size_t>(n_samples));
    std::atomic<long> pointwise_bad{0};
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        const Eigen::VectorXd g = sample_gaussian(m, rng);
        norm_g[j] = two_norm(g);
        max_g[j] = g.cwiseAbs().maxCoeff();
        if (norm_g[j] > 2.0 * max_g[j] + 1e-12)
            pointwise_bad.fetch_add(1, std::memory_order_relaxed);
    });
    std::vector<double> norm_t(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t j) {
        RngStream rng(seed, static_cast<std::uint64_t>(n_samples) + j);
        norm_t[j] = two_norm(sample_sphere(m, rng));
    });

    auto mean_se = [](const std::vector<double>& v) {
        const auto N = static_cast<double>(v.size());
        double mu = 0.0;
        for (double x : v) mu += x;
        mu /= N;
        double s2 = 0.0;
        for (double x : v) s2 += (x - mu) * (x - mu);
        return std::make_pair(mu, std::sqrt(s2 / (N * (N - 1.0))));
    };
    const auto [mg, se_g] = mean_se(norm_g);
    const auto [mm, se_m] = mean_se(max_g);
    const auto [mt, se_t] = mean_se(norm_t);

    std::vector<BoundCheck> out;
    std::ostringstream base;
    base << "n=" << n << " epsilon=" << epsilon << " samples=" << n_samples;
    out.push_back(BoundCheck::make("gaussian-norm-pointwise", base.str(),
                                   static_cast<double>(pointwise_bad.load()), 0.0, 0.0));
    {
        const double se = std::sqrt(se_g * se_g + 4.0 * se_m * se_m);
        out.push_back(BoundCheck::make("gaussian-norm-vs-max", base.str(), mg, se, 2.0 * mm));
    }
    {
        const double scale = std::sqrt(2.0 * std::log(static_cast<double>(m)));
        const double ratio = mm / scale;
        std::ostringstream ps;
        ps << base.str() << " ratio=" << ratio;
        out.push_back(BoundCheck::make("gaussian-max-upper", ps.str(), ratio,
                                       se_m / scale, 1.1));
        out.push_back(BoundCheck::make("gaussian-max-lower", ps.str(), 0.7,
                                       se_m / scale, ratio));
    }
    {
        const double fitted = std::sqrt(static_cast<double>(m)) * mt / mg;
        std::ostringstream ps;
        ps << base.str() << " fitted_cpp=" << fitted << " sphere_mean=" << mt
           << " gaussian_mean=" << mg;
        out.push_back(BoundCheck::make("sphere-vs-gaussian-fitted", ps.str(), mt,
                                       se_t, fitted / std::sqrt(static_cast<double>(m)) * mg));
    }
    return out;
}

std::vector<BoundCheck> small_ball_check(const SampleBatch& batch, double b,
                                         const std::vector<double>& t_grid) {
    if (batch.points.empty()) throw input_error("small-ball check: empty batch");
    if (!(b > 0.0 && b < 1.0)) throw input_error("small-ball check: b must be in (0,1)");
    std::vector<double> norms = batch_norms(batch);
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const double R = quantile_sorted(sorted, b);
    const auto N = static_cast<double>(norms.size());
    long inside = 0;
    for (double v : norms)
        if (v <= R) ++inside;
    const double muU = static_cast<double>(inside) / N;

    double fitted = 1.0;
    std::vector<std::pair<double, double>> mus;
    for (double t : t_grid) {
        if (t < 0.0 || t > 1.0) throw input_error("small-ball check: t grid must be in [0,1]");
        long hits = 0;
        for (double v : norms)
            if (v <= t * R) ++hits;
        const double mu = static_cast<double>(hits) / N;
        mus.emplace_back(t, mu);
        if (t > 0.0) fitted = std::max(fitted, mu / (t * muU));
    }
    std::vector<BoundCheck> out;
    for (const auto& [t, mu] : mus) {
        const double se = std::sqrt(mu * (1.0 - mu) / N);
        std::ostringstream ps;
        ps << "body=" << batch.body << " b=" << muU << " R=" << R << " t=" << t
           << " fitted_Cb=" << fitted;
        out.push_back(BoundCheck::make("small-ball", ps.str(), mu, se, fitted * t * muU));
    }
    return out;
}

std::string bound_checks_to_json(const std::vector<BoundCheck>& checks,
                                 const std::string& config_echo) {
    nlohmann::json j;
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e;
        e["name"] = c.name;
        e["parameters"] = c.parameters;
        e["lhs"] = c.lhs;
        e["lhs_stderr"] = c.lhs_stderr;
        e["rhs"] = c.rhs;
        e["passed"] = c.passed;
        e["margin"] = c.margin;
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    return j.dump(2) + "\n";
}

} // namespace bary
