#include "barytope/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "barytope/errors.hpp"
#include "barytope/parallel.hpp"

namespace bary {

namespace {

constexpr double kChordTol = 1e-10;

// Largest lambda >= 0 with x + lambda u inside, by bisection between an inside
// and an outside bracket. The returned value is the inside endpoint, so any
// step strictly between the two chord ends stays inside by convexity.
double chord_extent(const Body& body, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& u) {
    double lo = 0.0;
    double hi = body.bounding_radius() + x.norm() + 1.0;
    if (body.contains(x + hi * u))
        throw geometry_error("hit-and-run: ray still inside beyond the bounding radius");
    while (hi - lo > kChordTol) {
        const double mid = 0.5 * (lo + hi);
        if (body.contains(x + mid * u))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

void check_strict_interior(const Body& body, const Eigen::VectorXd& x0) {
    if (x0.size() != body.dim()) throw input_error("start point dimension mismatch");
    if (!body.contains(x0)) throw input_error("start point is not inside the body");
    const double h = 1e-8 * (1.0 + x0.norm());
    Eigen::VectorXd probe = x0;
    for (int i = 0; i < body.dim(); ++i) {
        probe[i] = x0[i] + h;
        const bool up = body.contains(probe);
        probe[i] = x0[i] - h;
        const bool down = body.contains(probe);
        probe[i] = x0[i];
        if (!up || !down)
            throw input_error("start point is on (or numerically on) the boundary");
    }
}

} // namespace

Eigen::VectorXd sample_gaussian(int n, RngStream& rng) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.next_gaussian();
    return g;
}

Eigen::VectorXd sample_sphere(int n, RngStream& rng) {
    if (n < 2) throw input_error("sample_sphere: n must be at least 2");
    Eigen::VectorXd g = sample_gaussian(n, rng);
    double norm = g.norm();
    while (norm == 0.0) { // probability zero in practice
        g = sample_gaussian(n, rng);
        norm = g.norm();
    }
    return g / norm;
}

SampleBatch hit_and_run(const Body& body, const Eigen::VectorXd& x0, long steps,
                        long burn_in, long thin, RngStream& rng) {
    if (thin < 1) throw input_error("hit-and-run: thinning must be >= 1");
    if (burn_in < 0) throw input_error("hit-and-run: negative burn-in");
    check_strict_interior(body, x0);

    SampleBatch batch;
    batch.body = body.name();
    batch.method = "hit-and-run";
    batch.burn_in = burn_in;
    batch.thinning = thin;

    Eigen::VectorXd x = x0;
    for (long step = 1; step <= steps; ++step) {
        const Eigen::VectorXd u = sample_sphere(body.dim(), rng);
        const double fwd = chord_extent(body, x, u);
        const double bwd = chord_extent(body, x, -u);
        const double lambda = rng.next_uniform(-bwd, fwd);
        x += lambda * u;
        if (step > burn_in && (step - burn_in) % thin == 0) {
            if (!body.contains(x))
                throw geometry_error("hit-and-run: produced point failed membership");
            batch.points.push_back(x);
        }
    }
    return batch;
}

SampleBatch hit_and_run_kept(const Body& body, const Eigen::VectorXd& x0, long kept,
                             long burn_in, long thin, RngStream& rng) {
    return hit_and_run(body, x0, burn_in + kept * thin, burn_in, thin, rng);
}

long default_burn_in(int n) { return 10L * n * n; }
long default_thinning(int n) { return n; }

SampleBatch rejection_sample(const Body& body, long count, std::uint64_t seed,
                             int threads) {
    if (body.dim() > 12)
        throw input_error("rejection sampling is guarded to n <= 12");
    if (count < 1) throw input_error("rejection: count must be positive");
    const Eigen::VectorXd lo = body.box_lo();
    const Eigen::VectorXd hi = body.box_hi();
    const int n = body.dim();

    SampleBatch batch;
    batch.body = body.name();
    batch.method = "rejection";

    // Proposals are evaluated in fixed-size blocks; block results are merged
    // in index order, so the accepted subsequence does not depend on threads.
    const long block = 16384;
    long offset = 0;
    while (static_cast<long>(batch.points.size()) < count) {
        std::vector<std::pair<long, Eigen::VectorXd>> accepted;
        std::mutex mu;
        parallel_for(static_cast<std::size_t>(block), threads, [&](std::size_t j) {
            const long idx = offset + static_cast<long>(j);
            RngStream rng(seed, static_cast<std::uint64_t>(idx));
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x[i] = rng.next_uniform(lo[i], hi[i]);
            if (body.contains(x)) {
                std::lock_guard<std::mutex> lock(mu);
                accepted.emplace_back(idx, std::move(x));
            }
        });
        std::sort(accepted.begin(), accepted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [idx, x] : accepted) {
            if (static_cast<long>(batch.points.size()) < count)
                batch.points.push_back(std::move(x));
        }
        offset += block;
        if (offset >= 1000000 &&
            static_cast<double>(batch.points.size()) < 1e-6 * static_cast<double>(offset))
            throw input_error("rejection: acceptance rate below 1e-6, box too loose");
    }
    batch.proposals = offset;
    return batch;
}

NormStats norm_statistics(const SampleBatch& batch, RngStream& rng) {
    const long n = static_cast<long>(batch.points.size());
    if (n == 0) throw input_error("norm_statistics: empty batch");

    std::vector<double> norms(static_cast<std::size_t>(n));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(batch.points[0].size());
    double sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto& x = batch.points[static_cast<std::size_t>(i)];
        norms[static_cast<std::size_t>(i)] = x.norm();
        sumsq += x.squaredNorm();
        mean += x;
    }
    mean /= static_cast<double>(n);

    // Lower median: with this order statistic at least half the sample sits at
    // or above it, which keeps M/sqrt(2) <= L2 an exact sample inequality.
    auto lower_median = [](std::vector<double>& v) {
        const std::size_t k = (v.size() - 1) / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
        return v[k];
    };

    NormStats s;
    s.n_points = n;
    {
        std::vector<double> tmp = norms;
        s.median = lower_median(tmp);
    }
    s.l2 = std::sqrt(sumsq / static_cast<double>(n));
    s.mean_norm = mean.norm();

    const int B = 200;
    std::vector<double> med_b, l2_b, mean_b;
    med_b.reserve(B);
    l2_b.reserve(B);
    mean_b.reserve(B);
    const int dim = static_cast<int>(batch.points[0].size());
    for (int b = 0; b < B; ++b) {
        std::vector<double> res(static_cast<std::size_t>(n));
        double ss = 0.0;
        Eigen::VectorXd mv = Eigen::VectorXd::Zero(dim);
        for (long i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n)));
            res[static_cast<std::size_t>(i)] = norms[j];
            ss += norms[j] * norms[j];
            mv += batch.points[j];
        }
        med_b.push_back(lower_median(res));
        l2_b.push_back(std::sqrt(ss / static_cast<double>(n)));
        mean_b.push_back((mv / static_cast<double>(n)).norm());
    }
    auto stdev = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s2 = 0.0;
        for (double x : v) s2 += (x - m) * (x - m);
        return std::sqrt(s2 / static_cast<double>(v.size() - 1));
    };
    s.se_median = stdev(med_b);
    s.se_l2 = stdev(l2_b);
    s.se_mean_norm = stdev(mean_b);
    return s;
}

} // namespace bary
