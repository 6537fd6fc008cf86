// Acceptance suite: one line per criterion, nonzero exit count on failure.
// Heavy estimates run with 8 worker threads; every reported number is
// identical at any thread count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "barytope/bodies.hpp"
#include "barytope/cli.hpp"
#include "barytope/concentration.hpp"
#include "barytope/john.hpp"
#include "barytope/moments.hpp"
#include "barytope/sampling.hpp"

using namespace bary;

namespace {

constexpr int kThreads = 8;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

using Runner = std::function<void(Outcome&)>;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void expect(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        o.detail << " [failed: " << what << "]";
    }
}

JohnCertificate cube_certificate(int d) {
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> w;
    for (int i = 0; i < d; ++i) {
        pts.push_back(Eigen::VectorXd::Unit(d, i));
        pts.push_back(-Eigen::VectorXd::Unit(d, i));
        w.push_back(0.5);
        w.push_back(0.5);
    }
    return JohnCertificate(d, pts, w);
}

// --- criterion 1 -----------------------------------------------------------
void c1_lift_exactness(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {3, 11, 101}) {
        const JohnCertificate lifted = lift_decomposition(cube_certificate(n - 1));
        const auto [rm, rv] = certificate_residuals(lifted);
        o.detail << "n=" << n << " res=(" << rm << "," << rv << ") ";
        expect(o, rm <= 1e-12 && rv <= 1e-12, "residuals above 1e-12");
    }
    const double dt = seconds_since(t0);
    o.detail << "time=" << dt << "s";
    expect(o, dt < 1.0, "runtime above 1 s");
}

// --- criterion 2 -----------------------------------------------------------
void c2_john_position_of_q(Outcome& o) {
    for (int n : {4, 6, 8, 10}) {
        const auto t0 = std::chrono::steady_clock::now();
        const HPolytope q = build_Q(n);
        const Ellipsoid e = solve_mvie(q);
        const double coff = e.center().norm();
        const double soff = (e.shape() - Eigen::MatrixXd::Identity(n, n)).norm();
        expect(o, coff <= 1e-4, "center off at n=" + std::to_string(n));
        expect(o, soff <= 1e-4, "shape off at n=" + std::to_string(n));
        const JohnCertificate cert = extract_contacts(q, e);
        expect(o, cert.size() == static_cast<std::size_t>(2 * (n - 1) + 1),
               "contact count at n=" + std::to_string(n));
        double worst = 0.0;
        for (const auto& u : cert.points()) {
            double best = 2.0;
            for (int i = 0; i < q.rows(); ++i)
                best = std::min(best, (u - q.A().row(i).transpose()).norm());
            worst = std::max(worst, best);
        }
        expect(o, worst <= 1e-4, "contact direction mismatch at n=" + std::to_string(n));
        const double dt = seconds_since(t0);
        o.detail << "n=" << n << " |c|=" << coff << " |E-I|=" << soff
                 << " contacts=" << cert.size() << " t=" << dt << "s; ";
        expect(o, dt < 10.0, "runtime above 10 s at n=" + std::to_string(n));
    }
}

// --- criterion 3 -----------------------------------------------------------
double l_centroid_closed_form(int n) {
    const long double lo = 2.0L - 1.0L / n;
    const long double num = std::pow(3.0L, n + 1) - std::pow(lo, n + 1);
    const long double den = std::pow(3.0L, n) - std::pow(lo, n);
    const long double eu = (static_cast<long double>(n) / (n + 1)) * num / den;
    return static_cast<double>(n * (eu - 2.0L));
}

void c3_closed_form_oracles(Outcome& o) {
    {
        const int n = 50;
        const double cyl =
            centroid_height(profile_family("cylinder", n), 10, 0).value_as_double();
        expect(o, std::fabs(cyl - (n + 1.0) / 2.0) <= 1e-9 * (n + 1.0) / 2.0,
               "cylinder centroid");
        const double cone =
            centroid_height(profile_family("cone", n), 10, 0).value_as_double();
        expect(o, std::fabs(cone - n) <= 1e-9 * n, "cone centroid");
        o.detail << "cylinder=" << cyl << " cone=" << cone << " ";
    }
    {
        const int n = 64;
        const double q = centroid_height(profile_family("q", n), 2000, 5).value_as_double();
        expect(o, std::fabs(q) <= 1e-9 * n, "pure-q centroid at zero");
        o.detail << "q=" << q << " ";
    }
    for (int n : {8, 64, 256}) {
        const double l = centroid_height(profile_family("l", n), 10, 0).value_as_double();
        const double expectv = l_centroid_closed_form(n);
        expect(o, std::fabs(l - expectv) <= 1e-9 * std::fabs(expectv),
               "l centroid at n=" + std::to_string(n));
        if (n == 256) o.detail << "l(256)=" << l << " closed=" << expectv;
    }
}

// --- criterion 4 -----------------------------------------------------------
void c4_cross_oracle(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 8;
    const long N = 100000;
    const MomentEstimate mom = centroid_height(profile_family("k", n), N, 4, kThreads);
    const auto body = make_K_body(n);
    const SampleBatch batch = rejection_sample(*body, N, 4, kThreads);
    double mean = 0.0, sq = 0.0;
    for (const auto& x : batch.points) {
        mean += x[n - 1];
        sq += x[n - 1] * x[n - 1];
    }
    mean /= static_cast<double>(N);
    sq /= static_cast<double>(N);
    const double se_rej = std::sqrt((sq - mean * mean) / static_cast<double>(N - 1));
    const double se =
        std::sqrt(se_rej * se_rej + mom.stderr_as_double() * mom.stderr_as_double());
    const double diff = std::fabs(mom.value_as_double() - mean);
    const double dt = seconds_since(t0);
    o.detail << "moments=" << mom.value_as_double() << "+-" << mom.stderr_as_double()
             << " rejection=" << mean << "+-" << se_rej << " diff=" << diff
             << " 3se=" << 3.0 * se << " time=" << dt << "s";
    expect(o, diff <= 3.0 * se, "estimates disagree beyond 3 sigma");
    expect(o, dt < 120.0, "runtime above 2 min");
}

// --- criteria 5 and 7 share the sweep --------------------------------------
std::vector<SweepRow> k_sweep_rows;

void c5_main_trend(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    k_sweep_rows = sweep("k", {64, 128, 256, 512}, 200000, 2024, kThreads);
    for (const auto& r : k_sweep_rows)
        o.detail << "n=" << r.n << " t=" << r.t_hat << "+-" << r.stderr_
                 << " gap/n=" << r.gap / r.n << " gapnorm=" << r.gap_norm << "; ";
    for (std::size_t i = 0; i + 1 < k_sweep_rows.size(); ++i) {
        const auto& a = k_sweep_rows[i];
        const auto& b = k_sweep_rows[i + 1];
        const double drop = a.gap / a.n - b.gap / b.n;
        const double se =
            std::sqrt(std::pow(a.stderr_ / a.n, 2) + std::pow(b.stderr_ / b.n, 2));
        expect(o, drop > 3.0 * se,
               "gap/n not strictly decreasing at 3 sigma between n=" +
                   std::to_string(a.n) + " and n=" + std::to_string(b.n));
    }
    double lo = 1e300, hi = 0.0;
    for (const auto& r : k_sweep_rows) {
        lo = std::min(lo, r.gap_norm);
        hi = std::max(hi, r.gap_norm);
    }
    o.detail << "band=" << hi / lo << " ";
    expect(o, hi / lo <= 3.0, "gap/sqrt(n log n) outside a factor-3 band");
    const double dt = seconds_since(t0);
    o.detail << "time=" << dt << "s";
    expect(o, dt < 600.0, "runtime above 10 min");
}

// --- criterion 6 -----------------------------------------------------------
void c6_polytope_case(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {128, 256}) {
        const double eps = 1.0 / std::log(static_cast<double>(n));
        const MomentEstimate est =
            centroid_height(profile_family("p", n, eps), 200000, 2025, kThreads);
        const double target = 0.2 * eps * n;
        const double t_hat = est.value_as_double();
        const double se = est.stderr_as_double();
        o.detail << "n=" << n << " t=" << t_hat << "+-" << se << " target=" << target
                 << "; ";
        expect(o, t_hat - 3.0 * se >= target,
               "t_hat below (1/5) eps n at 3 sigma for n=" + std::to_string(n));
    }
    const double dt = seconds_since(t0);
    o.detail << "time=" << dt << "s";
    expect(o, dt < 600.0, "runtime above 10 min");
}

// --- criterion 7 -----------------------------------------------------------
void c7_half_volume(Outcome& o) {
    const int n = 256;
    if (k_sweep_rows.empty()) k_sweep_rows = sweep("k", {256}, 200000, 2024, kThreads);
    const SweepRow* row = nullptr;
    for (const auto& r : k_sweep_rows)
        if (r.n == n) row = &r;
    if (row == nullptr) {
        expect(o, false, "no sweep row for n=256 available");
        return;
    }
    const double R = row->t_hat - 5.0 * row->stderr_;
    const MomentEstimate hv =
        half_volume_sign(profile_family("k", n), R, 200000, 2024, kThreads);
    o.detail << "R=" << R << " sign=" << hv.value.sign
             << " log|value|=" << hv.value.logmag << " log(se)=" << hv.stderr_.logmag
             << " call=" << hv.sign_call();
    expect(o, hv.sign_call() == 1, "half-volume sign not positive at 3 sigma");
}

// --- criterion 8 -----------------------------------------------------------
void c8_cap_bound(Outcome& o) {
    std::vector<double> ts;
    for (int i = 1; i <= 9; ++i) ts.push_back(0.1 * i);
    const auto checks = check_cap_bound({10, 100, 1000}, ts, 0.5, 100000, 8, kThreads);
    int bound_fail = 0, mc_fail = 0;
    for (const auto& c : checks) {
        if (c.name == "cap-bound" && !(c.lhs <= c.rhs)) ++bound_fail;
        if (c.name == "cap-mc-agreement" && !c.passed) ++mc_fail;
    }
    o.detail << checks.size() << " checks, bound failures=" << bound_fail
             << " mc failures=" << mc_fail;
    expect(o, bound_fail == 0, "exact cap exceeded 2 exp(-t^2 n / 2) somewhere");
    expect(o, mc_fail == 0, "exact and Monte Carlo disagree beyond 3 sigma");
}

// --- criterion 9 -----------------------------------------------------------
void c9_bad_sets(Outcome& o) {
    const int n = 256;
    const double eps = 1.0 / std::log(256.0);
    const auto checks = bad_set_measures(n, eps, 12.0, 200000, 9, kThreads);
    const auto& o2 = checks[1];
    const auto& lsmall = checks[2];
    const auto& impl = checks[3];
    o.detail << "sigma(O2)=" << o2.lhs << "+-" << o2.lhs_stderr
             << " sigma(Lsmall)=" << lsmall.lhs << "+-" << lsmall.lhs_stderr
             << " implication_violations=" << impl.lhs;
    expect(o, o2.lhs + 3.0 * o2.lhs_stderr < 0.25, "sigma(O2) not below 1/4 at 3 sigma");
    expect(o, lsmall.passed,
           "sigma(rho_L' <= 5 sqrt(eps n)) above 1/4: the threshold exceeds the "
           "largest attainable slice radius at this size, the set is the whole "
           "sphere");
    expect(o, impl.lhs == 0.0, "algebraic implication violated on a sampled member");
}

// --- criterion 10 ----------------------------------------------------------
void c10_sandwich_lemmas(Outcome& o) {
    const int n = 16;
    const auto cube = make_cube_body(n);
    RngStream rng(10, 0);
    const SampleBatch batch =
        hit_and_run_kept(*cube, Eigen::VectorXd::Zero(n), 100000, default_burn_in(n),
                         default_thinning(n), rng);
    const auto checks = moment_sandwich_checks(batch, {}, 1.0, 2.0);
    double median = 0.0, l2 = 0.0, xk = 0.0, c9 = 0.0, c11 = 0.0;
    for (const auto& c : checks) {
        if (c.name == "median-lower") {
            median = c.lhs * std::sqrt(2.0);
            l2 = c.rhs;
            expect(o, c.lhs <= c.rhs, "median/sqrt2 <= L2 violated");
            c9 = l2 / median;
        }
        if (c.name == "center-jensen") {
            xk = std::sqrt(c.lhs);
            expect(o, c.lhs <= c.rhs, "|mean|^2 <= E|X|^2 violated");
            c11 = (c.rhs - c.lhs) / n;
        }
    }
    expect(o, xk <= l2, "|mean| above L2");
    expect(o, std::isfinite(c9) && std::isfinite(c11), "fitted constants not finite");
    o.detail << "median=" << median << " L2=" << l2 << " |mean|=" << xk << " C9=" << c9
             << " C10=1 C11=" << c11;
}

// --- criterion 11 ----------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void c11_determinism(Outcome& o) {
    struct Cmd {
        std::string label;
        std::vector<std::string> args;
    };
    const std::vector<Cmd> cmds{
        {"sweep",
         {"sweep", "--body", "k", "--n-list", "16,24", "--samples", "4000", "--seed", "7"}},
        {"centroid",
         {"centroid", "--body", "p", "--n", "64", "--samples", "4000", "--seed", "3"}},
        {"halfvolume",
         {"halfvolume", "--body", "k", "--n", "32", "--R", "20", "--samples", "4000",
          "--seed", "5"}},
        {"concentration",
         {"concentration", "--test", "gaussian", "--n", "64", "--epsilon", "0.25",
          "--samples", "20000", "--seed", "1"}},
    };
    for (const auto& cmd : cmds) {
        std::vector<std::string> texts;
        for (const std::string threads : {"1", "8", "1"}) {
            const std::string path = "/tmp/barytope-acceptance-" + cmd.label + ".out";
            std::vector<std::string> args = cmd.args;
            args.insert(args.end(), {"--threads", threads, "--out", path});
            const int rc = run(args);
            expect(o, rc == 0 || rc == 3, cmd.label + " exited with " + std::to_string(rc));
            texts.push_back(slurp(path));
            std::remove(path.c_str());
        }
        const bool same = texts[0] == texts[1] && texts[0] == texts[2];
        o.detail << cmd.label << (same ? " ok; " : " MISMATCH; ");
        expect(o, same, cmd.label + " output differs across runs/threads");
        expect(o, !texts[0].empty(), cmd.label + " produced no output");
    }
}

} // namespace

int main() {
    struct Entry {
        int id;
        std::string label;
        Runner fn;
    };
    const std::vector<Entry> criteria{
        {1, "decomposition lift exactness (n in {3,11,101})", c1_lift_exactness},
        {2, "inscribed ellipsoid of q is the unit ball with full contacts",
         c2_john_position_of_q},
        {3, "closed-form centroid oracles (cylinder, cone, q, l)", c3_closed_form_oracles},
        {4, "moments vs rejection sampling cross-oracle at n=8", c4_cross_oracle},
        {5, "k sweep: gap/n decreasing, gap/sqrt(n log n) in a factor-3 band",
         c5_main_trend},
        {6, "p centroid clears (1/5) eps n at 3 sigma (n in {128,256})", c6_polytope_case},
        {7, "half-volume sign positive at R = t_hat - 5 se (k, n=256)", c7_half_volume},
        {8, "spherical cap: exact bound grid and Monte Carlo agreement", c8_cap_bound},
        {9, "bad-direction sets at n=256 (O2, L'-smallness, implication)", c9_bad_sets},
        {10, "median/second-moment/centroid sandwiches on the cube n=16",
         c10_sandwich_lemmas},
        {11, "byte-identical outputs across reruns and thread counts", c11_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            c.fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double dt = seconds_since(t0);
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", o.pass ? "PASS" : "FAIL",
                    c.id, c.label.c_str(), o.detail.str().c_str(), dt);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures)
        std::printf("%d of %zu criteria failed\n", failures,
                    criteria.size());
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures;
}
