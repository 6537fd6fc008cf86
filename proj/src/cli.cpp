#include "barytope/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "barytope/bodies.hpp"
#include "barytope/concentration.hpp"
#include "barytope/errors.hpp"
#include "barytope/john.hpp"
#include "barytope/moments.hpp"
#include "barytope/polytope_io.hpp"
#include "barytope/sampling.hpp"

namespace bary {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open for writing: " + path);
    out << content;
}

// The echoed config carries everything that determines the numbers: command,
// body, sizes, seed, tolerances, coefficient overrides. Thread count and
// output paths are execution details and stay out, so outputs are
// byte-identical across --threads settings.
std::string config_echo(const json& cfg) { return cfg.dump(); }

struct CommonOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out = "-";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "random seed (default 0)");
    cmd->add_option("--threads", o.threads, "worker threads (default 1)");
    cmd->add_option("--out", o.out, "output path, '-' for stdout");
}

double resolve_epsilon(int n, double epsilon, double eps_c) {
    if (epsilon > 0.0) {
        if (!(epsilon < 1.0)) throw input_error("epsilon must be in (0, 1)");
        return epsilon;
    }
    return epsilon_n(n, eps_c); // derived value must clear the 10/n window

}

std::string sweep_csv(const std::vector<SweepRow>& rows, const json& cfg) {
    std::ostringstream ss;
    ss << "# config " << config_echo(cfg) << "\n";
    ss << "n,samples,seed,t_hat,stderr,gap,gap_norm\n";
    for (const auto& r : rows) {
        ss << r.n << ',' << r.samples << ',' << r.seed << ',' << fmt(r.t_hat) << ','
           << fmt(r.stderr_) << ',' << fmt(r.gap) << ',' << fmt(r.gap_norm) << "\n";
    }
    return ss.str();
}

int cmd_construct(const std::string& body, int n, double epsilon, double eps_c,
                  int profile_grid, const std::string& profile_out,
                  const CommonOpts& o) {
    json cfg{{"command", "construct"}, {"body", body}, {"n", n}, {"seed", o.seed}};
    std::string poly_json;
    if (body == "q") {
        poly_json = polytope_to_json(build_Q(n));
    } else if (body == "l2" || body == "p") {
        const double eps = resolve_epsilon(n, epsilon, eps_c);
        cfg["epsilon"] = eps;
        poly_json = polytope_to_json(body == "l2" ? build_L2(n, eps) : build_P(n, eps));
    } else {
        throw input_error("construct: body must be one of q, l2, p");
    }
    write_output(o.out, poly_json);
    std::cout << "# config " << config_echo(cfg) << "\n";

    if (profile_grid > 0) {
        if (profile_out.empty())
            throw input_error("construct: --profile-grid needs --profile-out");
        cfg["profile_grid"] = profile_grid;
        ProfileFamily fam;
        if (body == "q") {
            fam = profile_family("q", n);
        } else if (body == "p") {
            fam = profile_family("p", n, resolve_epsilon(n, epsilon, eps_c));
        } else {
            const double eps = resolve_epsilon(n, epsilon, eps_c);
            fam.name = "l2";
            fam.n = n;
            fam.theta_dim = n - 1;
            fam.profile = [n, eps](const Eigen::VectorXd& th) {
                const double r = rho_L2(th, n, eps);
                return SliceProfile(-1.0, n, {{-1.0, static_cast<double>(n), r, 0.0}});
            };
        }
        std::ostringstream ss;
        ss << "# config " << config_echo(cfg) << "\n";
        ss << "theta_seed,t,rho\n";
        const int t_points = 101;
        for (int j = 0; j < profile_grid; ++j) {
            RngStream rng(o.seed, static_cast<std::uint64_t>(j));
            const Eigen::VectorXd theta = sample_sphere(fam.theta_dim, rng);
            const SliceProfile prof = fam.profile(theta);
            for (int i = 0; i < t_points; ++i) {
                const double t = prof.tmin() +
                                 (prof.tmax() - prof.tmin()) * i / (t_points - 1.0);
                ss << j << ',' << fmt(t) << ',' << fmt(prof.value(t)) << "\n";
            }
        }
        write_output(profile_out, ss.str());
    }
    return 0;
}

int cmd_john(const std::string& in, double tol, double slack_tol, double position_tol,
             const CommonOpts& o) {
    const HPolytope poly = read_polytope_file(in);
    json cfg{{"command", "john"},     {"in", in},
             {"tol", tol},            {"slack_tol", slack_tol},
             {"position_tol", position_tol}};

    json j;
    j["config"] = cfg;
    try {
        const JohnReport rep = john_report(poly, tol, slack_tol, position_tol);
        json center = json::array();
        for (int i = 0; i < rep.ellipsoid.dim(); ++i) center.push_back(rep.ellipsoid.center()[i]);
        json shape = json::array();
        for (int i = 0; i < rep.ellipsoid.dim(); ++i) {
            json row = json::array();
            for (int k = 0; k < rep.ellipsoid.dim(); ++k)
                row.push_back(rep.ellipsoid.shape()(i, k));
            shape.push_back(std::move(row));
        }
        json contacts = json::array();
        for (std::size_t i = 0; i < rep.contacts.size(); ++i) {
            json u = json::array();
            for (int k = 0; k < rep.contacts.dim(); ++k)
                u.push_back(rep.contacts.points()[i][k]);
            contacts.push_back(json{{"u", std::move(u)}, {"c", rep.contacts.weights()[i]}});
        }
        j["center"] = std::move(center);
        j["shape"] = std::move(shape);
        j["contacts"] = std::move(contacts);
        j["residuals"] = json{{"matrix", rep.residual_matrix}, {"vector", rep.residual_vector}};
        j["is_john_position"] = rep.is_john_position;
    } catch (const certification_error& e) {
        j["contacts"] = json::array();
        j["is_john_position"] = false;
        j["error"] = e.what();
    }
    write_output(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_centroid(const std::string& body, int n, long samples, double epsilon,
                 double eps_c, const CommonOpts& o) {
    const double eps = body == "p" ? resolve_epsilon(n, epsilon, eps_c) : 0.0;
    json cfg{{"command", "centroid"}, {"body", body},     {"n", n},
             {"samples", samples},    {"seed", o.seed}};
    if (body == "p") cfg["epsilon"] = eps;
    const ProfileFamily fam = profile_family(body, n, eps);
    const MomentEstimate est = centroid_height(fam, samples, o.seed, o.threads);
    std::vector<SweepRow> rows(1);
    rows[0].n = n;
    rows[0].samples = samples;
    rows[0].seed = o.seed;
    rows[0].t_hat = est.value_as_double();
    rows[0].stderr_ = est.stderr_as_double();
    rows[0].gap = n - rows[0].t_hat;
    rows[0].gap_norm = rows[0].gap / std::sqrt(n * std::log(static_cast<double>(n)));
    write_output(o.out, sweep_csv(rows, cfg));
    return 0;
}

int cmd_halfvolume(const std::string& body, int n, long samples, double R,
                   double epsilon, double eps_c, const CommonOpts& o) {
    const double eps = body == "p" ? resolve_epsilon(n, epsilon, eps_c) : 0.0;
    json cfg{{"command", "halfvolume"}, {"body", body}, {"n", n},
             {"samples", samples},      {"seed", o.seed}, {"R", R}};
    if (body == "p") cfg["epsilon"] = eps;
    const ProfileFamily fam = profile_family(body, n, eps);
    const MomentEstimate est = half_volume_sign(fam, R, samples, o.seed, o.threads);
    const int call = est.sign_call();
    std::ostringstream ss;
    ss << "# config " << config_echo(cfg) << "\n";
    ss << "n,samples,seed,R,sign,log_abs_value,log_stderr,call\n";
    ss << n << ',' << samples << ',' << o.seed << ',' << fmt(R) << ',' << est.value.sign
       << ',' << fmt(est.value.logmag) << ',' << fmt(est.stderr_.logmag) << ','
       << (call > 0 ? "positive" : call < 0 ? "negative" : "indeterminate") << "\n";
    write_output(o.out, ss.str());
    return call == 0 ? 3 : 0;
}

int cmd_sweep(const std::string& body, const std::vector<int>& n_list, long samples,
              double eps_c, const CommonOpts& o) {
    json cfg{{"command", "sweep"}, {"body", body},   {"n_list", n_list},
             {"samples", samples}, {"seed", o.seed}};
    if (body == "p") cfg["eps_c"] = eps_c;
    const auto rows = sweep(body, n_list, samples, o.seed, o.threads, eps_c);
    write_output(o.out, sweep_csv(rows, cfg));
    return 0;
}

int cmd_sample(const std::string& in, long count, const std::string& method,
               long burn_in, long thin, const CommonOpts& o) {
    const HPolytope poly = read_polytope_file(in);
    const int n = poly.dim();
    json cfg{{"command", "sample"}, {"in", in},       {"count", count},
             {"method", method},    {"seed", o.seed}};

    SampleBatch batch;
    if (method == "rej") {
        // Bounding box from the inscribed ellipsoid inflated n times, which
        // always contains the polytope.
        const Ellipsoid ell = solve_mvie(poly);
        Eigen::VectorXd half(n);
        for (int i = 0; i < n; ++i)
            half[i] = n * ell.shape().col(i).norm();
        auto body = make_polytope_body(poly, ell.center() - half, ell.center() + half);
        batch = rejection_sample(*body, count, o.seed, o.threads);
    } else if (method == "har") {
        const long bi = burn_in >= 0 ? burn_in : default_burn_in(n);
        const long th = thin >= 1 ? thin : default_thinning(n);
        cfg["burn_in"] = bi;
        cfg["thin"] = th;
        // Loose bounding radius for chord bracketing from the box of the
        // inflated inscribed ellipsoid.
        const Ellipsoid ell = solve_mvie(poly);
        Eigen::VectorXd half(n);
        for (int i = 0; i < n; ++i)
            half[i] = n * ell.shape().col(i).norm();
        auto body = make_polytope_body(poly, ell.center() - half, ell.center() + half);
        RngStream rng(o.seed, 0);
        batch = hit_and_run_kept(*body, poly.interior_point(), count, bi, th, rng);
    } else {
        throw input_error("sample: method must be har or rej");
    }

    std::ostringstream ss;
    ss << "# config " << config_echo(cfg) << "\n";
    for (int i = 0; i < n; ++i) ss << (i ? "," : "") << "x" << i;
    ss << "\n";
    for (const auto& x : batch.points) {
        for (int i = 0; i < n; ++i) ss << (i ? "," : "") << fmt(x[i]);
        ss << "\n";
    }
    write_output(o.out, ss.str());
    return 0;
}

struct ConcOpts {
    std::string test;
    std::string body = "cube";
    int n = 16;
    long samples = 10000;
    double epsilon = 0.0;
    double eps_c = 1.0;
    double C3 = 0.5;
    double C4 = 0.5;
    double C0 = 0.0; // 0 -> sqrt(72 / C3)
    std::string f = "theta1";
    std::vector<int> n_list;
    std::vector<double> t_list;
    double b = 2.0 / 3.0;
    long count = 20000;
};

SampleBatch conc_batch(const ConcOpts& c, const CommonOpts& o) {
    std::unique_ptr<Body> body;
    if (c.body == "cube") {
        body = make_cube_body(c.n);
    } else if (c.body == "ball") {
        body = make_ball_body(c.n);
    } else if (c.body == "k") {
        body = make_K_body(c.n);
    } else if (c.body == "p") {
        body = make_P_body(c.n, resolve_epsilon(c.n, c.epsilon, c.eps_c));
    } else {
        throw input_error("concentration: body must be cube, ball, k or p");
    }
    RngStream rng(o.seed, 0);
    return hit_and_run_kept(*body, body->interior_point(), c.count, default_burn_in(c.n),
                            default_thinning(c.n), rng);
}

int cmd_concentration(const ConcOpts& c, const CommonOpts& o) {
    json cfg{{"command", "concentration"}, {"test", c.test}, {"seed", o.seed}};
    std::vector<BoundCheck> checks;
    const double C0 = c.C0 > 0.0 ? c.C0 : std::sqrt(72.0 / c.C3);

    if (c.test == "cap") {
        const std::vector<int> ns = c.n_list.empty() ? std::vector<int>{10, 100, 1000}
                                                     : c.n_list;
        std::vector<double> ts = c.t_list;
        if (ts.empty())
            for (int i = 1; i <= 9; ++i) ts.push_back(0.1 * i);
        cfg["n_list"] = ns;
        cfg["t_list"] = ts;
        cfg["C3"] = c.C3;
        cfg["samples"] = c.samples;
        checks = check_cap_bound(ns, ts, c.C3, c.samples, o.seed, o.threads);
    } else if (c.test == "lipschitz") {
        cfg["n"] = c.n;
        cfg["f"] = c.f;
        cfg["C4"] = c.C4;
        cfg["samples"] = c.samples;
        std::vector<double> ts = c.t_list;
        if (ts.empty()) ts = {0.1, 0.2, 0.4};
        cfg["t_list"] = ts;
        SphereFunction fn;
        double b = 1.0;
        if (c.f == "theta1") {
            fn = [](const Eigen::VectorXd& x) { return x[0]; };
        } else if (c.f == "a2norm") {
            const double eps = resolve_epsilon(c.n + 1, c.epsilon, c.eps_c);
            cfg["epsilon"] = eps;
            const int amb = c.n + 1;
            fn = [amb, eps](const Eigen::VectorXd& x) { return 1.0 / rho_L2(x, amb, eps); };
        } else if (c.f == "const") {
            fn = [](const Eigen::VectorXd&) { return 1.0; };
        } else {
            throw input_error("concentration: f must be theta1, a2norm or const");
        }
        checks = lipschitz_concentration_check(fn, b, c.n, ts, c.samples, o.seed, c.C4,
                                               o.threads);
    } else if (c.test == "badsets") {
        const double eps = resolve_epsilon(c.n, c.epsilon, c.eps_c);
        cfg["n"] = c.n;
        cfg["epsilon"] = eps;
        cfg["C0"] = C0;
        cfg["samples"] = c.samples;
        checks = bad_set_measures(c.n, eps, C0, c.samples, o.seed, o.threads);
    } else if (c.test == "borell") {
        cfg["n"] = c.n;
        cfg["body"] = c.body;
        cfg["count"] = c.count;
        std::vector<double> ts = c.t_list;
        if (ts.empty()) ts = {1.0, 1.5, 2.0};
        cfg["t_list"] = ts;
        checks = borell_tail_check(conc_batch(c, o), ts);
    } else if (c.test == "moments") {
        cfg["n"] = c.n;
        cfg["body"] = c.body;
        cfg["count"] = c.count;
        const SampleBatch batch = conc_batch(c, o);
        std::vector<Eigen::VectorXd> dirs{Eigen::VectorXd::Unit(c.n, 0)};
        checks = moment_sandwich_checks(batch, dirs, 1.0, 2.0);
    } else if (c.test == "gaussian") {
        const double eps = resolve_epsilon(c.n, c.epsilon, c.eps_c);
        cfg["n"] = c.n;
        cfg["epsilon"] = eps;
        cfg["samples"] = c.samples;
        checks = gaussian_norm_bounds(c.n, eps, c.samples, o.seed, o.threads);
    } else if (c.test == "smallball") {
        cfg["n"] = c.n;
        cfg["body"] = c.body;
        cfg["count"] = c.count;
        cfg["b"] = c.b;
        std::vector<double> ts = c.t_list;
        if (ts.empty()) ts = {0.0, 0.25, 0.5, 0.75, 1.0};
        cfg["t_list"] = ts;
        checks = small_ball_check(conc_batch(c, o), c.b, ts);
    } else {
        throw input_error("concentration: unknown test '" + c.test + "'");
    }
    write_output(o.out, bound_checks_to_json(checks, config_echo(cfg)));
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"convex-body centroid and John-position toolkit"};
    app.require_subcommand(1);

    CommonOpts common;

    // construct
    auto* construct = app.add_subcommand("construct", "emit a body as polytope JSON");
    std::string c_body;
    int c_n = 0;
    double c_eps = 0.0, c_eps_c = 1.0;
    int c_grid = 0;
    std::string c_profile_out;
    construct->add_option("--body", c_body, "q, l2 or p")->required();
    construct->add_option("--n", c_n, "dimension")->required();
    construct->add_option("--epsilon", c_eps, "explicit epsilon for l2/p");
    construct->add_option("--eps-c", c_eps_c, "epsilon coefficient: epsilon = c / log n");
    construct->add_option("--profile-grid", c_grid, "dump M random-direction profiles");
    construct->add_option("--profile-out", c_profile_out, "CSV path for the profile dump");
    add_common(construct, common);

    // john
    auto* john = app.add_subcommand("john", "inscribed ellipsoid and contact certificate");
    std::string j_in;
    double j_tol = 1e-8, j_slack = 1e-6, j_pos = 1e-5;
    john->add_option("--in", j_in, "polytope JSON path")->required();
    john->add_option("--tol", j_tol, "solver tolerance");
    john->add_option("--slack-tol", j_slack, "contact slack tolerance");
    john->add_option("--position-tol", j_pos, "John-position tolerance");
    add_common(john, common);

    // centroid
    auto* centroid = app.add_subcommand("centroid", "centroid height estimate");
    std::string m_body;
    int m_n = 0;
    long m_samples = 0;
    double m_eps = 0.0, m_eps_c = 1.0;
    centroid->add_option("--body", m_body, "k, p, q, l, cylinder or cone")->required();
    centroid->add_option("--n", m_n, "dimension")->required();
    centroid->add_option("--samples", m_samples, "sphere samples")->required();
    centroid->add_option("--epsilon", m_eps, "explicit epsilon for p");
    centroid->add_option("--eps-c", m_eps_c, "epsilon coefficient for p");
    add_common(centroid, common);

    // halfvolume
    auto* halfvol = app.add_subcommand("halfvolume", "half-volume sign test at a cut");
    std::string h_body;
    int h_n = 0;
    long h_samples = 0;
    double h_R = 0.0, h_eps = 0.0, h_eps_c = 1.0;
    halfvol->add_option("--body", h_body, "k, p, q, l, cylinder or cone")->required();
    halfvol->add_option("--n", h_n, "dimension")->required();
    halfvol->add_option("--samples", h_samples, "sphere samples")->required();
    halfvol->add_option("--R", h_R, "cut height")->required();
    halfvol->add_option("--epsilon", h_eps, "explicit epsilon for p");
    halfvol->add_option("--eps-c", h_eps_c, "epsilon coefficient for p");
    add_common(halfvol, common);

    // sweep
    auto* sweepc = app.add_subcommand("sweep", "centroid sweep over dimensions");
    std::string s_body;
    std::vector<int> s_nlist;
    long s_samples = 0;
    double s_eps_c = 1.0;
    sweepc->add_option("--body", s_body, "k, p, q, l, cylinder or cone")->required();
    sweepc->add_option("--n-list", s_nlist, "comma-separated dimensions")
        ->required()
        ->delimiter(',');
    sweepc->add_option("--samples", s_samples, "sphere samples per dimension")->required();
    sweepc->add_option("--eps-c", s_eps_c, "epsilon coefficient for p");
    add_common(sweepc, common);

    // sample
    auto* sample = app.add_subcommand("sample", "uniform points from a polytope file");
    std::string p_in, p_method = "har";
    long p_count = 0, p_burn = -1, p_thin = -1;
    sample->add_option("--in", p_in, "polytope JSON path")->required();
    sample->add_option("--count", p_count, "points to keep")->required();
    sample->add_option("--method", p_method, "har or rej");
    sample->add_option("--burn-in", p_burn, "chain burn-in (default 10 n^2)");
    sample->add_option("--thin", p_thin, "chain thinning (default n)");
    add_common(sample, common);

    // concentration
    auto* conc = app.add_subcommand("concentration", "empirical bound checks");
    ConcOpts co;
    conc->add_option("--test", co.test,
                     "cap, lipschitz, badsets, borell, moments, gaussian or smallball")
        ->required();
    conc->add_option("--n", co.n, "dimension");
    conc->add_option("--body", co.body, "cube, ball, k or p (batch-based tests)");
    conc->add_option("--samples", co.samples, "Monte Carlo samples");
    conc->add_option("--count", co.count, "batch points (batch-based tests)");
    conc->add_option("--epsilon", co.epsilon, "explicit epsilon");
    conc->add_option("--eps-c", co.eps_c, "epsilon coefficient");
    conc->add_option("--C3", co.C3, "cap bound coefficient");
    conc->add_option("--C4", co.C4, "Lipschitz bound coefficient");
    conc->add_option("--C0", co.C0, "cut coefficient (default sqrt(72/C3))");
    conc->add_option("--f", co.f, "lipschitz test function: theta1, a2norm, const");
    conc->add_option("--n-list", co.n_list, "dimension grid")->delimiter(',');
    conc->add_option("--t-list", co.t_list, "t grid")->delimiter(',');
    conc->add_option("--b", co.b, "small-ball mass");
    add_common(conc, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cout, std::cerr);
        return code == 0 ? 0 : 1;
    }

    try {
        if (construct->parsed())
            return cmd_construct(c_body, c_n, c_eps, c_eps_c, c_grid, c_profile_out, common);
        if (john->parsed()) return cmd_john(j_in, j_tol, j_slack, j_pos, common);
        if (centroid->parsed())
            return cmd_centroid(m_body, m_n, m_samples, m_eps, m_eps_c, common);
        if (halfvol->parsed())
            return cmd_halfvolume(h_body, h_n, h_samples, h_R, h_eps, h_eps_c, common);
        if (sweepc->parsed()) return cmd_sweep(s_body, s_nlist, s_samples, s_eps_c, common);
        if (sample->parsed())
            return cmd_sample(p_in, p_count, p_method, p_burn, p_thin, common);
        if (conc->parsed()) return cmd_concentration(co, common);
        std::cerr << "no command given\n";
        return 1;
    } catch (const convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace bary
