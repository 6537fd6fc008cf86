#include "barytope/bodies.hpp"

#include <algorithm>
#include <cmath>

#include "barytope/errors.hpp"

namespace bary {

namespace {

double max_abs_coord(const Eigen::VectorXd& theta) {
    return theta.cwiseAbs().maxCoeff();
}

void check_unit(const Eigen::VectorXd& theta) {
    if (std::fabs(theta.norm() - 1.0) > 1e-9)
        throw input_error("direction must be a unit vector");
}

// Slope/intercept of the q radial in t for a fixed direction:
// rho_Q(theta, t) = m * (n - t) with m = 1 / (max|theta_i| sqrt(n^2 - 1)).
double q_slope_coeff(const Eigen::VectorXd& theta, int n) {
    return 1.0 / (max_abs_coord(theta) * std::sqrt(static_cast<double>(n) * n - 1.0));
}

} // namespace

HPolytope build_Q(int n) {
    if (n < 3) throw input_error("build_Q: n must be at least 3");
    const int rows = 2 * (n - 1) + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(rows);
    const double c = std::sqrt(1.0 - 1.0 / (static_cast<double>(n) * n));
    for (int i = 0; i < n - 1; ++i) {
        A(2 * i, i) = c;
        A(2 * i, n - 1) = 1.0 / n;
        A(2 * i + 1, i) = -c;
        A(2 * i + 1, n - 1) = 1.0 / n;
    }
    A(rows - 1, n - 1) = -1.0;
    return HPolytope("q", std::move(A), std::move(b));
}

double rho_Q(const Eigen::VectorXd& theta, double t, int n) {
    check_unit(theta);
    if (t < -1.0 || t > static_cast<double>(n))
        throw input_error("rho_Q: t outside [-1, n]");
    return (n - t) / (max_abs_coord(theta) * std::sqrt(static_cast<double>(n) * n - 1.0));
}

double rho_L(double t, int n) { return 2.0 + t / n; }

SliceProfile profile_K(const Eigen::VectorXd& theta, int n) {
    check_unit(theta);
    const double tmin = -1.0, tmax = static_cast<double>(n);
    const double m = q_slope_coeff(theta, n);
    // q at tmin vs l at tmin decides whether they cross inside the range:
    // q decreases, l increases, q(tmax) = 0 < l(tmax).
    const double q_lo = m * (n - tmin);
    const double l_lo = rho_L(tmin, n);
    if (q_lo <= l_lo) {
        return SliceProfile(tmin, tmax, {{tmin, tmax, m * n, -m}});
    }
    // crossing: m (n - t) = 2 + t/n
    const double t_star = (m * n - 2.0) / (m + 1.0 / n);
    return SliceProfile(tmin, tmax,
                        {{tmin, t_star, 2.0, 1.0 / n}, {t_star, tmax, m * n, -m}});
}

std::vector<Eigen::VectorXd> build_Aprime(int n, double epsilon) {
    if (n < 3) throw input_error("build_Aprime: n must be at least 3");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw input_error("build_Aprime: epsilon must be in (0, 1)");
    const int d = n - 1;
    const double p = 1.0 - epsilon;
    const double q = std::sqrt(1.0 - p * p);
    std::vector<Eigen::VectorXd> rows;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            for (int si = -1; si <= 1; si += 2) {
                for (int sj = -1; sj <= 1; sj += 2) {
                    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
                    u[i] = si * p;
                    u[j] = sj * q;
                    rows.push_back(std::move(u));
                }
            }
        }
    }
    // Deduplicate: i<->j collisions happen when p == q (epsilon = 1 - 1/sqrt 2),
    // where the two coefficients agree only up to rounding. Quantized integer
    // keys make those collapse deterministically.
    auto key = [](const Eigen::VectorXd& v) {
        std::vector<long long> k(static_cast<std::size_t>(v.size()));
        for (int i = 0; i < v.size(); ++i)
            k[static_cast<std::size_t>(i)] = std::llround(v[i] * 1e12);
        return k;
    };
    std::sort(rows.begin(), rows.end(), [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return key(a) < key(b);
    });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                               return key(a) == key(b);
                           }),
               rows.end());
    return rows;
}

HPolytope build_L2(int n, double epsilon) {
    const auto aprime = build_Aprime(n, epsilon);
    const int m = static_cast<int>(aprime.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 2, n);
    Eigen::VectorXd b(m + 2);
    for (int i = 0; i < m; ++i) {
        A.row(i).head(n - 1) = aprime[static_cast<std::size_t>(i)];
        b[i] = 1.0;
    }
    A(m, n - 1) = 1.0;
    b[m] = static_cast<double>(n);
    A(m + 1, n - 1) = -1.0;
    b[m + 1] = 1.0;
    return HPolytope("l2", std::move(A), std::move(b));
}

double rho_L2(const Eigen::VectorXd& theta, int n, double epsilon) {
    check_unit(theta);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw input_error("rho_L2: epsilon must be in (0, 1)");
    if (theta.size() != n - 1) throw input_error("rho_L2: theta must lie in R^{n-1}");
    const double p = 1.0 - epsilon;
    const double q = std::sqrt(1.0 - p * p);
    // The norm max_{i != j} (p |y_i| + q |y_j|) is attained on the two largest
    // coordinates in absolute value.
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < theta.size(); ++i) {
        const double a = std::fabs(theta[i]);
        if (a > m1) {
            m2 = m1;
            m1 = a;
        } else if (a > m2) {
            m2 = a;
        }
    }
    const double norm = std::max(p * m1 + q * m2, q * m1 + p * m2);
    return 1.0 / norm;
}

HPolytope build_P(int n, double epsilon) {
    const HPolytope q = build_Q(n);
    const auto aprime = build_Aprime(n, epsilon);
    const int mq = q.rows();
    const int m = mq + static_cast<int>(aprime.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd b(m);
    A.topRows(mq) = q.A();
    b.head(mq) = q.b();
    for (std::size_t i = 0; i < aprime.size(); ++i) {
        A.row(mq + static_cast<int>(i)).head(n - 1) = aprime[i];
        b[mq + static_cast<int>(i)] = 1.0;
    }
    return HPolytope("p", std::move(A), std::move(b));
}

SliceProfile profile_P(const Eigen::VectorXd& theta, int n, double epsilon) {
    const double tmin = -1.0, tmax = static_cast<double>(n);
    const double m = q_slope_coeff(theta, n);
    const double rho0 = rho_L2(theta, n, epsilon);
    if (m * (n - tmin) <= rho0) {
        return SliceProfile(tmin, tmax, {{tmin, tmax, m * n, -m}});
    }
    const double t_star = n - rho0 / m;
    return SliceProfile(tmin, tmax,
                        {{tmin, t_star, rho0, 0.0}, {t_star, tmax, m * n, -m}});
}

SliceProfile cylinder_profile(int n) {
    return SliceProfile(0.0, n + 1.0, {{0.0, n + 1.0, 1.0, 0.0}});
}

SliceProfile cone_profile(int n) {
    return SliceProfile(0.0, n + 1.0, {{0.0, n + 1.0, 0.0, 1.0 / (n + 1.0)}});
}

double epsilon_n(int n, double c) {
    if (n < 3) throw input_error("epsilon_n: n must be at least 3");
    if (!(c > 0.0)) throw input_error("epsilon_n: coefficient must be positive");
    const double eps = c / std::log(static_cast<double>(n));
    if (!(eps > 10.0 / n && eps < 1.0))
        throw input_error("epsilon_n: " + std::to_string(eps) +
                          " violates 10/n < epsilon < 1 at n = " + std::to_string(n));
    return eps;
}

ProfileFamily profile_family(const std::string& kind, int n, double epsilon) {
    if (n < 3) throw input_error("profile_family: n must be at least 3");
    ProfileFamily f;
    f.name = kind;
    f.n = n;
    f.theta_dim = n - 1;
    if (kind == "k") {
        f.profile = [n](const Eigen::VectorXd& th) { return profile_K(th, n); };
    } else if (kind == "p") {
        if (!(epsilon > 0.0)) throw input_error("profile_family: p requires epsilon");
        f.profile = [n, epsilon](const Eigen::VectorXd& th) {
            return profile_P(th, n, epsilon);
        };
    } else if (kind == "q") {
        f.profile = [n](const Eigen::VectorXd& th) {
            const double m = q_slope_coeff(th, n);
            return SliceProfile(-1.0, n, {{-1.0, static_cast<double>(n), m * n, -m}});
        };
    } else if (kind == "l") {
        f.theta_independent = true;
        f.profile = [n](const Eigen::VectorXd&) {
            return SliceProfile(-1.0, n, {{-1.0, static_cast<double>(n), 2.0, 1.0 / n}});
        };
    } else if (kind == "cylinder") {
        f.theta_independent = true;
        f.profile = [n](const Eigen::VectorXd&) { return cylinder_profile(n); };
    } else if (kind == "cone") {
        f.theta_independent = true;
        f.profile = [n](const Eigen::VectorXd&) { return cone_profile(n); };
    } else {
        throw input_error("profile_family: unknown body kind '" + kind + "'");
    }
    return f;
}

// ---------------------------------------------------------------------------
// Membership bodies
// ---------------------------------------------------------------------------

namespace {

class PolytopeBody final : public Body {
public:
    PolytopeBody(HPolytope poly, Eigen::VectorXd lo, Eigen::VectorXd hi)
        : poly_(std::move(poly)), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != poly_.dim() || hi_.size() != poly_.dim())
            throw input_error("polytope body: box dimension mismatch");
        radius_ = std::max(lo_.norm(), hi_.norm()) + 1.0;
    }
    int dim() const override { return poly_.dim(); }
    const std::string& name() const override { return poly_.name(); }
    bool contains(const Eigen::VectorXd& x) const override { return poly_.contains(x); }
    Eigen::VectorXd box_lo() const override { return lo_; }
    Eigen::VectorXd box_hi() const override { return hi_; }
    double bounding_radius() const override { return radius_; }
    Eigen::VectorXd interior_point() const override { return poly_.interior_point(); }

private:
    HPolytope poly_;
    Eigen::VectorXd lo_, hi_;
    double radius_;
};

class KBody final : public Body {
public:
    explicit KBody(int n) : n_(n), name_("k") {
        if (n < 3) throw input_error("k body: n must be at least 3");
        root_ = std::sqrt(static_cast<double>(n) * n - 1.0);
    }
    int dim() const override { return n_; }
    const std::string& name() const override { return name_; }
    bool contains(const Eigen::VectorXd& x) const override {
        if (x.size() != n_) throw input_error("k body: dimension mismatch");
        const double t = x[n_ - 1];
        if (t < -1.0 - 1e-12 || t > n_ + 1e-12) return false;
        const auto y = x.head(n_ - 1);
        const double qbound = (n_ - t) / root_;
        if (y.cwiseAbs().maxCoeff() > qbound + 1e-12) return false;
        return y.norm() <= rho_L(t, n_) + 1e-12;
    }
    Eigen::VectorXd box_lo() const override {
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(n_, -y_bound());
        lo[n_ - 1] = -1.0;
        return lo;
    }
    Eigen::VectorXd box_hi() const override {
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(n_, y_bound());
        hi[n_ - 1] = static_cast<double>(n_);
        return hi;
    }
    double bounding_radius() const override { return 3.0 * std::sqrt(n_ - 1.0) + n_; }
    Eigen::VectorXd interior_point() const override { return Eigen::VectorXd::Zero(n_); }

private:
    // Tightest per-coordinate bound: the q rows give |y_i| <= (n+1)/sqrt(n^2-1)
    // over the whole height range, the l radius gives |y| <= 3.
    double y_bound() const { return std::min(3.0, (n_ + 1.0) / root_); }

    int n_;
    std::string name_;
    double root_;
};

} // namespace

std::unique_ptr<Body> make_polytope_body(HPolytope poly, Eigen::VectorXd box_lo,
                                         Eigen::VectorXd box_hi) {
    return std::make_unique<PolytopeBody>(std::move(poly), std::move(box_lo),
                                          std::move(box_hi));
}

std::unique_ptr<Body> make_K_body(int n) { return std::make_unique<KBody>(n); }

std::unique_ptr<Body> make_P_body(int n, double epsilon) {
    HPolytope p = build_P(n, epsilon);
    const double root = std::sqrt(static_cast<double>(n) * n - 1.0);
    const double yb = std::min(1.0 / (1.0 - epsilon), (n + 1.0) / root);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -yb);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, yb);
    lo[n - 1] = -1.0;
    hi[n - 1] = static_cast<double>(n);
    return make_polytope_body(std::move(p), std::move(lo), std::move(hi));
}

namespace {

class BallBody final : public Body {
public:
    BallBody(int n, double r) : n_(n), r_(r), name_("ball") {
        if (n < 1 || !(r > 0.0)) throw input_error("ball body: bad parameters");
    }
    int dim() const override { return n_; }
    const std::string& name() const override { return name_; }
    bool contains(const Eigen::VectorXd& x) const override {
        if (x.size() != n_) throw input_error("ball body: dimension mismatch");
        return x.norm() <= r_ + 1e-12;
    }
    Eigen::VectorXd box_lo() const override { return Eigen::VectorXd::Constant(n_, -r_); }
    Eigen::VectorXd box_hi() const override { return Eigen::VectorXd::Constant(n_, r_); }
    double bounding_radius() const override { return r_ + 1.0; }
    Eigen::VectorXd interior_point() const override { return Eigen::VectorXd::Zero(n_); }

private:
    int n_;
    double r_;
    std::string name_;
};

} // namespace

std::unique_ptr<Body> make_ball_body(int n, double radius) {
    return std::make_unique<BallBody>(n, radius);
}

std::unique_ptr<Body> make_cube_body(int n, double halfwidth) {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -halfwidth);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, halfwidth);
    return make_polytope_body(HPolytope::cube(n, halfwidth), std::move(lo), std::move(hi));
}

} // namespace bary
