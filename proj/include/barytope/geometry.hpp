#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace bary {

/// Convex polytope in half-space form {x : <a_i, x> <= b_i}. Rows are stored
/// as a dense matrix A and offset vector b. Construction validates that every
/// normal is nonzero and that a strictly interior witness exists (the origin
/// by default); the witness is kept for solvers that need a feasible start.
class HPolytope {
public:
    HPolytope(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b,
              std::optional<Eigen::VectorXd> interior_witness = std::nullopt);

    int dim() const { return static_cast<int>(A_.cols()); }
    int rows() const { return static_cast<int>(A_.rows()); }
    const std::string& name() const { return name_; }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& b() const { return b_; }
    const Eigen::VectorXd& interior_point() const { return witness_; }

    /// Membership with relative slack 1e-12 * (1 + |b_i|) per row.
    bool contains(const Eigen::VectorXd& x) const;

    /// Image under the affine map x -> M x + d (M invertible).
    HPolytope transformed(const Eigen::MatrixXd& M, const Eigen::VectorXd& d) const;

    static HPolytope cube(int n, double halfwidth = 1.0);
    static HPolytope box(const Eigen::VectorXd& halfwidths);

private:
    std::string name_;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_;
    Eigen::VectorXd witness_;
};

inline bool contains(const HPolytope& poly, const Eigen::VectorXd& x) {
    return poly.contains(x);
}

/// Ellipsoid {center + E u : |u| <= 1} with E symmetric positive definite.
class Ellipsoid {
public:
    Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

    int dim() const { return static_cast<int>(center_.size()); }
    const Eigen::VectorXd& center() const { return center_; }
    const Eigen::MatrixXd& shape() const { return shape_; }
    double log_det_shape() const;

    static Ellipsoid unit_ball(int n);

private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd shape_;
};

/// Contact directions u_i with weights c_i. Whether the pair actually
/// decomposes the identity is measured by residuals, not enforced here:
/// deliberately broken certificates (rank deficient, wrong trace) are valid
/// inputs for the residual computation.
class JohnCertificate {
public:
    JohnCertificate(int dim, std::vector<Eigen::VectorXd> points,
                    std::vector<double> weights);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<Eigen::VectorXd>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }

    /// sum(c_i) - dim; zero for an exact decomposition (trace identity).
    double trace_gap() const;

private:
    int dim_;
    std::vector<Eigen::VectorXd> points_;
    std::vector<double> weights_;
};

/// (||sum c_i u_i u_i^T - I||_F, |sum c_i u_i|), both in plain doubles.
std::pair<double, double> certificate_residuals(const JohnCertificate& cert);

/// Piecewise-linear radial profile t -> rho(t) >= 0 on [tmin, tmax].
/// Every slice family in this project has affine slice radii, so segments
/// carry (intercept, slope) and tile the range exactly.
class SliceProfile {
public:
    struct Segment {
        double t_lo, t_hi;
        double intercept, slope; // rho(t) = intercept + slope * t
    };

    SliceProfile(double tmin, double tmax, std::vector<Segment> segments);

    double tmin() const { return tmin_; }
    double tmax() const { return tmax_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Exact segment-formula evaluation; t must lie in [tmin, tmax].
    double value(double t) const;

private:
    double tmin_, tmax_;
    std::vector<Segment> segments_;
};

} // namespace bary
