#include "barytope/geometry.hpp"

#include <cmath>

#include "barytope/errors.hpp"

namespace bary {

namespace {
constexpr double kMembershipEps = 1e-12;
} // namespace

HPolytope::HPolytope(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b,
                     std::optional<Eigen::VectorXd> interior_witness)
    : name_(std::move(name)), A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() != b_.size())
        throw input_error("polytope '" + name_ + "': A and b row counts differ");
    if (A_.cols() < 2)
        throw input_error("polytope '" + name_ + "': dimension must be at least 2");
    if (A_.rows() == 0)
        throw input_error("polytope '" + name_ + "': no rows");
    for (int i = 0; i < A_.rows(); ++i) {
        if (A_.row(i).norm() == 0.0)
            throw input_error("polytope '" + name_ + "': zero normal in row " + std::to_string(i));
    }
    witness_ = interior_witness.value_or(Eigen::VectorXd::Zero(A_.cols()));
    if (witness_.size() != A_.cols())
        throw input_error("polytope '" + name_ + "': witness dimension mismatch");
    const Eigen::VectorXd slack = b_ - A_ * witness_;
    if (slack.minCoeff() <= 0.0)
        throw input_error("polytope '" + name_ +
                          "': no strictly interior point (feasibility probe failed)");
}

bool HPolytope::contains(const Eigen::VectorXd& x) const {
    if (x.size() != A_.cols())
        throw input_error("contains: point dimension " + std::to_string(x.size()) +
                          " does not match polytope dimension " + std::to_string(A_.cols()));
    const Eigen::VectorXd lhs = A_ * x;
    for (int i = 0; i < A_.rows(); ++i) {
        if (lhs[i] > b_[i] + kMembershipEps * (1.0 + std::fabs(b_[i]))) return false;
    }
    return true;
}

HPolytope HPolytope::transformed(const Eigen::MatrixXd& M, const Eigen::VectorXd& d) const {
    // {x : A M^{-1} (x - d) <= b}
    const Eigen::MatrixXd Minv = M.inverse();
    Eigen::MatrixXd A2 = A_ * Minv;
    Eigen::VectorXd b2 = b_ + A2 * d;
    Eigen::VectorXd w2 = M * witness_ + d;
    return HPolytope(name_ + "-affine", std::move(A2), std::move(b2), std::move(w2));
}

HPolytope HPolytope::cube(int n, double halfwidth) {
    return box(Eigen::VectorXd::Constant(n, halfwidth));
}

HPolytope HPolytope::box(const Eigen::VectorXd& halfwidths) {
    const int n = static_cast<int>(halfwidths.size());
    Eigen::MatrixXd A(2 * n, n);
    Eigen::VectorXd b(2 * n);
    A.setZero();
    for (int i = 0; i < n; ++i) {
        A(2 * i, i) = 1.0;
        A(2 * i + 1, i) = -1.0;
        b[2 * i] = halfwidths[i];
        b[2 * i + 1] = halfwidths[i];
    }
    return HPolytope("box", std::move(A), std::move(b));
}

Ellipsoid::Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape)
    : center_(std::move(center)), shape_(std::move(shape)) {
    if (shape_.rows() != shape_.cols() || shape_.rows() != center_.size())
        throw input_error("ellipsoid: shape/center dimension mismatch");
    if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw input_error("ellipsoid: shape matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape_);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw input_error("ellipsoid: shape matrix is not positive definite");
}

double Ellipsoid::log_det_shape() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape_);
    return es.eigenvalues().array().log().sum();
}

Ellipsoid Ellipsoid::unit_ball(int n) {
    return Ellipsoid(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n));
}

JohnCertificate::JohnCertificate(int dim, std::vector<Eigen::VectorXd> points,
                                 std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.size() != weights_.size())
        throw input_error("certificate: point/weight counts differ");
    if (points_.empty()) throw input_error("certificate: empty");
    for (const auto& u : points_) {
        if (u.size() != dim_) throw input_error("certificate: point dimension mismatch");
        if (std::fabs(u.norm() - 1.0) > 1e-12)
            throw input_error("certificate: contact point is not a unit vector");
    }
    for (double c : weights_) {
        if (!(c > 0.0)) throw input_error("certificate: weights must be positive");
    }
}

double JohnCertificate::trace_gap() const {
    double s = 0.0;
    for (double c : weights_) s += c;
    return s - dim_;
}

std::pair<double, double> certificate_residuals(const JohnCertificate& cert) {
    const int n = cert.dim();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < cert.size(); ++i) {
        const auto& u = cert.points()[i];
        M.noalias() += cert.weights()[i] * (u * u.transpose());
        v.noalias() += cert.weights()[i] * u;
    }
    M -= Eigen::MatrixXd::Identity(n, n);
    return {M.norm(), v.norm()};
}

SliceProfile::SliceProfile(double tmin, double tmax, std::vector<Segment> segments)
    : tmin_(tmin), tmax_(tmax), segments_(std::move(segments)) {
    if (!(tmin_ < tmax_)) throw input_error("profile: tmin must be below tmax");
    if (segments_.empty()) throw input_error("profile: no segments");
    if (segments_.front().t_lo != tmin_ || segments_.back().t_hi != tmax_)
        throw input_error("profile: segments do not span [tmin, tmax]");
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (!(s.t_lo < s.t_hi)) throw input_error("profile: empty or reversed segment");
        const double lo = s.intercept + s.slope * s.t_lo;
        const double hi = s.intercept + s.slope * s.t_hi;
        if (lo < -1e-12 || hi < -1e-12)
            throw input_error("profile: negative radius on a segment");
        if (k + 1 < segments_.size()) {
            const auto& nx = segments_[k + 1];
            if (s.t_hi != nx.t_lo) throw input_error("profile: gap or overlap between segments");
            const double a = s.intercept + s.slope * s.t_hi;
            const double b = nx.intercept + nx.slope * nx.t_lo;
            if (std::fabs(a - b) > 1e-10 * (1.0 + std::max(std::fabs(a), std::fabs(b))))
                throw input_error("profile: adjacent segments disagree at a breakpoint");
        }
    }
}

double SliceProfile::value(double t) const {
    if (t < tmin_ || t > tmax_)
        throw input_error("profile: t outside [tmin, tmax]");
    for (const auto& s : segments_) {
        if (t <= s.t_hi) return s.intercept + s.slope * t;
    }
    const auto& s = segments_.back();
    return s.intercept + s.slope * t;
}

} // namespace bary
