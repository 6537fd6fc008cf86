#pragma once

#include <Eigen/Dense>

#include "barytope/geometry.hpp"

namespace bary {

/// Maximal-volume inscribed ellipsoid of {A x <= b}: maximize log det E
/// subject to ||E a_i|| + <a_i, c> <= b_i over symmetric positive definite E.
/// Damped-Newton barrier path following; `tol` bounds both the scaled
/// stationarity residual and the barrier duality gap.
/// Throws convergence_error when max_iter Newton steps are exhausted.
Ellipsoid solve_mvie(const HPolytope& poly, double tol = 1e-8, int max_iter = 500);

/// Touching directions and fitted weights. The polytope is mapped so the
/// ellipsoid becomes the unit ball; rows whose normalized slack is within
/// slack_tol touch, u_i is the touching direction, and the weights solve
/// the stacked identity/balance system by nonnegative least squares.
/// Weights below 1e-10 are dropped. Fewer than dim touching rows is a
/// certification_error.
JohnCertificate extract_contacts(const HPolytope& poly, const Ellipsoid& ell,
                                 double slack_tol = 1e-6);

/// Decomposition lift: unit vectors u_i in R^d with an exact identity
/// decomposition produce, in R^{d+1} (written n = d+1),
///   v_i = (sqrt(1 - 1/n^2) u_i, 1/n) with weights c_i n^2 / (n^2 - 1)
/// plus v_0 = (0, -1) with weight n / (n + 1).
/// Input residuals above 1e-10 are rejected; the output identities hold to
/// 1e-12 because the construction is algebraic.
JohnCertificate lift_decomposition(const JohnCertificate& cert);

struct JohnReport {
    Ellipsoid ellipsoid;
    JohnCertificate contacts;
    double residual_matrix = 0.0;
    double residual_vector = 0.0;
    bool is_john_position = false;
};

/// Full pipeline: solve the inscribed ellipsoid, extract contacts, compute
/// decomposition residuals, and decide John position (residuals small and
/// the ellipsoid within position_tol of the unit ball).
JohnReport john_report(const HPolytope& poly, double mvie_tol = 1e-8,
                       double slack_tol = 1e-6, double position_tol = 1e-5);

/// Nonnegative least squares min ||A x - b||, x >= 0 (active-set method).
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

} // namespace bary
