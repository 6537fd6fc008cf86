#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

#include "barytope/geometry.hpp"

namespace bary {

// ---------------------------------------------------------------------------
// The body family. All of them live in R^n with a distinguished axis e_n;
// points are written (y, t) with y in R^{n-1}. Slices at height t are star
// bodies in y whose radial functions are affine in t, which is what makes
// every inner integral closed-form downstream.
//
//   q        cone over a scaled cube, in John position by construction
//   l        ball cylinder-cone: slice (2 + t/n) B_2^{n-1}, t in [-1, n]
//   k        q intersect l (membership oracle + profiles; not polyhedral)
//   l2       polytopal cylinder cut out by the two-coordinate norm rows A'
//   p        q intersect l2 (polytope with O(n^2) facets)
//   cylinder unit-radius reference body on [0, n+1]
//   cone     apex-down reference body on [0, n+1]
// ---------------------------------------------------------------------------

/// Facet normals of q: (+/- sqrt(1 - 1/n^2) e_i, 1/n) for i < n and (0, -1),
/// all offsets 1. 2(n-1)+1 rows.
HPolytope build_Q(int n);

/// Distance from the axis to the boundary of the q-slice at height t in
/// direction theta (unit vector in R^{n-1}):
/// (1 / max_i |theta_i|) * (n - t) / sqrt(n^2 - 1). Requires t in [-1, n].
double rho_Q(const Eigen::VectorXd& theta, double t, int n);

/// Slice radius of l, independent of theta: 2 + t/n.
double rho_L(double t, int n);

/// min(rho_Q, rho_L) on [-1, n]: at most two segments, the increasing l part
/// below the crossing and the decreasing q part above it. If the crossing
/// falls outside the range the profile is the single pointwise-smaller piece.
SliceProfile profile_K(const Eigen::VectorXd& theta, int n);

/// The deduplicated row set {+/-(1-eps) e_i +/- sqrt(1-(1-eps)^2) e_j}, i != j,
/// as vectors in R^{n-1}. Cardinality is whatever deduplication leaves.
/// The builders accept any epsilon in (0, 1); the 10/n < epsilon window is
/// enforced where epsilon is derived from n (epsilon_n), since small test
/// instances legitimately use epsilon outside the window.
std::vector<Eigen::VectorXd> build_Aprime(int n, double epsilon);

/// l2 as an H-polytope in R^n: the A' rows lifted with zero axis component,
/// plus the caps -1 <= t <= n.
HPolytope build_L2(int n, double epsilon);

/// 1 / ||theta|| with ||y|| = max_{i != j} ((1-eps)|y_i| + sqrt(1-(1-eps)^2)|y_j|).
double rho_L2(const Eigen::VectorXd& theta, int n, double epsilon);

/// p = q intersect l2 as an H-polytope.
HPolytope build_P(int n, double epsilon);

/// min(rho_Q(theta, .), rho_L2(theta)) on [-1, n]: constant until the q cone
/// cuts below, then the q part; single q segment if the constant never binds.
SliceProfile profile_P(const Eigen::VectorXd& theta, int n, double epsilon);

/// rho == 1 on [0, n+1].
SliceProfile cylinder_profile(int n);

/// rho(t) = t / (n+1) on [0, n+1].
SliceProfile cone_profile(int n);

/// c / log(n); throws unless 10/n < result < 1.
double epsilon_n(int n, double c);

// ---------------------------------------------------------------------------
// Profile generators: what the moments engine integrates.
// ---------------------------------------------------------------------------

/// A body seen as theta -> slice profile, theta uniform on S^{n-2} in R^{n-1}.
struct ProfileFamily {
    std::string name;
    int n = 0;                 // ambient dimension
    int theta_dim = 0;         // theta lives in R^{theta_dim}
    bool theta_independent = false;
    std::function<SliceProfile(const Eigen::VectorXd&)> profile;
};

/// kind in {q, l, k, p, cylinder, cone}; epsilon is required for p.
ProfileFamily profile_family(const std::string& kind, int n, double epsilon = 0.0);

// ---------------------------------------------------------------------------
// Membership oracles with bounds, shared by the samplers.
// ---------------------------------------------------------------------------

class Body {
public:
    virtual ~Body() = default;
    virtual int dim() const = 0;
    virtual const std::string& name() const = 0;
    virtual bool contains(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd box_lo() const = 0;
    virtual Eigen::VectorXd box_hi() const = 0;
    virtual double bounding_radius() const = 0;
    /// A strictly interior point usable as a chain start.
    virtual Eigen::VectorXd interior_point() const = 0;
};

/// H-polytope with an explicitly supplied bounding box.
std::unique_ptr<Body> make_polytope_body(HPolytope poly, Eigen::VectorXd box_lo,
                                         Eigen::VectorXd box_hi);

/// k = q intersect l as a pure membership oracle. Box: per-coordinate
/// |y_i| <= min(3, (n+1)/sqrt(n^2-1)) from the q rows and the l radius,
/// t in [-1, n]; radius 3 sqrt(n-1) + n.
std::unique_ptr<Body> make_K_body(int n);

/// p with the analogous box.
std::unique_ptr<Body> make_P_body(int n, double epsilon);

/// Euclidean ball of radius r with its cube [-r, r]^n as the box.
std::unique_ptr<Body> make_ball_body(int n, double radius = 1.0);

std::unique_ptr<Body> make_cube_body(int n, double halfwidth = 1.0);

} // namespace bary
