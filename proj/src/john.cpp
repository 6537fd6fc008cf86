#include "barytope/john.hpp"

#include <cmath>
#include <vector>

#include "barytope/errors.hpp"

namespace bary {

namespace {

// Coordinates for the symmetric matrix block: E = sum_k x_k B_k with
// B_(i,i) = e_i e_i^T and B_(i,j) = e_i e_j^T + e_j e_i^T for i < j.
struct SymBasis {
    std::vector<std::pair<int, int>> idx; // (i, j) with i <= j

    explicit SymBasis(int n) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) idx.emplace_back(i, j);
    }

    int size() const { return static_cast<int>(idx.size()); }

    Eigen::MatrixXd unpack(const Eigen::VectorXd& x, int n) const {
        Eigen::MatrixXd E(n, n);
        for (int k = 0; k < size(); ++k) {
            const auto [i, j] = idx[static_cast<std::size_t>(k)];
            E(i, j) = x[k];
            E(j, i) = x[k];
        }
        return E;
    }

    Eigen::VectorXd pack(const Eigen::MatrixXd& E) const {
        Eigen::VectorXd x(size());
        for (int k = 0; k < size(); ++k) {
            const auto [i, j] = idx[static_cast<std::size_t>(k)];
            x[k] = E(i, j);
        }
        return x;
    }

    // d||E a|| / dx_k = (v^T B_k a) / ||v|| with v = E a.
    void grad_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& a, double phi,
                   Eigen::VectorXd& out) const {
        for (int k = 0; k < size(); ++k) {
            const auto [i, j] = idx[static_cast<std::size_t>(k)];
            const double t = i == j ? v[i] * a[i] : v[i] * a[j] + v[j] * a[i];
            out[k] = t / phi;
        }
    }

    // B_k a as a sparse two-entry vector, materialized densely.
    void basis_times(const Eigen::VectorXd& a, int k, Eigen::VectorXd& w) const {
        w.setZero();
        const auto [i, j] = idx[static_cast<std::size_t>(k)];
        if (i == j) {
            w[i] = a[i];
        } else {
            w[i] = a[j];
            w[j] = a[i];
        }
    }
};

struct BarrierState {
    Eigen::VectorXd c;
    Eigen::MatrixXd E;
};

// Slacks s_i = b_i - <a_i, c> - ||E a_i||; returns false if any is
// nonpositive or E fails its Cholesky factorization.
bool evaluate_slacks(const HPolytope& poly, const BarrierState& st,
                     Eigen::VectorXd& slack, Eigen::MatrixXd& V,
                     Eigen::VectorXd& phi) {
    Eigen::LLT<Eigen::MatrixXd> llt(st.E);
    if (llt.info() != Eigen::Success) return false;
    const int m = poly.rows();
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd a = poly.A().row(i).transpose();
        V.col(i) = st.E * a;
        phi[i] = V.col(i).norm();
        slack[i] = poly.b()[i] - a.dot(st.c) - phi[i];
        if (!(slack[i] > 0.0)) return false;
    }
    return true;
}

double barrier_value(double t, const Eigen::MatrixXd& E, const Eigen::VectorXd& slack) {
    Eigen::LLT<Eigen::MatrixXd> llt(E);
    double logdet = 0.0;
    for (int i = 0; i < E.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;
    return -t * logdet - slack.array().log().sum();
}

} // namespace

Ellipsoid solve_mvie(const HPolytope& poly, double tol, int max_iter) {
    if (!(tol > 0.0)) throw input_error("solve_mvie: tol must be positive");
    const int n = poly.dim();
    const int m = poly.rows();
    const SymBasis basis(n);
    const int ke = basis.size();
    const int dim = n + ke; // (c, vech E)

    // Strictly feasible start: the stored witness with a small inscribed ball.
    BarrierState st;
    st.c = poly.interior_point();
    {
        double r0 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double s = poly.b()[i] - poly.A().row(i).dot(st.c);
            r0 = std::min(r0, s / poly.A().row(i).norm());
        }
        st.E = 0.5 * r0 * Eigen::MatrixXd::Identity(n, n);
    }

    Eigen::VectorXd slack(m), phi(m);
    Eigen::MatrixXd V(n, m);
    if (!evaluate_slacks(poly, st, slack, V, phi))
        throw input_error("solve_mvie: could not establish a feasible start");

    double t = 1.0;
    const double mu = 5.0;
    const double t_final = static_cast<double>(m) / (0.25 * tol);
    int iters = 0;

    Eigen::VectorXd grad(dim), step(dim), gphi(ke), w_k(n), w_l(n);
    Eigen::MatrixXd hess(dim, dim);

    for (;;) {
        // Inner damped Newton at fixed t. Intermediate stages only need
        // approximate centering (decrement below 0.05); the final stage is
        // polished to machine level.
        const bool final_stage = t >= t_final;
        const double decrement_exit = final_stage ? 1e-11 : 0.05;
        int stagnant = 0;
        for (;;) {
            if (iters++ >= max_iter) {
                // Best iterate travels with the error message; the ellipsoid
                // itself is still feasible.
                throw convergence_error(
                    "solve_mvie: iteration cap " + std::to_string(max_iter) +
                    " reached at barrier parameter " + std::to_string(t));
            }
            const Eigen::MatrixXd Einv = st.E.inverse();

            grad.setZero();
            hess.setZero();

            // -t log det E part.
            for (int k = 0; k < ke; ++k) {
                const auto [i, j] = basis.idx[static_cast<std::size_t>(k)];
                grad[n + k] = -t * (i == j ? Einv(i, i) : 2.0 * Einv(i, j));
            }
            for (int k = 0; k < ke; ++k) {
                const auto [i, j] = basis.idx[static_cast<std::size_t>(k)];
                for (int l = k; l < ke; ++l) {
                    const auto [p, q] = basis.idx[static_cast<std::size_t>(l)];
                    double tr = Einv(j, p) * Einv(q, i);
                    if (p != q) tr += Einv(j, q) * Einv(p, i);
                    if (i != j) {
                        tr += Einv(i, p) * Einv(q, j);
                        if (p != q) tr += Einv(i, q) * Einv(p, j);
                    }
                    hess(n + k, n + l) += t * tr;
                    if (l != k) hess(n + l, n + k) = hess(n + k, n + l);
                }
            }

            // Facet barrier terms.
            for (int i = 0; i < m; ++i) {
                const Eigen::VectorXd a = poly.A().row(i).transpose();
                const double inv_s = 1.0 / slack[i];
                basis.grad_norm(V.col(i), a, phi[i], gphi);

                // gradient of (a^T c + phi_i) over (c, vech E)
                grad.head(n) += inv_s * a;
                grad.tail(ke) += inv_s * gphi;

                // rank-one part (1/s^2) g g^T
                Eigen::VectorXd g_full(dim);
                g_full.head(n) = a;
                g_full.tail(ke) = gphi;
                hess.noalias() += (inv_s * inv_s) * (g_full * g_full.transpose());

                // curvature of phi_i: (w_k^T w_l)/phi - (v^T w_k)(v^T w_l)/phi^3
                for (int k = 0; k < ke; ++k) {
                    basis.basis_times(a, k, w_k);
                    const double vk = V.col(i).dot(w_k);
                    for (int l = k; l < ke; ++l) {
                        basis.basis_times(a, l, w_l);
                        const double vl = V.col(i).dot(w_l);
                        const double h =
                            w_k.dot(w_l) / phi[i] - vk * vl / (phi[i] * phi[i] * phi[i]);
                        hess(n + k, n + l) += inv_s * h;
                        if (l != k) hess(n + l, n + k) = hess(n + k, n + l);
                    }
                }
            }

            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            step = -ldlt.solve(grad);
            double decrement = -grad.dot(step);
            if (!(decrement > 0.0)) {
                // Hessian lost definiteness numerically; regularize once.
                hess.diagonal().array() += 1e-8 * hess.diagonal().maxCoeff();
                step = -Eigen::LDLT<Eigen::MatrixXd>(hess).solve(grad);
                decrement = -grad.dot(step);
                if (!(decrement > 0.0)) break;
            }
            if (decrement < decrement_exit) break;

            const double f0 = barrier_value(t, st.E, slack);
            double alpha = 1.0;
            BarrierState trial;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                trial.c = st.c + alpha * step.head(n);
                trial.E = st.E + alpha * basis.unpack(step.tail(ke), n);
                Eigen::VectorXd tslack(m), tphi(m);
                Eigen::MatrixXd tV(n, m);
                if (evaluate_slacks(poly, trial, tslack, tV, tphi)) {
                    const double f1 = barrier_value(t, trial.E, tslack);
                    if (f1 <= f0 - 1e-4 * alpha * decrement) {
                        // Progress below rounding level means the stage hit
                        // its numerical floor; two in a row ends it.
                        if (f0 - f1 <= 1e-12 * (1.0 + std::fabs(f0)))
                            ++stagnant;
                        else
                            stagnant = 0;
                        st = trial;
                        slack = tslack;
                        phi = tphi;
                        V = tV;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!moved || stagnant >= 2) break;
        }

        if (t >= t_final) break;
        t = std::min(t * mu, t_final);
        if (!evaluate_slacks(poly, st, slack, V, phi))
            throw convergence_error("solve_mvie: lost feasibility during path following");
    }

    // Guard against unbounded feasible sets: log det grows without bound.
    if (st.E.norm() > 1e9)
        throw convergence_error("solve_mvie: ellipsoid diverged (unbounded polytope?)");

    return Ellipsoid(st.c, 0.5 * (st.E + st.E.transpose()));
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int ncols = static_cast<int>(A.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ncols);
    std::vector<bool> passive(static_cast<std::size_t>(ncols), false);
    Eigen::VectorXd w = A.transpose() * (b - A * x);

    const double tol = 1e-12 * std::max(1.0, b.norm());
    const int max_outer = 3 * ncols + 30;

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<int> cols;
        for (int j = 0; j < ncols; ++j)
            if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
        Eigen::MatrixXd Ap(A.rows(), static_cast<int>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k)
            Ap.col(static_cast<int>(k)) = A.col(cols[k]);
        // Minimum-norm least squares resolves rank-deficient (tied) systems.
        const Eigen::VectorXd zp = Ap.completeOrthogonalDecomposition().solve(b);
        z.setZero();
        for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zp[static_cast<int>(k)];
    };

    for (int outer = 0; outer < max_outer; ++outer) {
        int best = -1;
        double best_w = tol;
        for (int j = 0; j < ncols; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        Eigen::VectorXd z(ncols);
        for (int inner = 0; inner < max_outer; ++inner) {
            solve_passive(z);
            double alpha = 1.0;
            bool clipped = false;
            for (int j = 0; j < ncols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
                    const double a = x[j] / (x[j] - z[j]);
                    if (a < alpha) alpha = a;
                    clipped = true;
                }
            }
            if (!clipped) {
                x = z;
                break;
            }
            x += alpha * (z - x);
            for (int j = 0; j < ncols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x[j] = 0.0;
                }
            }
        }
        w = A.transpose() * (b - A * x);
    }
    return x;
}

JohnCertificate extract_contacts(const HPolytope& poly, const Ellipsoid& ell,
                                 double slack_tol) {
    if (ell.dim() != poly.dim())
        throw input_error("extract_contacts: dimension mismatch");
    const int n = poly.dim();
    const int m = poly.rows();

    // Map to ball coordinates x = c + E u: rows become (E a_i, b_i - <a_i, c>).
    std::vector<Eigen::VectorXd> touching;
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd a = poly.A().row(i).transpose();
        const Eigen::VectorXd at = ell.shape() * a;
        const double bt = poly.b()[i] - a.dot(ell.center());
        const double dist = bt / at.norm(); // hyperplane distance from the ball center
        if (dist < 1.0 - slack_tol)
            throw input_error("extract_contacts: ellipsoid violates row " + std::to_string(i));
        if (dist <= 1.0 + slack_tol) touching.push_back(at.normalized());
    }
    if (static_cast<int>(touching.size()) < n)
        throw certification_error("extract_contacts: only " +
                                  std::to_string(touching.size()) + " touching rows, need " +
                                  std::to_string(n));

    // Weights from sum c_i u_i u_i^T = I and sum c_i u_i = 0, stacked with a
    // Frobenius-consistent scaling (off-diagonal entries weighted sqrt(2)).
    const int mc = static_cast<int>(touching.size());
    const int rows_sym = n * (n + 1) / 2;
    Eigen::MatrixXd M(rows_sym + n, mc);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows_sym + n);
    const double rt2 = std::sqrt(2.0);
    for (int c = 0; c < mc; ++c) {
        const auto& u = touching[static_cast<std::size_t>(c)];
        int r = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                M(r++, c) = (i == j) ? u[i] * u[j] : rt2 * u[i] * u[j];
            }
        }
        M.block(rows_sym, c, n, 1) = u;
    }
    {
        int r = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) rhs[r++] = (i == j) ? 1.0 : 0.0;
    }

    const Eigen::VectorXd weights = nnls(M, rhs);

    std::vector<Eigen::VectorXd> points;
    std::vector<double> kept;
    for (int c = 0; c < mc; ++c) {
        if (weights[c] > 1e-10) {
            points.push_back(touching[static_cast<std::size_t>(c)]);
            kept.push_back(weights[c]);
        }
    }
    if (static_cast<int>(points.size()) < n)
        throw certification_error("extract_contacts: weight fit kept fewer than n contacts");
    return JohnCertificate(n, std::move(points), std::move(kept));
}

JohnCertificate lift_decomposition(const JohnCertificate& cert) {
    const auto [rm, rv] = certificate_residuals(cert);
    if (rm > 1e-10 || rv > 1e-10)
        throw input_error("lift_decomposition: input decomposition residuals too large");

    const int d = cert.dim();
    const int n = d + 1;
    const double nn = static_cast<double>(n) * n;
    const double shrink = std::sqrt(1.0 - 1.0 / nn);
    const double reweight = nn / (nn - 1.0);

    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
    points.reserve(cert.size() + 1);
    weights.reserve(cert.size() + 1);
    for (std::size_t i = 0; i < cert.size(); ++i) {
        Eigen::VectorXd v(n);
        v.head(d) = shrink * cert.points()[i];
        v[d] = 1.0 / n;
        points.push_back(std::move(v));
        weights.push_back(cert.weights()[i] * reweight);
    }
    Eigen::VectorXd apex = Eigen::VectorXd::Zero(n);
    apex[d] = -1.0;
    points.push_back(std::move(apex));
    weights.push_back(static_cast<double>(n) / (n + 1.0));

    return JohnCertificate(n, std::move(points), std::move(weights));
}

JohnReport john_report(const HPolytope& poly, double mvie_tol, double slack_tol,
                       double position_tol) {
    Ellipsoid ell = solve_mvie(poly, mvie_tol);
    JohnCertificate cert = extract_contacts(poly, ell, slack_tol);
    const auto [rm, rv] = certificate_residuals(cert);

    const int n = poly.dim();
    const double center_off = ell.center().norm();
    const double shape_off = (ell.shape() - Eigen::MatrixXd::Identity(n, n)).norm();

    JohnReport rep{std::move(ell), std::move(cert), rm, rv, false};
    rep.is_john_position = rm <= position_tol && rv <= position_tol &&
                           center_off <= position_tol && shape_off <= position_tol;
    return rep;
}

} // namespace bary
