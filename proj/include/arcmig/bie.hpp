#pragma once

// Sound-hard arc scattering by a hypersingular boundary integral equation.
//
// The scattered field is the double-layer potential of a density phi that
// vanishes like a square root at both tips. With psi(t) = phi(gamma(t)) the
// Neumann condition reads, after Maue's integration by parts and
// multiplication by |gamma'(s)|,
//
//   d/ds int Phi(s,t) psi'(t) dt
//     + k^2 |gamma'(s)| int nu(s).nu(t) Phi(s,t) psi(t) |gamma'(t)| dt
//     = -|gamma'(s)| d psi_inc / d nu (s).
//
// psi is expanded as sqrt(1 - t^2) sum_j a_j U_j(t), so psi' is
// -sum_j a_j (j+1) T_{j+1}(t) / sqrt(1 - t^2). The 1/(s-t) part of dPhi/ds is
// integrated exactly (it maps U_j to (j+1) U_j / 2); the ln|s-t| parts use
// product integration against Chebyshev interpolants and the smooth rest uses
// Gauss-Chebyshev quadrature. Collocation at the zeros of T_n, quadrature at
// the zeros of T_2n, so the two node sets never coincide.

#include "errors.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "special_fn.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace arcmig {

namespace detail {

/// J_0, J_1, Y_1 and the regular part of Y_0 from a single Miller sequence.
struct HankelParts {
    double j0;
    double j1;
    double y1;
    double y0_regular;
};

inline HankelParts hankel_parts(double z)
{
    const auto j = bessel_j_sequence(2, z);
    const int last = static_cast<int>(j.size()) - 2;
    const double log_term = std::log(0.5 * z) + std::numbers::egamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= last; ++k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        s0 += sign * j[2 * k] / k;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    constexpr double two_over_pi = 2.0 / std::numbers::pi;
    return {j[0], j[1], -two_over_pi * j[0] / z + two_over_pi * log_term * j[1] + two_over_pi * s1,
            -2.0 * two_over_pi * s0};
}

inline double chebyshev_t(int m, double x) { return std::cos(m * std::acos(std::clamp(x, -1.0, 1.0))); }

inline double chebyshev_u(int j, double x)
{
    const double a = std::acos(std::clamp(x, -1.0, 1.0));
    const double sa = std::sin(a);
    if (std::abs(sa) < 1e-14)
        return (x > 0.0 ? 1.0 : ((j & 1) ? -1.0 : 1.0)) * (j + 1);
    return std::sin((j + 1) * a) / sa;
}

/// Weights w_q(s) with int ln|s - t| f(t) / sqrt(1 - t^2) dt ~ sum_q w_q f(t_q)
/// for the Chebyshev interpolant of f at the zeros t_q of T_Q.
inline std::vector<double> log_product_weights(double s, const std::vector<double>& nodes)
{
    const int q_count = static_cast<int>(nodes.size());
    const double alpha = std::acos(std::clamp(s, -1.0, 1.0));
    std::vector<double> w(q_count);
    for (int q = 0; q < q_count; ++q) {
        const double beta = (2.0 * q + 1.0) * std::numbers::pi / (2.0 * q_count);
        double sum = 0.0;
        for (int m = 1; m < q_count; ++m)
            sum += std::cos(m * alpha) * std::cos(m * beta) / m;
        w[q] = (-std::numbers::pi * std::log(2.0) - 2.0 * std::numbers::pi * sum) / q_count;
    }
    return w;
}

inline std::vector<double> chebyshev_zeros(int count)
{
    std::vector<double> x(count);
    for (int i = 0; i < count; ++i)
        x[i] = std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * count));
    return x;
}

} // namespace detail

/// Default number of basis functions: 64, doubled when k * L > 40.
inline int default_node_count(double arc_length, const WaveContext& ctx)
{
    int n = 64;
    while (ctx.k() * arc_length > 40.0 * (n / 64))
        n *= 2;
    return n;
}

/// Collocation solver for one arc and wavenumber. The system
/// matrix does not depend on the incident direction, so it is factorised
/// once and reused for every right-hand side.
class NeumannArcSolver {
public:
    NeumannArcSolver(Arc arc, WaveContext ctx, int nodes)
        : arc_(std::move(arc)), ctx_(ctx), n_(nodes)
    {
        if (nodes < 16 || nodes % 2 != 0)
            throw PreconditionError("solve_density: node count must be even and >= 16, got "
                                    + std::to_string(nodes));
        collocation_ = detail::chebyshev_zeros(n_);
        quad_ = detail::chebyshev_zeros(2 * n_);

        const Eigen::MatrixXcd system = operator_matrix(collocation_, quad_);
        lu_.compute(system);
        const double rcond = lu_.rcond();
        if (!(rcond > 1e-12))
            throw SolverError("solve_density: discretised system is singular (estimated condition number "
                              + std::to_string(1.0 / rcond) + ")");
        condition_estimate_ = 1.0 / rcond;
    }

    int nodes() const { return n_; }
    double condition_estimate() const { return condition_estimate_; }
    const Arc& arc() const { return arc_; }

    /// Chebyshev-U coefficients of the density for incidence theta.
    Eigen::VectorXcd coefficients(const Point& theta) const
    {
        Eigen::VectorXcd rhs(n_);
        for (int p = 0; p < n_; ++p)
            rhs(p) = rhs_value(collocation_[p], theta);
        Eigen::VectorXcd a = lu_.solve(rhs);
        for (int j = 0; j < n_; ++j)
            if (!std::isfinite(a(j).real()) || !std::isfinite(a(j).imag()))
                throw SolverError("solve_density: non-finite density coefficient");
        return a;
    }

    DensitySolution solve(const Point& theta) const
    {
        const Eigen::VectorXcd a = coefficients(theta);
        const double h = std::numbers::pi / static_cast<double>(quad_.size());
        DensitySolution d;
        d.incident_direction = theta;
        d.mode = "bie";
        for (double t : quad_) {
            const double root = std::sqrt(1.0 - t * t);
            Complex chi{0.0, 0.0};
            for (int j = 0; j < n_; ++j)
                chi += a(j) * detail::chebyshev_u(j, t);
            d.nodes.push_back(arc_.point(t));
            d.normals.push_back(arc_.normal(t));
            d.values.push_back(root * chi);
            d.weights.push_back(h * root * arc_.speed(t));
        }
        return d;
    }

    /// Max over `check_points` of |J (T phi + d psi_inc / d nu)| relative to
    /// max |J d psi_inc / d nu|. The operator is re-applied with a finer
    /// quadrature than the one used for the solve.
    double boundary_residual(const Point& theta, const std::vector<double>& check_points) const
    {
        const Eigen::VectorXcd a = coefficients(theta);
        const auto fine = detail::chebyshev_zeros(4 * n_);
        const Eigen::MatrixXcd op = operator_matrix(check_points, fine);
        const Eigen::VectorXcd lhs = op * a;
        double worst = 0.0;
        double scale = 0.0;
        for (std::size_t p = 0; p < check_points.size(); ++p) {
            const Complex rhs = rhs_value(check_points[p], theta);
            worst = std::max(worst, std::abs(lhs(static_cast<Eigen::Index>(p)) - rhs));
            scale = std::max(scale, std::abs(rhs));
        }
        // grazing incidence on a straight arc has zero data; report absolute error
        return scale > 0.0 ? worst / scale : worst;
    }

private:
    /// -|gamma'(s)| d psi_inc / d nu at gamma(s).
    Complex rhs_value(double s, const Point& theta) const
    {
        const Point d = arc_.derivative(s);
        const Point nu = rotate_ccw(d.normalized());
        return -d.norm() * I * ctx_.k() * theta.dot(nu) * incident_field(arc_.point(s), theta, ctx_);
    }

    /// Rows: evaluation points s_p. Columns: basis coefficients a_j.
    Eigen::MatrixXcd operator_matrix(const std::vector<double>& eval, const std::vector<double>& quad) const
    {
        const int rows = static_cast<int>(eval.size());
        const int q_count = static_cast<int>(quad.size());
        const double k = ctx_.k();
        const double h = std::numbers::pi / q_count;
        constexpr double inv_two_pi = 0.5 / std::numbers::pi;

        std::vector<Point> gq(q_count), dq(q_count), nq(q_count);
        for (int q = 0; q < q_count; ++q) {
            gq[q] = arc_.point(quad[q]);
            dq[q] = arc_.derivative(quad[q]);
            nq[q] = rotate_ccw(dq[q].normalized());
        }

        // psi' = g / sqrt(1 - t^2) and psi |gamma'| sqrt(1 - t^2) = (1 - t^2) chi |gamma'|.
        Eigen::MatrixXd g_basis(q_count, n_);
        Eigen::MatrixXd h_basis(q_count, n_);
        for (int q = 0; q < q_count; ++q)
            for (int j = 0; j < n_; ++j) {
                g_basis(q, j) = -(j + 1.0) * detail::chebyshev_t(j + 1, quad[q]);
                h_basis(q, j) = (1.0 - quad[q] * quad[q]) * detail::chebyshev_u(j, quad[q]) * dq[q].norm();
            }

        Eigen::MatrixXcd b1(rows, q_count);
        Eigen::MatrixXcd b2(rows, q_count);
        Eigen::MatrixXcd principal(rows, n_);
        for (int p = 0; p < rows; ++p) {
            const double s = eval[p];
            const Point gs = arc_.point(s);
            const Point ds = arc_.derivative(s);
            const double js = ds.norm();
            const Point ns = rotate_ccw(ds / js);
            const auto wlog = detail::log_product_weights(s, quad);

            for (int j = 0; j < n_; ++j)
                principal(p, j) = 0.5 * (j + 1.0) * detail::chebyshev_u(j, s);

            for (int q = 0; q < q_count; ++q) {
                const double t = quad[q];
                const Point diff = gs - gq[q];
                const double r = diff.norm();
                const double z = k * r;
                const double log_st = std::log(std::abs(s - t));
                const auto hp = detail::hankel_parts(z);
                const double proj = diff.dot(ds);

                // d Phi / ds = (i k / 4) H_1(k r) (diff . gamma'(s)) / r
                const Complex dphi = 0.25 * I * k * Complex(hp.j1, hp.y1) * proj / r;
                const double k1 = -k * k * inv_two_pi * (hp.j1 / z) * proj;
                const Complex k2 = dphi - inv_two_pi / (s - t) - k1 * log_st;
                b1(p, q) = wlog[q] * k1 + h * k2;

                // Phi = (1/2pi) J_0 ln|s - t| + smooth
                const Complex smooth = -0.25 * I * hp.j0
                                       + inv_two_pi * hp.j0
                                             * (std::log(0.5 * k) + std::numbers::egamma + std::log(r) - log_st)
                                       + 0.25 * hp.y0_regular;
                const double coupling = k * k * js * ns.dot(nq[q]);
                b2(p, q) = coupling * (wlog[q] * inv_two_pi * hp.j0 + h * smooth);
            }
        }
        return principal + b1 * g_basis + b2 * h_basis;
    }

    Arc arc_;
    WaveContext ctx_;
    int n_;
    std::vector<double> collocation_;
    std::vector<double> quad_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double condition_estimate_ = 0.0;
};

/// One-shot wrapper around NeumannArcSolver.
inline DensitySolution solve_density(const Arc& arc, const Point& theta, const WaveContext& ctx, int nodes)
{
    return NeumannArcSolver(arc, ctx, nodes).solve(theta);
}

} // namespace arcmig
