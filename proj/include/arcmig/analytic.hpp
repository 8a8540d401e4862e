#pragma once

// Closed-form Bessel structures for direction sums and imaging maps, and the
// brute-force oracles that adjudicate them.
//
// The central quantity is the circle average
//
//   A(xi, zeta, x) = (1/2pi) int_0^2pi (theta.xi)(theta.zeta) exp(i k theta.x) dt.
//
// It is computed three independent ways: the finite sum over the N incident
// directions, a periodic trapezoid rule, and a truncated Jacobi-Anger series
// whose trigonometric integrals come from the cos(ax+b)cos(cx+d)
// antiderivative table. The quoted closed forms are evaluated verbatim and
// only ever compared against these oracles.

#include "errors.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "msr.hpp"
#include "spectral.hpp"
#include "special_fn.hpp"
#include "quadrature.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace arcmig {

/// (1/N) sum_n (theta_n.xi)(theta_n.zeta) exp(i k theta_n.x) over make_directions(n).
inline Complex discrete_sum(const Point& xi, const Point& zeta, const Point& x, int n, const WaveContext& ctx)
{
    if (n < 8)
        throw PreconditionError("discrete_sum: need at least 8 directions");
    const auto dirs = make_directions(n);
    Complex sum{0.0, 0.0};
    for (const Point& theta : dirs.incident)
        sum += theta.dot(xi) * theta.dot(zeta) * std::exp(I * (ctx.k() * theta.dot(x)));
    return sum / static_cast<double>(n);
}

namespace detail {

inline Complex circle_average_trapezoid(const Point& xi, const Point& zeta, const Point& x, double k, int nodes)
{
    const auto integrand = [&](double t) {
        const Point theta(std::cos(t), std::sin(t));
        return Complex(theta.dot(xi) * theta.dot(zeta)) * std::exp(I * (k * theta.dot(x)));
    };
    return periodic_trapezoid(integrand, nodes) / (2.0 * std::numbers::pi);
}

} // namespace detail

/// Circle average by the 2048-node periodic trapezoid rule, confirmed against
/// 4096 nodes. Throws NumericalError if the two disagree by more than 1e-10.
inline Complex quadrature_oracle(const Point& xi, const Point& zeta, const Point& x, const WaveContext& ctx)
{
    const Complex coarse = detail::circle_average_trapezoid(xi, zeta, x, ctx.k(), 2048);
    const Complex fine = detail::circle_average_trapezoid(xi, zeta, x, ctx.k(), 4096);
    if (std::abs(coarse - fine) > 1e-10)
        throw NumericalError("quadrature_oracle: trapezoid rule not converged (k|x| too large)");
    return fine;
}

/// Antiderivative of cos(a t + b) cos(c t + d):
///   sin((a-c)t + b-d) / (2(a-c)) + sin((a+c)t + b+d) / (2(a+c))   if a^2 != c^2,
///   t cos(b-d) / 2 + sin(2 a t + b + d) / (4a)                    if a = c.
/// The a = -c case is mapped onto a = c via cos(c t + d) = cos(-c t - d), and
/// a = c = 0 degenerates to t cos(b) cos(d).
inline double cos_product_antiderivative(double a, double b, double c, double d, double t)
{
    if (a == -c && a != 0.0) {
        c = -c;
        d = -d;
    }
    if (a == c) {
        if (a == 0.0)
            return t * std::cos(b) * std::cos(d);
        return 0.5 * t * std::cos(b - d) + std::sin(2.0 * a * t + b + d) / (4.0 * a);
    }
    const double diff = a - c;
    const double sum = a + c;
    double value = std::sin(diff * t + b - d) / (2.0 * diff);
    if (sum != 0.0)
        value += std::sin(sum * t + b + d) / (2.0 * sum);
    else
        value += 0.5 * t * std::cos(b + d);
    return value;
}

inline double cos_product_integral(double a, double b, double c, double d, double lo, double hi)
{
    return cos_product_antiderivative(a, b, c, d, hi) - cos_product_antiderivative(a, b, c, d, lo);
}

/// Circle average from e^{iz cos u} = J_0(z) + 2 sum_n i^n J_n(z) cos(n u),
/// with every trigonometric integral taken from the antiderivative table.
inline Complex jacobi_anger_series(const Point& xi, const Point& zeta, const Point& x, const WaveContext& ctx,
                                   int terms = 0)
{
    const double r = x.norm();
    const double z = ctx.k() * r;
    const double phi = r > 0.0 ? std::atan2(x.y(), x.x()) : 0.0;
    const double a_xi = std::atan2(xi.y(), xi.x());
    const double a_zeta = std::atan2(zeta.y(), zeta.x());
    if (terms <= 0)
        terms = static_cast<int>(z + 20.0 + 3.0 * std::cbrt(z));
    const auto jn = bessel_j_sequence(terms, z);
    const double two_pi = 2.0 * std::numbers::pi;

    // cos(t - xi) cos(t - zeta) = (cos(2t - xi - zeta) + cos(xi - zeta)) / 2
    Complex total{0.0, 0.0};
    Complex i_pow{1.0, 0.0};
    for (int n = 0; n <= terms; ++n) {
        const double weight = n == 0 ? 1.0 : 2.0;
        const double integral = 0.5 * cos_product_integral(2.0, -a_xi - a_zeta, n, -n * phi, 0.0, two_pi)
                                + 0.5 * std::cos(a_xi - a_zeta)
                                      * cos_product_integral(0.0, 0.0, n, -n * phi, 0.0, two_pi);
        total += weight * i_pow * jn[n] * integral;
        i_pow *= I;
    }
    return total / two_pi;
}

/// Quoted closed form of the xi != zeta identity:
///   (1/2)(xi.zeta)(J_0 - J_2) - (xhat.xi)(xhat.zeta) J_2.
/// At x = 0 the limit (1/2)(xi.zeta) is returned with at_origin set.
struct ClosedFormValue {
    Complex value;
    bool at_origin = false;
};

inline ClosedFormValue quoted_identity1(const Point& xi, const Point& zeta, const Point& x, const WaveContext& ctx)
{
    const double r = x.norm();
    if (r == 0.0)
        return {0.5 * xi.dot(zeta), true};
    const Point xhat = x / r;
    const auto j = bessel_j012(ctx.k() * r);
    return {0.5 * xi.dot(zeta) * (j.j0 - j.j2) - xhat.dot(xi) * xhat.dot(zeta) * j.j2, false};
}

/// Quoted closed form of the xi = zeta identity: J_0(k|x|) / 2.
inline Complex quoted_identity2(const Point& /*xi*/, const Point& x, const WaveContext& ctx)
{
    return 0.5 * bessel_j(0, ctx.k() * x.norm());
}

/// Closed form that the oracles establish for the circle average:
///   (1/2)(xi.zeta)(J_0 + J_2) - (xhat.xi)(xhat.zeta) J_2.
/// Reported alongside the quoted forms.
inline Complex circle_average_closed_form(const Point& xi, const Point& zeta, const Point& x, const WaveContext& ctx)
{
    const double r = x.norm();
    if (r == 0.0)
        return 0.5 * xi.dot(zeta);
    const Point xhat = x / r;
    const auto j = bessel_j012(ctx.k() * r);
    return 0.5 * xi.dot(zeta) * (j.j0 + j.j2) - xhat.dot(xi) * xhat.dot(zeta) * j.j2;
}

struct IdentityReport {
    Complex lhs;               // discrete sum
    Complex quadrature;        // trapezoid oracle
    Complex series;            // Jacobi-Anger oracle
    Complex quoted_closed_form; // quoted identity (1 or 2 by xi == zeta)
    Complex corrected_closed_form;
    bool same_direction = false;
    double residual_lhs_vs_quadrature = 0.0;
    double residual_quadrature_vs_quoted = 0.0;
    double residual_quadrature_vs_series = 0.0;
    double residual_quadrature_vs_corrected = 0.0;
};

inline IdentityReport identity_report(const Point& xi, const Point& zeta, const Point& x, int n,
                                      const WaveContext& ctx)
{
    IdentityReport rep;
    rep.lhs = discrete_sum(xi, zeta, x, n, ctx);
    rep.quadrature = quadrature_oracle(xi, zeta, x, ctx);
    rep.series = jacobi_anger_series(xi, zeta, x, ctx);
    rep.same_direction = (xi - zeta).norm() == 0.0;
    rep.quoted_closed_form = rep.same_direction ? quoted_identity2(xi, x, ctx) : quoted_identity1(xi, zeta, x, ctx).value;
    rep.corrected_closed_form = circle_average_closed_form(xi, zeta, x, ctx);
    rep.residual_lhs_vs_quadrature = std::abs(rep.lhs - rep.quadrature);
    rep.residual_quadrature_vs_quoted = std::abs(rep.quadrature - rep.quoted_closed_form);
    rep.residual_quadrature_vs_series = std::abs(rep.quadrature - rep.series);
    rep.residual_quadrature_vs_corrected = std::abs(rep.quadrature - rep.corrected_closed_form);
    return rep;
}

// ---------------------------------------------------------------------------
// Trigonometric integral table behind the series derivation. Each entry is
// computed numerically (periodic trapezoid) and compared with the value the
// derivation asserts.

struct IntegralCheck {
    double numeric;
    double stated;
    double residual() const { return std::abs(numeric - stated); }
};

/// int_0^2pi cos(2t - xi - zeta) dt, stated 0.
inline IntegralCheck table_term1_first(double xi, double zeta)
{
    const double v = periodic_trapezoid([&](double t) { return std::cos(2.0 * t - xi - zeta); }, 2048);
    return {v, 0.0};
}

/// int_0^2pi cos(xi - zeta) cos(n (t - phi)) dt, stated 0 for n >= 1.
inline IntegralCheck table_term1_second(double xi, double zeta, double phi, int n)
{
    const double v = periodic_trapezoid([&](double t) { return std::cos(xi - zeta) * std::cos(n * (t - phi)); }, 2048);
    return {v, 0.0};
}

/// int_0^2pi cos(xi - zeta) J_0(z) dt, stated 2 pi cos(xi - zeta) J_0(z).
inline IntegralCheck table_term2(double xi, double zeta, double z)
{
    const double j0 = bessel_j(0, z);
    const double v = periodic_trapezoid([&](double) { return std::cos(xi - zeta) * j0; }, 2048);
    return {v, 2.0 * std::numbers::pi * std::cos(xi - zeta) * j0};
}

/// int_0^2pi cos(2t - xi - zeta) cos(n (t - phi)) dt, stated 0 for n != 2 and
/// pi cos(2 phi - xi - zeta) for n = 2.
inline IntegralCheck table_term3(double xi, double zeta, double phi, int n)
{
    const double v = periodic_trapezoid(
        [&](double t) { return std::cos(2.0 * t - xi - zeta) * std::cos(n * (t - phi)); }, 2048);
    const double stated = n == 2 ? std::numbers::pi * std::cos(2.0 * phi - xi - zeta) : 0.0;
    return {v, stated};
}

// ---------------------------------------------------------------------------
// Imaging-function structures, evaluated verbatim.

enum class StructureCase { normal_aligned = 1, incident_aligned = 2, fixed_xi = 3 };

inline StructureCase structure_case_for(const TestVectorScheme& scheme)
{
    if (std::holds_alternative<OracleNormal>(scheme))
        return StructureCase::normal_aligned;
    if (std::holds_alternative<IncidentAligned>(scheme))
        return StructureCase::incident_aligned;
    return StructureCase::fixed_xi;
}

/// Case 1: sum_m J_0(k|x - y_m|)^2.
/// Case 2: 2 sum_m (dhat.nu_m)^2 J_1(k|x - y_m|)^2.
/// Case 3: sum_m {(nu_m.xi)(J_0 - J_2) - 2 (dhat.nu_m)(dhat.xi) J_2}^2,
/// with dhat = (x - y_m)/|x - y_m|. At x = y_m the dhat terms are dropped,
/// which is their continuous limit since J_1(0) = J_2(0) = 0.
inline double structure_prediction(StructureCase which, const Point& x, const ArcSample& sample,
                                   const std::optional<Point>& xi, const WaveContext& ctx)
{
    if (which == StructureCase::fixed_xi && !xi)
        throw PreconditionError("structure_prediction: case 3 requires xi");
    double total = 0.0;
    for (std::size_t m = 0; m < sample.count(); ++m) {
        const Point diff = x - sample.points[m];
        const double r = diff.norm();
        const auto j = bessel_j012(ctx.k() * r);
        const Point& nu = sample.normals[m];
        const Point dhat = r > 0.0 ? Point(diff / r) : Point(0.0, 0.0);
        switch (which) {
        case StructureCase::normal_aligned:
            total += j.j0 * j.j0;
            break;
        case StructureCase::incident_aligned: {
            const double proj = dhat.dot(nu);
            total += 2.0 * proj * proj * j.j1 * j.j1;
            break;
        }
        case StructureCase::fixed_xi: {
            const double term = nu.dot(*xi) * (j.j0 - j.j2) - 2.0 * dhat.dot(nu) * dhat.dot(*xi) * j.j2;
            total += term * term;
            break;
        }
        }
    }
    return total;
}

struct TheoremComparison {
    int structure_case = 0;
    std::string scheme;
    double max_abs_difference = 0.0;
    double p95_abs_difference = 0.0;
    double correlation = 0.0;
    double peak_distance = 0.0; // between the argmax of map and prediction
    Point pipeline_peak{0.0, 0.0};
    Point prediction_peak{0.0, 0.0};
    ImageGrid pipeline;
    ImageGrid prediction;
};

/// Noiseless Kirchhoff data from `sample`, signal rank = sample size, and the
/// matching structure evaluated on the same grid.
inline TheoremComparison theorem_vs_pipeline_report(const ArcSample& sample, const DirectionSet& dirs,
                                                    const WaveContext& ctx, const TestVectorScheme& scheme,
                                                    const GridSpec& grid)
{
    const auto msr = assemble_kirchhoff(sample, dirs, ctx);
    const auto basis = select_rank(decompose(msr), ExplicitRank{static_cast<int>(sample.count())});

    TheoremComparison cmp;
    const StructureCase which = structure_case_for(scheme);
    std::optional<Point> xi;
    if (const auto* f = std::get_if<FixedXi>(&scheme))
        xi = f->xi;
    cmp.structure_case = static_cast<int>(which);
    cmp.scheme = describe(scheme);
    cmp.pipeline = imaging_map(basis, dirs, ctx, scheme, grid, false);
    cmp.prediction = cmp.pipeline;
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix)
            cmp.prediction.values(iy, ix) = structure_prediction(which, grid.node(ix, iy), sample, xi, ctx);

    const Eigen::ArrayXd a = cmp.pipeline.values.reshaped().array();
    const Eigen::ArrayXd b = cmp.prediction.values.reshaped().array();
    const Eigen::ArrayXd diff = (a - b).abs();
    cmp.max_abs_difference = diff.maxCoeff();
    cmp.p95_abs_difference = percentile(std::vector<double>(diff.begin(), diff.end()), 0.95);
    const Eigen::ArrayXd ac = a - a.mean();
    const Eigen::ArrayXd bc = b - b.mean();
    const double denom = std::sqrt((ac * ac).sum() * (bc * bc).sum());
    cmp.correlation = denom > 0.0 ? (ac * bc).sum() / denom : 0.0;
    cmp.pipeline_peak = cmp.pipeline.argmax();
    cmp.prediction_peak = cmp.prediction.argmax();
    cmp.peak_distance = (cmp.pipeline_peak - cmp.prediction_peak).norm();
    return cmp;
}

inline nlohmann::json to_json(const TheoremComparison& cmp)
{
    return {{"structure_case", cmp.structure_case},
            {"scheme", cmp.scheme},
            {"max_abs_difference", cmp.max_abs_difference},
            {"p95_abs_difference", cmp.p95_abs_difference},
            {"correlation", cmp.correlation},
            {"peak_distance", cmp.peak_distance},
            {"pipeline_peak", {cmp.pipeline_peak.x(), cmp.pipeline_peak.y()}},
            {"prediction_peak", {cmp.prediction_peak.x(), cmp.prediction_peak.y()}}};
}

} // namespace arcmig
