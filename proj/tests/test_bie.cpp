#include <arcmig/bie.hpp>
#include <arcmig/msr.hpp>
#include <arcmig/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace arcmig;

namespace {

// Total field near the arc by direct quadrature of the double-layer potential
//   u_s(x) = int_Gamma dPhi/dnu_y (x, y) phi(y) ds_y,
// with Hankel functions from the standard library and the density taken
// from its Chebyshev coefficients. t = cos(alpha) removes the endpoint
// square roots; Gauss-Legendre in alpha.
class DoubleLayerOracle {
public:
    DoubleLayerOracle(const Arc& arc, const WaveContext& ctx, Eigen::VectorXcd coeffs, Point theta)
        : arc_(arc), ctx_(ctx), a_(std::move(coeffs)), theta_(theta)
    {
        const auto gl = gauss_legendre(3000);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double alpha = 0.5 * std::numbers::pi * (gl.nodes[i] + 1.0);
            const double t = std::cos(alpha);
            const double sa = std::sin(alpha);
            Complex chi{0.0, 0.0};
            for (int j = 0; j < a_.size(); ++j)
                chi += a_(j) * std::sin((j + 1) * alpha) / sa;
            nodes_.push_back(arc.point(t));
            normals_.push_back(arc.normal(t));
            // phi = sa chi, dt = sa dalpha, ds = |gamma'| dt
            weights_.push_back(0.5 * std::numbers::pi * gl.weights[i] * sa * arc.speed(t) * sa * chi);
        }
    }

    Complex total(const Point& x) const
    {
        const double k = ctx_.k();
        Complex sum{0.0, 0.0};
        for (std::size_t q = 0; q < nodes_.size(); ++q) {
            const Point d = x - nodes_[q];
            const double r = d.norm();
            const Complex h1(std::cyl_bessel_j(1.0, k * r), std::cyl_neumann(1.0, k * r));
            // d/dnu_y of -(i/4) H0(k|x - y|)
            sum += -0.25 * I * k * h1 * d.dot(normals_[q]) / r * weights_[q];
        }
        return std::exp(I * (k * theta_.dot(x))) + sum;
    }

    /// Normal derivative of the total field at distance h from gamma(s).
    Complex normal_derivative(double s, double h) const
    {
        const Point nu = arc_.normal(s);
        const Point x = arc_.point(s) + h * nu;
        const double delta = 1e-5;
        return (total(x + delta * nu) - total(x - delta * nu)) / (2.0 * delta);
    }

private:
    const Arc& arc_;
    WaveContext ctx_;
    Eigen::VectorXcd a_;
    Point theta_;
    std::vector<Point> nodes_;
    std::vector<Point> normals_;
    std::vector<Complex> weights_;
};

double max_relative_change(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

} // namespace

TEST(NeumannArcSolver, RejectsBadNodeCounts)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    EXPECT_THROW(NeumannArcSolver(make_line_arc(), ctx, 14), PreconditionError);
    EXPECT_THROW(NeumannArcSolver(make_line_arc(), ctx, 33), PreconditionError);
}

TEST(NeumannArcSolver, DefaultNodeCount)
{
    EXPECT_EQ(default_node_count(1.0, WaveContext::from_wavelength(0.4)), 64);
    EXPECT_EQ(default_node_count(1.0, WaveContext::from_wavenumber(50.0)), 128);
    EXPECT_EQ(default_node_count(1.0, WaveContext::from_wavenumber(100.0)), 256);
}

TEST(NeumannArcSolver, ResidualAtOffCollocationPoints)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    const NeumannArcSolver solver(make_line_arc(), ctx, 64);
    EXPECT_LT(solver.condition_estimate(), 1e12);
    // midpoints between consecutive collocation angles, plus a uniform set
    std::vector<double> checks;
    for (int p = 0; p < 64; ++p)
        checks.push_back(std::cos((p + 1.0) * std::numbers::pi / 64.0 - 1e-3));
    for (double s = -0.95; s < 0.96; s += 0.1)
        checks.push_back(s);
    for (double a : {0.0, 0.9, 2.5, 4.0})
        EXPECT_LT(solver.boundary_residual(unit_vector(a), checks), 1e-3) << a;
}

TEST(NeumannArcSolver, CurveResidual)
{
    const auto ctx = WaveContext::from_wavelength(0.5);
    const NeumannArcSolver solver(make_curve_arc(), ctx, 64);
    std::vector<double> checks;
    for (double s = -0.97; s < 0.98; s += 0.07)
        checks.push_back(s);
    EXPECT_LT(solver.boundary_residual(unit_vector(1.1), checks), 1e-3);
}

TEST(NeumannArcSolver, DensityVanishesAtTips)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    const auto d = solve_density(make_line_arc(), unit_vector(0.4), ctx, 64);
    double interior = 0.0;
    for (const auto& v : d.values) {
        ASSERT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
        interior = std::max(interior, std::abs(v));
    }
    EXPECT_LT(std::abs(d.values.front()), 0.05 * interior);
    EXPECT_LT(std::abs(d.values.back()), 0.05 * interior);
}

// The boundary condition checked with a potential evaluated independently of
// the solver's kernel splitting: the normal derivative of the total field,
// extrapolated to the arc from both sides, must vanish.
TEST(NeumannArcSolver, DirectPotentialSatisfiesNeumannCondition)
{
    struct Case {
        Arc arc;
        double lambda;
    };
    for (const Case& c : {Case{make_line_arc(), 0.4}, Case{make_curve_arc(), 0.5}}) {
        const auto ctx = WaveContext::from_wavelength(c.lambda);
        const NeumannArcSolver solver(c.arc, ctx, 64);
        const Point theta = unit_vector(0.7);
        const DoubleLayerOracle oracle(c.arc, ctx, solver.coefficients(theta), theta);
        for (double s : {-0.5, 0.1, 0.6})
            for (double h : {0.02, -0.02}) {
                // quadratic extrapolation to h = 0 from h, h/2, h/4; below about h = 0.005
                // the oracle quadrature itself stops resolving the kernel
                const Complex f1 = oracle.normal_derivative(s, h);
                const Complex f2 = oracle.normal_derivative(s, 0.5 * h);
                const Complex f4 = oracle.normal_derivative(s, 0.25 * h);
                const Complex limit = (8.0 * f4 - 6.0 * f2 + f1) / 3.0;
                EXPECT_LT(std::abs(limit) / ctx.k(), 1e-3) << c.arc.label() << " s=" << s << " h=" << h;
            }
    }
}

TEST(NeumannArcSolver, FarFieldSelfConvergence)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    const auto dirs = make_directions(12);
    const auto k64 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {64}).entries;
    const auto k128 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {128}).entries;
    EXPECT_LT(max_relative_change(k64, k128), 1e-3);
}

TEST(NeumannArcSolver, CauchyDifferencesDecrease)
{
    // Higher frequency so the coarse levels are visibly unresolved.
    const auto ctx = WaveContext::from_wavelength(0.1);
    const auto dirs = make_directions(8);
    const auto k16 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {16}).entries;
    const auto k32 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {32}).entries;
    const auto k64 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {64}).entries;
    const auto k128 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {128}).entries;
    const double d1 = max_relative_change(k16, k32);
    const double d2 = max_relative_change(k32, k64);
    const double d3 = max_relative_change(k64, k128);
    EXPECT_GT(d1, d2);
    EXPECT_GT(d2, d3);
    EXPECT_LT(d3, 1e-8);
}

TEST(NeumannArcSolver, LineArcLevels64To256)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    const auto dirs = make_directions(8);
    const auto k64 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {64}).entries;
    const auto k128 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {128}).entries;
    const auto k256 = assemble(make_line_arc(), dirs, ctx, SolverMode::bie, {256}).entries;
    // Both differences sit at rounding level; the later one may not exceed
    // the earlier beyond that floor.
    EXPECT_LE(max_relative_change(k128, k256), std::max(max_relative_change(k64, k128), 1e-12));
}

TEST(NeumannArcSolver, ReciprocityOffGrid)
{
    for (const bool curve : {false, true}) {
        const Arc arc = curve ? make_curve_arc() : make_line_arc();
        const auto ctx = WaveContext::from_wavelength(curve ? 0.5 : 0.4);
        const NeumannArcSolver solver(arc, ctx, 64);
        double worst = 0.0;
        double scale = 0.0;
        for (double a : {0.3, 1.7, 2.9, 4.4})
            for (double b : {0.9, 2.2, 5.1}) {
                const Point theta = unit_vector(a);
                const Point vartheta = unit_vector(b);
                const Complex forward = far_field(solver.solve(theta), vartheta, ctx);
                const Complex reverse = far_field(solver.solve(-vartheta), -theta, ctx);
                worst = std::max(worst, std::abs(forward - reverse));
                scale = std::max(scale, std::abs(forward));
            }
        EXPECT_LT(worst / scale, 1e-3) << arc.label();
    }
}
