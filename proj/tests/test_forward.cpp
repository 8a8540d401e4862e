#include <arcmig/forward.hpp>
#include <arcmig/msr.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace arcmig;

TEST(WaveContext, Consistency)
{
    const auto a = WaveContext::from_wavelength(0.4);
    EXPECT_NEAR(a.k() * a.wavelength(), 2.0 * std::numbers::pi, 1e-12);
    const auto b = WaveContext::from_wavenumber(a.k());
    EXPECT_NEAR(b.wavelength(), 0.4, 1e-15);
    EXPECT_THROW(WaveContext::from_wavelength(-1.0), ConfigError);
    EXPECT_THROW(WaveContext::restore(1.0, 1.0), ConfigError);
}

TEST(IncidentField, Trivia)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    EXPECT_EQ(incident_field({0.0, 0.0}, unit_vector(1.3), ctx), Complex(1.0, 0.0));
    for (double a = 0.0; a < 6.0; a += 0.7)
        EXPECT_NEAR(std::abs(incident_field({0.3, -1.2}, unit_vector(a), ctx)), 1.0, 1e-15);
    const Complex period = incident_field({0.4, 0.0}, {1.0, 0.0}, ctx);
    EXPECT_NEAR(period.real(), 1.0, 1e-12);
    EXPECT_NEAR(period.imag(), 0.0, 1e-12);
}

TEST(FundamentalSolution, SymmetryAndComponents)
{
    const auto ctx = WaveContext::from_wavenumber(10.0);
    const Point x{0.3, 0.4};
    const Point y{0.3, 1.4};
    EXPECT_EQ(fundamental_solution(x, y, ctx), fundamental_solution(y, x, ctx));
    // k |x - y| = 10
    const Complex expected = -0.25 * I * Complex(std::cyl_bessel_j(0.0, 10.0), std::cyl_neumann(0.0, 10.0));
    EXPECT_LT(std::abs(fundamental_solution(x, y, ctx) - expected), 1e-10);
    EXPECT_THROW(fundamental_solution(x, x, ctx), DomainError);
}

TEST(FundamentalSolution, LogarithmicGrowth)
{
    const auto ctx = WaveContext::from_wavelength(1.0);
    double previous = 0.0;
    for (double r = 1e-1; r > 1e-9; r /= 10.0) {
        const double m = std::abs(fundamental_solution({0.0, 0.0}, {r, 0.0}, ctx));
        EXPECT_GT(m, previous);
        // |Phi| ~ (1/2pi) |ln r| for small r
        if (r < 1e-5)
            EXPECT_NEAR(m / std::abs(std::log(r)), 0.5 / std::numbers::pi, 0.02);
        previous = m;
    }
}

TEST(KirchhoffDensity, ModulusAndNormalIncidence)
{
    const auto ctx = WaveContext::from_wavelength(0.4);
    const auto sample = sample_arc(make_line_arc(), 0.4);
    for (double a = 0.1; a < 6.2; a += 0.5) {
        const auto d = kirchhoff_density(sample, unit_vector(a), ctx);
        ASSERT_EQ(d.values.size(), sample.count());
        for (std::size_t m = 0; m < d.values.size(); ++m) {
            EXPECT_NEAR(std::abs(d.values[m]), 2.0, 1e-14);
            EXPECT_EQ(d.weights[m], 1.0);
        }
    }
    // theta . y = 0 on the lit side -> phi = 2
    const auto origin = make_point_sample({{0.0, 0.0}}, {{0.0, 1.0}});
    const auto d = kirchhoff_density(origin, {0.0, 1.0}, ctx);
    EXPECT_EQ(d.values[0], Complex(2.0, 0.0));
}

TEST(FarField, ZeroAndLinearity)
{
    const auto ctx = WaveContext::from_wavelength(0.5);
    const auto sample = sample_arc(make_curve_arc(), 0.5);
    auto d = kirchhoff_density(sample, unit_vector(0.8), ctx);
    const Point vt = unit_vector(2.1);
    const Complex base = far_field(d, vt, ctx);

    auto doubled = d;
    for (auto& v : doubled.values)
        v *= 2.0;
    EXPECT_LT(std::abs(far_field(doubled, vt, ctx) - 2.0 * base), 1e-14 * std::abs(base));

    auto zero = d;
    for (auto& v : zero.values)
        v = 0.0;
    EXPECT_EQ(far_field(zero, vt, ctx), Complex(0.0, 0.0));
}

TEST(FarField, PrintedConstant)
{
    const auto ctx = WaveContext::from_wavenumber(8.0 * std::numbers::pi);
    // sqrt(k / 8 pi) = 1
    const Complex c = far_field_constant(ctx);
    EXPECT_NEAR(c.real(), -std::cos(std::numbers::pi / 4), 1e-15);
    EXPECT_NEAR(c.imag(), std::sin(std::numbers::pi / 4), 1e-15);
}
