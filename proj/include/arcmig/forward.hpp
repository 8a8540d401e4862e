#pragma once

// Plane-wave illumination, the Helmholtz fundamental solution and the
// far-field pattern of a double-layer density on the arc.

#include "errors.hpp"
#include "geometry.hpp"
#include "special_fn.hpp"

#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace arcmig {

using Complex = std::complex<double>;
inline constexpr Complex I{0.0, 1.0};

/// Wavenumber and wavelength, kept consistent: k * lambda = 2 pi.
class WaveContext {
public:
    static WaveContext from_wavelength(double wavelength)
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw ConfigError("wavelength must be positive and finite");
        return WaveContext(2.0 * std::numbers::pi / wavelength, wavelength);
    }

    static WaveContext from_wavenumber(double k)
    {
        if (!(k > 0.0) || !std::isfinite(k))
            throw ConfigError("wavenumber must be positive and finite");
        return WaveContext(k, 2.0 * std::numbers::pi / k);
    }

    /// Restores a stored (k, lambda) pair bit-for-bit after checking k * lambda = 2 pi.
    static WaveContext restore(double k, double wavelength)
    {
        if (!(k > 0.0) || !(wavelength > 0.0) || std::abs(k * wavelength - 2.0 * std::numbers::pi) > 1e-12)
            throw ConfigError("inconsistent wave context: k * lambda must equal 2 pi");
        return WaveContext(k, wavelength);
    }

    double k() const { return k_; }
    double wavelength() const { return lambda_; }

private:
    WaveContext(double k, double lambda) : k_(k), lambda_(lambda) {}
    double k_;
    double lambda_;
};

inline Complex incident_field(const Point& x, const Point& theta, const WaveContext& ctx)
{
    return std::exp(I * (ctx.k() * theta.dot(x)));
}

/// Phi(x, y) = -(i/4) H_0^(1)(k |x - y|).
inline Complex fundamental_solution(const Point& x, const Point& y, const WaveContext& ctx)
{
    const double r = (x - y).norm();
    if (r == 0.0)
        throw DomainError("fundamental_solution: x and y coincide");
    return -0.25 * I * hankel1(0, ctx.k() * r);
}

/// Density phi(y, theta) sampled on a quadrature of the arc. `weights`
/// already include the arc-length element, so integral_Gamma f dy is
/// approximated by sum_q weights[q] * f(nodes[q]).
struct DensitySolution {
    Point incident_direction{1.0, 0.0};
    std::vector<Point> nodes;
    std::vector<Point> normals;
    std::vector<Complex> values;
    std::vector<double> weights;
    std::string mode;
};

/// Physical-optics surrogate: phi(y_m, theta) = 2 sgn(theta . nu) exp(i k theta . y_m)
/// with unit weights, sgn(0) = +1. The modulus is 2 everywhere; the sign
/// records which face of the arc is lit. This reproduces the factorised
/// structure of the response matrix, not the physical amplitude.
inline DensitySolution kirchhoff_density(const ArcSample& sample, const Point& theta, const WaveContext& ctx)
{
    DensitySolution d;
    d.incident_direction = theta;
    d.mode = "kirchhoff";
    d.nodes = sample.points;
    d.normals = sample.normals;
    d.weights.assign(sample.count(), 1.0);
    d.values.reserve(sample.count());
    for (std::size_t m = 0; m < sample.count(); ++m) {
        const double side = theta.dot(sample.normals[m]) >= 0.0 ? 1.0 : -1.0;
        d.values.push_back(2.0 * side * incident_field(sample.points[m], theta, ctx));
    }
    return d;
}

/// -sqrt(k / 8 pi) exp(-i pi / 4), the constant in front of the far-field integral.
inline Complex far_field_constant(const WaveContext& ctx)
{
    return -std::sqrt(ctx.k() / (8.0 * std::numbers::pi)) * std::exp(-0.25 * I * std::numbers::pi);
}

/// Far-field pattern psi_inf(vartheta, theta) of the double-layer potential.
inline Complex far_field(const DensitySolution& density, const Point& vartheta, const WaveContext& ctx)
{
    Complex sum{0.0, 0.0};
    for (std::size_t q = 0; q < density.nodes.size(); ++q) {
        const double proj = vartheta.dot(density.normals[q]);
        sum += density.weights[q] * proj * std::exp(-I * (ctx.k() * vartheta.dot(density.nodes[q])))
               * density.values[q];
    }
    return far_field_constant(ctx) * sum;
}

} // namespace arcmig
