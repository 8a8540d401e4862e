#pragma once

#include "errors.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace arcmig {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int n)
{
    if (n < 1)
        throw PreconditionError("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Adaptive Gauss-Legendre integration of f over [a, b]: an interval is
/// accepted once the 10-point rule and the sum over its two halves agree to
/// within tol (scaled by the interval share).
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-10, int max_depth = 40)
{
    static const QuadratureRule rule = gauss_legendre(10);
    const auto gauss = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        return sum * half;
    };

    std::function<double(double, double, double, double, int)> recurse =
        [&](double lo, double hi, double whole, double local_tol, int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = gauss(lo, mid);
        const double right = gauss(mid, hi);
        if (std::abs(left + right - whole) <= local_tol)
            return left + right;
        if (depth >= max_depth)
            throw NumericalError("integrate_adaptive: maximum subdivision depth reached");
        return recurse(lo, mid, left, 0.5 * local_tol, depth + 1)
               + recurse(mid, hi, right, 0.5 * local_tol, depth + 1);
    };
    return recurse(a, b, gauss(a, b), tol, 0);
}

/// Trapezoid rule for a 2*pi-periodic function with n equispaced nodes.
/// Spectrally accurate for smooth periodic integrands; exact for
/// trigonometric polynomials of degree < n.
template <typename Fn>
auto periodic_trapezoid(Fn&& f, int n) -> decltype(f(0.0))
{
    using Value = decltype(f(0.0));
    Value sum{};
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i)
        sum += f(i * h);
    return sum * h;
}

} // namespace arcmig
