#pragma once

// Bessel functions of the first and second kind for real nonnegative argument.
//
// J_n is computed for all orders at once by Miller's backward recurrence,
// normalised with the Neumann sum J_0 + 2 * sum_k J_2k = 1. The recurrence is
// stable for every argument, so no crossover to an asymptotic expansion is
// needed on the range used here (z <= a few hundred). Y_0 and Y_1 are built
// from the same sequence with the Neumann series
//
//   Y_0(z) = (2/pi) (ln(z/2) + gamma) J_0(z) - (4/pi) sum_k (-1)^k J_2k(z) / k
//
// and its derivative.

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace arcmig {

/// J_0, J_1, J_2 at a common argument.
struct BesselTriple {
    double j0 = 1.0;
    double j1 = 0.0;
    double j2 = 0.0;
};

namespace detail {

inline void require_finite_nonnegative(double z, const char* what)
{
    if (!std::isfinite(z))
        throw DomainError(std::string(what) + ": non-finite argument");
    if (z < 0.0)
        throw DomainError(std::string(what) + ": negative argument " + std::to_string(z));
}

/// Starting order for the backward recurrence. Large enough that the
/// normalisation sum is converged to double precision.
inline int miller_start_order(int nmax, double z)
{
    const double top = std::max(static_cast<double>(nmax), z);
    int m = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
    return m + (m & 1); // even
}

} // namespace detail

/// Returns [J_0(z), ..., J_last(z)] with last >= nmax. The tail beyond nmax is
/// kept because the Neumann series for Y_n consumes it.
inline std::vector<double> bessel_j_sequence(int nmax, double z)
{
    detail::require_finite_nonnegative(z, "bessel_j_sequence");
    if (nmax < 0)
        throw DomainError("bessel_j_sequence: negative order");

    if (z == 0.0) {
        std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
        out[0] = 1.0;
        return out;
    }

    const int start = detail::miller_start_order(nmax, z);
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    constexpr double big = 1e250;
    for (int n = start; n >= 1; --n) {
        j[n - 1] = (2.0 * n / z) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > big) {
            for (int i = n - 1; i <= start; ++i)
                j[i] /= big;
        }
    }

    double norm = j[0];
    for (int n = 2; n <= start; n += 2)
        norm += 2.0 * j[n];
    for (double& v : j)
        v /= norm;
    return j;
}

/// J_order(z) for order in {0, 1, 2}; absolute accuracy ~1e-15 on [0, 100].
inline double bessel_j(int order, double z)
{
    if (order < 0 || order > 2)
        throw DomainError("bessel_j: order must be 0, 1 or 2");
    return bessel_j_sequence(order, z)[order];
}

inline BesselTriple bessel_j012(double z)
{
    const auto j = bessel_j_sequence(2, z);
    return {j[0], j[1], j[2]};
}

/// Y_0(z) and Y_1(z) for z > 0.
inline std::pair<double, double> bessel_y01(double z)
{
    detail::require_finite_nonnegative(z, "bessel_y");
    if (z == 0.0)
        throw DomainError("bessel_y: logarithmic singularity at z = 0");

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
    const double y0 = (2.0 / std::numbers::pi) * log_term * j[0] - (4.0 / std::numbers::pi) * s0;
    const double y1 = -(2.0 / std::numbers::pi) * j[0] / z + (2.0 / std::numbers::pi) * log_term * j[1]
                      + (2.0 / std::numbers::pi) * s1;
    return {y0, y1};
}

inline double bessel_y(int order, double z)
{
    if (order < 0 || order > 1)
        throw DomainError("bessel_y: order must be 0 or 1");
    const auto [y0, y1] = bessel_y01(z);
    return order == 0 ? y0 : y1;
}

/// H_order^(1)(z) = J_order(z) + i Y_order(z), order in {0, 1}, z > 0.
inline std::complex<double> hankel1(int order, double z)
{
    if (order < 0 || order > 1)
        throw DomainError("hankel1: order must be 0 or 1");
    detail::require_finite_nonnegative(z, "hankel1");
    if (z <= 0.0)
        throw DomainError("hankel1: argument must be positive");
    const auto j = bessel_j_sequence(1, z);
    const auto [y0, y1] = bessel_y01(z);
    return order == 0 ? std::complex<double>(j[0], y0) : std::complex<double>(j[1], y1);
}

/// Y_0(z) - (2/pi)(ln(z/2) + gamma) J_0(z): the entire part of Y_0 once the
/// logarithm is split off. Finite at z = 0 where it vanishes.
inline double bessel_y0_regular_part(double z)
{
    detail::require_finite_nonnegative(z, "bessel_y0_regular_part");
    if (z == 0.0)
        return 0.0;
    const auto j = bessel_j_sequence(2, z);
    const int last = static_cast<int>(j.size()) - 1;
    double s0 = 0.0;
    for (int k = 1; 2 * k <= last; ++k)
        s0 += ((k & 1) ? -1.0 : 1.0) * j[2 * k] / k;
    return -(4.0 / std::numbers::pi) * s0;
}

/// J_0(z) - 1 without cancellation for small z.
inline double bessel_j0_minus_one(double z)
{
    if (z > 0.5)
        return bessel_j(0, z) - 1.0;
    const double q = -0.25 * z * z;
    double term = 1.0;
    double sum = 0.0;
    for (int m = 1; m < 30; ++m) {
        term *= q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

/// J_1(z) / z, continuous at z = 0 with value 1/2.
inline double bessel_j1_over_z(double z)
{
    if (z > 1e-3)
        return bessel_j(1, z) / z;
    return 0.5 - z * z / 16.0;
}

} // namespace arcmig
