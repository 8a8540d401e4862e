#pragma once

// Parametric open arcs gamma : [-1, 1] -> R^2 and their lambda/2 sampling.

#include "errors.hpp"
#include "quadrature.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace arcmig {

using Point = Eigen::Vector2d;

/// Rotate by +90 degrees (counterclockwise).
inline Point rotate_ccw(const Point& v) { return {-v.y(), v.x()}; }

inline Point unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Oriented parametric arc. Position and derivative are supplied
/// analytically; the normal is the unit tangent rotated counterclockwise.
class Arc {
public:
    using Map = std::function<Point(double)>;

    Arc(Map position, Map derivative, std::string label)
        : position_(std::move(position)), derivative_(std::move(derivative)), label_(std::move(label))
    {
    }

    Point point(double s) const { return position_(s); }
    Point derivative(double s) const { return derivative_(s); }
    double speed(double s) const { return derivative_(s).norm(); }
    Point tangent(double s) const { return derivative_(s).normalized(); }
    Point normal(double s) const { return rotate_ccw(tangent(s)); }
    const std::string& label() const { return label_; }

    /// Length of gamma([a, b]), adaptive Gauss-Legendre on |gamma'|.
    double length(double a = -1.0, double b = 1.0, double tol = 1e-10) const
    {
        return integrate_adaptive([this](double s) { return speed(s); }, a, b, tol);
    }

    /// Dense polyline through gamma(s) at `count` equispaced parameters.
    std::vector<Point> polyline(int count) const
    {
        std::vector<Point> pts;
        pts.reserve(count);
        for (int i = 0; i < count; ++i)
            pts.push_back(point(-1.0 + 2.0 * i / (count - 1)));
        return pts;
    }

    /// Checks the arc is injective and cusp-free on a dense parameter grid.
    /// Throws PreconditionError otherwise.
    void validate(int samples = 400) const
    {
        for (int i = 0; i < samples; ++i) {
            const double s = -1.0 + 2.0 * i / (samples - 1);
            const Point d = derivative(s);
            if (!std::isfinite(d.x()) || !std::isfinite(d.y()) || d.norm() <= 1e-12)
                throw PreconditionError("arc '" + label_ + "' has a cusp or invalid derivative at s = "
                                        + std::to_string(s));
        }
        // non-adjacent polyline segments must not cross or touch
        const auto pts = polyline(samples);
        const auto cross = [](const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); };
        for (int i = 0; i + 1 < samples; ++i)
            for (int j = i + 2; j + 1 < samples; ++j) {
                const Point r = pts[i + 1] - pts[i];
                const Point q = pts[j + 1] - pts[j];
                const double denom = cross(r, q);
                const Point w = pts[j] - pts[i];
                bool hit = false;
                if (std::abs(denom) > 1e-300) {
                    const double t = cross(w, q) / denom;
                    const double u = cross(w, r) / denom;
                    hit = t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
                } else {
                    hit = (pts[i] - pts[j]).norm() <= 1e-12;
                }
                if (hit)
                    throw PreconditionError("arc '" + label_ + "' is not injective");
            }
    }

private:
    Map position_;
    Map derivative_;
    std::string label_;
};

/// Straight segment {(s, 0.3) : -0.5 <= s <= 0.5}.
inline Arc make_line_arc()
{
    return Arc([](double s) { return Point(0.5 * s, 0.3); }, [](double) { return Point(0.5, 0.0); },
               "line");
}

/// (s, 0.5 cos(pi s / 2) + 0.2 sin(pi s / 2) - 0.1 cos(3 pi s / 2)), s in [-1, 1].
inline Arc make_curve_arc()
{
    constexpr double pi = std::numbers::pi;
    return Arc(
        [](double s) {
            return Point(s, 0.5 * std::cos(0.5 * pi * s) + 0.2 * std::sin(0.5 * pi * s)
                                - 0.1 * std::cos(1.5 * pi * s));
        },
        [](double s) {
            return Point(1.0, -0.25 * pi * std::sin(0.5 * pi * s) + 0.1 * pi * std::cos(0.5 * pi * s)
                                  + 0.15 * pi * std::sin(1.5 * pi * s));
        },
        "curve");
}

/// One coordinate of a user-defined arc:
///   sum_i poly[i] s^i + sum (a cos(w pi s)) + sum (b sin(w pi s)).
struct CoordinateSeries {
    std::vector<double> poly;
    std::vector<std::pair<double, double>> cos_terms; // (amplitude, frequency / pi)
    std::vector<std::pair<double, double>> sin_terms;

    double value(double s) const
    {
        double v = 0.0;
        double p = 1.0;
        for (double c : poly) {
            v += c * p;
            p *= s;
        }
        for (auto [a, w] : cos_terms)
            v += a * std::cos(w * std::numbers::pi * s);
        for (auto [b, w] : sin_terms)
            v += b * std::sin(w * std::numbers::pi * s);
        return v;
    }

    double derivative(double s) const
    {
        double v = 0.0;
        double p = 1.0;
        for (std::size_t i = 1; i < poly.size(); ++i) {
            v += static_cast<double>(i) * poly[i] * p;
            p *= s;
        }
        for (auto [a, w] : cos_terms)
            v -= a * w * std::numbers::pi * std::sin(w * std::numbers::pi * s);
        for (auto [b, w] : sin_terms)
            v += b * w * std::numbers::pi * std::cos(w * std::numbers::pi * s);
        return v;
    }
};

inline Arc make_series_arc(CoordinateSeries x, CoordinateSeries y, std::string label = "custom")
{
    return Arc([x, y](double s) { return Point(x.value(s), y.value(s)); },
               [x, y](double s) { return Point(x.derivative(s), y.derivative(s)); }, std::move(label));
}

/// Points y_m, one per lambda/2 segment, and their unit normals.
struct ArcSample {
    std::vector<Point> points;
    std::vector<Point> normals;
    std::vector<double> parameters; // s-values of the points

    std::size_t count() const { return points.size(); }
};

namespace detail {

/// Parameter s with length(gamma([-1, s])) = target, by safeguarded Newton.
inline double parameter_at_length(const Arc& arc, double target, double total)
{
    double lo = -1.0;
    double hi = 1.0;
    double s = -1.0 + 2.0 * target / total;
    for (int iter = 0; iter < 100; ++iter) {
        const double f = arc.length(-1.0, s, 1e-13) - target;
        if (std::abs(f) < 1e-13)
            break;
        if (f > 0.0)
            hi = s;
        else
            lo = s;
        double next = s - f / arc.speed(s);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - s) < 1e-15)
            break;
        s = next;
    }
    return s;
}

} // namespace detail

/// Splits the arc into M = ceil(L / (lambda/2)) equal-length segments and
/// returns each segment's arc-length midpoint.
inline ArcSample sample_arc(const Arc& arc, double wavelength)
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw PreconditionError("sample_arc: wavelength must be positive");
    const double total = arc.length();
    if (wavelength > total)
        throw PreconditionError("sample_arc: wavelength " + std::to_string(wavelength)
                                + " exceeds arc length " + std::to_string(total));

    // The small slack keeps exact multiples (L = 1, lambda/2 = 0.2) from
    // rounding up to an extra segment.
    const auto count = static_cast<std::size_t>(std::ceil(total / (0.5 * wavelength) - 1e-9));

    ArcSample sample;
    for (std::size_t m = 0; m < count; ++m) {
        const double target = (m + 0.5) * total / static_cast<double>(count);
        const double s = detail::parameter_at_length(arc, target, total);
        sample.parameters.push_back(s);
        sample.points.push_back(arc.point(s));
        sample.normals.push_back(arc.normal(s));
    }
    return sample;
}

/// Sample made of explicit points and normals (point-scatterer experiments).
inline ArcSample make_point_sample(std::vector<Point> points, std::vector<Point> normals)
{
    if (points.size() != normals.size())
        throw PreconditionError("make_point_sample: points and normals differ in length");
    ArcSample sample;
    sample.points = std::move(points);
    for (auto& n : normals)
        sample.normals.push_back(n.normalized());
    sample.parameters.assign(sample.points.size(), std::numeric_limits<double>::quiet_NaN());
    return sample;
}

/// Euclidean distance from p to a polyline.
inline double distance_to_polyline(const Point& p, const std::vector<Point>& line)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const Point a = line[i];
        const Point ab = line[i + 1] - a;
        const double len2 = ab.squaredNorm();
        double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (a + t * ab - p).norm());
    }
    if (line.size() == 1)
        best = (line[0] - p).norm();
    return best;
}

} // namespace arcmig
