#pragma once

// Test vectors and the subspace migration imaging function
//
//   F(x) = | sum_{m <= M} (W(x)^* U_m) (W(x)^* conj(V_m)) |,
//   W_n(x) = sqrt(2/N) (theta_n . c_n) exp(i k theta_n . x).

#include "errors.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "msr.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace arcmig {

/// c_n = xi for every n.
struct FixedXi {
    Point xi;
};

/// c_n = theta_n, so theta_n . c_n = 1.
struct IncidentAligned {
};

/// c_n = nu(y*) where y* is the sampled arc point nearest to x. Requires the
/// true arc, so it only serves as a reference.
struct OracleNormal {
    ArcSample sample;
};

using TestVectorScheme = std::variant<FixedXi, IncidentAligned, OracleNormal>;

inline FixedXi fixed_xi_at_angle(double angle) { return FixedXi{unit_vector(angle)}; }

inline std::string describe(const TestVectorScheme& scheme)
{
    if (const auto* f = std::get_if<FixedXi>(&scheme)) {
        std::ostringstream os;
        os.precision(6);
        os << "xi=(" << f->xi.x() << "," << f->xi.y() << ")";
        return os.str();
    }
    if (std::holds_alternative<IncidentAligned>(scheme))
        return "incident_aligned";
    return "oracle_normal";
}

inline void validate_scheme(const TestVectorScheme& scheme)
{
    if (const auto* f = std::get_if<FixedXi>(&scheme)) {
        if (std::abs(f->xi.norm() - 1.0) > 1e-12)
            throw ConfigError("FixedXi: xi must be a unit vector");
    } else if (const auto* o = std::get_if<OracleNormal>(&scheme)) {
        if (o->sample.count() == 0)
            throw ConfigError("OracleNormal: reference sample is empty");
    }
}

namespace detail {

inline std::size_t nearest_index(const ArcSample& sample, const Point& x)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < sample.count(); ++m) {
        const double d = (sample.points[m] - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

} // namespace detail

inline Eigen::VectorXcd test_vector(const Point& x, const DirectionSet& dirs, const WaveContext& ctx,
                                    const TestVectorScheme& scheme)
{
    const int n = dirs.count();
    const double scale = std::sqrt(2.0 / n);
    Eigen::VectorXcd w(n);

    Point c_fixed{0.0, 0.0};
    bool aligned = false;
    if (const auto* f = std::get_if<FixedXi>(&scheme))
        c_fixed = f->xi;
    else if (std::holds_alternative<IncidentAligned>(scheme))
        aligned = true;
    else {
        const auto& sample = std::get<OracleNormal>(scheme).sample;
        c_fixed = sample.normals[detail::nearest_index(sample, x)];
    }

    for (int i = 0; i < n; ++i) {
        const Point& theta = dirs.incident[i];
        const double weight = aligned ? 1.0 : theta.dot(c_fixed);
        w(i) = scale * weight * std::exp(I * (ctx.k() * theta.dot(x)));
    }
    return w;
}

/// Imaging function at one point. The basis must have a signal rank.
inline double imaging_value(const Point& x, const SvdBasis& basis, const DirectionSet& dirs,
                            const WaveContext& ctx, const TestVectorScheme& scheme)
{
    if (basis.signal_rank < 1)
        throw PreconditionError("imaging_value: signal rank not selected");
    const Eigen::VectorXcd w = test_vector(x, dirs, ctx, scheme);
    Complex sum{0.0, 0.0};
    for (int m = 0; m < basis.signal_rank; ++m) {
        const Complex wu = w.dot(basis.left.col(m));                    // W^* U_m
        const Complex wv = w.dot(basis.right.col(m).conjugate());       // W^* conj(V_m)
        sum += wu * wv;
    }
    return std::abs(sum);
}

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
    double step = 0.02;

    int nx() const { return static_cast<int>(std::floor((x_max - x_min) / step + 1e-9)) + 1; }
    int ny() const { return static_cast<int>(std::floor((y_max - y_min) / step + 1e-9)) + 1; }
    Point node(int ix, int iy) const { return {x_min + ix * step, y_min + iy * step}; }
};

/// Default search domain [-1, 1]^2 with step lambda / 20.
inline GridSpec default_grid(const WaveContext& ctx) { return GridSpec{-1.0, 1.0, -1.0, 1.0, ctx.wavelength() / 20.0}; }

/// Imaging function on a rectangular grid; values(iy, ix) at node(ix, iy).
struct ImageGrid {
    GridSpec spec;
    Eigen::MatrixXd values;
    std::string scheme;
    bool coarse = false; // step exceeded lambda / 10 (non-strict mode)

    Point node(int ix, int iy) const { return spec.node(ix, iy); }

    /// Node of the largest value (first in row-major order on ties).
    Point argmax() const
    {
        Eigen::Index r = 0;
        Eigen::Index c = 0;
        values.maxCoeff(&r, &c);
        return node(static_cast<int>(c), static_cast<int>(r));
    }
};

inline ImageGrid imaging_map(const SvdBasis& basis, const DirectionSet& dirs, const WaveContext& ctx,
                             const TestVectorScheme& scheme, const GridSpec& grid, bool strict = true)
{
    validate_scheme(scheme);
    if (!(grid.step > 0.0) || grid.x_max < grid.x_min || grid.y_max < grid.y_min)
        throw ConfigError("imaging_map: invalid grid");
    ImageGrid image;
    image.spec = grid;
    image.scheme = describe(scheme);
    if (grid.step > ctx.wavelength() / 10.0 * (1.0 + 1e-12)) {
        if (strict)
            throw ConfigError("imaging_map: grid step " + std::to_string(grid.step) + " exceeds lambda/10 = "
                              + std::to_string(ctx.wavelength() / 10.0));
        image.coarse = true;
    }
    image.values.resize(grid.ny(), grid.nx());
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix)
            image.values(iy, ix) = imaging_value(grid.node(ix, iy), basis, dirs, ctx, scheme);
    return image;
}

/// On-arc (within lambda/8 of the arc) versus off-arc (beyond lambda/2) statistics.
struct ContrastStats {
    double on_arc_mean = 0.0;
    double off_arc_mean = 0.0;
    double off_arc_p95 = 0.0;
    double contrast = 0.0;
    double argmax_distance = 0.0; // distance from the image maximum to the arc
    std::size_t on_count = 0;
    std::size_t off_count = 0;
};

/// Percentile by linear interpolation between order statistics.
inline double percentile(std::vector<double> v, double p)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline ContrastStats contrast_statistics(const ImageGrid& image, const Arc& arc, const WaveContext& ctx)
{
    const auto line = arc.polyline(2001);
    const double lambda = ctx.wavelength();
    std::vector<double> on;
    std::vector<double> off;
    for (int iy = 0; iy < image.values.rows(); ++iy)
        for (int ix = 0; ix < image.values.cols(); ++ix) {
            const double d = distance_to_polyline(image.node(ix, iy), line);
            if (d <= lambda / 8.0)
                on.push_back(image.values(iy, ix));
            else if (d > lambda / 2.0)
                off.push_back(image.values(iy, ix));
        }
    ContrastStats st;
    st.on_count = on.size();
    st.off_count = off.size();
    for (double v : on)
        st.on_arc_mean += v;
    for (double v : off)
        st.off_arc_mean += v;
    if (!on.empty())
        st.on_arc_mean /= static_cast<double>(on.size());
    if (!off.empty())
        st.off_arc_mean /= static_cast<double>(off.size());
    st.off_arc_p95 = percentile(off, 0.95);
    st.contrast = st.off_arc_mean > 0.0 ? st.on_arc_mean / st.off_arc_mean : 0.0;
    st.argmax_distance = distance_to_polyline(image.argmax(), line);
    return st;
}

/// CSV rows "x,y,value".
inline void write_image_csv(std::ostream& os, const ImageGrid& image)
{
    os << "x,y,value\n";
    os.precision(17);
    for (int iy = 0; iy < image.values.rows(); ++iy)
        for (int ix = 0; ix < image.values.cols(); ++ix) {
            const Point p = image.node(ix, iy);
            os << p.x() << ',' << p.y() << ',' << image.values(iy, ix) << '\n';
        }
}

/// Binary 8-bit PGM, values scaled by 255 / max. The top row is y_max.
inline void write_image_pgm(std::ostream& os, const ImageGrid& image)
{
    const int w = static_cast<int>(image.values.cols());
    const int h = static_cast<int>(image.values.rows());
    const double peak = image.values.maxCoeff();
    os << "P5\n" << w << ' ' << h << "\n255\n";
    for (int iy = h - 1; iy >= 0; --iy)
        for (int ix = 0; ix < w; ++ix) {
            const double v = peak > 0.0 ? image.values(iy, ix) / peak : 0.0;
            os.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
        }
}

} // namespace arcmig
