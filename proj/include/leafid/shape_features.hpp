#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "leafid/errors.hpp"
#include "leafid/segmentation.hpp"

namespace leafid {

// ---------------------------------------------------------------------------
// Geometric features
// ---------------------------------------------------------------------------

namespace detail {

struct Point2d {
    double x = 0.0, y = 0.0;
};

inline double cross(const Point2d& o, const Point2d& a, const Point2d& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain. Extremes of any linear functional live on the hull,
// so diameter and projection widths computed on it are exact.
inline std::vector<Point2d> convex_hull(std::vector<Point2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2d& a, const Point2d& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2d& a, const Point2d& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

/// Width over length: the length axis is the contour diameter (max pairwise
/// distance), the width is the contour's extent perpendicular to it.
inline double slimness(const LeafRegion& region) {
    const auto& contour = region.contour;
    if (contour.size() < 2)
        throw Error(errc::degenerate_contour,
                    "contour has " + std::to_string(contour.size()) + " point(s)");

    std::vector<detail::Point2d> pts;
    pts.reserve(contour.size());
    for (const auto& p : contour)
        pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});

    const auto hull = detail::convex_hull(pts);
    double best = -1.0;
    detail::Point2d a{}, b{};
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            const double dx = hull[j].x - hull[i].x;
            const double dy = hull[j].y - hull[i].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > best) {
                best = d2;
                a = hull[i];
                b = hull[j];
            }
        }
    }
    const double length = std::sqrt(best);
    if (!(length > 0.0))
        throw Error(errc::degenerate_contour, "all contour points coincide");

    const double ux = (b.x - a.x) / length, uy = (b.y - a.y) / length;
    const double vx = -uy, vy = ux;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        const double t = p.x * vx + p.y * vy;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    const double width = hi - lo;
    if (!(width > 0.0))
        throw Error(errc::degenerate_contour, "contour is a straight line (zero width)");
    return width / length;
}

/// 4*pi*A / P^2; equals 1 for an ideal circle.
inline double roundness(const LeafRegion& region) {
    if (!(region.perimeter > 0.0))
        throw Error(errc::zero_perimeter, "region perimeter is zero");
    return 4.0 * std::numbers::pi * static_cast<double>(region.area) /
           (region.perimeter * region.perimeter);
}

/// Max over min centroid-to-contour radius; grows as the shape spreads.
inline double dispersion(const LeafRegion& region) {
    if (region.contour.empty())
        throw Error(errc::degenerate_contour, "empty contour");
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (const auto& p : region.contour) {
        const double dx = p.x - region.centroid_x;
        const double dy = p.y - region.centroid_y;
        const double r = std::sqrt(dx * dx + dy * dy);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (rmin < 1e-9)
        throw Error(errc::zero_min_radius, "centroid lies on the contour");
    return rmax / rmin;
}

// ---------------------------------------------------------------------------
// Polar Fourier descriptors
// ---------------------------------------------------------------------------

/// Binary mask resampled onto a centroid-centered polar grid.
/// Row i is radius i*R/(R_s-1), column j is angle j*2*pi/T_s.
struct PolarGrid {
    int radial_samples = 0;  // R_s
    int angular_samples = 0; // T_s
    double max_radius = 0.0; // R, in pixels
    std::vector<std::uint8_t> samples; // row-major [i * T_s + j]

    std::uint8_t at(int i, int j) const {
        return samples[static_cast<std::size_t>(i) * angular_samples + j];
    }
};

inline PolarGrid polar_resample(const LeafRegion& region, int radial_samples,
                                int angular_samples) {
    if (radial_samples < 2 || angular_samples < 1)
        throw std::invalid_argument("polar_resample: need R_s >= 2 and T_s >= 1");
    const BinaryMask& mask = region.mask;
    if (region.area == 0) throw Error(errc::empty_mask, "cannot resample empty mask");

    double r2max = 0.0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                const double dx = x - region.centroid_x;
                const double dy = y - region.centroid_y;
                r2max = std::max(r2max, dx * dx + dy * dy);
            }

    PolarGrid grid;
    grid.radial_samples = radial_samples;
    grid.angular_samples = angular_samples;
    grid.max_radius = std::sqrt(r2max);
    grid.samples.assign(static_cast<std::size_t>(radial_samples) * angular_samples, 0);

    const double dtheta = 2.0 * std::numbers::pi / angular_samples;
    for (int i = 0; i < radial_samples; ++i) {
        const double r = grid.max_radius * i / (radial_samples - 1);
        for (int j = 0; j < angular_samples; ++j) {
            const double theta = j * dtheta;
            const long x = std::lround(region.centroid_x + r * std::cos(theta));
            const long y = std::lround(region.centroid_y + r * std::sin(theta));
            const bool v = mask.in_bounds(static_cast<int>(x), static_cast<int>(y)) &&
                           mask.at(static_cast<int>(x), static_cast<int>(y));
            grid.samples[static_cast<std::size_t>(i) * angular_samples + j] = v ? 1 : 0;
        }
    }
    return grid;
}

/// 2-D DFT coefficients of a PolarGrid, kept only up to radial frequency m
/// and angular frequency n.
struct PftCoefficients {
    int max_radial = 0;  // m
    int max_angular = 0; // n
    std::vector<std::complex<double>> values; // row-major [rho * (n+1) + phi]

    const std::complex<double>& at(int rho, int phi) const {
        return values[static_cast<std::size_t>(rho) * (max_angular + 1) + phi];
    }
};

/// Direct evaluation of
///   PF(rho, phi) = sum_i sum_j f(i, j) * exp(-j*2*pi*(i*rho/R_s + j*phi/T_s))
/// over the (m+1)*(n+1) requested frequencies, factorized through the
/// per-row angular sums so each grid cell is touched (n+1) times.
inline PftCoefficients pft(const PolarGrid& grid, int max_radial, int max_angular) {
    const int rs = grid.radial_samples, ts = grid.angular_samples;
    if (max_radial < 0 || max_angular < 0 || max_radial >= rs || max_angular >= ts)
        throw Error(errc::frequency_out_of_range,
                    "need 0 <= m < R_s and 0 <= n < T_s (m=" + std::to_string(max_radial) +
                        ", n=" + std::to_string(max_angular) + ", R_s=" + std::to_string(rs) +
                        ", T_s=" + std::to_string(ts) + ")");

    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> angular_twiddle(
        static_cast<std::size_t>(ts) * (max_angular + 1));
    for (int j = 0; j < ts; ++j)
        for (int phi = 0; phi <= max_angular; ++phi)
            angular_twiddle[static_cast<std::size_t>(j) * (max_angular + 1) + phi] =
                std::polar(1.0, -two_pi * j * phi / ts);

    // G(i, phi) = sum_j f(i, j) * w_a(j, phi)
    std::vector<std::complex<double>> row_sums(
        static_cast<std::size_t>(rs) * (max_angular + 1), {0.0, 0.0});
    for (int i = 0; i < rs; ++i) {
        for (int j = 0; j < ts; ++j) {
            if (!grid.at(i, j)) continue;
            const auto* w = &angular_twiddle[static_cast<std::size_t>(j) * (max_angular + 1)];
            auto* g = &row_sums[static_cast<std::size_t>(i) * (max_angular + 1)];
            for (int phi = 0; phi <= max_angular; ++phi) g[phi] += w[phi];
        }
    }

    PftCoefficients out;
    out.max_radial = max_radial;
    out.max_angular = max_angular;
    out.values.assign(static_cast<std::size_t>(max_radial + 1) * (max_angular + 1), {0.0, 0.0});
    for (int rho = 0; rho <= max_radial; ++rho) {
        for (int i = 0; i < rs; ++i) {
            const std::complex<double> wr = std::polar(1.0, -two_pi * i * rho / rs);
            const auto* g = &row_sums[static_cast<std::size_t>(i) * (max_angular + 1)];
            auto* pf = &out.values[static_cast<std::size_t>(rho) * (max_angular + 1)];
            for (int phi = 0; phi <= max_angular; ++phi) pf[phi] += wr * g[phi];
        }
    }
    return out;
}

/// Normalized PFT magnitudes. Phase is discarded (rotation invariance); the
/// DC entry is scaled by the enclosing circle's area in grid units (scale
/// invariance) and every other entry by the DC magnitude.
struct FourierDescriptors {
    int max_radial = 0;
    int max_angular = 0;
    std::vector<double> values; // (m+1)*(n+1) entries, row-major, DC first
};

inline FourierDescriptors fourier_descriptors(const PftCoefficients& coeffs, double circle_area) {
    const double dc = std::abs(coeffs.at(0, 0));
    if (dc == 0.0) throw Error(errc::zero_dc, "shape has no polar-grid support");
    if (!(circle_area > 0.0))
        throw std::invalid_argument("fourier_descriptors: circle_area must be positive");

    FourierDescriptors fds;
    fds.max_radial = coeffs.max_radial;
    fds.max_angular = coeffs.max_angular;
    fds.values.reserve(coeffs.values.size());
    fds.values.push_back(dc / circle_area);
    for (int rho = 0; rho <= coeffs.max_radial; ++rho)
        for (int phi = 0; phi <= coeffs.max_angular; ++phi) {
            if (rho == 0 && phi == 0) continue;
            fds.values.push_back(std::abs(coeffs.at(rho, phi)) / dc);
        }
    return fds;
}

/// Circle area used to normalize the DC descriptor, measured in polar-grid
/// units so it is a per-configuration constant (pixel-space area would make
/// the descriptor scale with image size).
inline double descriptor_circle_area(int radial_samples) {
    return std::numbers::pi * static_cast<double>(radial_samples) * radial_samples;
}

/// Convenience pipeline: resample, transform, normalize.
inline FourierDescriptors pft_descriptors(const LeafRegion& region, int max_radial,
                                          int max_angular, int radial_samples,
                                          int angular_samples) {
    const PolarGrid grid = polar_resample(region, radial_samples, angular_samples);
    const PftCoefficients coeffs = pft(grid, max_radial, max_angular);
    return fourier_descriptors(coeffs, descriptor_circle_area(radial_samples));
}

} // namespace leafid
