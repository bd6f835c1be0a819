#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "leafid/errors.hpp"
#include "leafid/image.hpp"
#include "leafid/segmentation.hpp"

namespace leafid {

namespace detail {

// Offsets of the discrete disk {(dx,dy) : dx^2 + dy^2 <= r^2}.
inline std::vector<PixelCoord> disk_offsets(int radius) {
    std::vector<PixelCoord> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    return offsets;
}

enum class MorphOp { erode, dilate };

// Flat min/max filter; the neighborhood is clipped at the image border.
inline GrayImage morph(const GrayImage& g, const std::vector<PixelCoord>& offsets, MorphOp op) {
    GrayImage out(g.width, g.height);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            int best = op == MorphOp::erode ? 255 : 0;
            for (const auto& d : offsets) {
                const int nx = x + d.x, ny = y + d.y;
                if (!g.in_bounds(nx, ny)) continue;
                const int v = g.at(nx, ny);
                if (op == MorphOp::erode ? v < best : v > best) best = v;
            }
            out.at(x, y) = static_cast<std::uint8_t>(best);
        }
    }
    return out;
}

// Binary erosion by the radius-1 disk; trims the leaf margin so boundary
// artifacts of the opening are not counted as veins.
inline BinaryMask erode_mask(const BinaryMask& m, int radius) {
    const auto offsets = disk_offsets(radius);
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool keep = m.at(x, y);
            for (std::size_t k = 0; keep && k < offsets.size(); ++k) {
                const int nx = x + offsets[k].x, ny = y + offsets[k].y;
                keep = m.in_bounds(nx, ny) && m.at(nx, ny);
            }
            out.set(x, y, keep);
        }
    }
    return out;
}

} // namespace detail

/// Gray-scale opening with a flat disk structuring element: erosion
/// (neighborhood minimum) followed by dilation (neighborhood maximum).
inline GrayImage grayscale_opening(const GrayImage& g, int radius) {
    if (radius < 1) throw std::invalid_argument("grayscale_opening: radius must be >= 1");
    const auto offsets = detail::disk_offsets(radius);
    return detail::morph(detail::morph(g, offsets, detail::MorphOp::erode), offsets,
                         detail::MorphOp::dilate);
}

/// The three vein-density ratios: fraction of leaf pixels whose value the
/// opening at radius r_i changed by more than diff_threshold, counted inside
/// the margin-eroded mask and divided by the full leaf area A.
struct VeinFeatures {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;
    std::array<int, 3> radii{1, 2, 3};
};

inline VeinFeatures vein_ratios(const LeafRegion& region, std::array<int, 3> radii = {1, 2, 3},
                                int diff_threshold = 10) {
    if (region.area == 0) throw Error(errc::empty_mask, "empty region");
    if (!(radii[0] >= 1 && radii[0] < radii[1] && radii[1] < radii[2]))
        throw std::invalid_argument("vein_ratios: radii must be strictly increasing, >= 1");

    const BinaryMask margin = detail::erode_mask(region.mask, 1);
    const double area = static_cast<double>(region.area);

    VeinFeatures vf;
    vf.radii = radii;
    double* out[3] = {&vf.v1, &vf.v2, &vf.v3};
    for (int k = 0; k < 3; ++k) {
        const GrayImage opened = grayscale_opening(region.gray, radii[static_cast<std::size_t>(k)]);
        std::size_t count = 0;
        for (int y = 0; y < margin.height; ++y)
            for (int x = 0; x < margin.width; ++x) {
                if (!margin.at(x, y)) continue;
                const int diff = std::abs(static_cast<int>(region.gray.at(x, y)) -
                                          static_cast<int>(opened.at(x, y)));
                if (diff > diff_threshold) ++count;
            }
        *out[k] = static_cast<double>(count) / area;
    }
    return vf;
}

} // namespace leafid
