#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "leafid/errors.hpp"
#include "leafid/image.hpp"

namespace leafid {

/// Segmented leaf: source rasters plus the derived geometry every feature
/// extractor consumes (outer contour, centroid, area A, perimeter P).
struct LeafRegion {
    RgbImage rgb;
    GrayImage gray;
    BinaryMask mask;
    std::vector<PixelCoord> contour;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    std::size_t area = 0;
    double perimeter = 0.0;
};

/// ITU-R 601 luminance, rounded to the nearest integer.
inline GrayImage to_grayscale(const RgbImage& img) {
    GrayImage g(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Rgb& p = img.pixels[i];
        double lum = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
        long v = std::lround(lum);
        g.values[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
    return g;
}

/// Adaptive threshold from a coarse intensity histogram: take the two
/// largest strict local maxima (leaf vs background), then the emptiest bin
/// strictly between them; the threshold is the median intensity of that
/// bin's pixels, or the bin's center when it holds none.
///
/// Peak ties break toward the lower-intensity bin. Among equally empty
/// in-between bins the one whose center is nearest the midpoint of the two
/// peak centers wins; an exact tie goes to the higher bin.
inline double histogram_threshold(const GrayImage& g, int bins = 20) {
    if (g.values.empty()) throw Error(errc::empty_mask, "empty image");
    if (bins < 3) throw std::invalid_argument("histogram_threshold: bins must be >= 3");

    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (std::uint8_t v : g.values) counts[static_cast<std::size_t>(v) * bins / 256]++;

    auto count_at = [&](int b) -> long long {
        if (b < 0 || b >= bins) return -1; // missing neighbor never blocks a boundary peak
        return static_cast<long long>(counts[static_cast<std::size_t>(b)]);
    };

    std::vector<int> peaks;
    for (int b = 0; b < bins; ++b)
        if (count_at(b) > count_at(b - 1) && count_at(b) > count_at(b + 1)) peaks.push_back(b);
    if (peaks.size() < 2)
        throw Error(errc::unimodal_histogram,
                    "found " + std::to_string(peaks.size()) + " histogram peak(s), need 2");

    std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
    });
    const int lo = std::min(peaks[0], peaks[1]);
    const int hi = std::max(peaks[0], peaks[1]);

    const double bin_width = 256.0 / bins;
    auto center = [&](int b) { return (b + 0.5) * bin_width; };
    const double midpoint = 0.5 * (center(lo) + center(hi));

    // Strict local maxima are never adjacent, so lo+1..hi-1 is nonempty.
    int best = -1;
    for (int b = lo + 1; b < hi; ++b) {
        if (best < 0) {
            best = b;
            continue;
        }
        const auto cb = counts[static_cast<std::size_t>(b)];
        const auto cbest = counts[static_cast<std::size_t>(best)];
        if (cb < cbest) {
            best = b;
        } else if (cb == cbest) {
            const double db = std::abs(center(b) - midpoint);
            const double dbest = std::abs(center(best) - midpoint);
            if (db < dbest || (db == dbest && center(b) > center(best))) best = b;
        }
    }

    if (counts[static_cast<std::size_t>(best)] == 0) return center(best);

    std::vector<std::uint8_t> members;
    for (std::uint8_t v : g.values)
        if (static_cast<int>(static_cast<std::size_t>(v) * bins / 256) == best)
            members.push_back(v);
    std::sort(members.begin(), members.end());
    const std::size_t n = members.size();
    if (n % 2 == 1) return members[n / 2];
    return 0.5 * (members[n / 2 - 1] + members[n / 2]);
}

/// Leaf = pixels darker than the threshold. `invert` flips the convention
/// for datasets whose leaves are brighter than the background.
inline BinaryMask binarize(const GrayImage& g, double threshold, bool invert = false) {
    if (threshold < 0.0 || threshold > 255.0)
        throw std::invalid_argument("binarize: threshold must be in [0, 255]");
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const bool dark = g.values[i] < threshold;
        m.bits[i] = (dark != invert) ? 1 : 0;
    }
    return m;
}

namespace detail {

// 4-connected flood fill over false pixels starting from the border;
// anything not reached is an enclosed hole.
inline std::vector<std::uint8_t> background_reach(const BinaryMask& m) {
    const int w = m.width, h = m.height;
    std::vector<std::uint8_t> reached(m.bits.size(), 0);
    std::vector<int> stack;
    auto push = [&](int x, int y) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!m.bits[i] && !reached[i]) {
            reached[i] = 1;
            stack.push_back(static_cast<int>(i));
        }
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w, y = i / w;
        if (x > 0) push(x - 1, y);
        if (x + 1 < w) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y + 1 < h) push(x, y + 1);
    }
    return reached;
}

} // namespace detail

/// Fill enclosed holes, then keep only the largest 8-connected component
/// (ties go to the component seen first in row-major order).
inline BinaryMask clean_mask(const BinaryMask& m) {
    if (m.count_true() == 0) throw Error(errc::empty_mask, "mask has no foreground pixels");

    BinaryMask filled = m;
    const auto reached = detail::background_reach(m);
    for (std::size_t i = 0; i < filled.bits.size(); ++i)
        if (!filled.bits[i] && !reached[i]) filled.bits[i] = 1;

    const int w = m.width, h = m.height;
    std::vector<std::int32_t> label(filled.bits.size(), -1);
    std::int32_t next_label = 0;
    std::size_t best_size = 0;
    std::int32_t best_label = -1;
    std::vector<int> stack;

    for (std::size_t seed = 0; seed < filled.bits.size(); ++seed) {
        if (!filled.bits[seed] || label[seed] >= 0) continue;
        std::size_t size = 0;
        label[seed] = next_label;
        stack.push_back(static_cast<int>(seed));
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            ++size;
            const int x = i % w, y = i / w;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (filled.bits[ni] && label[ni] < 0) {
                        label[ni] = next_label;
                        stack.push_back(static_cast<int>(ni));
                    }
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_label = next_label;
        }
        ++next_label;
    }

    BinaryMask out(w, h);
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = (label[i] == best_label) ? 1 : 0;
    return out;
}

namespace detail {

// Moore-neighbor tracing, clockwise in screen coordinates (y grows down),
// starting at the topmost-leftmost foreground pixel. The trace stops when
// the (position, backtrack) state repeats its initial value.
inline std::vector<PixelCoord> trace_contour(const BinaryMask& m) {
    static constexpr int dx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int dy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

    int sx = -1, sy = -1;
    for (int y = 0; y < m.height && sx < 0; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) {
                sx = x;
                sy = y;
                break;
            }
    if (sx < 0) throw Error(errc::empty_mask, "cannot trace contour of empty mask");

    auto is_set = [&](int x, int y) { return m.in_bounds(x, y) && m.at(x, y); };
    auto dir_of = [&](int fx, int fy, int tx, int ty) {
        for (int d = 0; d < 8; ++d)
            if (fx + dx8[d] == tx && fy + dy8[d] == ty) return d;
        throw std::logic_error("trace_contour: backtrack is not a neighbor");
    };

    std::vector<PixelCoord> contour{{sx, sy}};

    bool isolated = true;
    for (int d = 0; d < 8 && isolated; ++d) isolated = !is_set(sx + dx8[d], sy + dy8[d]);
    if (isolated) return contour;

    // The pixel west of a topmost-leftmost start is always background.
    int cx = sx, cy = sy;
    int bx = sx - 1, by = sy;
    const int ibx = bx, iby = by;

    const std::size_t cap = 4 * m.count_true() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
        const int d0 = dir_of(cx, cy, bx, by);
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (d0 + k) % 8;
            const int nx = cx + dx8[d], ny = cy + dy8[d];
            if (is_set(nx, ny)) {
                found = d;
                break;
            }
            bx = nx;
            by = ny;
        }
        if (found < 0) throw std::logic_error("trace_contour: lost the boundary");
        cx += dx8[found];
        cy += dy8[found];
        if (cx == sx && cy == sy && bx == ibx && by == iby) return contour;
        contour.push_back({cx, cy});
    }
    throw std::logic_error("trace_contour: failed to close the contour");
}

} // namespace detail

/// Assemble the LeafRegion: trace the outer contour, sum the chain length
/// (1 per axial step, sqrt(2) per diagonal, closing step included), and take
/// the centroid/area over mask-true pixels.
inline LeafRegion extract_region(const RgbImage& img, const BinaryMask& mask) {
    if (img.width != mask.width || img.height != mask.height)
        throw Error(errc::dimension_mismatch,
                    "image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                        " vs mask " + std::to_string(mask.width) + "x" +
                        std::to_string(mask.height));

    LeafRegion region;
    region.rgb = img;
    region.gray = to_grayscale(img);
    region.mask = mask;

    std::size_t area = 0;
    double sum_x = 0.0, sum_y = 0.0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                ++area;
                sum_x += x;
                sum_y += y;
            }
    if (area == 0) throw Error(errc::empty_mask, "mask has no foreground pixels");

    region.area = area;
    region.centroid_x = sum_x / static_cast<double>(area);
    region.centroid_y = sum_y / static_cast<double>(area);
    region.contour = detail::trace_contour(mask);

    double perimeter = 0.0;
    const auto& c = region.contour;
    if (c.size() > 1) {
        constexpr double kDiag = 1.4142135623730951;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const PixelCoord& a = c[i];
            const PixelCoord& b = c[(i + 1) % c.size()];
            perimeter += (a.x != b.x && a.y != b.y) ? kDiag : 1.0;
        }
    }
    region.perimeter = perimeter;
    return region;
}

} // namespace leafid
