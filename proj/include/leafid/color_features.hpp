#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "leafid/errors.hpp"
#include "leafid/segmentation.hpp"

namespace leafid {

namespace detail {

// Kahan-compensated accumulator; keeps moment sums independent of pixel
// iteration order to well below 1e-9.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

/// Population moments of one channel over the leaf pixels:
/// mean, stddev = sqrt(E[(P-mu)^2]), skewness = E[(P-mu)^3]/sigma^3,
/// kurtosis = E[(P-mu)^4]/sigma^4 (3 for a Gaussian, not excess form).
struct ChannelMoments {
    double mean = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    bool zero_variance = false; // sigma == 0; skewness/kurtosis reported as 0
};

struct ColorMoments {
    ChannelMoments r, g, b;
};

namespace detail {

template <typename PixelFn>
ChannelMoments channel_moments(const LeafRegion& region, PixelFn&& value_of,
                               bool include_kurtosis) {
    const BinaryMask& mask = region.mask;
    std::size_t n = 0;
    double sum = 0.0; // integer-valued samples: exact in double
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                sum += value_of(x, y);
                ++n;
            }
    if (n < 2)
        throw Error(errc::too_few_pixels,
                    "need >= 2 leaf pixels, have " + std::to_string(n));

    ChannelMoments m;
    m.mean = sum / static_cast<double>(n);

    CompensatedSum s2, s3, s4;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                const double d = value_of(x, y) - m.mean;
                const double d2 = d * d;
                s2.add(d2);
                s3.add(d2 * d);
                if (include_kurtosis) s4.add(d2 * d2);
            }

    const double var = s2.sum / static_cast<double>(n);
    m.stddev = std::sqrt(var);
    if (m.stddev == 0.0) {
        m.zero_variance = true; // skew/kurt undefined; 0 keeps the vector total
        return m;
    }
    m.skewness = s3.sum / (static_cast<double>(n) * m.stddev * m.stddev * m.stddev);
    if (include_kurtosis) m.kurtosis = s4.sum / (static_cast<double>(n) * var * var);
    return m;
}

} // namespace detail

/// Per-channel color moments over mask-true pixels only. Kurtosis is only
/// computed when asked for (the default feature set omits it).
inline ColorMoments color_moments(const LeafRegion& region, bool include_kurtosis = true) {
    ColorMoments cm;
    cm.r = detail::channel_moments(
        region, [&](int x, int y) { return static_cast<double>(region.rgb.at(x, y).r); },
        include_kurtosis);
    cm.g = detail::channel_moments(
        region, [&](int x, int y) { return static_cast<double>(region.rgb.at(x, y).g); },
        include_kurtosis);
    cm.b = detail::channel_moments(
        region, [&](int x, int y) { return static_cast<double>(region.rgb.at(x, y).b); },
        include_kurtosis);
    return cm;
}

} // namespace leafid
