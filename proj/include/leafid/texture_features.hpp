#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "leafid/errors.hpp"
#include "leafid/segmentation.hpp"

namespace leafid {

namespace detail {

inline double pixel_mean(std::span<const double> values, const char* what) {
    if (values.empty()) throw Error(errc::zero_mean, std::string(what) + ": no pixels");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (!(mean > 0.0)) throw Error(errc::zero_mean, std::string(what) + ": mean is not positive");
    return mean;
}

} // namespace detail

/// Variance-over-squared-mean lacunarity: E[P^2]/E[P]^2 - 1.
inline double lacunarity_ls(std::span<const double> values) {
    const double mean = detail::pixel_mean(values, "lacunarity_ls");
    double sq = 0.0;
    for (double v : values) sq += v * v;
    sq /= static_cast<double>(values.size());
    return sq / (mean * mean) - 1.0;
}

/// Mean absolute relative deviation: E[|P/E[P] - 1|].
inline double lacunarity_la(std::span<const double> values) {
    const double mean = detail::pixel_mean(values, "lacunarity_la");
    double acc = 0.0;
    for (double v : values) acc += std::abs(v / mean - 1.0);
    return acc / static_cast<double>(values.size());
}

/// Power-mean lacunarity: (E[(P/E[P] - 1)^p])^(1/p). Only even p keeps the
/// inner mean non-negative; p = 1 reduces to lacunarity_la.
inline double lacunarity_lp(std::span<const double> values, int p) {
    if (p < 1) throw std::invalid_argument("lacunarity_lp: p must be >= 1");
    const double mean = detail::pixel_mean(values, "lacunarity_lp");
    double acc = 0.0;
    if (p == 1) {
        for (double v : values) acc += std::abs(v / mean - 1.0);
    } else {
        for (double v : values) acc += std::pow(v / mean - 1.0, p);
    }
    acc /= static_cast<double>(values.size());
    return std::pow(acc, 1.0 / p);
}

/// The texture block: L_p over mask pixels for each of R, G, B and the
/// grayscale intensity (channel-major), for each order in `orders`.
/// Default orders {2,4,6} give the 12-value block.
struct TextureFeatures {
    std::vector<double> values;
    std::vector<int> orders;
};

inline TextureFeatures texture_vector(const LeafRegion& region,
                                      const std::vector<int>& orders = {2, 4, 6}) {
    if (region.area == 0) throw Error(errc::empty_mask, "empty region");

    std::vector<double> r_vals, g_vals, b_vals, gray_vals;
    r_vals.reserve(region.area);
    g_vals.reserve(region.area);
    b_vals.reserve(region.area);
    gray_vals.reserve(region.area);
    for (int y = 0; y < region.mask.height; ++y)
        for (int x = 0; x < region.mask.width; ++x)
            if (region.mask.at(x, y)) {
                const Rgb& p = region.rgb.at(x, y);
                r_vals.push_back(p.r);
                g_vals.push_back(p.g);
                b_vals.push_back(p.b);
                gray_vals.push_back(region.gray.at(x, y));
            }

    struct Channel {
        const char* name;
        const std::vector<double>* vals;
    };
    const Channel channels[4] = {
        {"R", &r_vals}, {"G", &g_vals}, {"B", &b_vals}, {"gray", &gray_vals}};

    TextureFeatures tf;
    tf.orders = orders;
    tf.values.reserve(4 * orders.size());
    for (const auto& ch : channels) {
        for (int p : orders) {
            try {
                tf.values.push_back(lacunarity_lp(*ch.vals, p));
            } catch (const Error& e) {
                if (e.code() == errc::zero_mean)
                    throw Error(errc::zero_mean, std::string("channel ") + ch.name);
                throw;
            }
        }
    }
    return tf;
}

} // namespace leafid
