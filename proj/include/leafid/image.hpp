#pragma once

#include <cstdint>
#include <vector>

#include "leafid/errors.hpp"

namespace leafid {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB raster, row-major, origin at the top-left corner.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill = {})
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw Error(errc::dimension_mismatch, "image dimensions must be positive");
    }

    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return pixels.size(); }
};

/// Single-channel 8-bit raster, same layout as RgbImage.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw Error(errc::dimension_mismatch, "image dimensions must be positive");
    }

    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return values.size(); }

    bool operator==(const GrayImage&) const = default;
};

/// Foreground mask; true = leaf. Stored as bytes, not vector<bool>.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
        if (w <= 0 || h <= 0)
            throw Error(errc::dimension_mismatch, "mask dimensions must be positive");
    }

    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    std::size_t count_true() const {
        std::size_t n = 0;
        for (auto b : bits) n += b != 0;
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

struct PixelCoord {
    int x = 0;
    int y = 0;
    bool operator==(const PixelCoord&) const = default;
};

} // namespace leafid
