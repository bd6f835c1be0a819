#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "leafid/errors.hpp"
#include "leafid/image.hpp"

namespace leafid {

namespace detail {

inline std::string lower_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

} // namespace detail

/// Decode a JPEG or PNG into an 8-bit RGB raster. Grayscale sources come
/// back replicated across the three channels.
inline RgbImage load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw Error(errc::missing_file, path.string());
    const std::string ext = detail::lower_extension(path);
    if (ext != ".jpg" && ext != ".jpeg" && ext != ".png")
        throw Error(errc::unsupported_format, path.string() + " (want .jpg/.jpeg/.png)");

    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty())
        throw Error(errc::decode_error, path.string());

    RgbImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x)
            img.at(x, y) = Rgb{row[x][2], row[x][1], row[x][0]};
    }
    return img;
}

inline void save_png(const RgbImage& img, const std::filesystem::path& path) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const Rgb& p = img.at(x, y);
            row[x] = cv::Vec3b{p.b, p.g, p.r};
        }
    }
    if (!cv::imwrite(path.string(), bgr))
        throw Error(errc::io_error, "cannot write " + path.string());
}

inline void save_jpeg(const RgbImage& img, const std::filesystem::path& path, int quality = 95) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const Rgb& p = img.at(x, y);
            row[x] = cv::Vec3b{p.b, p.g, p.r};
        }
    }
    if (!cv::imwrite(path.string(), bgr, {cv::IMWRITE_JPEG_QUALITY, quality}))
        throw Error(errc::io_error, "cannot write " + path.string());
}

/// Debug helper: dump a mask as an 8-bit PNG (255 = leaf).
inline void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
    cv::Mat gray(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            gray.at<std::uint8_t>(y, x) = mask.at(x, y) ? 255 : 0;
    if (!cv::imwrite(path.string(), gray))
        throw Error(errc::io_error, "cannot write " + path.string());
}

} // namespace leafid
