#pragma once

#include <stdexcept>
#include <string>

namespace leafid {

/// Everything the library can refuse to do, as a closed set of codes.
/// The CLI maps these to exit code 2 (data error); anything else that
/// escapes is exit code 3 (internal).
enum class errc {
    // dataset
    missing_file,
    malformed_row,
    non_contiguous_class_ids,
    insufficient_class_size,
    decode_error,
    unsupported_format,
    // segmentation
    unimodal_histogram,
    empty_mask,
    dimension_mismatch,
    // shape features
    degenerate_contour,
    zero_perimeter,
    zero_min_radius,
    frequency_out_of_range,
    zero_dc,
    // color / texture
    too_few_pixels,
    zero_mean,
    // normalization
    empty_matrix,
    ragged_rows,
    // pnn
    non_positive_sigma,
    missing_class,
    unknown_class,
    // pipeline / persistence
    segmentation_failed,
    io_error,
    version_mismatch,
    corrupt_model,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::missing_file: return "MissingFile";
        case errc::malformed_row: return "MalformedRow";
        case errc::non_contiguous_class_ids: return "NonContiguousClassIds";
        case errc::insufficient_class_size: return "InsufficientClassSize";
        case errc::decode_error: return "DecodeError";
        case errc::unsupported_format: return "UnsupportedFormat";
        case errc::unimodal_histogram: return "UnimodalHistogram";
        case errc::empty_mask: return "EmptyMask";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::degenerate_contour: return "DegenerateContour";
        case errc::zero_perimeter: return "ZeroPerimeter";
        case errc::zero_min_radius: return "ZeroMinRadius";
        case errc::frequency_out_of_range: return "FrequencyOutOfRange";
        case errc::zero_dc: return "ZeroDC";
        case errc::too_few_pixels: return "TooFewPixels";
        case errc::zero_mean: return "ZeroMean";
        case errc::empty_matrix: return "EmptyMatrix";
        case errc::ragged_rows: return "RaggedRows";
        case errc::non_positive_sigma: return "NonPositiveSigma";
        case errc::missing_class: return "MissingClass";
        case errc::unknown_class: return "UnknownClass";
        case errc::segmentation_failed: return "SegmentationFailed";
        case errc::io_error: return "IoError";
        case errc::version_mismatch: return "VersionMismatch";
        case errc::corrupt_model: return "CorruptModel";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace leafid
