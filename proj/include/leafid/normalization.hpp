#pragma once

#include <string>
#include <vector>

#include "leafid/errors.hpp"

namespace leafid {

/// Per-feature min/max learned on training data.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dimension() const { return min.size(); }
};

inline NormalizationParams fit_normalization(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(errc::empty_matrix, "no training rows");
    const std::size_t d = rows.front().size();
    NormalizationParams params;
    params.min = rows.front();
    params.max = rows.front();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != d)
            throw Error(errc::ragged_rows, "row " + std::to_string(r) + " has " +
                                               std::to_string(rows[r].size()) +
                                               " values, expected " + std::to_string(d));
        for (std::size_t i = 0; i < d; ++i) {
            if (rows[r][i] < params.min[i]) params.min[i] = rows[r][i];
            if (rows[r][i] > params.max[i]) params.max[i] = rows[r][i];
        }
    }
    return params;
}

/// (x - min) / (max - min), no clamping; a constant training column maps
/// to 0 everywhere.
inline std::vector<double> apply_normalization(const NormalizationParams& params,
                                               const std::vector<double>& x) {
    if (x.size() != params.dimension())
        throw Error(errc::dimension_mismatch,
                    "vector has " + std::to_string(x.size()) + " values, params expect " +
                        std::to_string(params.dimension()));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double range = params.max[i] - params.min[i];
        out[i] = range == 0.0 ? 0.0 : (x[i] - params.min[i]) / range;
    }
    return out;
}

} // namespace leafid
