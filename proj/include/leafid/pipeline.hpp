#pragma once

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "leafid/color_features.hpp"
#include "leafid/dataset.hpp"
#include "leafid/errors.hpp"
#include "leafid/image_io.hpp"
#include "leafid/normalization.hpp"
#include "leafid/pnn.hpp"
#include "leafid/segmentation.hpp"
#include "leafid/shape_features.hpp"
#include "leafid/texture_features.hpp"
#include "leafid/vein_features.hpp"

namespace leafid {

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

/// Which feature groups go into the vector, plus every extraction parameter.
/// The emission order is fixed: pft, geometric, color mean, color std,
/// color skew, color kurtosis, texture, vein.
struct FeatureSelection {
    bool pft = true;
    bool geometric = true;
    bool color_mean = true;
    bool color_std = true;
    bool color_skew = true;
    bool color_kurtosis = false;
    bool texture = true;
    bool vein = true;

    int max_radial_freq = 4;   // m
    int max_angular_freq = 6;  // n
    int radial_samples = 64;   // R_s
    int angular_samples = 128; // T_s
    std::vector<int> lacunarity_orders = {2, 4, 6};
    std::array<int, 3> vein_radii = {1, 2, 3};
    int vein_diff_threshold = 10;
    bool invert = false; // leaf brighter than background

    std::size_t pft_count() const {
        return static_cast<std::size_t>(max_radial_freq + 1) * (max_angular_freq + 1);
    }

    std::size_t dimension() const {
        std::size_t d = 0;
        if (pft) d += pft_count();
        if (geometric) d += 3;
        if (color_mean) d += 3;
        if (color_std) d += 3;
        if (color_skew) d += 3;
        if (color_kurtosis) d += 3;
        if (texture) d += 4 * lacunarity_orders.size();
        if (vein) d += 3;
        return d;
    }

    std::vector<std::string> column_names() const {
        std::vector<std::string> cols;
        auto add = [&](const char* group, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i)
                cols.push_back(std::string(group) + "." + std::to_string(i));
        };
        if (pft) add("pft", pft_count());
        if (geometric) add("geo", 3);
        if (color_mean) add("color_mean", 3);
        if (color_std) add("color_std", 3);
        if (color_skew) add("color_skew", 3);
        if (color_kurtosis) add("color_kurt", 3);
        if (texture) add("texture", 4 * lacunarity_orders.size());
        if (vein) add("vein", 3);
        return cols;
    }

    bool any_color() const { return color_mean || color_std || color_skew || color_kurtosis; }

    bool any_enabled() const {
        return pft || geometric || any_color() || texture || vein;
    }

    /// Same extraction parameters (not flags): vectors extracted with one
    /// are column-subsettable for the other.
    bool same_parameters(const FeatureSelection& other) const {
        return max_radial_freq == other.max_radial_freq &&
               max_angular_freq == other.max_angular_freq &&
               radial_samples == other.radial_samples &&
               angular_samples == other.angular_samples &&
               lacunarity_orders == other.lacunarity_orders &&
               vein_radii == other.vein_radii &&
               vein_diff_threshold == other.vein_diff_threshold && invert == other.invert;
    }
};

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

struct FeatureVector {
    std::string image_id;
    std::optional<int> class_id;
    std::vector<double> values;
};

/// Segment the leaf and run every enabled extractor in the documented order.
inline std::vector<double> extract_features(const RgbImage& img, const FeatureSelection& sel) {
    if (!sel.any_enabled())
        throw std::invalid_argument("extract_features: no feature group enabled");

    const GrayImage gray = to_grayscale(img);
    BinaryMask mask;
    try {
        const double threshold = histogram_threshold(gray);
        mask = clean_mask(binarize(gray, threshold, sel.invert));
    } catch (const Error& e) {
        throw Error(errc::segmentation_failed, e.what());
    }
    const LeafRegion region = extract_region(img, mask);

    std::vector<double> out;
    out.reserve(sel.dimension());

    if (sel.pft) {
        const FourierDescriptors fds =
            pft_descriptors(region, sel.max_radial_freq, sel.max_angular_freq,
                            sel.radial_samples, sel.angular_samples);
        out.insert(out.end(), fds.values.begin(), fds.values.end());
    }
    if (sel.geometric) {
        out.push_back(slimness(region));
        out.push_back(roundness(region));
        out.push_back(dispersion(region));
    }
    if (sel.any_color()) {
        const ColorMoments cm = color_moments(region, sel.color_kurtosis);
        if (sel.color_mean) {
            out.push_back(cm.r.mean);
            out.push_back(cm.g.mean);
            out.push_back(cm.b.mean);
        }
        if (sel.color_std) {
            out.push_back(cm.r.stddev);
            out.push_back(cm.g.stddev);
            out.push_back(cm.b.stddev);
        }
        if (sel.color_skew) {
            out.push_back(cm.r.skewness);
            out.push_back(cm.g.skewness);
            out.push_back(cm.b.skewness);
        }
        if (sel.color_kurtosis) {
            out.push_back(cm.r.kurtosis);
            out.push_back(cm.g.kurtosis);
            out.push_back(cm.b.kurtosis);
        }
    }
    if (sel.texture) {
        const TextureFeatures tf = texture_vector(region, sel.lacunarity_orders);
        out.insert(out.end(), tf.values.begin(), tf.values.end());
    }
    if (sel.vein) {
        const VeinFeatures vf = vein_ratios(region, sel.vein_radii, sel.vein_diff_threshold);
        out.push_back(vf.v1);
        out.push_back(vf.v2);
        out.push_back(vf.v3);
    }
    return out;
}

namespace detail {

// Index-sharded worker pool; results land in slot i, so output is
// independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

struct ExtractionFailure {
    std::string image_id;
    std::optional<int> class_id;
    std::string reason;
};

struct ExtractionResult {
    std::vector<std::string> columns;
    std::vector<FeatureVector> vectors;
    std::vector<ExtractionFailure> failures;
};

/// Load + extract each manifest entry, in parallel. Failed images are
/// reported, never silently dropped.
inline ExtractionResult extract_dataset(const std::vector<ManifestEntry>& entries,
                                        const FeatureSelection& sel, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    struct Slot {
        FeatureVector vec;
        std::string error;
        bool failed = false;
    };
    std::vector<Slot> slots(entries.size());

    detail::parallel_for(entries.size(), threads, [&](std::size_t i) {
        const auto& e = entries[i];
        Slot& slot = slots[i];
        slot.vec.image_id = e.path;
        slot.vec.class_id = e.class_id;
        try {
            const RgbImage img = load_image(e.path);
            slot.vec.values = extract_features(img, sel);
        } catch (const std::exception& ex) {
            slot.failed = true;
            slot.error = ex.what();
        }
    });

    ExtractionResult result;
    result.columns = sel.column_names();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].failed)
            result.failures.push_back(
                {entries[i].path, entries[i].class_id, slots[i].error});
        else
            result.vectors.push_back(std::move(slots[i].vec));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Feature CSV
// ---------------------------------------------------------------------------

namespace detail {

// %.17g round-trips any double exactly; the spec wants >= 15 significant digits.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_feature_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& columns,
                              const std::vector<FeatureVector>& vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot write " + path.string());
    out << "image_id,class_id";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    for (const auto& v : vectors) {
        if (v.values.size() != columns.size())
            throw Error(errc::ragged_rows,
                        v.image_id + " has " + std::to_string(v.values.size()) +
                            " values, expected " + std::to_string(columns.size()));
        out << detail::csv_escape(v.image_id) << ',';
        if (v.class_id) out << *v.class_id;
        for (double d : v.values) out << ',' << detail::format_double(d);
        out << '\n';
    }
    if (!out) throw Error(errc::io_error, "write failed for " + path.string());
}

struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<FeatureVector> vectors;
};

inline FeatureTable read_feature_csv(const std::filesystem::path& path) {
    auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error(errc::malformed_row, "row 1: missing header");
    auto header = detail::split_csv_row(lines.front(), 1);
    if (header.size() < 3 || header[0] != "image_id" || header[1] != "class_id")
        throw Error(errc::malformed_row, "row 1: header must start `image_id,class_id,...`");

    FeatureTable table;
    table.columns.assign(header.begin() + 2, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t row_no = i + 1;
        auto fields = detail::split_csv_row(lines[i], row_no);
        if (fields.size() != header.size())
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        FeatureVector v;
        v.image_id = fields[0];
        if (!fields[1].empty()) {
            try {
                v.class_id = std::stoi(fields[1]);
            } catch (const std::exception&) {
                throw Error(errc::malformed_row,
                            "row " + std::to_string(row_no) + ": bad class_id `" + fields[1] +
                                "`");
            }
        }
        v.values.reserve(fields.size() - 2);
        for (std::size_t f = 2; f < fields.size(); ++f) {
            char* end = nullptr;
            const double d = std::strtod(fields[f].c_str(), &end);
            if (end == fields[f].c_str() || *end != '\0')
                throw Error(errc::malformed_row,
                            "row " + std::to_string(row_no) + ": bad number `" + fields[f] +
                                "`");
            v.values.push_back(d);
        }
        table.vectors.push_back(std::move(v));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Model persistence
// ---------------------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to classify a raw image: exemplars, the normalization
/// ranges they were scaled with, and the feature selection that produced them.
struct ModelBundle {
    PnnModel pnn;
    NormalizationParams normalization;
    FeatureSelection selection;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string checksum_hex(const std::string& payload) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

inline nlohmann::json selection_to_json(const FeatureSelection& s) {
    return nlohmann::json{{"pft", s.pft},
                          {"geometric", s.geometric},
                          {"color_mean", s.color_mean},
                          {"color_std", s.color_std},
                          {"color_skew", s.color_skew},
                          {"color_kurtosis", s.color_kurtosis},
                          {"texture", s.texture},
                          {"vein", s.vein},
                          {"max_radial_freq", s.max_radial_freq},
                          {"max_angular_freq", s.max_angular_freq},
                          {"radial_samples", s.radial_samples},
                          {"angular_samples", s.angular_samples},
                          {"lacunarity_orders", s.lacunarity_orders},
                          {"vein_radii", s.vein_radii},
                          {"vein_diff_threshold", s.vein_diff_threshold},
                          {"invert", s.invert}};
}

inline FeatureSelection selection_from_json(const nlohmann::json& j) {
    FeatureSelection s;
    s.pft = j.at("pft").get<bool>();
    s.geometric = j.at("geometric").get<bool>();
    s.color_mean = j.at("color_mean").get<bool>();
    s.color_std = j.at("color_std").get<bool>();
    s.color_skew = j.at("color_skew").get<bool>();
    s.color_kurtosis = j.at("color_kurtosis").get<bool>();
    s.texture = j.at("texture").get<bool>();
    s.vein = j.at("vein").get<bool>();
    s.max_radial_freq = j.at("max_radial_freq").get<int>();
    s.max_angular_freq = j.at("max_angular_freq").get<int>();
    s.radial_samples = j.at("radial_samples").get<int>();
    s.angular_samples = j.at("angular_samples").get<int>();
    s.lacunarity_orders = j.at("lacunarity_orders").get<std::vector<int>>();
    s.vein_radii = j.at("vein_radii").get<std::array<int, 3>>();
    s.vein_diff_threshold = j.at("vein_diff_threshold").get<int>();
    s.invert = j.at("invert").get<bool>();
    return s;
}

} // namespace detail

inline void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = kModelFormatVersion;
    j["sigma"] = bundle.pnn.sigma;
    j["feature_selection"] = detail::selection_to_json(bundle.selection);
    j["normalization"] = {{"min", bundle.normalization.min}, {"max", bundle.normalization.max}};
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < bundle.pnn.class_count(); ++c) {
        nlohmann::json jc;
        jc["name"] = c < bundle.pnn.class_names.size() ? bundle.pnn.class_names[c]
                                                       : std::to_string(c);
        jc["exemplars"] = bundle.pnn.exemplars[c];
        classes.push_back(std::move(jc));
    }
    j["classes"] = std::move(classes);
    j["checksum"] = detail::checksum_hex(j.dump());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(errc::io_error, "write failed for " + path.string());
}

inline ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::missing_file, path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::corrupt_model, path.string() + ": " + e.what());
    }

    try {
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw Error(errc::version_mismatch,
                        "model format " + std::to_string(version) + ", expected " +
                            std::to_string(kModelFormatVersion));

        const std::string stored = j.at("checksum").get<std::string>();
        nlohmann::json payload = j;
        payload.erase("checksum");
        if (detail::checksum_hex(payload.dump()) != stored)
            throw Error(errc::corrupt_model, path.string() + ": checksum mismatch");

        ModelBundle bundle;
        bundle.selection = detail::selection_from_json(j.at("feature_selection"));
        bundle.normalization.min = j.at("normalization").at("min").get<std::vector<double>>();
        bundle.normalization.max = j.at("normalization").at("max").get<std::vector<double>>();
        bundle.pnn.sigma = j.at("sigma").get<double>();
        for (const auto& jc : j.at("classes")) {
            bundle.pnn.class_names.push_back(jc.at("name").get<std::string>());
            bundle.pnn.exemplars.push_back(
                jc.at("exemplars").get<std::vector<std::vector<double>>>());
        }
        if (bundle.pnn.exemplars.empty())
            throw Error(errc::corrupt_model, path.string() + ": no classes");
        for (const auto& cls : bundle.pnn.exemplars)
            if (cls.empty())
                throw Error(errc::corrupt_model, path.string() + ": class with no exemplars");
        bundle.pnn.dimension = bundle.pnn.exemplars.front().front().size();
        if (bundle.normalization.dimension() != bundle.pnn.dimension)
            throw Error(errc::corrupt_model,
                        path.string() + ": normalization/exemplar dimension mismatch");
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::corrupt_model, path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Training / evaluation
// ---------------------------------------------------------------------------

inline ModelBundle train_bundle(const std::vector<FeatureVector>& train,
                                const FeatureSelection& selection, double sigma,
                                std::vector<std::string> class_names = {}) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    rows.reserve(train.size());
    labels.reserve(train.size());
    for (const auto& v : train) {
        if (!v.class_id)
            throw Error(errc::unknown_class, v.image_id + ": training vector has no class id");
        rows.push_back(v.values);
        labels.push_back(*v.class_id);
    }

    ModelBundle bundle;
    bundle.selection = selection;
    bundle.normalization = fit_normalization(rows);
    for (auto& r : rows) r = apply_normalization(bundle.normalization, r);
    bundle.pnn = train_pnn(rows, labels, sigma, std::move(class_names));
    return bundle;
}

inline ClassScores classify_raw(const ModelBundle& bundle, const std::vector<double>& raw) {
    return classify(bundle.pnn, apply_normalization(bundle.normalization, raw));
}

struct EvaluationReport {
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
    std::vector<std::vector<std::size_t>> confusion; // [actual][predicted]
    std::size_t n_correct = 0; // n_r
    std::size_t n_total = 0;   // n_t
    std::vector<std::string> casualties; // failed test images, counted as wrong
};

/// Classify every test vector against the bundle. Extraction casualties, if
/// any, enter the denominator as misclassifications.
inline EvaluationReport evaluate(const ModelBundle& bundle,
                                 const std::vector<FeatureVector>& test,
                                 const std::vector<ExtractionFailure>& failures = {}) {
    if (test.empty() && failures.empty())
        throw Error(errc::empty_matrix, "no test vectors");

    const std::size_t c = bundle.pnn.class_count();
    EvaluationReport report;
    report.confusion.assign(c, std::vector<std::size_t>(c, 0));
    std::vector<std::size_t> class_total(c, 0), class_correct(c, 0);

    for (const auto& v : test) {
        if (!v.class_id)
            throw Error(errc::unknown_class, v.image_id + ": test vector has no class id");
        const int actual = *v.class_id;
        if (actual < 0 || static_cast<std::size_t>(actual) >= c)
            throw Error(errc::unknown_class,
                        v.image_id + ": class id " + std::to_string(actual) +
                            " outside model's " + std::to_string(c) + " classes");
        const ClassScores scores = classify_raw(bundle, v.values);
        report.confusion[static_cast<std::size_t>(actual)]
                        [static_cast<std::size_t>(scores.predicted)]++;
        class_total[static_cast<std::size_t>(actual)]++;
        if (scores.predicted == actual) {
            class_correct[static_cast<std::size_t>(actual)]++;
            report.n_correct++;
        }
        report.n_total++;
    }
    for (const auto& f : failures) {
        report.casualties.push_back(f.image_id + " (" + f.reason + ")");
        if (f.class_id && *f.class_id >= 0 && static_cast<std::size_t>(*f.class_id) < c)
            class_total[static_cast<std::size_t>(*f.class_id)]++;
        report.n_total++;
    }

    report.accuracy = report.n_total == 0
                          ? 0.0
                          : static_cast<double>(report.n_correct) / report.n_total;
    report.per_class_accuracy.resize(c, 0.0);
    for (std::size_t j = 0; j < c; ++j)
        if (class_total[j] > 0)
            report.per_class_accuracy[j] =
                static_cast<double>(class_correct[j]) / class_total[j];
    return report;
}

// ---------------------------------------------------------------------------
// Ablation runner
// ---------------------------------------------------------------------------

struct AblationRow {
    std::string label;
    FeatureSelection selection;
    EvaluationReport report;
};

/// The standard ladder of feature-set rows, weakest to fullest.
inline std::vector<std::pair<std::string, FeatureSelection>> standard_ablation_rows() {
    FeatureSelection none;
    none.pft = none.geometric = none.color_mean = none.color_std = none.color_skew = false;
    none.color_kurtosis = none.texture = none.vein = false;

    auto with = [&](bool pft, bool geo, bool mean, bool std_, bool skew, bool kurt, bool tex,
                    bool vein) {
        FeatureSelection s = none;
        s.pft = pft;
        s.geometric = geo;
        s.color_mean = mean;
        s.color_std = std_;
        s.color_skew = skew;
        s.color_kurtosis = kurt;
        s.texture = tex;
        s.vein = vein;
        return s;
    };

    return {
        {"pft", with(true, false, false, false, false, false, false, false)},
        {"pft+geo", with(true, true, false, false, false, false, false, false)},
        {"pft+geo+mean", with(true, true, true, false, false, false, false, false)},
        {"pft+geo+mean+std", with(true, true, true, true, false, false, false, false)},
        {"pft+geo+mean+std+skew", with(true, true, true, true, true, false, false, false)},
        {"pft+geo+mean+std+skew+kurt", with(true, true, true, true, true, true, false, false)},
        {"pft+geo+mean+std+skew+kurt+texture",
         with(true, true, true, true, true, true, true, false)},
        {"pft+geo+mean+std+skew+texture", with(true, true, true, true, true, false, true, false)},
        {"pft+geo+texture", with(true, true, false, false, false, false, true, false)},
        {"pft+geo+mean+std+skew+texture+vein",
         with(true, true, true, true, true, false, true, true)},
        {"pft+geo+mean+std+skew+kurt+texture+vein",
         with(true, true, true, true, true, true, true, true)},
    };
}

namespace detail {

// Positions of `wanted` columns inside `all` (every wanted name must exist).
inline std::vector<std::size_t> column_indices(const std::vector<std::string>& all,
                                               const std::vector<std::string>& wanted) {
    std::vector<std::size_t> idx;
    idx.reserve(wanted.size());
    for (const auto& name : wanted) {
        const auto it = std::find(all.begin(), all.end(), name);
        if (it == all.end())
            throw Error(errc::dimension_mismatch, "column `" + name + "` not extracted");
        idx.push_back(static_cast<std::size_t>(it - all.begin()));
    }
    return idx;
}

inline std::vector<FeatureVector> select_columns(const std::vector<FeatureVector>& vectors,
                                                 const std::vector<std::size_t>& idx) {
    std::vector<FeatureVector> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        FeatureVector s;
        s.image_id = v.image_id;
        s.class_id = v.class_id;
        s.values.reserve(idx.size());
        for (std::size_t i : idx) s.values.push_back(v.values[i]);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

/// One shared split, one full extraction pass (all groups on), then each
/// selection re-slices the cached columns and reruns normalization + PNN.
inline std::vector<AblationRow> run_ablation(
    const DatasetManifest& manifest, std::uint64_t seed, double sigma,
    const std::vector<std::pair<std::string, FeatureSelection>>& selections,
    int train_per_class = 40, int test_per_class = 10, unsigned threads = 0,
    const FeatureSelection& base = {}) {
    if (selections.empty()) throw std::invalid_argument("run_ablation: no selections");

    FeatureSelection full = base;
    full.pft = full.geometric = full.color_mean = full.color_std = full.color_skew = true;
    full.color_kurtosis = full.texture = full.vein = true;
    for (const auto& [label, sel] : selections)
        if (!sel.same_parameters(full))
            throw std::invalid_argument("run_ablation: selection `" + label +
                                        "` changes extraction parameters");

    const DatasetSplit split = split_dataset(manifest, train_per_class, test_per_class, seed);
    const ExtractionResult train_x = extract_dataset(split.train, full, threads);
    const ExtractionResult test_x = extract_dataset(split.test, full, threads);
    const auto class_names = manifest.class_names();

    std::vector<AblationRow> rows;
    rows.reserve(selections.size());
    for (const auto& [label, sel] : selections) {
        const auto idx = detail::column_indices(train_x.columns, sel.column_names());
        const auto train_vecs = detail::select_columns(train_x.vectors, idx);
        const auto test_vecs = detail::select_columns(test_x.vectors, idx);
        const ModelBundle bundle = train_bundle(train_vecs, sel, sigma, class_names);
        AblationRow row;
        row.label = label;
        row.selection = sel;
        row.report = evaluate(bundle, test_vecs, test_x.failures);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

inline std::string render_report_text(const EvaluationReport& report,
                                      const std::vector<std::string>& class_names = {}) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "accuracy: %.4f%% (%zu/%zu)\n", report.accuracy * 100.0,
                  report.n_correct, report.n_total);
    out << buf;
    for (std::size_t j = 0; j < report.per_class_accuracy.size(); ++j) {
        const std::string name =
            j < class_names.size() ? class_names[j] : ("class " + std::to_string(j));
        std::snprintf(buf, sizeof(buf), "  %-32s %.4f%%\n", name.c_str(),
                      report.per_class_accuracy[j] * 100.0);
        out << buf;
    }
    if (!report.casualties.empty()) {
        out << "failed images (counted as misclassified):\n";
        for (const auto& c : report.casualties) out << "  " << c << '\n';
    }
    return out.str();
}

inline nlohmann::json report_to_json(const EvaluationReport& report,
                                     const std::vector<std::string>& class_names = {}) {
    nlohmann::json j;
    j["accuracy"] = report.accuracy;
    j["n_correct"] = report.n_correct;
    j["n_total"] = report.n_total;
    j["per_class_accuracy"] = report.per_class_accuracy;
    j["confusion"] = report.confusion;
    j["casualties"] = report.casualties;
    if (!class_names.empty()) j["class_names"] = class_names;
    return j;
}

inline std::string render_ablation_text(const std::vector<AblationRow>& rows) {
    std::ostringstream out;
    out << "feature set                                   accuracy\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-45s %.4f%%\n", row.label.c_str(),
                      row.report.accuracy * 100.0);
        out << buf;
    }
    return out.str();
}

} // namespace leafid
