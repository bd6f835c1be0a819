#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "leafid/errors.hpp"

namespace leafid {

namespace detail {

// Minimal RFC-4180-ish CSV: quoted fields with "" escapes, LF or CRLF rows.
inline std::vector<std::string> split_csv_row(const std::string& line, std::size_t row_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw Error(errc::malformed_row,
                            "row " + std::to_string(row_no) + ": stray quote");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw Error(errc::malformed_row, "row " + std::to_string(row_no) + ": unterminated quote");
    fields.push_back(cur);
    return fields;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Reads logical lines, tolerating CRLF and a UTF-8 BOM on the first line.
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::missing_file, path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lines.empty() && line.size() >= 3 &&
            static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB &&
            static_cast<unsigned char>(line[2]) == 0xBF)
            line.erase(0, 3);
        lines.push_back(line);
    }
    return lines;
}

// splitmix64; used everywhere a seeded, platform-stable stream is needed.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, n) via 128-bit multiply; biased by < 2^-64, stable everywhere.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    return rng.next();
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

} // namespace detail

struct ManifestEntry {
    std::string path;
    int class_id = 0;
    std::string class_name;
    bool operator==(const ManifestEntry&) const = default;
};

/// Image list with class labels. class_ids are contiguous 0..C-1.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    int class_count() const {
        int c = -1;
        for (const auto& e : entries) c = std::max(c, e.class_id);
        return c + 1;
    }

    std::vector<std::string> class_names() const {
        std::vector<std::string> names(static_cast<std::size_t>(class_count()));
        for (const auto& e : entries) names[static_cast<std::size_t>(e.class_id)] = e.class_name;
        return names;
    }
};

struct DatasetSplit {
    std::vector<ManifestEntry> train;
    std::vector<ManifestEntry> test;
    std::uint64_t seed = 0;
};

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    auto lines = detail::read_lines(path);
    if (lines.empty())
        throw Error(errc::malformed_row, "row 1: missing header `path,class_id,class_name`");
    if (lines.front() != "path,class_id,class_name")
        throw Error(errc::malformed_row,
                    "row 1: header must be exactly `path,class_id,class_name`, got `" +
                        lines.front() + "`");

    DatasetManifest m;
    std::map<std::string, std::size_t> seen_paths;
    std::map<int, std::string> names;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row_no = i + 1;
        if (lines[i].empty()) continue; // trailing blank line is fine
        auto fields = detail::split_csv_row(lines[i], row_no);
        if (fields.size() != 3)
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        ManifestEntry e;
        e.path = fields[0];
        try {
            std::size_t pos = 0;
            e.class_id = std::stoi(fields[1], &pos);
            if (pos != fields[1].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": class_id `" + fields[1] +
                            "` is not an integer");
        }
        if (e.class_id < 0)
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": class_id must be >= 0");
        e.class_name = fields[2];

        auto [it, inserted] = seen_paths.emplace(e.path, row_no);
        if (!inserted)
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": duplicate path `" + e.path +
                            "` (first at row " + std::to_string(it->second) + ")");
        auto [nit, fresh] = names.emplace(e.class_id, e.class_name);
        if (!fresh && nit->second != e.class_name)
            throw Error(errc::malformed_row,
                        "row " + std::to_string(row_no) + ": class_id " +
                            std::to_string(e.class_id) + " renamed from `" + nit->second +
                            "` to `" + e.class_name + "`");
        m.entries.push_back(std::move(e));
    }

    // class ids must cover 0..C-1 with no gaps
    if (!names.empty()) {
        int expected = 0;
        for (const auto& [id, name] : names) {
            if (id != expected)
                throw Error(errc::non_contiguous_class_ids,
                            "class ids skip " + std::to_string(expected) + " (found " +
                                std::to_string(id) + ")");
            ++expected;
        }
    }
    return m;
}

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot write " + path.string());
    out << "path,class_id,class_name\n";
    for (const auto& e : m.entries)
        out << detail::csv_escape(e.path) << ',' << e.class_id << ','
            << detail::csv_escape(e.class_name) << '\n';
    if (!out) throw Error(errc::io_error, "write failed for " + path.string());
}

/// Per-class seeded shuffle, then the first train_per_class entries go to
/// train, the next test_per_class to test; any surplus is discarded.
/// Same (manifest, counts, seed) always produces the identical split.
inline DatasetSplit split_dataset(const DatasetManifest& m, int train_per_class,
                                  int test_per_class, std::uint64_t seed) {
    if (train_per_class < 0 || test_per_class < 0)
        throw Error(errc::insufficient_class_size, "per-class counts must be >= 0");

    const int c = m.class_count();
    std::vector<std::vector<ManifestEntry>> by_class(static_cast<std::size_t>(std::max(c, 0)));
    for (const auto& e : m.entries) by_class[static_cast<std::size_t>(e.class_id)].push_back(e);

    DatasetSplit split;
    split.seed = seed;
    for (int k = 0; k < c; ++k) {
        auto& bucket = by_class[static_cast<std::size_t>(k)];
        const std::size_t need = static_cast<std::size_t>(train_per_class) + test_per_class;
        if (bucket.size() < need)
            throw Error(errc::insufficient_class_size,
                        "class `" + bucket.front().class_name + "` has " +
                            std::to_string(bucket.size()) + " entries, needs " +
                            std::to_string(need) + " (" + std::to_string(train_per_class) +
                            " train + " + std::to_string(test_per_class) + " test)");
        detail::SplitMix64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(k)));
        detail::seeded_shuffle(bucket, rng);
        for (int i = 0; i < train_per_class; ++i)
            split.train.push_back(bucket[static_cast<std::size_t>(i)]);
        for (int i = 0; i < test_per_class; ++i)
            split.test.push_back(bucket[static_cast<std::size_t>(train_per_class + i)]);
    }
    return split;
}

} // namespace leafid
