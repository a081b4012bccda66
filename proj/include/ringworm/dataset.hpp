#pragma once

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ringworm/error.hpp"
#include "ringworm/features.hpp"

namespace ringworm {

struct Dataset {
    std::vector<FeatureVector> samples;

    std::size_t size() const { return samples.size(); }
    std::array<std::size_t, 2> class_counts() const {
        std::array<std::size_t, 2> counts{0, 0};
        for (const auto& s : samples) {
            if (s.label != kNegative && s.label != kPositive)
                throw DataError("dataset: sample without a binary label");
            ++counts[s.label];
        }
        return counts;
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        return used == s.size();
    } catch (...) {
        return false;
    }
}

// %.17g keeps the full double precision so reruns and reloads are bit-exact.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Feature CSV: one row per image, feature columns then a {1,0} label column.
// An optional header row is skipped on read (detected by a non-numeric first
// field).
inline Dataset read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");
    Dataset data;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        double first;
        if (line_no == 1 && !detail::parse_double(fields[0], first)) continue; // header
        if (fields.size() < 2)
            throw DataError("csv: line " + std::to_string(line_no) + " of '" + path +
                            "' has fewer than 2 columns");
        FeatureVector fv;
        fv.values.reserve(fields.size() - 1);
        for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
            double v;
            if (!detail::parse_double(fields[i], v))
                throw DataError("csv: non-numeric value '" + fields[i] + "' at line " +
                                std::to_string(line_no) + " of '" + path + "'");
            fv.values.push_back(v);
        }
        const std::string& lab = fields.back();
        if (lab == "1") fv.label = kPositive;
        else if (lab == "0") fv.label = kNegative;
        else throw DataError("csv: label '" + lab + "' at line " + std::to_string(line_no) +
                             " of '" + path + "' is not 0 or 1");
        if (dim == 0) dim = fv.values.size();
        else if (fv.values.size() != dim)
            throw DataError("csv: line " + std::to_string(line_no) + " of '" + path +
                            "' has " + std::to_string(fv.values.size()) +
                            " features, expected " + std::to_string(dim));
        data.samples.push_back(std::move(fv));
    }
    if (data.samples.empty()) throw DataError("csv: '" + path + "' contains no data rows");
    return data;
}

inline void write_features_csv(const std::string& path, const std::vector<FeatureVector>& rows,
                               bool header = false) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot open '" + path + "' for writing");
    if (header && !rows.empty()) {
        for (std::size_t i = 0; i < rows.front().values.size(); ++i)
            out << "f" << i << ",";
        out << "label\n";
    }
    for (const auto& fv : rows) {
        for (const double v : fv.values) out << detail::format_double(v) << ",";
        out << fv.label << "\n";
    }
    if (!out) throw DataError("csv: write failed for '" + path + "'");
}

// Manifest: headerless CSV of "image path,label" rows. Relative paths are
// resolved against the manifest's directory by the callers.
struct ManifestEntry {
    std::string path;
    int label = kUnlabeled;
};

inline std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("manifest: cannot open '" + path + "'");
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw DataError("manifest: line " + std::to_string(line_no) + " of '" + path +
                            "' is not 'path,label'");
        ManifestEntry e;
        e.path = line.substr(0, comma);
        const std::string lab = line.substr(comma + 1);
        if (lab == "1") e.label = kPositive;
        else if (lab == "0") e.label = kNegative;
        else throw DataError("manifest: label '" + lab + "' at line " + std::to_string(line_no) +
                             " of '" + path + "' is not 0 or 1");
        if (e.path.empty())
            throw DataError("manifest: empty path at line " + std::to_string(line_no) +
                            " of '" + path + "'");
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace ringworm
