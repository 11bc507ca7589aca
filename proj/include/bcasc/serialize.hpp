#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "code.hpp"
#include "errors.hpp"
#include "util.hpp"

namespace bcasc {

using json = nlohmann::json;

/// Shortest exactly round-tripping decimal representation.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json code_to_json(const SphericalCode& code, json metadata = json::object()) {
    json entries = json::array();
    for (int u = 0; u < code.size(); ++u) {
        auto col = code.column(u);
        for (int w = 0; w < code.dim(); ++w)
            entries.push_back(json::array({col[w].real(), col[w].imag()}));
    }
    return json{{"format_version", 1},
                {"m", code.dim()},
                {"n", code.size()},
                {"entries", std::move(entries)},
                {"metadata", std::move(metadata)}};
}

inline SphericalCode code_from_json(const json& j) {
    if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
        throw IoError("unsupported code file format version");
    int m = j.at("m").get<int>();
    int n = j.at("n").get<int>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != m * n)
        throw IoError("entry count does not match declared dimensions");
    SphericalCode code(m, n);
    std::size_t idx = 0;
    for (int u = 0; u < n; ++u) {
        auto col = code.column(u);
        for (int w = 0; w < m; ++w, ++idx)
            col[w] = Complex(entries[idx][0].get<double>(), entries[idx][1].get<double>());
    }
    return code;
}

inline void save_code(const std::string& path, const SphericalCode& code,
                      json metadata = json::object()) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << code_to_json(code, std::move(metadata)).dump(2) << "\n";
    if (!out) throw IoError("failed writing " + path);
}

inline SphericalCode load_code(const std::string& path, json* metadata_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    if (metadata_out && j.contains("metadata")) *metadata_out = j["metadata"];
    return code_from_json(j);
}

/// Minimal CSV: comma separators, '\n' line endings, no quoting (cell values
/// here never contain commas), doubles at 17 significant digits.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path), path_(path) {
        if (!out_) throw IoError("cannot open " + path + " for writing");
    }

    void cell(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
    }
    void cell(const char* s) { cell(std::string(s)); }
    void cell(double v) { cell(format_double(v)); }
    void cell(int v) { cell(std::to_string(v)); }
    void cell(long v) { cell(std::to_string(v)); }
    void cell(std::uint64_t v) { cell(std::to_string(v)); }

    template <typename... Ts>
    void row(const Ts&... vs) {
        (cell(vs), ...);
        end_row();
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing " + path_);
    }

  private:
    std::ofstream out_;
    std::string path_;
    bool first_ = true;
};

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw IoError("cannot parse number: " + s);
    return v;
}

inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for hashing");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    return fnv1a64(bytes.data(), bytes.size());
}

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace bcasc
