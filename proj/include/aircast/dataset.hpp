#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"

namespace aircast {

enum class VarKind { continuous, dichotomous };

struct VariableSpec {
    std::string name;
    VarKind kind = VarKind::continuous;
    std::string unit;
};

/// The ten predictors every model sees: six economic series plus four event dummies.
inline std::vector<VariableSpec> default_schema() {
    return {
        {"airfare", VarKind::continuous, "AUD, real best discount economy fare"},
        {"gdp_pc", VarKind::continuous, "kAUD per capita"},
        {"unemp", VarKind::continuous, "thousands of persons"},
        {"interest", VarKind::continuous, "percent"},
        {"jetfuel", VarKind::continuous, "USD per barrel"},
        {"accom", VarKind::continuous, "thousands of bed spaces"},
        {"d911", VarKind::dichotomous, "indicator"},
        {"dvirgin", VarKind::dichotomous, "indicator"},
        {"dolympics", VarKind::dichotomous, "indicator"},
        {"dcommgames", VarKind::dichotomous, "indicator"},
    };
}

/// Quarterly table: target RPKs plus one predictor column per VariableSpec.
/// Immutable once built; validate() enforces the construction invariants.
struct Dataset {
    std::vector<std::string> quarters;  // labels "YYYYQn", strictly increasing
    std::vector<double> target;         // millions of RPKs per quarter
    Mat predictors;                     // n x p, column j described by specs[j]
    std::vector<VariableSpec> specs;

    std::size_t n_rows() const { return target.size(); }
    std::size_t n_features() const { return specs.size(); }
    std::vector<double> row(std::size_t i) const { return predictors.row(i); }

    void validate() const;
};

inline std::string quarter_label(int year, int q) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04dQ%d", year, q);
    return buf;
}

/// Sequential quarter labels starting at start_year Q1.
inline std::vector<std::string> make_quarters(std::size_t n, int start_year = 2000) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(quarter_label(start_year + static_cast<int>(i / 4),
                                    static_cast<int>(i % 4) + 1));
    return out;
}

namespace detail {

// (year, quarter) key for ordering checks; returns false on malformed labels.
inline bool parse_quarter(const std::string& s, int& year, int& q) {
    if (s.size() < 6 || s[4] != 'Q') return false;
    for (int i = 0; i < 4; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    if (s.size() != 6 || s[5] < '1' || s[5] > '4') return false;
    year = std::stoi(s.substr(0, 4));
    q = s[5] - '0';
    return true;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* p = s.c_str();
    char* end = nullptr;
    out = std::strtod(p, &end);
    if (end == p) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0' && std::isfinite(out);
}

}  // namespace detail

inline void Dataset::validate() const {
    const std::size_t n = target.size();
    if (quarters.size() != n || predictors.rows != n)
        throw DataError("dataset: row count mismatch between quarters, target, predictors");
    if (predictors.cols != specs.size())
        throw DataError("dataset: predictor column count does not match specs");

    std::set<std::string> names;
    for (const auto& s : specs)
        if (!names.insert(s.name).second)
            throw DataError("dataset: duplicate variable name " + s.name);

    int py = 0, pq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int y, q;
        if (!detail::parse_quarter(quarters[i], y, q))
            throw DataError("dataset: malformed quarter label " + quarters[i]);
        if (i > 0 && (y < py || (y == py && q <= pq)))
            throw DataError("dataset: quarters not strictly increasing at " + quarters[i]);
        py = y;
        pq = q;
        if (!std::isfinite(target[i])) throw DataError("dataset: non-finite target value");
        for (std::size_t j = 0; j < specs.size(); ++j) {
            double v = predictors(i, j);
            if (!std::isfinite(v)) throw DataError("dataset: non-finite predictor value");
            if (specs[j].kind == VarKind::dichotomous && v != 0.0 && v != 1.0)
                throw DichotomousOutOfRange(i + 1, j + 3);
        }
    }
}

/// CSV column order is fixed: quarter, rpks, then the schema columns in order.
/// Row/column numbers in errors are 1-based over the physical file.
inline Dataset load_csv(const std::string& path,
                        const std::vector<VariableSpec>& schema = default_schema()) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile(path);
    auto header = detail::split_csv_line(line);

    std::vector<std::string> expect = {"quarter", "rpks"};
    for (const auto& s : schema) expect.push_back(s.name);
    for (std::size_t j = 0; j < expect.size(); ++j)
        if (j >= header.size() || header[j] != expect[j]) throw MissingColumn(expect[j]);
    if (header.size() != expect.size())
        throw DataError("unexpected extra columns in " + path);

    Dataset ds;
    ds.specs = schema;
    std::vector<double> flat;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != expect.size())
            throw DataError("row " + std::to_string(rowno) + ": expected " +
                            std::to_string(expect.size()) + " fields, got " +
                            std::to_string(fields.size()));
        ds.quarters.push_back(fields[0]);
        double v;
        if (!detail::parse_double(fields[1], v)) throw NonNumericCell(rowno, 2);
        ds.target.push_back(v);
        for (std::size_t j = 0; j < schema.size(); ++j) {
            if (!detail::parse_double(fields[j + 2], v)) throw NonNumericCell(rowno, j + 3);
            if (schema[j].kind == VarKind::dichotomous && v != 0.0 && v != 1.0)
                throw DichotomousOutOfRange(rowno, j + 3);
            flat.push_back(v);
        }
    }
    if (ds.target.empty()) throw EmptyFile(path);

    ds.predictors.rows = ds.target.size();
    ds.predictors.cols = schema.size();
    ds.predictors.a = std::move(flat);
    ds.validate();
    return ds;
}

inline void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "quarter,rpks";
    for (const auto& s : ds.specs) out << ',' << s.name;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        out << ds.quarters[i];
        std::snprintf(buf, sizeof buf, "%.17g", ds.target[i]);
        out << ',' << buf;
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.predictors(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

/// Test and tooling helper: build a validated dataset from an in-memory matrix.
inline Dataset make_dataset(Mat predictors, std::vector<double> target,
                            std::vector<VariableSpec> specs, int start_year = 2000) {
    Dataset ds;
    ds.quarters = make_quarters(target.size(), start_year);
    ds.target = std::move(target);
    ds.predictors = std::move(predictors);
    ds.specs = std::move(specs);
    ds.validate();
    return ds;
}

}  // namespace aircast
