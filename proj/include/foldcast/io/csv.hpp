#pragma once

// Long-format CSV: header `unique_id,ds,y[,x1,...]`, unique_id optional.
// Timestamps are opaque ordering tokens.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "foldcast/error.hpp"
#include "foldcast/series.hpp"

namespace foldcast::io {

/// A CSV parse failure with the 1-based line it occurred on.
class CsvError : public DataError {
public:
    enum class Kind { MissingColumn, NonNumeric, DuplicateTimestamp, OutOfOrder, Malformed };

    CsvError(Kind kind, std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

struct CsvOptions {
    /// Identifier used when the file has no unique_id column.
    std::string default_id = "y0";
    std::optional<std::string> frequency;
};

struct Dataset {
    std::vector<TimeSeries> series;
    /// ds tokens, parallel to each series' values.
    std::vector<std::vector<std::string>> timestamps;
    std::optional<std::string> frequency;
    std::string source;
    std::vector<std::string> exog_names;

    std::size_t size() const noexcept { return series.size(); }

    void validate() const {
        std::map<std::string, int> seen;
        for (const auto& s : series) {
            if (seen[s.id]++ > 0) throw DataError("duplicate series identifier '" + s.id + "'");
            s.validate();
        }
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Strict ordering of two timestamps: numerically when both parse as
/// numbers, otherwise lexicographically (ISO-8601 text sorts correctly).
inline bool ds_less(const std::string& a, const std::string& b) {
    const auto na = parse_double(a);
    const auto nb = parse_double(b);
    if (na && nb) return *na < *nb;
    return a < b;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Parses long-format CSV text. `source` names the input in the Dataset.
inline Dataset parse_csv(std::istream& in, const std::string& source = "<stream>", const CsvOptions& options = {}) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) {
            if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            header = detail::split_csv_line(line);
            break;
        }
    }
    if (header.empty()) throw CsvError(CsvError::Kind::MissingColumn, line_no == 0 ? 1 : line_no, "missing header");
    for (auto& h : header) h = std::string(detail::trim(h));

    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    const auto id_col = column("unique_id");
    const auto ds_col = column("ds");
    const auto y_col = column("y");
    if (!y_col) throw CsvError(CsvError::Kind::MissingColumn, line_no, "missing 'y' column");
    if (!ds_col) throw CsvError(CsvError::Kind::MissingColumn, line_no, "missing 'ds' column");

    Dataset ds;
    ds.source = source;
    ds.frequency = options.frequency;
    std::vector<std::size_t> exog_cols;
    for (std::size_t i = *y_col + 1; i < header.size(); ++i) {
        exog_cols.push_back(i);
        ds.exog_names.push_back(header[i]);
    }

    std::map<std::string, std::size_t> index_of;
    std::vector<std::vector<std::vector<double>>> exog_rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw CsvError(CsvError::Kind::Malformed, line_no,
                           "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        }
        const std::string id = id_col ? std::string(detail::trim(fields[*id_col])) : options.default_id;
        const std::string stamp(detail::trim(fields[*ds_col]));
        const auto y = detail::parse_double(fields[*y_col]);
        if (!y) throw CsvError(CsvError::Kind::NonNumeric, line_no, "non-numeric y value '" + fields[*y_col] + "'");

        auto [it, inserted] = index_of.try_emplace(id, ds.series.size());
        if (inserted) {
            ds.series.emplace_back(id, std::vector<double>{});
            ds.timestamps.emplace_back();
            exog_rows.emplace_back();
        }
        const std::size_t s = it->second;
        auto& stamps = ds.timestamps[s];
        if (!stamps.empty()) {
            if (stamps.back() == stamp) {
                throw CsvError(CsvError::Kind::DuplicateTimestamp, line_no,
                               "duplicate timestamp '" + stamp + "' for series '" + id + "'");
            }
            if (!detail::ds_less(stamps.back(), stamp)) {
                // Distinguish an earlier duplicate from a plain ordering error.
                for (const auto& previous : stamps) {
                    if (previous == stamp) {
                        throw CsvError(CsvError::Kind::DuplicateTimestamp, line_no,
                                       "duplicate timestamp '" + stamp + "' for series '" + id + "'");
                    }
                }
                throw CsvError(CsvError::Kind::OutOfOrder, line_no,
                               "timestamp '" + stamp + "' is not after '" + stamps.back() + "' in series '" + id +
                                   "'");
            }
        }
        stamps.push_back(stamp);
        ds.series[s].values.push_back(*y);

        std::vector<double> x;
        x.reserve(exog_cols.size());
        for (std::size_t c : exog_cols) {
            const auto v = detail::parse_double(fields[c]);
            if (!v) {
                throw CsvError(CsvError::Kind::NonNumeric, line_no,
                               "non-numeric value '" + fields[c] + "' in column '" + header[c] + "'");
            }
            x.push_back(*v);
        }
        exog_rows[s].push_back(std::move(x));
    }

    if (!exog_cols.empty()) {
        for (std::size_t s = 0; s < ds.series.size(); ++s) {
            Matrix m(exog_rows[s].size(), exog_cols.size());
            for (std::size_t r = 0; r < exog_rows[s].size(); ++r) {
                for (std::size_t c = 0; c < exog_cols.size(); ++c) m(r, c) = exog_rows[s][r][c];
            }
            ds.series[s].exog = std::move(m);
        }
    }
    ds.validate();
    return ds;
}

inline Dataset ingest_csv(const std::string& path, const CsvOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_csv(in, path, options);
}

/// Writes long format with shortest round-trip number text.
inline void write_csv(std::ostream& out, const Dataset& ds) {
    out << "unique_id,ds,y";
    for (const auto& name : ds.exog_names) out << ',' << name;
    out << '\n';
    for (std::size_t s = 0; s < ds.series.size(); ++s) {
        const auto& series = ds.series[s];
        for (std::size_t t = 0; t < series.size(); ++t) {
            out << series.id << ',';
            if (s < ds.timestamps.size() && t < ds.timestamps[s].size()) {
                out << ds.timestamps[s][t];
            } else {
                out << t;
            }
            out << ',' << detail::format_double(series.values[t]);
            if (series.exog) {
                for (std::size_t c = 0; c < series.exog->cols(); ++c) {
                    out << ',' << detail::format_double((*series.exog)(t, c));
                }
            }
            out << '\n';
        }
    }
}

inline void write_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_csv(out, ds);
}

}  // namespace foldcast::io
