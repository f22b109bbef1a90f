#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solterra/series.hpp"

namespace solterra::io {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

inline std::optional<double> parse_number(const std::string& token) {
    if (token.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

inline std::string loc(const std::filesystem::path& path, std::size_t line_no) {
    return path.string() + ":" + std::to_string(line_no);
}

}  // namespace detail

/// Reads a wide station CSV: header `date,<params...>` with parameter tokens
/// drawn from G,T,H,E,D, then one ISO-dated row per day. Rows may arrive out
/// of date order; duplicates are rejected.
inline std::map<ts::Parameter, ts::DailySeries> parse_station_csv(
    const std::filesystem::path& path, const ts::Station& station) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error(Errc::malformed_header, path.string() + ": empty file");

    const auto header = detail::split_fields(lines[0]);
    if (header.empty() || header[0] != "date")
        throw Error(Errc::malformed_header, detail::loc(path, 1) + ": header must start with 'date'");
    std::vector<ts::Parameter> columns;
    for (std::size_t j = 1; j < header.size(); ++j) {
        const auto param = ts::parse_parameter(header[j]);
        if (!param)
            throw Error(Errc::malformed_header,
                        detail::loc(path, 1) + ": unknown column '" + header[j] + "'");
        for (auto seen : columns)
            if (seen == *param)
                throw Error(Errc::malformed_header,
                            detail::loc(path, 1) + ": duplicate column '" + header[j] + "'");
        columns.push_back(*param);
    }
    if (columns.empty())
        throw Error(Errc::malformed_header, detail::loc(path, 1) + ": no parameter columns");

    struct Row {
        std::size_t line_no;
        ts::Date date;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (detail::trim(lines[i]).empty()) continue;
        const auto fields = detail::split_fields(lines[i]);
        if (fields.size() != header.size())
            throw Error(Errc::non_numeric_value,
                        detail::loc(path, line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        const auto date = ts::parse_date(fields[0]);
        if (!date)
            throw Error(Errc::non_numeric_value,
                        detail::loc(path, line_no) + ": bad date '" + fields[0] + "'");
        Row row{line_no, *date, {}};
        row.values.reserve(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const auto value = detail::parse_number(fields[j + 1]);
            if (!value)
                throw Error(Errc::non_numeric_value,
                            detail::loc(path, line_no) + ": column " +
                                std::string(1, ts::parameter_symbol(columns[j])) + " value '" +
                                fields[j + 1] + "'");
            if (columns[j] == ts::Parameter::H && (*value < 0.0 || *value > 100.0))
                throw Error(Errc::humidity_out_of_range,
                            detail::loc(path, line_no) + ": H=" + fields[j + 1]);
            row.values.push_back(*value);
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw Error(Errc::duplicate_date, detail::loc(path, rows[i].line_no) + ": date " +
                                                  ts::format_date(rows[i].date));

    std::map<ts::Parameter, ts::DailySeries> out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        std::vector<ts::Observation> obs;
        obs.reserve(rows.size());
        for (const auto& row : rows) obs.push_back({row.date, row.values[j]});
        out.emplace(columns[j], ts::DailySeries(station, columns[j], std::move(obs)));
    }
    return out;
}

// --- monthly-means tables ---------------------------------------------------

using MeansRow = std::pair<std::string, std::array<double, 12>>;

inline const std::array<const char*, 12> month_columns = {
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};

/// Writes rows of twelve monthly values at six significant digits,
/// LF-terminated. Byte-stable for identical input.
inline void write_means_csv(const std::filesystem::path& path, const std::vector<MeansRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
    out << "series";
    for (const auto* m : month_columns) out << ',' << m;
    out << '\n';
    char buf[32];
    for (const auto& [label, values] : rows) {
        out << label;
        for (double v : values) {
            std::snprintf(buf, sizeof buf, "%.6g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error(Errc::io_failure, "write failed on " + path.string());
}

inline std::vector<MeansRow> parse_means_csv(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error(Errc::malformed_table, path.string() + ": empty file");
    const auto header = detail::split_fields(lines[0]);
    if (header.size() != 13 || header[0] != "series")
        throw Error(Errc::malformed_table, detail::loc(path, 1) + ": bad means header");
    std::vector<MeansRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const auto fields = detail::split_fields(lines[i]);
        if (fields.size() != 13)
            throw Error(Errc::malformed_table,
                        detail::loc(path, i + 1) + ": row '" + fields[0] + "' has " +
                            std::to_string(fields.size() - 1) + " values, expected 12");
        MeansRow row{fields[0], {}};
        for (int m = 0; m < 12; ++m) {
            const auto value = detail::parse_number(fields[m + 1]);
            if (!value)
                throw Error(Errc::malformed_table, detail::loc(path, i + 1) + ": bad value '" +
                                                       fields[m + 1] + "'");
            row.second[m] = *value;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// --- the published-tables fixture -------------------------------------------

/// The three published monthly-mean tables, as parsed from the shipped
/// fixture: irradiance (actual and forecasted) plus the four terrestrial
/// parameters per station, D,H,E,T order.
struct ReplayTables {
    ts::MonthlyMeans g_actual;
    ts::MonthlyMeans g_forecast;
    struct StationTables {
        ts::Station station;
        std::array<ts::MonthlyMeans, 4> actual;    // D,H,E,T
        std::array<ts::MonthlyMeans, 4> forecast;  // D,H,E,T
    };
    StationTables karachi;
    StationTables jacobabad;
};

inline int predictor_index(ts::Parameter p) {
    switch (p) {
        case ts::Parameter::D: return 0;
        case ts::Parameter::H: return 1;
        case ts::Parameter::E: return 2;
        case ts::Parameter::T: return 3;
        default: return -1;
    }
}

inline constexpr std::array<ts::Parameter, 4> predictor_order{
    ts::Parameter::D, ts::Parameter::H, ts::Parameter::E, ts::Parameter::T};

/// Fixture format: `table,series,jan,...,dec` with table in {10,12,14} and
/// series names G_MA, G_MF, D_MAK, ..., T_MFJ. All 18 rows must be present.
inline ReplayTables parse_paper_tables(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error(Errc::malformed_table, path.string() + ": empty file");
    const auto header = detail::split_fields(lines[0]);
    if (header.size() != 14 || header[0] != "table" || header[1] != "series")
        throw Error(Errc::malformed_table, detail::loc(path, 1) + ": bad fixture header");

    ReplayTables tables;
    tables.karachi.station = ts::Station{"K", "Karachi", {}, {}, true};
    tables.jacobabad.station = ts::Station{"J", "Jacobabad", {}, {}, false};
    std::map<std::string, bool> seen;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const auto fields = detail::split_fields(lines[i]);
        const std::string where = detail::loc(path, i + 1);
        if (fields.size() != 14)
            throw Error(Errc::malformed_table, where + ": row '" +
                                                   (fields.size() > 1 ? fields[1] : "") +
                                                   "' is short: expected 12 values");
        const std::string& series = fields[1];
        std::array<double, 12> values{};
        for (int m = 0; m < 12; ++m) {
            const auto value = detail::parse_number(fields[m + 2]);
            if (!value)
                throw Error(Errc::malformed_table,
                            where + ": bad value '" + fields[m + 2] + "' in row " + series);
            values[m] = *value;
        }
        if (seen[series])
            throw Error(Errc::malformed_table, where + ": duplicate row " + series);
        seen[series] = true;

        auto fill = [&](ts::MonthlyMeans& slot, ts::Parameter p,
                        const std::optional<ts::Station>& st) {
            slot.parameter = p;
            slot.station = st;
            slot.means = values;
            slot.counts.fill(1);
        };
        if (series == "G_MA") {
            fill(tables.g_actual, ts::Parameter::G, std::nullopt);
        } else if (series == "G_MF") {
            fill(tables.g_forecast, ts::Parameter::G, std::nullopt);
        } else if (series.size() == 5 && series[1] == '_' &&
                   (series.substr(2, 2) == "MA" || series.substr(2, 2) == "MF") &&
                   (series[4] == 'K' || series[4] == 'J')) {
            const auto param = ts::parse_parameter(series.substr(0, 1));
            const int idx = param ? predictor_index(*param) : -1;
            if (idx < 0)
                throw Error(Errc::malformed_table, where + ": unknown series " + series);
            auto& station_tables = series[4] == 'K' ? tables.karachi : tables.jacobabad;
            auto& side = series.substr(2, 2) == "MA" ? station_tables.actual
                                                     : station_tables.forecast;
            fill(side[idx], *param, station_tables.station);
        } else {
            throw Error(Errc::malformed_table, where + ": unknown series " + series);
        }
    }

    const char* expected[] = {"G_MA", "G_MF"};
    for (const auto* name : expected)
        if (!seen[name]) throw Error(Errc::malformed_table, path.string() + ": missing row " +
                                                                std::string(name));
    for (char st : {'K', 'J'})
        for (const char* kind : {"MA", "MF"})
            for (auto p : predictor_order) {
                const std::string name =
                    std::string(1, ts::parameter_symbol(p)) + "_" + kind + std::string(1, st);
                if (!seen[name])
                    throw Error(Errc::malformed_table, path.string() + ": missing row " + name);
            }
    return tables;
}

// --- generic numeric table (regress / correlate inputs) ----------------------

struct TableCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // per column

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j] == name) return data[j];
        throw Error(Errc::missing_key, "no column '" + name + "' in table");
    }
};

inline TableCsv parse_table_csv(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error(Errc::malformed_table, path.string() + ": empty file");
    TableCsv table;
    table.columns = detail::split_fields(lines[0]);
    if (table.columns.empty())
        throw Error(Errc::malformed_table, detail::loc(path, 1) + ": empty header");
    table.data.resize(table.columns.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        const auto fields = detail::split_fields(lines[i]);
        if (fields.size() != table.columns.size())
            throw Error(Errc::malformed_table,
                        detail::loc(path, i + 1) + ": expected " +
                            std::to_string(table.columns.size()) + " fields");
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto value = detail::parse_number(fields[j]);
            if (!value)
                throw Error(Errc::non_numeric_value, detail::loc(path, i + 1) + ": column " +
                                                         table.columns[j] + " value '" +
                                                         fields[j] + "'");
            table.data[j].push_back(*value);
        }
    }
    return table;
}

/// One number per line; blank lines skipped.
inline std::vector<double> parse_value_file(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    std::vector<double> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto token = detail::trim(lines[i]);
        if (token.empty()) continue;
        const auto value = detail::parse_number(token);
        if (!value)
            throw Error(Errc::non_numeric_value,
                        detail::loc(path, i + 1) + ": bad value '" + token + "'");
        out.push_back(*value);
    }
    return out;
}

}  // namespace solterra::io
