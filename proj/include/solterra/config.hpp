#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "solterra/csv.hpp"
#include "solterra/series.hpp"

namespace solterra::io {

struct StationEntry {
    ts::Station station;
    std::filesystem::path file;
};

/// Everything a full study run needs. Grid bounds are capped at 26, the
/// largest order the source study ever selected.
struct StudyConfig {
    std::vector<StationEntry> stations;  // in first-appearance order
    ts::Date train_boundary{};
    int p_max = 5;
    int q_max = 5;
    bool enforce_invertibility = true;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "report";
};

inline constexpr int max_grid_order = 26;

/// Line-oriented `key = value` configuration with `#` comments.
/// Recognized keys: station.<id>.{file,name,coastal,latitude,longitude},
/// train_boundary, p_max, q_max, enforce_invertibility, seed, output_dir.
inline StudyConfig parse_config(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    StudyConfig config;
    bool have_boundary = false;

    std::vector<std::string> station_order;
    std::map<std::string, StationEntry> stations;

    auto bad = [&](std::size_t line_no, const std::string& msg) {
        return Error(Errc::bad_value, detail::loc(path, line_no) + ": " + msg);
    };
    auto parse_bool = [&](const std::string& v, std::size_t line_no) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw bad(line_no, "expected boolean, got '" + v + "'");
    };
    auto parse_int = [&](const std::string& v, std::size_t line_no) {
        const auto n = detail::parse_number(v);
        if (!n || *n != static_cast<long long>(*n)) throw bad(line_no, "expected integer, got '" + v + "'");
        return static_cast<long long>(*n);
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::bad_value, detail::loc(path, line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));

        if (key.rfind("station.", 0) == 0) {
            const auto rest = key.substr(8);
            const auto dot = rest.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size())
                throw Error(Errc::unknown_key, detail::loc(path, line_no) + ": '" + key + "'");
            const std::string id = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            if (!stations.count(id)) {
                station_order.push_back(id);
                stations[id].station.id = id;
                stations[id].station.name = id;
            }
            auto& entry = stations[id];
            if (field == "file") {
                entry.file = value;
            } else if (field == "name") {
                entry.station.name = value;
            } else if (field == "coastal") {
                entry.station.coastal = parse_bool(value, line_no);
            } else if (field == "latitude") {
                const auto n = detail::parse_number(value);
                if (!n) throw bad(line_no, "expected number, got '" + value + "'");
                entry.station.latitude = *n;
            } else if (field == "longitude") {
                const auto n = detail::parse_number(value);
                if (!n) throw bad(line_no, "expected number, got '" + value + "'");
                entry.station.longitude = *n;
            } else {
                throw Error(Errc::unknown_key, detail::loc(path, line_no) + ": '" + key + "'");
            }
            continue;
        }

        if (key == "train_boundary") {
            const auto date = ts::parse_date(value);
            if (!date) throw bad(line_no, "expected ISO date, got '" + value + "'");
            config.train_boundary = *date;
            have_boundary = true;
        } else if (key == "p_max" || key == "q_max") {
            const long long n = parse_int(value, line_no);
            if (n < 0 || n > max_grid_order)
                throw bad(line_no, key + " must be in [0, " + std::to_string(max_grid_order) +
                                       "], got " + value);
            (key == "p_max" ? config.p_max : config.q_max) = static_cast<int>(n);
        } else if (key == "enforce_invertibility") {
            config.enforce_invertibility = parse_bool(value, line_no);
        } else if (key == "seed") {
            const long long n = parse_int(value, line_no);
            if (n < 0) throw bad(line_no, "seed must be >= 0");
            config.seed = static_cast<std::uint64_t>(n);
        } else if (key == "output_dir") {
            if (value.empty()) throw bad(line_no, "output_dir must be nonempty");
            config.output_dir = value;
        } else {
            throw Error(Errc::unknown_key, detail::loc(path, line_no) + ": '" + key + "'");
        }
    }

    if (!have_boundary)
        throw Error(Errc::missing_key, path.string() + ": train_boundary is required");
    if (station_order.empty())
        throw Error(Errc::missing_key, path.string() + ": at least one station.<id>.file is required");
    for (const auto& id : station_order) {
        auto& entry = stations[id];
        if (entry.file.empty())
            throw Error(Errc::missing_key, path.string() + ": station." + id + ".file is required");
        validate_station(entry.station);
        config.stations.push_back(std::move(entry));
    }
    return config;
}

}  // namespace solterra::io
