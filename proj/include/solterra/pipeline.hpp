#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solterra/arma.hpp"
#include "solterra/config.hpp"
#include "solterra/csv.hpp"
#include "solterra/series.hpp"
#include "solterra/stats.hpp"

namespace solterra::pipeline {

/// Identifies one modeled series: a terrestrial parameter at a station, or
/// the station-independent irradiance (empty station id).
struct SeriesKey {
    std::string station_id;  // empty for G
    ts::Parameter parameter = ts::Parameter::G;

    bool is_global() const { return station_id.empty(); }
};

/// "G" or "D_K" style short tag.
inline std::string series_tag(const SeriesKey& key) {
    if (key.is_global()) return "G";
    return std::string(1, ts::parameter_symbol(key.parameter)) + "_" + key.station_id;
}

/// "G_MA" / "D_MAK" style table row label.
inline std::string series_label(const SeriesKey& key, bool forecast) {
    const std::string kind = forecast ? "MF" : "MA";
    if (key.is_global()) return "G_" + kind;
    return std::string(1, ts::parameter_symbol(key.parameter)) + "_" + kind + key.station_id;
}

struct MonthModel {
    unsigned month = 1;
    int p = 0;
    int q = 0;
    double aicc = 0.0;
};

struct SeriesModels {
    SeriesKey key;
    std::array<MonthModel, 12> months{};
};

struct SeriesMeans {
    SeriesKey key;
    ts::MonthlyMeans actual;
    ts::MonthlyMeans forecast;
};

struct CorrelationRow {
    std::string label;
    stats::CorrelationResult result;
};

struct RegressionRecord {
    std::string station_id;
    bool forecast_predictors = false;
    stats::RegressionFit fit;
};

/// Full study output: per-month chosen orders, monthly means on both sides of
/// the split, the correlation tables, and the four regressions.
struct StudyReport {
    std::vector<SeriesModels> per_month_models;  // empty in replay mode
    std::vector<SeriesMeans> means;              // G first, then station x D,H,E,T
    std::vector<CorrelationRow> ma_vs_mf;
    std::vector<CorrelationRow> g_vs_params_actual;
    std::vector<CorrelationRow> g_vs_params_forecast;
    std::vector<RegressionRecord> regressions;  // per station: actual then forecast predictors
};

namespace detail {

inline std::vector<double> to_vector(const std::array<double, 12>& a) {
    return std::vector<double>(a.begin(), a.end());
}

/// The statistics tail shared by the full run and replay mode: monthly-means
/// correlations and the per-station regressions of actual G.
inline void compute_statistics(StudyReport& report) {
    if (report.means.empty() || !report.means.front().key.is_global())
        throw Error(Errc::malformed_table, "statistics stage needs the G series first");
    const auto& g = report.means.front();
    const auto g_actual = to_vector(g.actual.means);
    const auto g_forecast = to_vector(g.forecast.means);

    report.ma_vs_mf.clear();
    report.g_vs_params_actual.clear();
    report.g_vs_params_forecast.clear();
    report.regressions.clear();

    for (const auto& series : report.means) {
        report.ma_vs_mf.push_back(
            {series_tag(series.key),
             stats::pearson(to_vector(series.actual.means), to_vector(series.forecast.means))});
        if (series.key.is_global()) continue;
        report.g_vs_params_actual.push_back(
            {series_label(series.key, false),
             stats::pearson(g_actual, to_vector(series.actual.means))});
        report.g_vs_params_forecast.push_back(
            {series_label(series.key, true),
             stats::pearson(g_forecast, to_vector(series.forecast.means))});
    }

    std::vector<std::string> station_order;
    for (const auto& series : report.means)
        if (!series.key.is_global() &&
            std::find(station_order.begin(), station_order.end(), series.key.station_id) ==
                station_order.end())
            station_order.push_back(series.key.station_id);

    for (const auto& id : station_order) {
        for (const bool use_forecast : {false, true}) {
            std::vector<stats::NamedColumn> predictors;
            for (auto param : io::predictor_order) {
                for (const auto& series : report.means) {
                    if (series.key.station_id != id || series.key.parameter != param) continue;
                    const auto& side = use_forecast ? series.forecast : series.actual;
                    predictors.push_back(
                        {series_label(series.key, use_forecast), to_vector(side.means)});
                }
            }
            if (predictors.size() != 4)
                throw Error(Errc::missing_key,
                            "station " + id + ": regression needs all of D,H,E,T");
            report.regressions.push_back({id, use_forecast, stats::ols(g_actual, predictors)});
        }
    }
}

inline std::string tag_context(const SeriesKey& key, std::optional<unsigned> month = {}) {
    std::string out = key.is_global() ? "series G" : "station " + key.station_id + " parameter " +
                                                         std::string(1, ts::parameter_symbol(
                                                                            key.parameter));
    if (month) out += " month " + std::to_string(*month);
    return out;
}

}  // namespace detail

/// Runs the whole study: per-month pooling, first differencing, minimum-AICC
/// order selection on the training window, forecasting over the test window,
/// monthly aggregation, then the shared statistics stage. Component errors
/// are re-thrown tagged with (station, parameter, month).
inline StudyReport run_study(const io::StudyConfig& config) {
    // Load all series up front. G may appear in several station files but
    // must carry identical data everywhere; the first copy is kept.
    std::optional<ts::DailySeries> global;
    std::vector<std::pair<SeriesKey, ts::DailySeries>> series_list;

    std::vector<std::map<ts::Parameter, ts::DailySeries>> parsed;
    for (const auto& entry : config.stations)
        parsed.push_back(io::parse_station_csv(entry.file, entry.station));

    for (std::size_t s = 0; s < config.stations.size(); ++s) {
        auto it = parsed[s].find(ts::Parameter::G);
        if (it == parsed[s].end()) continue;
        if (!global) {
            global = it->second;
            continue;
        }
        const auto& a = global->observations();
        const auto& b = it->second.observations();
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i)
            same = a[i].date == b[i].date && a[i].value == b[i].value;
        if (!same)
            throw Error(Errc::bad_value, "станция".size() ? "global irradiance differs between " +
                                                                config.stations[s].station.id +
                                                                " and earlier stations"
                                                          : "");
    }
    if (!global)
        throw Error(Errc::missing_key, "no station file carries the G column");
    series_list.emplace_back(SeriesKey{"", ts::Parameter::G}, *global);

    for (std::size_t s = 0; s < config.stations.size(); ++s) {
        const auto& id = config.stations[s].station.id;
        for (auto param : io::predictor_order) {
            auto it = parsed[s].find(param);
            if (it == parsed[s].end())
                throw Error(Errc::missing_key,
                            "station " + id + " file lacks required column " +
                                std::string(1, ts::parameter_symbol(param)));
            series_list.emplace_back(SeriesKey{id, param}, it->second);
        }
    }

    // Validate the split everywhere before any expensive fitting.
    for (const auto& [key, series] : series_list) {
        bool any_test = false;
        for (const auto& o : series.observations())
            if (config.train_boundary < o.date) {
                any_test = true;
                break;
            }
        if (!any_test)
            throw Error(Errc::empty_test, detail::tag_context(key) +
                                              ": no observations after the train boundary " +
                                              ts::format_date(config.train_boundary));
    }

    StudyReport report;
    arma::SelectOptions fit_options;
    fit_options.enforce_invertibility = config.enforce_invertibility;

    for (const auto& [key, series] : series_list) {
        try {
            auto [train, test] = ts::split_train_test(series, config.train_boundary);
            const ts::DateInterval test_window{test.observations().front().date,
                                               test.observations().back().date};
            const auto actual = ts::monthly_mean(test, test_window);

            const auto train_slices = ts::partition_by_month(train);
            const auto test_slices = ts::partition_by_month(test);

            SeriesModels models;
            models.key = key;
            ts::MonthlyMeans forecast_means;
            forecast_means.parameter = key.parameter;
            if (!key.is_global()) forecast_means.station = series.station();

            for (unsigned m = 0; m < 12; ++m) {
                try {
                    const auto& slice = train_slices[m];
                    const int horizon = static_cast<int>(test_slices[m].values.size());
                    const auto diffed = ts::difference(slice.values, 1);
                    auto [model, selection] =
                        arma::select_order(diffed.values, config.p_max, config.q_max, fit_options);
                    const auto fc = arma::forecast(model, diffed.values, horizon);
                    const auto extended = ts::undifference(diffed, fc.point);

                    double sum = 0.0;
                    for (int h = 0; h < horizon; ++h) sum += extended[extended.size() - horizon + h];
                    forecast_means.means[m] = sum / horizon;
                    forecast_means.counts[m] = horizon;
                    models.months[m] = {m + 1, selection.chosen_p, selection.chosen_q, model.aicc};
                } catch (const Error& e) {
                    throw Error(e.code(), detail::tag_context(key, m + 1) + ": " + e.what());
                }
            }

            report.per_month_models.push_back(std::move(models));
            report.means.push_back({key, actual, forecast_means});
        } catch (const Error& e) {
            throw Error(e.code(), detail::tag_context(key) + ": " + e.what());
        }
    }

    detail::compute_statistics(report);
    return report;
}

/// Replays only the statistics stage from the published monthly-mean tables,
/// bypassing every ARMA step.
inline StudyReport replay_from_tables(const io::ReplayTables& tables) {
    StudyReport report;
    report.means.push_back({SeriesKey{"", ts::Parameter::G}, tables.g_actual, tables.g_forecast});
    for (const auto* station : {&tables.karachi, &tables.jacobabad}) {
        for (auto param : io::predictor_order) {
            const int idx = io::predictor_index(param);
            report.means.push_back({SeriesKey{station->station.id, param},
                                    station->actual[idx], station->forecast[idx]});
        }
    }
    detail::compute_statistics(report);
    return report;
}

// --- report serialization ----------------------------------------------------

namespace detail {

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
    out << body;
    if (!out) throw Error(Errc::io_failure, "write failed on " + path.string());
}

inline std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
    std::string body = "series,r,t,p,n\n";
    for (const auto& row : rows) {
        body += row.label;
        body += ',' + fmt6(row.result.r) + ',' + fmt6(row.result.t) + ',' + fmt6(row.result.p) +
                ',' + std::to_string(row.result.n) + '\n';
    }
    return body;
}

inline std::string regression_summary(const RegressionRecord& record) {
    char buf[64];
    std::string eq = "G_MA = ";
    std::snprintf(buf, sizeof buf, "%.4g", record.fit.intercept);
    eq += buf;
    for (const auto& [name, slope] : record.fit.slopes) {
        std::snprintf(buf, sizeof buf, "%.3g", std::fabs(slope));
        eq += std::string(slope < 0 ? " - " : " + ") + buf + " " + name;
    }
    std::snprintf(buf, sizeof buf, "S = %.5f   R^2 = %.1f%%", record.fit.s,
                  100.0 * record.fit.r2);
    return eq + "\n" + buf + "\n";
}

}  // namespace detail

/// Writes one CSV per table analogue plus a plain-text regression summary.
/// Returns the written paths; byte-identical across repeated calls.
inline std::vector<std::filesystem::path> emit_report(const StudyReport& report,
                                                      const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::io_failure, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<fs::path> manifest;
    auto emit = [&](const fs::path& name, const std::string& body) {
        const fs::path path = dir / name;
        detail::write_text(path, body);
        manifest.push_back(path);
    };

    for (const auto& models : report.per_month_models) {
        std::string body = "month,p,q,aicc\n";
        for (const auto& mm : models.months)
            body += std::to_string(mm.month) + ',' + std::to_string(mm.p) + ',' +
                    std::to_string(mm.q) + ',' + detail::fmt6(mm.aicc) + '\n';
        emit("models_" + series_tag(models.key) + ".csv", body);
    }

    // means: one file for G, one per station (MA rows then MF rows, D,H,E,T)
    {
        std::vector<io::MeansRow> g_rows;
        std::vector<std::string> station_order;
        std::map<std::string, std::vector<io::MeansRow>> station_rows;
        for (const auto& series : report.means) {
            if (series.key.is_global()) {
                g_rows.push_back({series_label(series.key, false), series.actual.means});
                g_rows.push_back({series_label(series.key, true), series.forecast.means});
                continue;
            }
            auto& rows = station_rows[series.key.station_id];
            if (rows.empty()) station_order.push_back(series.key.station_id);
            rows.push_back({series_label(series.key, false), series.actual.means});
        }
        for (const auto& series : report.means)
            if (!series.key.is_global())
                station_rows[series.key.station_id].push_back(
                    {series_label(series.key, true), series.forecast.means});

        if (!g_rows.empty()) {
            const fs::path path = dir / "means_G.csv";
            io::write_means_csv(path, g_rows);
            manifest.push_back(path);
        }
        for (const auto& id : station_order) {
            const fs::path path = dir / ("means_" + id + ".csv");
            io::write_means_csv(path, station_rows[id]);
            manifest.push_back(path);
        }
    }

    // correlations: MA-vs-MF for G, per station, then the two cross tables
    {
        std::vector<CorrelationRow> g_rows;
        std::vector<std::string> station_order;
        std::map<std::string, std::vector<CorrelationRow>> by_station;
        for (std::size_t i = 0; i < report.ma_vs_mf.size(); ++i) {
            const auto& row = report.ma_vs_mf[i];
            const auto& key = report.means[i].key;
            if (key.is_global()) {
                g_rows.push_back(row);
            } else {
                if (!by_station.count(key.station_id)) station_order.push_back(key.station_id);
                by_station[key.station_id].push_back(row);
            }
        }
        emit("corr_ma_mf_G.csv", detail::correlation_csv(g_rows));
        for (const auto& id : station_order)
            emit("corr_ma_mf_" + id + ".csv", detail::correlation_csv(by_station[id]));
        emit("corr_g_actual.csv", detail::correlation_csv(report.g_vs_params_actual));
        emit("corr_g_forecast.csv", detail::correlation_csv(report.g_vs_params_forecast));
    }

    {
        std::string body;
        for (const auto& record : report.regressions) {
            body += "Station " + record.station_id +
                    (record.forecast_predictors ? ", forecasted predictors:\n"
                                                : ", actual predictors:\n");
            body += detail::regression_summary(record);
            body += '\n';
        }
        emit("regressions.txt", body);
    }
    return manifest;
}

}  // namespace solterra::pipeline
