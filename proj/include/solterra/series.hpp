#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solterra/calendar.hpp"
#include "solterra/errors.hpp"

namespace solterra::ts {

/// Observation site. Coordinates are optional metadata with no computational role.
struct Station {
    std::string id;
    std::string name;
    std::optional<double> latitude;
    std::optional<double> longitude;
    bool coastal = false;
};

inline void validate_station(const Station& s) {
    if (s.id.empty()) throw Error(Errc::bad_value, "station id must be nonempty");
    if (s.latitude && (*s.latitude < -90.0 || *s.latitude > 90.0))
        throw Error(Errc::bad_value, "station " + s.id + ": latitude out of [-90, 90]");
    if (s.longitude && (*s.longitude < -180.0 || *s.longitude > 180.0))
        throw Error(Errc::bad_value, "station " + s.id + ": longitude out of [-180, 180]");
}

/// The five observed quantities: global solar irradiance plus the four
/// terrestrial predictors.
enum class Parameter { G, T, H, E, D };

inline constexpr std::array<Parameter, 5> all_parameters{Parameter::G, Parameter::T, Parameter::H,
                                                         Parameter::E, Parameter::D};

inline char parameter_symbol(Parameter p) {
    switch (p) {
        case Parameter::G: return 'G';
        case Parameter::T: return 'T';
        case Parameter::H: return 'H';
        case Parameter::E: return 'E';
        case Parameter::D: return 'D';
    }
    return '?';
}

inline const char* parameter_name(Parameter p) {
    switch (p) {
        case Parameter::G: return "global solar irradiance";
        case Parameter::T: return "average temperature";
        case Parameter::H: return "relative humidity";
        case Parameter::E: return "earth skin temperature";
        case Parameter::D: return "dew/frost point";
    }
    return "?";
}

/// Display unit. Irradiance is deliberately unit-agnostic: the source data
/// never declares one.
inline const char* parameter_unit(Parameter p) {
    switch (p) {
        case Parameter::G: return "a.u.";
        case Parameter::H: return "%";
        case Parameter::T:
        case Parameter::E:
        case Parameter::D: return "degC";
    }
    return "";
}

inline std::optional<Parameter> parse_parameter(std::string_view token) {
    if (token.size() != 1) return std::nullopt;
    switch (token[0]) {
        case 'G': return Parameter::G;
        case 'T': return Parameter::T;
        case 'H': return Parameter::H;
        case 'E': return Parameter::E;
        case 'D': return Parameter::D;
        default: return std::nullopt;
    }
}

struct Observation {
    Date date;
    double value;
};

/// Date-ordered daily observations of one parameter at one station.
/// Construction validates: strictly increasing dates, finite values, and
/// humidity confined to [0, 100]. Immutable afterwards.
class DailySeries {
public:
    DailySeries(Station station, Parameter parameter, std::vector<Observation> observations)
        : station_(std::move(station)), parameter_(parameter), observations_(std::move(observations)) {
        validate_station(station_);
        for (std::size_t i = 0; i < observations_.size(); ++i) {
            const auto& o = observations_[i];
            if (!std::isfinite(o.value))
                throw Error(Errc::non_numeric_value,
                            "non-finite value at " + format_date(o.date));
            if (parameter_ == Parameter::H && (o.value < 0.0 || o.value > 100.0))
                throw Error(Errc::humidity_out_of_range,
                            "humidity " + std::to_string(o.value) + " at " + format_date(o.date));
            if (i > 0 && !(observations_[i - 1].date < o.date))
                throw Error(Errc::duplicate_date,
                            "dates not strictly increasing at " + format_date(o.date));
        }
    }

    const Station& station() const { return station_; }
    Parameter parameter() const { return parameter_; }
    const std::vector<Observation>& observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }
    bool empty() const { return observations_.empty(); }

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(observations_.size());
        for (const auto& o : observations_) v.push_back(o.value);
        return v;
    }

private:
    Station station_;
    Parameter parameter_;
    std::vector<Observation> observations_;
};

/// All observations of one calendar month, pooled across years in date order.
struct MonthSlice {
    unsigned month = 1;  // 1..12
    std::vector<double> values;
    std::vector<Date> source_dates;
};

/// Result of d-fold differencing; `anchors` keeps the d leading originals so
/// the transform stays invertible.
struct DifferencedSeries {
    unsigned order = 0;
    std::vector<double> values;
    std::vector<double> anchors;
};

/// Twelve calendar-month means plus the observation counts behind them.
struct MonthlyMeans {
    Parameter parameter = Parameter::G;
    std::optional<Station> station;  // absent for the station-independent G
    std::array<double, 12> means{};
    std::array<int, 12> counts{};
};

/// Applies the d-th difference. The first d original values are retained as
/// anchors for later inversion.
inline DifferencedSeries difference(std::span<const double> values, unsigned d) {
    if (values.size() <= d)
        throw Error(Errc::series_too_short, "need more than d=" + std::to_string(d) +
                                                " values, got " + std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v)) throw Error(Errc::non_numeric_value, "non-finite input value");

    DifferencedSeries out;
    out.order = d;
    out.anchors.assign(values.begin(), values.begin() + d);
    std::vector<double> work(values.begin(), values.end());
    for (unsigned k = 0; k < d; ++k) {
        std::vector<double> next(work.size() - 1);
        for (std::size_t i = 0; i + 1 < work.size(); ++i) next[i] = work[i + 1] - work[i];
        work = std::move(next);
    }
    out.values = std::move(work);
    return out;
}

/// Inverts difference() and keeps integrating through `extension` (e.g. a
/// forecast on the differenced scale). Supports d in {0, 1} only.
inline std::vector<double> undifference(const DifferencedSeries& diff,
                                        std::span<const double> extension) {
    if (diff.order > 1)
        throw Error(Errc::unsupported_order,
                    "only d in {0,1} supported, got d=" + std::to_string(diff.order));
    std::vector<double> out;
    out.reserve(diff.anchors.size() + diff.values.size() + extension.size());
    if (diff.order == 0) {
        out.assign(diff.values.begin(), diff.values.end());
        out.insert(out.end(), extension.begin(), extension.end());
        return out;
    }
    out.push_back(diff.anchors.at(0));
    for (double v : diff.values) out.push_back(out.back() + v);
    for (double v : extension) out.push_back(out.back() + v);
    return out;
}

/// Pools the series into one slice per calendar month; empty slices are legal.
inline std::array<MonthSlice, 12> partition_by_month(const DailySeries& series) {
    if (series.empty()) throw Error(Errc::series_too_short, "cannot partition an empty series");
    std::array<MonthSlice, 12> slices;
    for (unsigned m = 0; m < 12; ++m) slices[m].month = m + 1;
    for (const auto& o : series.observations()) {
        auto& slice = slices[month_of(o.date) - 1];
        slice.values.push_back(o.value);
        slice.source_dates.push_back(o.date);
    }
    return slices;
}

/// Splits on a boundary date: train takes everything dated on or before it.
inline std::pair<DailySeries, DailySeries> split_train_test(const DailySeries& series,
                                                            const Date& boundary) {
    std::vector<Observation> train, test;
    for (const auto& o : series.observations()) {
        if (!(boundary < o.date))
            train.push_back(o);
        else
            test.push_back(o);
    }
    if (train.empty())
        throw Error(Errc::empty_train, "no observation on or before " + format_date(boundary));
    return {DailySeries(series.station(), series.parameter(), std::move(train)),
            DailySeries(series.station(), series.parameter(), std::move(test))};
}

/// Per-calendar-month arithmetic means over the in-window observations.
/// Every month must be represented at least once.
inline MonthlyMeans monthly_mean(const DailySeries& series, const DateInterval& window) {
    std::array<double, 12> sums{};
    std::array<int, 12> counts{};
    for (const auto& o : series.observations()) {
        if (!window.contains(o.date)) continue;
        sums[month_of(o.date) - 1] += o.value;
        counts[month_of(o.date) - 1] += 1;
    }
    std::string missing;
    for (unsigned m = 0; m < 12; ++m) {
        if (counts[m] == 0) {
            if (!missing.empty()) missing += ", ";
            missing += month_abbrev(m + 1);
        }
    }
    if (!missing.empty())
        throw Error(Errc::missing_month, "no observations in window for: " + missing);

    MonthlyMeans out;
    out.parameter = series.parameter();
    if (series.parameter() != Parameter::G) out.station = series.station();
    out.counts = counts;
    for (unsigned m = 0; m < 12; ++m) out.means[m] = sums[m] / counts[m];
    return out;
}

}  // namespace solterra::ts
