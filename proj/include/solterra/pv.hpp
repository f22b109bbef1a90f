#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "solterra/errors.hpp"

namespace solterra::pv {

/// Inputs to the array conversion-efficiency ratio. `electrical_energy` is
/// the quantity the source material calls E; renamed here because this
/// codebase already uses E for earth skin temperature.
struct EfficiencyInputs {
    double electrical_energy = 0.0;   // E_elec >= 0
    double array_area = 0.0;          // A_c > 0
    double irradiance_per_area = 0.0; // H_t > 0, tilted-array irradiance
    double transmissivity = 0.0;      // tau in (0, 1]
};

/// eta = E_elec / (A_c * H_t * tau). Dimensionless when the caller supplies
/// dimensionally consistent energy/area units.
inline double efficiency(const EfficiencyInputs& in) {
    if (in.electrical_energy < 0.0)
        throw Error(Errc::bad_value, "efficiency: electrical energy must be >= 0");
    if (in.array_area <= 0.0 || in.irradiance_per_area <= 0.0 || in.transmissivity <= 0.0)
        throw Error(Errc::non_positive_denominator,
                    "efficiency: array area, irradiance and transmissivity must be > 0");
    if (in.transmissivity > 1.0)
        throw Error(Errc::bad_value, "efficiency: transmissivity must be in (0, 1]");
    return in.electrical_energy / (in.array_area * in.irradiance_per_area * in.transmissivity);
}

/// Element-wise efficiency over an irradiance sequence with fixed numerator.
inline std::vector<double> efficiency_series(double electrical_energy, double array_area,
                                             double transmissivity,
                                             std::span<const double> irradiance) {
    std::vector<double> out;
    out.reserve(irradiance.size());
    for (std::size_t i = 0; i < irradiance.size(); ++i) {
        if (irradiance[i] <= 0.0)
            throw Error(Errc::non_positive_denominator,
                        "efficiency_series: irradiance <= 0 at index " + std::to_string(i));
        out.push_back(efficiency({electrical_energy, array_area, irradiance[i], transmissivity}));
    }
    return out;
}

}  // namespace solterra::pv
