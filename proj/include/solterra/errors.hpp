#pragma once

#include <stdexcept>
#include <string>

namespace solterra {

/// Every failure the library reports, as a stable machine-checkable code.
enum class Errc {
    // series / calendar
    series_too_short,
    unsupported_order,
    missing_month,
    empty_train,
    empty_test,
    // estimation
    singular_design,
    non_causal_model,
    non_invertible_model,
    degenerate_sample_size,
    optimization_diverged,
    no_converged_candidate,
    // statistics
    length_mismatch,
    zero_variance,
    rank_deficient,
    too_few_observations,
    // pv
    non_positive_denominator,
    // ingestion / config / report
    malformed_header,
    duplicate_date,
    non_numeric_value,
    humidity_out_of_range,
    unknown_key,
    missing_key,
    bad_value,
    malformed_table,
    io_failure,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::series_too_short: return "SeriesTooShort";
        case Errc::unsupported_order: return "UnsupportedOrder";
        case Errc::missing_month: return "MissingMonth";
        case Errc::empty_train: return "EmptyTrain";
        case Errc::empty_test: return "EmptyTest";
        case Errc::singular_design: return "SingularDesign";
        case Errc::non_causal_model: return "NonCausalModel";
        case Errc::non_invertible_model: return "NonInvertibleModel";
        case Errc::degenerate_sample_size: return "DegenerateSampleSize";
        case Errc::optimization_diverged: return "OptimizationDiverged";
        case Errc::no_converged_candidate: return "NoConvergedCandidate";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::zero_variance: return "ZeroVariance";
        case Errc::rank_deficient: return "RankDeficient";
        case Errc::too_few_observations: return "TooFewObservations";
        case Errc::non_positive_denominator: return "NonPositiveDenominator";
        case Errc::malformed_header: return "MalformedHeader";
        case Errc::duplicate_date: return "DuplicateDate";
        case Errc::non_numeric_value: return "NonNumericValue";
        case Errc::humidity_out_of_range: return "HumidityOutOfRange";
        case Errc::unknown_key: return "UnknownKey";
        case Errc::missing_key: return "MissingKey";
        case Errc::bad_value: return "BadValue";
        case Errc::malformed_table: return "MalformedTable";
        case Errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace solterra
