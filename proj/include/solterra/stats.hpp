#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solterra/errors.hpp"
#include "solterra/linalg.hpp"

namespace solterra::stats {

namespace detail {

// Continued-fraction core of the regularized incomplete beta function
// (modified Lentz). Convergence 1e-12, 200-iteration cap.
inline double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-30;
    constexpr double eps = 1e-12;
    constexpr int max_iter = 200;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    return h;  // cap reached; result is still accurate to ~eps for our arguments
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b), via the standard symmetry split.
inline double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw Error(Errc::bad_value, "incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// Two-sided p-value of a Student-t statistic with df degrees of freedom:
/// 2 * (1 - T_df(|t|)) = I_{df/(df+t^2)}(df/2, 1/2).
inline double t_two_sided_p(double t, int df) {
    if (df < 1) throw Error(Errc::bad_value, "t_two_sided_p: df must be >= 1");
    if (!std::isfinite(t)) return 0.0;
    if (t == 0.0) return 1.0;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

/// Pearson r plus its exact small-sample t-test.
struct CorrelationResult {
    double r = 0.0;
    int n = 0;
    double t = 0.0;
    double p = 1.0;
};

inline CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(Errc::length_mismatch, "pearson: |x|=" + std::to_string(x.size()) +
                                               " |y|=" + std::to_string(y.size()));
    const int n = static_cast<int>(x.size());
    if (n < 3) throw Error(Errc::too_few_observations, "pearson: need n >= 3");

    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(Errc::zero_variance, "pearson: constant input sequence");

    CorrelationResult out;
    out.n = n;
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::fabs(out.r) >= 1.0) {
        out.t = std::numeric_limits<double>::infinity() * (out.r > 0 ? 1 : -1);
        out.p = 0.0;
        return out;
    }
    out.t = out.r * std::sqrt((n - 2) / (1.0 - out.r * out.r));
    out.p = t_two_sided_p(out.t, n - 2);
    return out;
}

struct NamedColumn {
    std::string name;
    std::vector<double> values;
};

/// Ordinary least squares fit with intercept.
struct RegressionFit {
    double intercept = 0.0;
    std::vector<std::pair<std::string, double>> slopes;  // predictor order preserved
    int n = 0;
    int k = 0;
    double sse = 0.0;
    double sst = 0.0;
    double s = 0.0;   // residual standard error
    double r2 = 0.0;
    std::vector<double> fitted;
    std::vector<double> residuals;
};

/// Least squares via Householder QR on the intercept-augmented design matrix.
inline RegressionFit ols(std::span<const double> y, const std::vector<NamedColumn>& predictors) {
    const int n = static_cast<int>(y.size());
    const int k = static_cast<int>(predictors.size());
    for (const auto& col : predictors)
        if (static_cast<int>(col.values.size()) != n)
            throw Error(Errc::length_mismatch, "ols: column " + col.name + " has " +
                                                   std::to_string(col.values.size()) +
                                                   " rows, expected " + std::to_string(n));
    if (n <= k + 1)
        throw Error(Errc::too_few_observations,
                    "ols: n=" + std::to_string(n) + " with k=" + std::to_string(k));

    linalg::Matrix design(n, k + 1);
    for (int i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (int j = 0; j < k; ++j) design(i, j + 1) = predictors[j].values[i];
    }
    auto ls = linalg::least_squares(std::move(design), std::vector<double>(y.begin(), y.end()));
    if (ls.deficient_column >= 0) {
        const std::string col =
            ls.deficient_column == 0 ? "(intercept)" : predictors[ls.deficient_column - 1].name;
        throw Error(Errc::rank_deficient, "ols: design matrix rank-deficient at column " + col);
    }

    RegressionFit fit;
    fit.n = n;
    fit.k = k;
    fit.intercept = ls.coef[0];
    for (int j = 0; j < k; ++j) fit.slopes.emplace_back(predictors[j].name, ls.coef[j + 1]);

    fit.fitted.resize(n);
    fit.residuals.resize(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    for (int i = 0; i < n; ++i) {
        double f = fit.intercept;
        for (int j = 0; j < k; ++j) f += ls.coef[j + 1] * predictors[j].values[i];
        fit.fitted[i] = f;
        fit.residuals[i] = y[i] - f;
        fit.sse += fit.residuals[i] * fit.residuals[i];
        fit.sst += (y[i] - my) * (y[i] - my);
    }
    fit.s = std::sqrt(fit.sse / (n - k - 1));
    fit.r2 = fit.sst > 0 ? 1.0 - fit.sse / fit.sst : 0.0;
    return fit;
}

}  // namespace solterra::stats
