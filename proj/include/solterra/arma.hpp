#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "solterra/errors.hpp"
#include "solterra/linalg.hpp"
#include "solterra/optimize.hpp"

namespace solterra::arma {

/// Fitted ARMA(p,q) in the convention
///   X_t - mu = phi_1 (X_{t-1}-mu) + ... + Z_t + theta_1 Z_{t-1} + ...,
/// Z_t ~ WN(0, sigma2).
struct ArmaModel {
    int p = 0;
    int q = 0;
    std::vector<double> ar;  // phi_1..phi_p
    std::vector<double> ma;  // theta_1..theta_q
    double mean = 0.0;       // mean of the modeled series
    double sigma2 = 1.0;     // innovation variance
    double loglik = 0.0;     // exact Gaussian log-likelihood
    double aicc = 0.0;
    int n = 0;               // sample size used for fitting
};

enum class ForecastScale { differenced, original };

/// h-step point forecasts with innovation-based mean-square errors.
struct ForecastSeries {
    int horizon = 0;
    std::vector<double> point;
    std::vector<double> mse;
    ForecastScale scale = ForecastScale::differenced;
};

// ---------------------------------------------------------------------------
// Causality / invertibility via the Durbin-Levinson bijection between
// coefficient vectors and partial autocorrelations: the polynomial
// 1 - sum c_j z^j has all roots strictly outside the unit circle exactly when
// every reflection coefficient lies in (-1, 1).
// ---------------------------------------------------------------------------

inline std::vector<double> pacf_to_ar(std::span<const double> pacf) {
    std::vector<double> phi;
    phi.reserve(pacf.size());
    for (std::size_t k = 0; k < pacf.size(); ++k) {
        const double pk = pacf[k];
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - pk * phi[k - 1 - j];
        next[k] = pk;
        phi = std::move(next);
    }
    return phi;
}

inline std::optional<std::vector<double>> ar_to_pacf(std::span<const double> phi) {
    std::vector<double> work(phi.begin(), phi.end());
    std::vector<double> pacf(phi.size());
    for (std::size_t k = phi.size(); k-- > 0;) {
        const double pk = work[k];
        if (!(std::fabs(pk) < 1.0)) return std::nullopt;
        pacf[k] = pk;
        std::vector<double> prev(k);
        const double denom = 1.0 - pk * pk;
        for (std::size_t j = 0; j < k; ++j) prev[j] = (work[j] + pk * work[k - 1 - j]) / denom;
        work = std::move(prev);
    }
    return pacf;
}

/// All roots of 1 - sum phi_j z^j strictly outside the unit circle?
inline bool is_causal(std::span<const double> phi) { return ar_to_pacf(phi).has_value(); }

/// All roots of 1 + sum theta_j z^j strictly outside the unit circle?
inline bool is_invertible(std::span<const double> theta) {
    std::vector<double> negated(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) negated[j] = -theta[j];
    return is_causal(negated);
}

/// MA(inf) weights: psi_0 = 1, psi_j = theta_j + sum_k phi_k psi_{j-k}.
inline std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta,
                                       int count) {
    std::vector<double> psi(std::max(count, 1), 0.0);
    psi[0] = 1.0;
    const int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
    for (int j = 1; j < count; ++j) {
        double s = j <= q ? theta[j - 1] : 0.0;
        for (int k = 1; k <= std::min(j, p); ++k) s += phi[k - 1] * psi[j - k];
        psi[j] = s;
    }
    return psi;
}

/// Autocovariance gamma(0..max_lag) of a causal ARMA with unit innovation
/// variance: the first p+1 values solve a small linear system built from the
/// MA(inf) expansion, the rest follow recursively.
inline std::vector<double> autocovariance_unit(std::span<const double> phi,
                                               std::span<const double> theta, int max_lag) {
    const int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
    const auto psi = psi_weights(phi, theta, q + 1);
    auto theta_at = [&](int j) { return j == 0 ? 1.0 : (j <= q ? theta[j - 1] : 0.0); };

    linalg::Matrix a(p + 1, p + 1);
    std::vector<double> rhs(p + 1, 0.0);
    for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= p; ++j) {
            const double c = j == 0 ? 1.0 : -phi[j - 1];
            a(i, std::abs(i - j)) += c;
        }
        for (int j = i; j <= q; ++j) rhs[i] += theta_at(j) * psi[j - i];
    }
    std::vector<double> head;
    if (!linalg::solve_linear(std::move(a), std::move(rhs), head))
        throw Error(Errc::non_causal_model, "autocovariance system is singular");

    std::vector<double> gamma(max_lag + 1, 0.0);
    for (int k = 0; k <= std::min(p, max_lag); ++k) gamma[k] = head[k];
    for (int k = p + 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (int j = 1; j <= p; ++j) s += phi[j - 1] * gamma[k - j];
        for (int j = k; j <= q; ++j) s += theta_at(j) * psi[j - k];
        gamma[k] = s;
    }
    return gamma;
}

namespace detail {

// Autocovariance kappa(i,j) of the AR-filtered auxiliary process (indices
// 1-based), already scaled by 1/sigma2. gamma must cover lags 0..m.
struct Kappa {
    std::span<const double> phi, theta, gamma;
    int m;

    double operator()(int i, int j) const {
        const int lo = std::min(i, j), hi = std::max(i, j), lag = hi - lo;
        const int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
        if (hi <= m) return gamma[lag];
        if (lo > m) {
            double s = 0.0;
            for (int r = 0; r <= q; ++r) {
                const double t1 = r == 0 ? 1.0 : theta[r - 1];
                const int rr = r + lag;
                const double t2 = rr == 0 ? 1.0 : (rr <= q ? theta[rr - 1] : 0.0);
                s += t1 * t2;
            }
            return s;
        }
        if (hi <= 2 * m) {
            double s = gamma[lag];
            for (int r = 1; r <= p; ++r) s -= phi[r - 1] * gamma[std::abs(r - lag)];
            return s;
        }
        return 0.0;
    }
};

struct InnovationsRun {
    std::vector<double> xhat;  // one-step predictors of the centered data, then forecasts
    std::vector<double> r;     // scaled one-step MSEs: v_t = sigma2 * r[t]
    double weighted_sse = 0.0; // sum over the data of (x_t - xhat_t)^2 / r[t]
    double log_r_sum = 0.0;    // sum over the data of ln r[t]
};

// One-step innovations recursion over `x` (already centered), optionally
// extended `extra` steps past the end for forecasting.
inline InnovationsRun run_innovations(std::span<const double> phi, std::span<const double> theta,
                                      std::span<const double> gamma, std::span<const double> x,
                                      int extra) {
    const int n = static_cast<int>(x.size());
    const int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
    const int m = std::max(p, q);
    const int width = std::max({q, m - 1, 1});
    const int total = n + extra;
    const Kappa kappa{phi, theta, gamma, m};

    std::vector<double> thetas(static_cast<std::size_t>(total) * width, 0.0);
    auto th = [&](int row, int col) -> double& {
        return thetas[static_cast<std::size_t>(row) * width + col];
    };

    InnovationsRun run;
    run.r.assign(total + 1, 0.0);
    run.r[0] = kappa(1, 1);
    for (int step = 1; step <= total; ++step) {
        const int lo = std::max(step - width, 0);
        for (int k = lo; k < step; ++k) {
            double s = kappa(step + 1, k + 1);
            for (int j = lo; j < k; ++j) {
                const double t1 = (k - j - 1) < width ? th(k - 1, k - j - 1) : 0.0;
                s -= t1 * th(step - 1, step - j - 1) * run.r[j];
            }
            th(step - 1, step - k - 1) = s / run.r[k];
        }
        double v = kappa(step + 1, step + 1);
        for (int j = lo; j < step; ++j) {
            const double t = th(step - 1, step - j - 1);
            v -= t * t * run.r[j];
        }
        run.r[step] = v;
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(Errc::non_causal_model, "innovations variance not positive");
    }

    run.xhat.assign(total, 0.0);
    for (int t = 1; t < n; ++t) {
        double s = 0.0;
        if (t < m) {
            for (int j = 1; j <= std::min(t, width); ++j)
                s += th(t - 1, j - 1) * (x[t - j] - run.xhat[t - j]);
        } else {
            for (int j = 1; j <= p; ++j) s += phi[j - 1] * x[t - j];
            for (int j = 1; j <= width; ++j) s += th(t - 1, j - 1) * (x[t - j] - run.xhat[t - j]);
        }
        run.xhat[t] = s;
    }
    for (int t = 0; t < n; ++t) {
        const double resid = x[t] - run.xhat[t];
        run.weighted_sse += resid * resid / run.r[t];
        run.log_r_sum += std::log(run.r[t]);
    }

    // h-step predictors past the data, reusing the same recursion state
    for (int h = 1; h <= extra; ++h) {
        const int t = n + h - 1;
        double s = 0.0;
        for (int i = 1; i <= p; ++i) {
            const int idx = t - i;
            s += phi[i - 1] * (idx < n ? x[idx] : run.xhat[idx]);
        }
        for (int j = h; j <= width; ++j) s += th(t - 1, j - 1) * (x[t - j] - run.xhat[t - j]);
        run.xhat[t] = s;
    }
    return run;
}

inline std::vector<double> center(std::span<const double> values, double mean) {
    std::vector<double> x(values.begin(), values.end());
    for (double& v : x) v -= mean;
    return x;
}

// Likelihood machinery that demands causality only: the Gaussian likelihood
// exists for any MA polynomial.
inline InnovationsRun innovations_for(const std::vector<double>& phi,
                                      const std::vector<double>& theta,
                                      std::span<const double> centered, int extra = 0) {
    if (!is_causal(phi))
        throw Error(Errc::non_causal_model, "AR polynomial has roots inside the unit circle");
    const int m = static_cast<int>(std::max(phi.size(), theta.size()));
    const auto gamma = autocovariance_unit(phi, theta, m);
    return run_innovations(phi, theta, gamma, centered, extra);
}

inline double loglik_from_run(const InnovationsRun& run, int n, double sigma2) {
    return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * run.log_r_sum -
           run.weighted_sse / (2.0 * sigma2);
}

// Dampens coefficients until the polynomial 1 - sum c_j z^j is causal;
// phi_j -> phi_j * c^j pushes every root outward.
inline void dampen_into_region(std::vector<double>& coef) {
    for (int iter = 0; iter < 400 && !is_causal(coef); ++iter) {
        double factor = 0.98;
        for (auto& c : coef) {
            c *= factor;
            factor *= 0.98;
        }
    }
}

inline void dampen_ma_into_region(std::vector<double>& theta) {
    std::vector<double> neg(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) neg[j] = -theta[j];
    dampen_into_region(neg);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = -neg[j];
}

}  // namespace detail

/// Bias-corrected Akaike criterion: -2 loglik + 2(p+q+1) n / (n-p-q-2).
inline double aicc(double loglik, int p, int q, int n) {
    if (n - p - q - 2 <= 0)
        throw Error(Errc::degenerate_sample_size,
                    "aicc: n-p-q-2 must be positive, got n=" + std::to_string(n) +
                        " p=" + std::to_string(p) + " q=" + std::to_string(q));
    return -2.0 * loglik + 2.0 * (p + q + 1.0) * n / (n - p - q - 2.0);
}

/// Exact Gaussian log-likelihood of `values` under the model, computed with
/// the innovations one-step predictors. Deterministic.
inline double gaussian_loglik(const ArmaModel& model, std::span<const double> values) {
    if (!is_causal(model.ar))
        throw Error(Errc::non_causal_model, "gaussian_loglik: model is not causal");
    if (!is_invertible(model.ma))
        throw Error(Errc::non_invertible_model, "gaussian_loglik: model is not invertible");
    if (!(model.sigma2 > 0.0)) throw Error(Errc::bad_value, "gaussian_loglik: sigma2 <= 0");
    const auto x = detail::center(values, model.mean);
    const auto run = detail::innovations_for(model.ar, model.ma, x);
    return detail::loglik_from_run(run, static_cast<int>(values.size()), model.sigma2);
}

/// Hannan-Rissanen initial estimate: a long autoregression supplies residual
/// proxies, then one least-squares pass regresses the series on its own lags
/// and the lagged residuals. Estimates landing outside the causal/invertible
/// region are dampened back inside before the likelihood is evaluated.
inline ArmaModel hannan_rissanen(std::span<const double> values, int p, int q) {
    const int n = static_cast<int>(values.size());
    if (p < 0 || q < 0) throw Error(Errc::bad_value, "hannan_rissanen: negative order");
    if (n < 20 + 2 * (p + q))
        throw Error(Errc::series_too_short, "hannan_rissanen: need n >= " +
                                                std::to_string(20 + 2 * (p + q)) + ", got " +
                                                std::to_string(n));

    ArmaModel model;
    model.p = p;
    model.q = q;
    model.n = n;
    model.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    const auto x = detail::center(values, model.mean);

    if (p == 0 && q == 0) {
        double ss = 0.0;
        for (double v : x) ss += v * v;
        model.sigma2 = ss / n;
        if (!(model.sigma2 > 0.0))
            throw Error(Errc::zero_variance, "hannan_rissanen: constant series");
        model.loglik = gaussian_loglik(model, values);
        model.aicc = aicc(model.loglik, 0, 0, n);
        return model;
    }

    std::vector<double> ehat(n, 0.0);
    int first_row = p;
    if (q > 0) {
        // Yule-Walker long AR via Durbin-Levinson on the biased sample ACVF
        const int m_long = std::max(1, std::min(std::max(20, p + q + 10), n / 4));
        std::vector<double> acvf(m_long + 1, 0.0);
        for (int lag = 0; lag <= m_long; ++lag) {
            double s = 0.0;
            for (int t = lag; t < n; ++t) s += x[t] * x[t - lag];
            acvf[lag] = s / n;
        }
        if (!(acvf[0] > 0.0)) throw Error(Errc::zero_variance, "hannan_rissanen: constant series");

        std::vector<double> a;  // long-AR coefficients
        double v = acvf[0];
        for (int k = 1; k <= m_long; ++k) {
            double acc = acvf[k];
            for (int j = 1; j < k; ++j) acc -= a[j - 1] * acvf[k - j];
            double refl = acc / v;
            refl = std::clamp(refl, -0.999, 0.999);
            std::vector<double> next(k);
            for (int j = 0; j + 1 < k; ++j) next[j] = a[j] - refl * a[k - 2 - j];
            next[k - 1] = refl;
            a = std::move(next);
            v *= (1.0 - refl * refl);
        }
        for (int t = m_long; t < n; ++t) {
            double s = x[t];
            for (int j = 1; j <= m_long; ++j) s -= a[j - 1] * x[t - j];
            ehat[t] = s;
        }
        first_row = m_long + std::max(p, q);
    }

    const int rows = n - first_row;
    if (rows <= p + q)
        throw Error(Errc::series_too_short, "hannan_rissanen: only " + std::to_string(rows) +
                                                " regression rows for " + std::to_string(p + q) +
                                                " coefficients");
    linalg::Matrix design(rows, p + q);
    std::vector<double> rhs(rows);
    for (int i = 0; i < rows; ++i) {
        const int t = first_row + i;
        rhs[i] = x[t];
        for (int j = 1; j <= p; ++j) design(i, j - 1) = x[t - j];
        for (int j = 1; j <= q; ++j) design(i, p + j - 1) = ehat[t - j];
    }
    auto ls = linalg::least_squares(std::move(design), std::move(rhs));
    if (ls.deficient_column >= 0)
        throw Error(Errc::singular_design,
                    "hannan_rissanen: rank-deficient regression at column " +
                        std::to_string(ls.deficient_column));

    model.ar.assign(ls.coef.begin(), ls.coef.begin() + p);
    model.ma.assign(ls.coef.begin() + p, ls.coef.end());
    model.sigma2 = ls.rss / rows;
    if (!(model.sigma2 > 0.0)) model.sigma2 = 1e-12;

    detail::dampen_into_region(model.ar);
    detail::dampen_ma_into_region(model.ma);
    if (!is_causal(model.ar) || !is_invertible(model.ma))
        throw Error(Errc::non_causal_model, "hannan_rissanen: projection failed");

    const auto run = detail::innovations_for(model.ar, model.ma, x);
    model.loglik = detail::loglik_from_run(run, n, model.sigma2);
    model.aicc = aicc(model.loglik, p, q, n);
    return model;
}

struct FitOptions {
    bool enforce_invertibility = true;
    int max_iterations = 500;
};

/// Quasi-Newton maximization of the exact innovations likelihood, with the
/// innovation variance profiled out. The AR side is optimized through the
/// tanh/partial-autocorrelation bijection so causality can never be lost;
/// the MA side uses the same map while invertibility enforcement is on.
inline ArmaModel refine_mle(const ArmaModel& initial, std::span<const double> values,
                            const FitOptions& options = {}) {
    const int p = initial.p, q = initial.q;
    const int n = static_cast<int>(values.size());
    if (n != initial.n)
        throw Error(Errc::length_mismatch, "refine_mle: model fitted on n=" +
                                               std::to_string(initial.n) + ", got " +
                                               std::to_string(n));
    if (p == 0 && q == 0) return initial;

    const auto x = detail::center(values, initial.mean);
    const double clamp_in = 1.0 - 1e-6;   // keep atanh finite at the start
    const double clamp_out = 1.0 - 1e-8;  // keep decoded roots strictly outside

    auto encode_side = [&](std::span<const double> coef, bool negate) {
        std::vector<double> c(coef.begin(), coef.end());
        if (negate)
            for (auto& v : c) v = -v;
        auto pacf = ar_to_pacf(c);
        if (!pacf)
            throw Error(Errc::non_causal_model, "refine_mle: initial estimate outside region");
        std::vector<double> u(pacf->size());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = std::atanh(std::clamp((*pacf)[i], -clamp_in, clamp_in));
        return u;
    };

    const bool transform_ma = options.enforce_invertibility;
    std::vector<double> u0 = encode_side(initial.ar, false);
    if (transform_ma) {
        auto uq = encode_side(initial.ma, true);
        u0.insert(u0.end(), uq.begin(), uq.end());
    } else {
        u0.insert(u0.end(), initial.ma.begin(), initial.ma.end());
    }

    auto decode = [&](std::span<const double> u, std::vector<double>& phi,
                      std::vector<double>& theta) {
        std::vector<double> pac(p);
        for (int i = 0; i < p; ++i) pac[i] = std::clamp(std::tanh(u[i]), -clamp_out, clamp_out);
        phi = pacf_to_ar(pac);
        if (transform_ma) {
            std::vector<double> pacq(q);
            for (int j = 0; j < q; ++j)
                pacq[j] = std::clamp(std::tanh(u[p + j]), -clamp_out, clamp_out);
            theta = pacf_to_ar(pacq);
            for (auto& v : theta) v = -v;
        } else {
            theta.assign(u.begin() + p, u.end());
        }
    };

    auto objective = [&](std::span<const double> u) -> double {
        std::vector<double> phi, theta;
        decode(u, phi, theta);
        try {
            const auto run = detail::innovations_for(phi, theta, x);
            const double sigma2 = run.weighted_sse / n;
            if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return 1e300;
            const double value =
                0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) + 0.5 * run.log_r_sum + 0.5 * n;
            return std::isfinite(value) ? value : 1e300;
        } catch (const Error&) {
            return 1e300;
        }
    };

    opt::MinimizeOptions mopts;
    mopts.max_iterations = options.max_iterations;
    auto result = opt::minimize_bfgs(objective, std::move(u0), mopts);
    if (!result.converged)
        throw Error(Errc::optimization_diverged,
                    "refine_mle: no convergence within " + std::to_string(options.max_iterations) +
                        " iterations for ARMA(" + std::to_string(p) + "," + std::to_string(q) + ")");

    ArmaModel model;
    model.p = p;
    model.q = q;
    model.n = n;
    model.mean = initial.mean;
    decode(result.x, model.ar, model.ma);
    if (options.enforce_invertibility && (!is_causal(model.ar) || !is_invertible(model.ma)))
        throw Error(Errc::non_invertible_model, "refine_mle: fit landed on the unit circle");

    const auto run = detail::innovations_for(model.ar, model.ma, x);
    model.sigma2 = run.weighted_sse / n;
    if (!(model.sigma2 > 0.0))
        throw Error(Errc::zero_variance, "refine_mle: degenerate innovation variance");
    model.loglik = detail::loglik_from_run(run, n, model.sigma2);
    model.aicc = aicc(model.loglik, p, q, n);
    return model;
}

/// Convenience: Hannan-Rissanen start followed by likelihood refinement.
inline ArmaModel fit(std::span<const double> values, int p, int q, const FitOptions& options = {}) {
    return refine_mle(hannan_rissanen(values, p, q), values, options);
}

struct OrderCandidate {
    int p = 0;
    int q = 0;
    double aicc = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
};

struct OrderSelectionReport {
    int p_max = 0;
    int q_max = 0;
    std::vector<OrderCandidate> candidates;  // row-major over (p, q)
    int chosen_p = 0;
    int chosen_q = 0;
    bool tie_break_applied = false;
};

struct SelectOptions : FitOptions {
    bool parallel = true;
};

/// Fits every order on the grid [0,p_max] x [0,q_max] and keeps the converged
/// candidate with minimum AICC. Ties within 1e-12 go to the smaller p+q, then
/// the smaller p. Candidate fits are independent; the reduction is a fixed
/// scan, so the outcome does not depend on evaluation order.
inline std::pair<ArmaModel, OrderSelectionReport> select_order(std::span<const double> values,
                                                               int p_max, int q_max,
                                                               const SelectOptions& options = {}) {
    if (p_max < 0 || q_max < 0) throw Error(Errc::bad_value, "select_order: negative grid bound");

    OrderSelectionReport report;
    report.p_max = p_max;
    report.q_max = q_max;
    const int count = (p_max + 1) * (q_max + 1);
    report.candidates.resize(count);
    std::vector<std::optional<ArmaModel>> fits(count);

    auto fit_one = [&](int index) {
        const int p = index / (q_max + 1);
        const int q = index % (q_max + 1);
        auto& cand = report.candidates[index];
        cand.p = p;
        cand.q = q;
        try {
            ArmaModel model = fit(values, p, q, options);
            cand.aicc = model.aicc;
            cand.converged = std::isfinite(model.aicc);
            if (cand.converged) fits[index] = std::move(model);
        } catch (const std::exception&) {
            cand.converged = false;
        }
    };

    unsigned workers = options.parallel ? std::thread::hardware_concurrency() : 1;
    workers = std::max(1u, std::min<unsigned>(workers, count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fit_one(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fit_one(i);
            });
        for (auto& t : pool) t.join();
    }

    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : report.candidates)
        if (c.converged && c.aicc < best) best = c.aicc;
    if (!std::isfinite(best))
        throw Error(Errc::no_converged_candidate, "select_order: every candidate fit failed");

    int chosen = -1;
    int tied = 0;
    for (int i = 0; i < count; ++i) {
        const auto& c = report.candidates[i];
        if (!c.converged || c.aicc > best + 1e-12) continue;
        ++tied;
        if (chosen < 0) {
            chosen = i;
            continue;
        }
        const auto& cur = report.candidates[chosen];
        if (c.p + c.q < cur.p + cur.q || (c.p + c.q == cur.p + cur.q && c.p < cur.p)) chosen = i;
    }
    report.tie_break_applied = tied > 1;
    report.chosen_p = report.candidates[chosen].p;
    report.chosen_q = report.candidates[chosen].q;
    return {std::move(*fits[chosen]), std::move(report)};
}

/// Best linear predictor of the next h values on the model's own scale, with
/// the standard psi-weight mean-square errors.
inline ForecastSeries forecast(const ArmaModel& model, std::span<const double> values, int horizon) {
    if (horizon < 1) throw Error(Errc::bad_value, "forecast: horizon must be >= 1");
    if (!is_causal(model.ar))
        throw Error(Errc::non_causal_model, "forecast: model is not causal");
    const int n = static_cast<int>(values.size());
    if (n <= std::max(model.p, model.q))
        throw Error(Errc::series_too_short, "forecast: series shorter than max(p,q)");

    const auto x = detail::center(values, model.mean);
    const auto run = detail::innovations_for(model.ar, model.ma, x, horizon);

    ForecastSeries fc;
    fc.horizon = horizon;
    fc.scale = ForecastScale::differenced;
    fc.point.resize(horizon);
    fc.mse.resize(horizon);
    const auto psi = psi_weights(model.ar, model.ma, horizon);
    double acc = 0.0;
    for (int h = 0; h < horizon; ++h) {
        fc.point[h] = run.xhat[n + h] + model.mean;
        acc += psi[h] * psi[h];
        fc.mse[h] = model.sigma2 * acc;
    }
    return fc;
}

/// Carries a forecast made on first differences back to the original scale,
/// anchored at the last observed original value.
inline ForecastSeries integrate_forecast(const ArmaModel& model, const ForecastSeries& diff,
                                         double last_value) {
    ForecastSeries out;
    out.horizon = diff.horizon;
    out.scale = ForecastScale::original;
    out.point.resize(diff.horizon);
    out.mse.resize(diff.horizon);
    const auto psi = psi_weights(model.ar, model.ma, diff.horizon);
    double level = last_value, acc = 0.0, psi_cum = 0.0;
    for (int h = 0; h < diff.horizon; ++h) {
        level += diff.point[h];
        out.point[h] = level;
        psi_cum += psi[h];
        acc += psi_cum * psi_cum;
        out.mse[h] = model.sigma2 * acc;
    }
    return out;
}

/// Deterministic Gaussian simulation; a burn-in of 10(p+q+1) samples washes
/// out the zero-initialized prehistory.
inline std::vector<double> simulate(const ArmaModel& model, int n, std::uint64_t seed) {
    if (n < 1) throw Error(Errc::bad_value, "simulate: n must be >= 1");
    if (model.sigma2 < 0.0) throw Error(Errc::bad_value, "simulate: sigma2 must be >= 0");
    if (!is_causal(model.ar)) throw Error(Errc::non_causal_model, "simulate: model is not causal");
    if (!is_invertible(model.ma))
        throw Error(Errc::non_invertible_model, "simulate: model is not invertible");

    const int burn = 10 * (model.p + model.q + 1);
    const int total = n + burn;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(model.sigma2));

    std::vector<double> eps(total), x(total);
    for (int t = 0; t < total; ++t) eps[t] = model.sigma2 > 0.0 ? noise(rng) : 0.0;
    for (int t = 0; t < total; ++t) {
        double s = eps[t];
        for (int j = 1; j <= model.q; ++j)
            if (t - j >= 0) s += model.ma[j - 1] * eps[t - j];
        for (int i = 1; i <= model.p; ++i)
            if (t - i >= 0) s += model.ar[i - 1] * x[t - i];
        x[t] = s;
    }
    std::vector<double> out(x.begin() + burn, x.end());
    for (double& v : out) v += model.mean;
    return out;
}

}  // namespace solterra::arma
