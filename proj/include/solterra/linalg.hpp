#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace solterra::linalg {

/// Dense row-major matrix, just large enough for the solver needs here
/// (regression designs and small autocovariance systems).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// A is square and small; returns false on (near-)singularity.
inline bool solve_linear(Matrix a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) return false;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(pivot, k))) pivot = i;
        if (std::fabs(a(pivot, k)) < 1e-300) return false;
        if (pivot != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return true;
}

struct LeastSquares {
    std::vector<double> coef;
    double rss = 0.0;
    int deficient_column = -1;  // -1 when full rank
};

/// Minimum-norm ||Ax - b|| via Householder QR (no pivoting). Rank deficiency
/// is reported through `deficient_column` instead of a throw so callers can
/// attach their own context.
inline LeastSquares least_squares(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows(), n = a.cols();
    LeastSquares out;
    if (m < n || b.size() != m) {
        out.deficient_column = 0;
        return out;
    }
    double max_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) c += a(i, j) * a(i, j);
        max_norm = std::max(max_norm, std::sqrt(c));
    }
    const double tol = 1e-12 * (max_norm > 0 ? max_norm : 1.0);

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm <= tol) {
            out.deficient_column = static_cast<int>(k);
            return out;
        }
        if (a(k, k) > 0) norm = -norm;
        // v = x - norm*e1, normalized so v[k] = 1
        const double vk = a(k, k) - norm;
        for (std::size_t i = k + 1; i < m; ++i) a(i, k) /= vk;
        const double beta = -vk / norm;  // 2 / (v'v) scaled for v[k]=1
        a(k, k) = norm;

        for (std::size_t j = k + 1; j < n; ++j) {
            double s = a(k, j);
            for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
            s *= beta;
            a(k, j) -= s;
            for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= s * a(i, k);
        }
        double s = b[k];
        for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * b[i];
        s *= beta;
        b[k] -= s;
        for (std::size_t i = k + 1; i < m; ++i) b[i] -= s * a(i, k);
    }

    out.coef.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * out.coef[j];
        out.coef[i] = s / a(i, i);
    }
    for (std::size_t i = n; i < m; ++i) out.rss += b[i] * b[i];
    return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace solterra::linalg
