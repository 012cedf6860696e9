#include "restrictml/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace restrictml {

void jacobi_eigen_symmetric(Matrix a, std::vector<double>& values, Matrix& vectors) {
    if (a.rows != a.cols) {
        throw ValueError("jacobi requires a square matrix");
    }
    const std::size_t n = a.rows;

    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto off_diagonal_norm = [&a, n]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
        }
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    constexpr double kTol = 1e-14;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a.at(i, i)));
    scale = std::max(scale, 1.0);

    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm() > kTol * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::fabs(apq) <= 1e-300) continue;

                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p);
                    const double aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a.at(p, j);
                    const double aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * aqj;
                    a.at(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v.at(i, p);
                    const double viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
        return a.at(i, i) > a.at(j, j);
    });

    values.resize(n);
    vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = a.at(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            vectors.at(k, i) = v.at(i, order[k]);
        }
    }
}

PcaModel pca_fit(const Matrix& x, std::size_t k) {
    if (x.rows < 2) {
        throw ValueError("pca_fit requires at least 2 rows");
    }
    if (k < 1 || k > x.cols) {
        throw ValueError("component count out of range [1, " + std::to_string(x.cols) +
                         "]");
    }
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;

    PcaModel model;
    model.mean.assign(d, 0.0);
    model.scale.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) model.mean[c] += x.at(r, c);
    }
    for (double& m : model.mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = x.at(r, c) - model.mean[c];
            model.scale[c] += dev * dev;
        }
    }
    for (double& s : model.scale) {
        s = std::sqrt(s / static_cast<double>(n - 1));
        if (s == 0.0) s = 1.0;  // constant column: unit scale
    }

    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double zi = (x.at(r, i) - model.mean[i]) / model.scale[i];
            for (std::size_t j = i; j < d; ++j) {
                const double zj = (x.at(r, j) - model.mean[j]) / model.scale[j];
                cov.at(i, j) += zi * zj;
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov.at(i, j) /= static_cast<double>(n - 1);
            cov.at(j, i) = cov.at(i, j);
        }
    }

    std::vector<double> values;
    Matrix vectors;
    jacobi_eigen_symmetric(std::move(cov), values, vectors);

    model.components = Matrix(k, d);
    model.explained_variance.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        model.explained_variance[c] = std::max(values[c], 0.0);

        // Deterministic sign: the largest-magnitude entry is positive
        // (lowest index wins on magnitude ties).
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < d; ++i) {
            if (std::fabs(vectors.at(c, i)) > std::fabs(vectors.at(c, pivot))) pivot = i;
        }
        const double sign = vectors.at(c, pivot) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            model.components.at(c, i) = sign * vectors.at(c, i);
        }
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    const std::size_t d = model.mean.size();
    if (x.cols != d) {
        throw ValueError("pca_transform: expected " + std::to_string(d) +
                         " columns, got " + std::to_string(x.cols));
    }
    const std::size_t k = model.components.rows;
    Matrix out(x.rows, k);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += (x.at(r, i) - model.mean[i]) / model.scale[i] *
                       model.components.at(c, i);
            }
            out.at(r, c) = dot;
        }
    }
    return out;
}

}  // namespace restrictml
