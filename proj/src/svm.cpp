#include "restrictml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "restrictml/rng.hpp"

namespace restrictml {

namespace {

double dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double squared_distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return s;
}

// Platt's SMO with an error cache.  The cache is rebuilt exactly at the
// start of every examine-all sweep, so the final no-change sweep verifies
// the KKT conditions against exact decision values.
class SmoSolver {
public:
    SmoSolver(const Matrix& x, const std::vector<int>& y, const KernelSpec& spec,
              double c, double tol, std::uint64_t seed)
        : x_(x), y_(y), spec_(spec), c_(c), tol_(tol), rng_(seed),
          alphas_(x.rows, 0.0), errors_(x.rows, 0.0) {}

    std::pair<std::size_t, bool> run(std::size_t max_passes) {
        const std::size_t n = x_.rows;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);

        std::size_t passes = 0;
        bool examine_all = true;
        std::size_t changed = 0;
        bool clean_full_sweep = false;

        while ((changed > 0 || examine_all) && passes < max_passes) {
            ++passes;
            changed = 0;
            if (examine_all) {
                rebuild_errors();
                rng_.shuffle(order);
                for (const std::size_t i : order) changed += examine(i);
                clean_full_sweep = changed == 0;
                examine_all = false;
            } else {
                std::vector<std::size_t> active;
                for (std::size_t i = 0; i < n; ++i) {
                    if (alphas_[i] > 0.0 && alphas_[i] < c_) active.push_back(i);
                }
                rng_.shuffle(active);
                for (const std::size_t i : active) changed += examine(i);
                if (changed == 0) examine_all = true;
            }
        }
        return {passes, clean_full_sweep};
    }

    const std::vector<double>& alphas() const { return alphas_; }
    double bias() const { return bias_; }

private:
    double kernel(std::size_t i, std::size_t j) const {
        return kernel_eval(spec_, x_.row(i), x_.row(j));
    }

    double decision(std::size_t i) const {
        double f = bias_;
        for (std::size_t j = 0; j < x_.rows; ++j) {
            if (alphas_[j] > 0.0) f += alphas_[j] * y_[j] * kernel(j, i);
        }
        return f;
    }

    void rebuild_errors() {
        for (std::size_t i = 0; i < x_.rows; ++i) {
            errors_[i] = decision(i) - y_[i];
        }
    }

    bool violates_kkt(std::size_t i) const {
        const double r = errors_[i] * y_[i];  // y f - 1
        return (r < -tol_ && alphas_[i] < c_) || (r > tol_ && alphas_[i] > 0.0);
    }

    std::size_t examine(std::size_t i2) {
        if (!violates_kkt(i2)) return 0;
        const std::size_t n = x_.rows;

        // 1) best |E1 - E2| over the non-bound set
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (alphas_[i] <= 0.0 || alphas_[i] >= c_) continue;
            const double gap = std::fabs(errors_[i] - errors_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n && take_step(best, i2)) return 1;

        // 2) the non-bound set from a random start
        const std::size_t offset = rng_.below(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = (k + offset) % n;
            if (alphas_[i] > 0.0 && alphas_[i] < c_ && take_step(i, i2)) return 1;
        }
        // 3) everything from a random start
        const std::size_t offset2 = rng_.below(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = (k + offset2) % n;
            if (take_step(i, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alphas_[i1];
        const double a2_old = alphas_[i2];
        const int y1 = y_[i1];
        const int y2 = y_[i2];
        const double e1 = errors_[i1];
        const double e2 = errors_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c_, c_ + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c_);
            hi = std::min(c_, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = a2_old + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Objective at the segment ends for non-positive curvature.
            const double f1 = y1 * (e1 - bias_) - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * (e2 - bias_) - s * a1_old * k12 - a2_old * k22;
            const double l1 = a1_old + s * (a2_old - lo);
            const double h1 = a1_old + s * (a2_old - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12) {
                a2 = lo;
            } else if (obj_lo > obj_hi + 1e-12) {
                a2 = hi;
            } else {
                return false;
            }
        }
        if (std::fabs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;

        const double a1 = a1_old + s * (a2_old - a2);
        const double d1 = y1 * (a1 - a1_old);
        const double d2 = y2 * (a2 - a2_old);

        const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
        double new_bias;
        if (a1 > 0.0 && a1 < c_) {
            new_bias = b1;
        } else if (a2 > 0.0 && a2 < c_) {
            new_bias = b2;
        } else {
            new_bias = 0.5 * (b1 + b2);
        }

        const double bias_delta = new_bias - bias_;
        for (std::size_t i = 0; i < x_.rows; ++i) {
            errors_[i] += d1 * kernel(i1, i) + d2 * kernel(i2, i) + bias_delta;
        }
        alphas_[i1] = a1;
        alphas_[i2] = a2;
        bias_ = new_bias;
        return true;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    KernelSpec spec_;
    double c_;
    double tol_;
    Rng rng_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
    double bias_ = 0.0;
};

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> u,
                   std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ValueError("kernel_eval: dimension mismatch");
    }
    switch (spec.kind) {
        case KernelKind::Linear:
            return dot(u, v);
        case KernelKind::Polynomial:
            return std::pow(spec.gamma * dot(u, v) + spec.coef0, spec.degree);
        case KernelKind::Rbf:
            return std::exp(-spec.gamma * squared_distance(u, v));
        case KernelKind::Sigmoid:
            return std::tanh(spec.gamma * dot(u, v) + spec.coef0);
    }
    throw ValueError("kernel_eval: unknown kernel");
}

SvmTrainResult svm_train(const Matrix& x, const std::vector<int>& y,
                         const KernelSpec& spec, double c_penalty, double tolerance,
                         std::size_t max_passes, std::uint64_t seed) {
    if (x.rows == 0 || x.rows != y.size()) {
        throw ValueError("svm_train: rows and labels must align and be nonempty");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (const int label : y) {
        if (label == 1) {
            has_pos = true;
        } else if (label == -1) {
            has_neg = true;
        } else {
            throw ValueError("svm_train: labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw ValueError("svm_train: need at least one example of each class");
    }
    if (spec.kind == KernelKind::Polynomial && spec.degree < 1) {
        throw ValueError("svm_train: polynomial degree must be >= 1");
    }
    if (spec.kind != KernelKind::Linear && spec.gamma <= 0.0) {
        throw ValueError("svm_train: gamma must be positive");
    }

    SmoSolver solver(x, y, spec, c_penalty, tolerance, seed);
    const auto [passes, converged] = solver.run(max_passes);

    SvmTrainResult result;
    result.alphas = solver.alphas();
    result.passes = passes;
    result.converged = converged;

    std::size_t n_sv = 0;
    for (const double a : result.alphas) {
        if (a > 0.0) ++n_sv;
    }
    result.model.kernel = spec;
    result.model.c_penalty = c_penalty;
    result.model.tolerance = tolerance;
    result.model.bias = solver.bias();
    result.model.support_vectors = Matrix(n_sv, x.cols);
    result.model.dual_coefficients.resize(n_sv);
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (result.alphas[i] > 0.0) {
            std::copy(x.row(i).begin(), x.row(i).end(),
                      result.model.support_vectors.row(k).begin());
            result.model.dual_coefficients[k] = result.alphas[i] * y[i];
            ++k;
        }
    }
    return result;
}

namespace {

std::vector<double> raw_decision(const SvmModel& model, const Matrix& x) {
    std::vector<double> values(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double f = model.bias;
        for (std::size_t s = 0; s < model.support_vectors.rows; ++s) {
            f += model.dual_coefficients[s] *
                 kernel_eval(model.kernel, model.support_vectors.row(s), x.row(r));
        }
        values[r] = f;
    }
    return values;
}

}  // namespace

std::vector<double> svm_decision(const SvmModel& model, const Matrix& x) {
    if (model.pca.has_value()) {
        return raw_decision(model, pca_transform(*model.pca, x));
    }
    return raw_decision(model, x);
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& x) {
    const std::vector<double> values = svm_decision(model, x);
    std::vector<int> labels(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        labels[i] = values[i] >= 0.0 ? 1 : -1;
    }
    return labels;
}

KktReport svm_kkt_audit(const SvmModel& model, const Matrix& x_train,
                        const std::vector<int>& y, const std::vector<double>& alphas) {
    if (x_train.rows != y.size() || x_train.rows != alphas.size()) {
        throw ValueError("svm_kkt_audit: rows, labels, and alphas must align");
    }
    const std::vector<double> f = raw_decision(model, x_train);

    KktReport report;
    for (std::size_t i = 0; i < x_train.rows; ++i) {
        const double margin = y[i] * f[i];
        double violation = 0.0;
        if (alphas[i] <= 0.0) {
            violation = std::max(0.0, 1.0 - margin);
        } else if (alphas[i] >= model.c_penalty) {
            violation = std::max(0.0, margin - 1.0);
        } else {
            violation = std::fabs(margin - 1.0);
        }
        report.max_violation = std::max(report.max_violation, violation);
    }
    report.ok = report.max_violation <= model.tolerance;
    return report;
}

}  // namespace restrictml
