#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "restrictml/matrix.hpp"
#include "restrictml/pca.hpp"

namespace restrictml {

enum class KernelKind { Linear, Polynomial, Rbf, Sigmoid };

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    int degree = 3;       // polynomial
    double gamma = 1.0;   // polynomial / rbf / sigmoid
    double coef0 = 0.0;   // polynomial / sigmoid
};

// linear u.v; polynomial (gamma u.v + coef0)^degree; rbf exp(-gamma |u-v|^2);
// sigmoid tanh(gamma u.v + coef0).
double kernel_eval(const KernelSpec& spec, std::span<const double> u,
                   std::span<const double> v);

struct SvmModel {
    KernelSpec kernel;
    double c_penalty = 1.0;
    double tolerance = 1e-3;
    double bias = 0.0;
    Matrix support_vectors;                  // rows with alpha > 0 only
    std::vector<double> dual_coefficients;   // alpha_i * y_i per support vector
    std::optional<PcaModel> pca;             // applied to inputs when present
};

struct SvmTrainResult {
    SvmModel model;
    std::vector<double> alphas;  // aligned with the training rows
    std::size_t passes = 0;
    bool converged = false;
};

// Sequential minimal optimization on labels in {-1, +1}.  Runs until no
// KKT violator beyond `tolerance` remains or the pass budget is exhausted;
// working-pair selection is the first-violator heuristic with seeded
// shuffling, so identical inputs and seed reproduce the model exactly.
SvmTrainResult svm_train(const Matrix& x, const std::vector<int>& y,
                         const KernelSpec& spec, double c_penalty, double tolerance,
                         std::size_t max_passes, std::uint64_t seed);

// Raw decision values sum(alpha_i y_i K(sv_i, x)) + bias.  When the model
// carries a PCA stage, x is transformed first.
std::vector<double> svm_decision(const SvmModel& model, const Matrix& x);

// Signs of the decision values; an exact zero classifies as +1.
std::vector<int> svm_predict(const SvmModel& model, const Matrix& x);

struct KktReport {
    double max_violation = 0.0;
    bool ok = false;
};

// Recomputes decision values over the training rows (in kernel space, PCA
// not applied) and checks the KKT conditions per alpha at the model's
// tolerance: alpha=0 needs y f >= 1 - tol, interior alphas |y f - 1| <= tol,
// alpha=C needs y f <= 1 + tol.
KktReport svm_kkt_audit(const SvmModel& model, const Matrix& x_train,
                        const std::vector<int>& y, const std::vector<double>& alphas);

}  // namespace restrictml
