#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "restrictml/model_io.hpp"
#include "restrictml/svm.hpp"

using namespace restrictml;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

std::size_t count_correct(const std::vector<int>& predicted,
                          const std::vector<int>& truth) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == truth[i]) ++n;
    }
    return n;
}

const Matrix kXor = from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
const std::vector<int> kXorLabels{-1, -1, 1, 1};

}  // namespace

TEST_CASE("kernel evaluations match their formulas") {
    const std::vector<double> e1{1.0, 0.0};
    const std::vector<double> ones{1.0, 1.0};

    CHECK(kernel_eval({KernelKind::Linear}, e1, e1) == 1.0);

    KernelSpec rbf{KernelKind::Rbf, 3, 2.5, 0.0};
    CHECK(kernel_eval(rbf, ones, ones) == 1.0);

    KernelSpec poly{KernelKind::Polynomial, 2, 1.0, 1.0};
    CHECK(kernel_eval(poly, ones, e1) == 4.0);

    KernelSpec sig{KernelKind::Sigmoid, 3, 1.0, 0.0};
    CHECK(kernel_eval(sig, e1, e1) == doctest::Approx(std::tanh(1.0)));

    CHECK_THROWS_AS(kernel_eval(rbf, e1, std::vector<double>{1.0}), ValueError);
}

TEST_CASE("kernels are symmetric") {
    Rng rng(91);
    const std::vector<KernelSpec> specs{{KernelKind::Linear, 3, 1.0, 0.0},
                                        {KernelKind::Polynomial, 3, 0.7, 1.3},
                                        {KernelKind::Rbf, 3, 0.9, 0.0},
                                        {KernelKind::Sigmoid, 3, 0.4, -0.2}};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(5);
        std::vector<double> v(5);
        for (double& x : u) x = rng.uniform(-3.0, 3.0);
        for (double& x : v) x = rng.uniform(-3.0, 3.0);
        for (const KernelSpec& spec : specs) {
            CHECK(kernel_eval(spec, u, v) == kernel_eval(spec, v, u));
        }
    }
}

TEST_CASE("two separable points give a midpoint boundary") {
    const Matrix x = from_rows({{0, 0}, {1, 1}});
    const std::vector<int> y{-1, 1};
    const auto result =
        svm_train(x, y, {KernelKind::Linear}, 1.0, 1e-3, 1000, 5);

    CHECK(result.converged);
    CHECK(svm_predict(result.model, x) == y);

    // the decision value at the midpoint is zero
    const Matrix midpoint = from_rows({{0.5, 0.5}});
    CHECK(svm_decision(result.model, midpoint)[0] == doctest::Approx(0.0).epsilon(1e-6));

    // mirrored points across the boundary get opposite signs
    const Matrix mirrored = from_rows({{0.2, 0.2}, {0.8, 0.8}});
    const auto values = svm_decision(result.model, mirrored);
    CHECK(values[0] == doctest::Approx(-values[1]).epsilon(1e-6));

    const auto audit = svm_kkt_audit(result.model, x, y, result.alphas);
    CHECK(audit.ok);
}

TEST_CASE("rbf separates xor, linear cannot") {
    const auto rbf =
        svm_train(kXor, kXorLabels, {KernelKind::Rbf, 3, 1.0, 0.0}, 1.0, 1e-3, 1000, 5);
    CHECK(count_correct(svm_predict(rbf.model, kXor), kXorLabels) == 4);
    CHECK(svm_kkt_audit(rbf.model, kXor, kXorLabels, rbf.alphas).ok);

    const auto linear =
        svm_train(kXor, kXorLabels, {KernelKind::Linear}, 1.0, 1e-3, 1000, 5);
    CHECK(count_correct(svm_predict(linear.model, kXor), kXorLabels) <= 3);
}

TEST_CASE("dual feasibility and KKT hold on random problems") {
    Rng rng(92);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 40 + rng.below(40);
        Matrix x(n, 3);
        std::vector<int> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < 3; ++c) x.at(r, c) = rng.uniform(-2.0, 2.0);
            // noisy margin rule keeps both classes present but inseparable
            y[r] = (x.at(r, 0) + 0.5 * x.at(r, 1) + rng.uniform(-0.4, 0.4)) > 0.0 ? 1 : -1;
        }
        if (std::count(y.begin(), y.end(), 1) == 0) y[0] = 1;
        if (std::count(y.begin(), y.end(), -1) == 0) y[0] = -1;

        const KernelSpec spec =
            trial % 2 ? KernelSpec{KernelKind::Rbf, 3, 0.8, 0.0}
                      : KernelSpec{KernelKind::Linear, 3, 1.0, 0.0};
        const auto result = svm_train(x, y, spec, 1.0, 1e-3, 100000, trial);
        REQUIRE(result.converged);

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += result.alphas[i] * y[i];
        CHECK(std::fabs(sum) < 1e-8);

        const auto audit = svm_kkt_audit(result.model, x, y, result.alphas);
        CHECK(audit.ok);
        for (const double a : result.alphas) {
            CHECK(a >= 0.0);
            CHECK(a <= 1.0);
        }
    }
}

TEST_CASE("prediction is invariant under support-vector reordering") {
    Rng rng(93);
    Matrix x(30, 2);
    std::vector<int> y(30);
    for (std::size_t r = 0; r < 30; ++r) {
        x.at(r, 0) = rng.uniform(-1.0, 1.0);
        x.at(r, 1) = rng.uniform(-1.0, 1.0);
        y[r] = x.at(r, 0) > 0 ? 1 : -1;
    }
    auto result = svm_train(x, y, {KernelKind::Rbf, 3, 1.0, 0.0}, 1.0, 1e-3, 10000, 7);

    SvmModel reversed = result.model;
    const std::size_t n_sv = reversed.support_vectors.rows;
    for (std::size_t i = 0; i < n_sv; ++i) {
        std::copy(result.model.support_vectors.row(n_sv - 1 - i).begin(),
                  result.model.support_vectors.row(n_sv - 1 - i).end(),
                  reversed.support_vectors.row(i).begin());
        reversed.dual_coefficients[i] = result.model.dual_coefficients[n_sv - 1 - i];
    }

    Matrix probe(20, 2);
    for (double& v : probe.data) v = rng.uniform(-1.0, 1.0);
    const auto a = svm_decision(result.model, probe);
    const auto b = svm_decision(reversed, probe);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

TEST_CASE("ties at zero classify as positive") {
    SvmModel model;
    model.kernel = {KernelKind::Linear};
    model.bias = 0.0;
    model.support_vectors = Matrix(0, 2);
    const Matrix probe = from_rows({{1.0, 1.0}});
    CHECK(svm_predict(model, probe) == std::vector<int>{1});
}

TEST_CASE("single-class input is rejected") {
    const Matrix x = from_rows({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(svm_train(x, {1, 1}, {KernelKind::Linear}, 1.0, 1e-3, 10, 0),
                    ValueError);
}

TEST_CASE("training is deterministic given the seed") {
    Rng rng(94);
    Matrix x(50, 2);
    std::vector<int> y(50);
    for (std::size_t r = 0; r < 50; ++r) {
        x.at(r, 0) = rng.uniform(-1.0, 1.0);
        x.at(r, 1) = rng.uniform(-1.0, 1.0);
        y[r] = (x.at(r, 0) + x.at(r, 1) + rng.uniform(-0.3, 0.3)) > 0 ? 1 : -1;
    }
    if (std::count(y.begin(), y.end(), 1) == 0) y[0] = 1;
    if (std::count(y.begin(), y.end(), -1) == 0) y[0] = -1;

    const auto a = svm_train(x, y, {KernelKind::Rbf, 3, 1.0, 0.0}, 1.0, 1e-3, 10000, 42);
    const auto b = svm_train(x, y, {KernelKind::Rbf, 3, 1.0, 0.0}, 1.0, 1e-3, 10000, 42);
    CHECK(a.alphas == b.alphas);
    CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("svm model JSON round trip") {
    const Matrix x = from_rows({{0, 0}, {1, 1}});
    const std::vector<int> y{-1, 1};
    auto result = svm_train(x, y, {KernelKind::Polynomial, 3, 0.5, 1.0}, 2.0, 1e-3,
                            1000, 5);
    result.model.pca = pca_fit(from_rows({{0, 1}, {1, 0}, {0.5, 0.2}}), 2);

    const SvmModel loaded = svm_model_from_json(svm_model_to_json(result.model));
    CHECK(loaded.kernel.kind == result.model.kernel.kind);
    CHECK(loaded.kernel.degree == result.model.kernel.degree);
    CHECK(loaded.bias == result.model.bias);
    CHECK(loaded.support_vectors == result.model.support_vectors);
    CHECK(loaded.dual_coefficients == result.model.dual_coefficients);
    REQUIRE(loaded.pca.has_value());
    CHECK(loaded.pca->components == result.model.pca->components);
}
