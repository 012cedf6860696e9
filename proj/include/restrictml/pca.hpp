#pragma once

#include <cstddef>
#include <vector>

#include "restrictml/matrix.hpp"

namespace restrictml {

// Principal components of the standardized feature space.  `components`
// holds k orthonormal rows; explained_variance is nonincreasing.
struct PcaModel {
    std::vector<double> mean;   // per input column
    std::vector<double> scale;  // per input column standard deviation
    Matrix components;          // k x d
    std::vector<double> explained_variance;
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Pairs are returned sorted by descending eigenvalue; eigenvectors are the
// rows of `vectors`.
void jacobi_eigen_symmetric(Matrix a, std::vector<double>& values, Matrix& vectors);

// Fits the top-k components of the standardized covariance matrix.
// Columns are centered and scaled to unit variance; a zero-variance column
// gets unit scale.  Component signs follow a deterministic convention:
// the largest-magnitude entry is made positive.
PcaModel pca_fit(const Matrix& x, std::size_t k);

// (x - mean) / scale projected onto the components; output has k columns.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

}  // namespace restrictml
