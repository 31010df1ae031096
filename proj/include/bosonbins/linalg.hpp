// Copyright 2026 The bosonbins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "bosonbins/error.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kUnitarityTolerance = 1e-10;

/// max_ij |(A^dagger A - 1)_ij|
inline double unitarity_defect(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) {
        return INFINITY;
    }
    ComplexMatrix defect = a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols());
    return defect.cwiseAbs().maxCoeff();
}

/// Square unitary matrix describing an interferometer.
///
/// Column j holds the output amplitudes of input mode j: a photon entering
/// mode j leaves in mode k with amplitude U(k, j). Indices are 0-based here;
/// files and the CLI use 1-based mode labels.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(ComplexMatrix matrix, double tolerance = kUnitarityTolerance)
        : matrix_(std::move(matrix)) {
        if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
            throw Error(ErrorKind::invalid_dimension, "unitary must be square with dim >= 1, got " +
                                                          std::to_string(matrix_.rows()) + "x" +
                                                          std::to_string(matrix_.cols()));
        }
        if (!matrix_.allFinite()) {
            throw Error(ErrorKind::domain, "unitary has non-finite entries");
        }
        double defect = unitarity_defect(matrix_);
        if (defect > tolerance) {
            throw Error(ErrorKind::domain, "matrix is not unitary (max |U^dagger U - 1| = " +
                                               std::to_string(defect) + ")");
        }
    }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix &matrix() const { return matrix_; }
    Complex operator()(int row, int col) const { return matrix_(row, col); }

    friend bool operator==(const UnitaryMatrix &a, const UnitaryMatrix &b) {
        return a.matrix_ == b.matrix_;
    }

  private:
    ComplexMatrix matrix_;
};

/// Haar-random m x m unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
inline UnitaryMatrix haar_unitary(int m, std::uint64_t seed) {
    if (m < 1) {
        throw Error(ErrorKind::invalid_dimension, "haar_unitary: mode count must be >= 1");
    }
    Engine engine = make_engine(seed);
    ComplexMatrix z(m, m);
    for (int col = 0; col < m; ++col) {
        for (int row = 0; row < m; ++row) {
            double re = standard_normal(engine);
            double im = standard_normal(engine);
            z(row, col) = Complex(re, im) * std::numbers::sqrt2 * 0.5;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix &r = qr.matrixQR();
    for (int j = 0; j < m; ++j) {
        Complex d = r(j, j);
        double mag = std::abs(d);
        q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return UnitaryMatrix(std::move(q));
}

/// F(j, k) = exp(-2 pi i j k / m) / sqrt(m), 0-based j, k.
inline UnitaryMatrix fourier_matrix(int m) {
    if (m < 1) {
        throw Error(ErrorKind::invalid_dimension, "fourier_matrix: mode count must be >= 1");
    }
    ComplexMatrix f(m, m);
    double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            // Reduce j*k mod m first so the phase stays accurate for large m.
            long long e = (static_cast<long long>(j) * k) % m;
            double angle = -2.0 * std::numbers::pi * static_cast<double>(e) / m;
            f(j, k) = std::polar(norm, angle);
        }
    }
    return UnitaryMatrix(std::move(f));
}

/// Embeds U in a 2m-mode lossless interferometer. Each input mode i first
/// meets a beam-splitter [[sqrt(t), sqrt(1-t)], [sqrt(1-t), -sqrt(t)]] that
/// couples it to environment mode m+i; U then acts on modes 0..m-1.
inline UnitaryMatrix embed_uniform_loss(const UnitaryMatrix &u, double transmissivity) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw Error(ErrorKind::domain, "transmissivity must lie in [0, 1]");
    }
    const int m = u.dim();
    const double keep = std::sqrt(transmissivity);
    const double lose = std::sqrt(1.0 - transmissivity);
    ComplexMatrix big = ComplexMatrix::Zero(2 * m, 2 * m);
    big.topLeftCorner(m, m) = keep * u.matrix();
    big.topRightCorner(m, m) = lose * u.matrix();
    big.bottomLeftCorner(m, m).diagonal().setConstant(lose);
    big.bottomRightCorner(m, m).diagonal().setConstant(-keep);
    return UnitaryMatrix(std::move(big));
}

}  // namespace bosonbins
