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
#include <span>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "bosonbins/error.hpp"
#include "bosonbins/linalg.hpp"

namespace bosonbins {

inline constexpr double kGramHermitianTolerance = 1e-12;
inline constexpr double kGramPsdSlack = 1e-9;

/// Overlap matrix S_ij = <phi_i|phi_j> of the photons' internal states.
/// Hermitian, unit diagonal, positive semidefinite.
class GramMatrix {
  public:
    explicit GramMatrix(ComplexMatrix s) : s_(std::move(s)) {
        if (s_.rows() < 1 || s_.rows() != s_.cols()) {
            throw Error(ErrorKind::invalid_gram, "Gram matrix must be square with dim >= 1");
        }
        const auto n = s_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(s_(i, i) - Complex(1.0, 0.0)) > kGramPsdSlack) {
                throw Error(ErrorKind::invalid_gram,
                            "Gram diagonal must be 1 (entry " + std::to_string(i + 1) + ")");
            }
            s_(i, i) = Complex(1.0, 0.0);
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (std::abs(s_(i, j) - std::conj(s_(j, i))) > kGramHermitianTolerance) {
                    throw Error(ErrorKind::invalid_gram, "Gram matrix is not Hermitian");
                }
            }
        }
        if (min_eigenvalue() < -kGramPsdSlack) {
            throw Error(ErrorKind::invalid_gram, "Gram matrix is not positive semidefinite");
        }
    }

    int dim() const { return static_cast<int>(s_.rows()); }
    const ComplexMatrix &matrix() const { return s_; }
    Complex operator()(int i, int j) const { return s_(i, j); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(s_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

  private:
    ComplexMatrix s_;
};

/// S = (1 - x) 1 + x J: every pair of photons overlaps by x.
inline GramMatrix gram_interpolation(int n, double x) {
    if (n < 1) {
        throw Error(ErrorKind::invalid_dimension, "gram_interpolation: n must be >= 1");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::domain, "distinguishability x must lie in [0, 1]");
    }
    ComplexMatrix s = ComplexMatrix::Constant(n, n, Complex(x, 0.0));
    s.diagonal().setOnes();
    return GramMatrix(std::move(s));
}

/// Gram matrix of explicit internal states (one unit vector per photon).
inline GramMatrix gram_from_states(std::span<const ComplexVector> states) {
    if (states.empty()) {
        throw Error(ErrorKind::invalid_dimension, "gram_from_states: need at least one state");
    }
    const auto dim = states.front().size();
    const auto n = static_cast<Eigen::Index>(states.size());
    for (std::size_t p = 0; p < states.size(); ++p) {
        if (states[p].size() != dim) {
            throw Error(ErrorKind::shape, "gram_from_states: states have different dimensions");
        }
        if (std::abs(states[p].norm() - 1.0) > 1e-10) {
            throw Error(ErrorKind::invalid_gram,
                        "internal state " + std::to_string(p + 1) + " is not normalized");
        }
    }
    ComplexMatrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i, i) = Complex(1.0, 0.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            s(i, j) = states[i].dot(states[j]);  // conjugates the left argument
            s(j, i) = std::conj(s(i, j));
        }
    }
    return GramMatrix(std::move(s));
}

}  // namespace bosonbins
