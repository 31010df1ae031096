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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "bosonbins/error.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins {

inline constexpr int kNaivePermanentLimit = 10;

namespace detail {

inline void require_square(const ComplexMatrix &a, const char *who) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::shape, std::string(who) + ": matrix must be square, got " +
                                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

// Ryser's inclusion-exclusion formula walked in Gray-code order so each
// subset differs from the previous one by one column: O(n 2^n).
template <typename Real>
Complex ryser_gray(const ComplexMatrix &a) {
    using Acc = std::complex<Real>;
    const int n = static_cast<int>(a.rows());
    std::vector<Acc> row_sums(n, Acc(0));
    Acc total(0);
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < subsets; ++step) {
        const int col = std::countr_zero(step);
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        if (gray & bit) {
            for (int i = 0; i < n; ++i) {
                row_sums[i] += Acc(a(i, col));
            }
        } else {
            for (int i = 0; i < n; ++i) {
                row_sums[i] -= Acc(a(i, col));
            }
        }
        Acc prod = row_sums[0];
        for (int i = 1; i < n; ++i) {
            prod *= row_sums[i];
        }
        // (-1)^(n - |S|)
        if (((n - std::popcount(gray)) & 1) != 0) {
            total -= prod;
        } else {
            total += prod;
        }
    }
    return Complex(static_cast<double>(total.real()), static_cast<double>(total.imag()));
}

}  // namespace detail

/// Permanent by explicit enumeration of all n! permutations. Test oracle
/// only; refuses n > 10.
inline Complex perm_naive(const ComplexMatrix &a) {
    detail::require_square(a, "perm_naive");
    const int n = static_cast<int>(a.rows());
    if (n > kNaivePermanentLimit) {
        throw Error(ErrorKind::domain, "perm_naive: refusing n > 10");
    }
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total(0.0, 0.0);
    do {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) {
            prod *= a(i, sigma[i]);
        }
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

/// Exact permanent via Ryser's formula. Row sums and the running total use
/// long double above n = 20 to limit cancellation.
inline Complex perm_ryser(const ComplexMatrix &a) {
    detail::require_square(a, "perm_ryser");
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return Complex(1.0, 0.0);
    }
    if (n > 62) {
        throw Error(ErrorKind::domain, "perm_ryser: matrix too large");
    }
    if (n > 20) {
        return detail::ryser_gray<long double>(a);
    }
    return detail::ryser_gray<double>(a);
}

/// Trials used for a target additive error epsilon (in units of ||A||^n).
/// A single trial has E|X - perm|^2 <= ||A||^(2n), so by Chebyshev 20/eps^2
/// trials put the mean within eps with probability >= 95%.
inline std::int64_t glynn_trial_count(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::domain, "epsilon must be > 0");
    }
    return static_cast<std::int64_t>(std::ceil(20.0 / (epsilon * epsilon)));
}

/// One draw of the Glynn/Gurvits estimator for sign vector `signs` (bit i
/// set means x_i = -1): prod_i x_i * prod_j sum_i x_i A_ij. Its expectation
/// over uniform signs is perm(A).
inline Complex glynn_trial(const ComplexMatrix &a, std::uint64_t signs) {
    const int n = static_cast<int>(a.rows());
    Complex prod(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
        Complex col_sum(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            if ((signs >> i) & 1u) {
                col_sum -= a(i, j);
            } else {
                col_sum += a(i, j);
            }
        }
        prod *= col_sum;
    }
    if (std::popcount(signs & ((n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1))) & 1) {
        prod = -prod;
    }
    return prod;
}

struct GlynnEstimate {
    Complex value;
    std::int64_t trials = 0;
    double epsilon = 0.0;
};

/// Mean of `trials` Glynn draws with signs taken from `engine`.
inline Complex glynn_mean(const ComplexMatrix &a, std::int64_t trials, Engine &engine) {
    detail::require_square(a, "glynn_mean");
    if (a.rows() > 64) {
        throw Error(ErrorKind::domain, "glynn estimator supports n <= 64");
    }
    Complex sum(0.0, 0.0);
    for (std::int64_t t = 0; t < trials; ++t) {
        sum += glynn_trial(a, engine());
    }
    return sum / static_cast<double>(trials);
}

/// Randomized permanent estimate accurate to epsilon * ||A||^n with
/// probability >= 95%. Deterministic given seed.
inline GlynnEstimate perm_glynn_estimate(const ComplexMatrix &a, double epsilon, std::uint64_t seed) {
    detail::require_square(a, "perm_glynn_estimate");
    const std::int64_t trials = glynn_trial_count(epsilon);
    if (a.rows() == 0) {
        return {Complex(1.0, 0.0), trials, epsilon};
    }
    Engine engine = make_engine(seed);
    return {glynn_mean(a, trials, engine), trials, epsilon};
}

}  // namespace bosonbins
