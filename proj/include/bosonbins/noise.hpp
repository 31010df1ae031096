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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosonbins/characteristic.hpp"
#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/gram.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/partition.hpp"

namespace bosonbins {

/// Distinguishability, uniform loss and dark counts for one hypothesis.
struct NoiseConfig {
    double x = 1.0;                    // ignored when `gram` is set
    std::optional<GramMatrix> gram;
    double transmissivity = 1.0;
    double dark_count_p = 0.0;

    void validate() const {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw Error(ErrorKind::domain, "x must lie in [0, 1]");
        }
        if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
            throw Error(ErrorKind::domain, "transmissivity must lie in [0, 1]");
        }
        if (!(dark_count_p >= 0.0 && dark_count_p < 1.0)) {
            throw Error(ErrorKind::domain, "dark_count_p must lie in [0, 1)");
        }
    }

    GramMatrix gram_for(int photons) const {
        if (gram) {
            if (gram->dim() != photons) {
                throw Error(ErrorKind::invalid_gram, "explicit Gram matrix has the wrong dimension");
            }
            return *gram;
        }
        return gram_interpolation(photons, x);
    }
};

/// Partition of the 2m-mode loss embedding: the physical bins plus one
/// environment bin {m+1, ..., 2m}.
inline Partition with_environment_bin(const Partition &physical) {
    const int m = physical.total_modes();
    auto subsets = physical.subsets();
    std::vector<int> env;
    for (int mode = m + 1; mode <= 2 * m; ++mode) {
        env.push_back(mode);
    }
    subsets.push_back(std::move(env));
    return Partition(std::move(subsets), 2 * m);
}

/// Distribution over K+1 axes; the last axis counts lost photons.
inline BinnedDistribution lossy_binned_distribution(const UnitaryMatrix &u, const InputSpec &input,
                                                    const Partition &partition, double transmissivity,
                                                    const DistributionMethod &method = ExactMethod{}) {
    if (partition.total_modes() != u.dim()) {
        throw Error(ErrorKind::shape, "partition does not match the interferometer size");
    }
    UnitaryMatrix big = embed_uniform_loss(u, transmissivity);
    return compute_distribution(big, input, with_environment_bin(partition), method);
}

/// Adds independent dark counts: axis z is convolved with
/// Binomial(bin_sizes[z], p_d), growing its extent by bin_sizes[z].
/// A bin size of 0 leaves the axis untouched (e.g. the environment axis).
inline BinnedDistribution dark_counts_convolve(const BinnedDistribution &dist, double p_d,
                                               std::span<const int> bin_sizes) {
    if (!(p_d >= 0.0 && p_d < 1.0)) {
        throw Error(ErrorKind::domain, "dark count probability must lie in [0, 1)");
    }
    if (static_cast<int>(bin_sizes.size()) != dist.bins()) {
        throw Error(ErrorKind::shape, "need one bin size per distribution axis");
    }
    BinnedDistribution current = dist;
    for (int axis = 0; axis < dist.bins(); ++axis) {
        const int size = bin_sizes[axis];
        if (size < 0) {
            throw Error(ErrorKind::domain, "bin sizes must be nonnegative");
        }
        if (size == 0 || p_d == 0.0) {
            continue;
        }
        std::vector<double> kernel(size + 1);
        for (int d = 0; d <= size; ++d) {
            kernel[d] = std::exp(std::lgamma(size + 1.0) - std::lgamma(d + 1.0) - std::lgamma(size - d + 1.0)) *
                        std::pow(p_d, d) * std::pow(1.0 - p_d, size - d);
        }
        auto extents = current.extents();
        extents[axis] += size;
        std::size_t total = 1;
        for (int e : extents) {
            total *= static_cast<std::size_t>(e);
        }
        BinnedDistribution next(current.photons(), extents, std::vector<double>(total, 0.0));
        for (std::size_t flat = 0; flat < current.size(); ++flat) {
            const double p = current[flat];
            if (p == 0.0) {
                continue;
            }
            auto k = current.outcome(flat);
            const int base = k[axis];
            for (int d = 0; d <= size; ++d) {
                k[axis] = base + d;
                next[next.flat_index(k)] += p * kernel[d];
            }
        }
        next.method() = current.method();
        current = std::move(next);
    }
    double sum = current.total();
    for (auto &p : current.probabilities()) {
        p /= sum;
    }
    return current;
}

}  // namespace bosonbins
