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
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosonbins/error.hpp"

namespace bosonbins {

/// How a distribution was produced. Written into the distribution JSON.
struct MethodInfo {
    std::string kind = "ryser";  // "ryser", "glynn", "closed_form", "oracle", ...
    double beta = 0.0;
    double epsilon = 0.0;
    std::int64_t trials_per_point = 0;
    std::uint64_t seed = 0;
    bool renormalized = false;
    double raw_total = 1.0;  // sum of probabilities before clamping/renormalization

    friend bool operator==(const MethodInfo &, const MethodInfo &) = default;
};

/// Probabilities P(k) over count vectors k = (k_1, ..., k_K), axis z taking
/// values 0..extents[z]-1 (normally n+1 values). Stored row-major with the
/// last axis fastest.
class BinnedDistribution {
  public:
    BinnedDistribution() = default;

    BinnedDistribution(int photons, std::vector<int> extents, std::vector<double> probabilities)
        : photons_(photons), extents_(std::move(extents)), probabilities_(std::move(probabilities)) {
        if (extents_.empty()) {
            throw Error(ErrorKind::shape, "distribution needs at least one axis");
        }
        std::size_t size = 1;
        for (int e : extents_) {
            if (e < 1) {
                throw Error(ErrorKind::shape, "distribution axis extent must be >= 1");
            }
            size *= static_cast<std::size_t>(e);
        }
        if (size != probabilities_.size()) {
            throw Error(ErrorKind::shape, "distribution size does not match its extents");
        }
    }

    /// Zero distribution over {0..n}^K.
    static BinnedDistribution zeros(int photons, int bins) {
        std::vector<int> extents(bins, photons + 1);
        std::size_t size = 1;
        for (int e : extents) {
            size *= static_cast<std::size_t>(e);
        }
        return BinnedDistribution(photons, std::move(extents), std::vector<double>(size, 0.0));
    }

    int photons() const { return photons_; }
    int bins() const { return static_cast<int>(extents_.size()); }
    const std::vector<int> &extents() const { return extents_; }
    std::size_t size() const { return probabilities_.size(); }

    std::span<const double> probabilities() const { return probabilities_; }
    std::span<double> probabilities() { return probabilities_; }
    double operator[](std::size_t flat) const { return probabilities_[flat]; }
    double &operator[](std::size_t flat) { return probabilities_[flat]; }

    const MethodInfo &method() const { return method_; }
    MethodInfo &method() { return method_; }

    bool contains(std::span<const int> k) const {
        if (k.size() != extents_.size()) {
            return false;
        }
        for (std::size_t z = 0; z < k.size(); ++z) {
            if (k[z] < 0 || k[z] >= extents_[z]) {
                return false;
            }
        }
        return true;
    }

    std::size_t flat_index(std::span<const int> k) const {
        if (!contains(k)) {
            throw Error(ErrorKind::shape, "count vector outside the distribution domain");
        }
        std::size_t flat = 0;
        for (std::size_t z = 0; z < k.size(); ++z) {
            flat = flat * static_cast<std::size_t>(extents_[z]) + static_cast<std::size_t>(k[z]);
        }
        return flat;
    }

    std::vector<int> outcome(std::size_t flat) const {
        std::vector<int> k(extents_.size());
        for (std::size_t z = extents_.size(); z-- > 0;) {
            k[z] = static_cast<int>(flat % static_cast<std::size_t>(extents_[z]));
            flat /= static_cast<std::size_t>(extents_[z]);
        }
        return k;
    }

    /// P(k), or 0 when k lies outside the stored domain.
    double probability(std::span<const int> k) const {
        return contains(k) ? probabilities_[flat_index(k)] : 0.0;
    }

    double total() const { return std::accumulate(probabilities_.begin(), probabilities_.end(), 0.0); }

    /// Sums out every axis not listed in `keep` (order of `keep` is kept).
    BinnedDistribution marginal(std::span<const int> keep) const {
        std::vector<int> extents;
        for (int axis : keep) {
            if (axis < 0 || axis >= bins()) {
                throw Error(ErrorKind::shape, "marginal: axis out of range");
            }
            extents.push_back(extents_[axis]);
        }
        std::size_t size = 1;
        for (int e : extents) {
            size *= static_cast<std::size_t>(e);
        }
        BinnedDistribution out(photons_, extents, std::vector<double>(size, 0.0));
        std::vector<int> sub(keep.size());
        for (std::size_t flat = 0; flat < probabilities_.size(); ++flat) {
            auto k = outcome(flat);
            for (std::size_t a = 0; a < keep.size(); ++a) {
                sub[a] = k[keep[a]];
            }
            out.probabilities_[out.flat_index(sub)] += probabilities_[flat];
        }
        out.method_ = method_;
        return out;
    }

    friend bool operator==(const BinnedDistribution &, const BinnedDistribution &) = default;

  private:
    int photons_ = 0;
    std::vector<int> extents_;
    std::vector<double> probabilities_;
    MethodInfo method_;
};

}  // namespace bosonbins
