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
#include <string>
#include <utility>
#include <vector>

#include "bosonbins/error.hpp"

namespace bosonbins {

/// K disjoint, nonempty bins of output modes. Mode labels are 1-based and
/// each bin is kept sorted; `bin_of_mode` gives the 0-based lookup.
class Partition {
  public:
    Partition(std::vector<std::vector<int>> subsets, int total_modes)
        : subsets_(std::move(subsets)), total_modes_(total_modes) {
        if (total_modes_ < 1) {
            throw Error(ErrorKind::invalid_partition, "partition needs total_modes >= 1");
        }
        if (subsets_.empty()) {
            throw Error(ErrorKind::invalid_partition, "partition needs at least one bin");
        }
        bin_of_mode_.assign(total_modes_, -1);
        for (std::size_t z = 0; z < subsets_.size(); ++z) {
            auto &bin = subsets_[z];
            if (bin.empty()) {
                throw Error(ErrorKind::invalid_partition, "bin " + std::to_string(z + 1) + " is empty");
            }
            std::sort(bin.begin(), bin.end());
            for (int mode : bin) {
                if (mode < 1 || mode > total_modes_) {
                    throw Error(ErrorKind::invalid_partition,
                                "mode " + std::to_string(mode) + " outside 1.." + std::to_string(total_modes_));
                }
                if (bin_of_mode_[mode - 1] != -1) {
                    throw Error(ErrorKind::invalid_partition,
                                "mode " + std::to_string(mode) + " appears in more than one bin");
                }
                bin_of_mode_[mode - 1] = static_cast<int>(z);
            }
        }
    }

    int bins() const { return static_cast<int>(subsets_.size()); }
    int total_modes() const { return total_modes_; }
    const std::vector<int> &subset(int z) const { return subsets_.at(z); }
    const std::vector<std::vector<int>> &subsets() const { return subsets_; }

    /// Bin index (0-based) of 0-based mode `mode`, or -1 if unbinned.
    const std::vector<int> &bin_of_mode() const { return bin_of_mode_; }

    std::vector<int> bin_sizes() const {
        std::vector<int> sizes;
        for (const auto &bin : subsets_) {
            sizes.push_back(static_cast<int>(bin.size()));
        }
        return sizes;
    }

    /// q_z = K_z / M
    std::vector<double> relative_sizes() const {
        std::vector<double> q;
        for (const auto &bin : subsets_) {
            q.push_back(static_cast<double>(bin.size()) / total_modes_);
        }
        return q;
    }

    bool spans_all_modes() const {
        return std::none_of(bin_of_mode_.begin(), bin_of_mode_.end(), [](int z) { return z < 0; });
    }

    friend bool operator==(const Partition &a, const Partition &b) {
        return a.total_modes_ == b.total_modes_ && a.subsets_ == b.subsets_;
    }

  private:
    std::vector<std::vector<int>> subsets_;
    int total_modes_;
    std::vector<int> bin_of_mode_;
};

/// Consecutive-mode bins. When K divides M every bin holds M/K modes;
/// otherwise M = p(K-1) + q with the first K-1 bins of size p and the last of
/// size q, taking p = ceil(M/K) (lowered until q >= 1).
inline Partition equipartition(int total_modes, int bins) {
    if (bins < 1 || bins > total_modes) {
        throw Error(ErrorKind::invalid_partition, "equipartition needs 1 <= K <= M, got K=" +
                                                      std::to_string(bins) + ", M=" + std::to_string(total_modes));
    }
    std::vector<int> sizes(bins, total_modes / bins);
    if (total_modes % bins != 0) {
        int p = (total_modes + bins - 1) / bins;
        while (p * (bins - 1) >= total_modes) {
            --p;
        }
        std::fill(sizes.begin(), sizes.end() - 1, p);
        sizes.back() = total_modes - p * (bins - 1);
    }
    std::vector<std::vector<int>> subsets;
    int mode = 1;
    for (int size : sizes) {
        std::vector<int> bin;
        for (int i = 0; i < size; ++i) {
            bin.push_back(mode++);
        }
        subsets.push_back(std::move(bin));
    }
    return Partition(std::move(subsets), total_modes);
}

}  // namespace bosonbins
