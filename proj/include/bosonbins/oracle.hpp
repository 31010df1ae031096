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

// Brute-force references for small systems. Nothing here touches the
// permanent engine or the characteristic function, so the two routes can
// check each other.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/partition.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins::oracle {

inline constexpr int kFockPhotonLimit = 3;
inline constexpr int kOutcomePhotonLimit = 8;

namespace detail {

// Orthonormal basis coefficients of each state (modified Gram-Schmidt,
// directions below 1e-12 discarded).
inline std::vector<ComplexVector> internal_coordinates(std::span<const ComplexVector> states) {
    std::vector<ComplexVector> basis;
    for (const auto &state : states) {
        ComplexVector v = state;
        for (const auto &b : basis) {
            v -= b.dot(v) * b;
        }
        double norm = v.norm();
        if (norm > 1e-12) {
            basis.push_back(v / norm);
        }
    }
    std::vector<ComplexVector> coords;
    for (const auto &state : states) {
        ComplexVector c(static_cast<Eigen::Index>(basis.size()));
        for (std::size_t r = 0; r < basis.size(); ++r) {
            c(static_cast<Eigen::Index>(r)) = basis[r].dot(state);
        }
        coords.push_back(std::move(c));
    }
    return coords;
}

using Multiset = std::vector<int>;

// Coefficients of prod_p (sum_a w_p[a] b_a^dagger)|0> grouped by the sorted
// list of occupied single-particle slots.
inline std::map<Multiset, Complex> expand_product(const std::vector<ComplexVector> &vectors) {
    std::map<Multiset, Complex> terms{{Multiset{}, Complex(1.0, 0.0)}};
    for (const auto &w : vectors) {
        std::map<Multiset, Complex> next;
        for (const auto &[slots, coeff] : terms) {
            for (Eigen::Index a = 0; a < w.size(); ++a) {
                if (w(a) == Complex(0.0, 0.0)) {
                    continue;
                }
                Multiset grown = slots;
                grown.insert(std::upper_bound(grown.begin(), grown.end(), static_cast<int>(a)), static_cast<int>(a));
                next[grown] += coeff * w(a);
            }
        }
        terms = std::move(next);
    }
    return terms;
}

// <psi|psi> for the state sum_S C_S prod b^dagger |0>: sum |C_S|^2 prod occ!.
inline double occupation_weight(const Multiset &slots) {
    double weight = 1.0;
    std::size_t i = 0;
    while (i < slots.size()) {
        std::size_t j = i;
        while (j < slots.size() && slots[j] == slots[i]) {
            ++j;
        }
        for (std::size_t f = 2; f <= j - i; ++f) {
            weight *= static_cast<double>(f);
        }
        i = j;
    }
    return weight;
}

inline Complex permutation_sum(const ComplexMatrix &a) {
    const int n = static_cast<int>(a.rows());
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

inline ComplexMatrix outcome_submatrix(const UnitaryMatrix &u, std::span<const int> s, int &photons) {
    if (static_cast<int>(s.size()) != u.dim()) {
        throw Error(ErrorKind::shape, "occupation vector length must equal the mode count");
    }
    photons = 0;
    std::vector<int> rows;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 0) {
            throw Error(ErrorKind::domain, "occupation numbers must be nonnegative");
        }
        for (int c = 0; c < s[k]; ++c) {
            rows.push_back(static_cast<int>(k));
        }
        photons += s[k];
    }
    if (photons < 1 || photons > kOutcomePhotonLimit || photons > u.dim()) {
        throw Error(ErrorKind::domain, "outcome probabilities need 1 <= n <= min(8, m)");
    }
    ComplexMatrix sub(photons, photons);
    for (int i = 0; i < photons; ++i) {
        for (int j = 0; j < photons; ++j) {
            sub(i, j) = u(rows[i], j);
        }
    }
    return sub;
}

inline double factorial_product(std::span<const int> s) {
    double mu = 1.0;
    for (int v : s) {
        for (int f = 2; f <= v; ++f) {
            mu *= f;
        }
    }
    return mu;
}

}  // namespace detail

/// Binned distribution by explicit expansion of the output state over
/// (mode, internal basis) occupation patterns. Photon p enters mode
/// input_modes[p] (0-based) with internal state states[p]. Refuses n > 3.
inline BinnedDistribution fock_binned_distribution(const UnitaryMatrix &u, std::span<const int> input_modes,
                                                   std::span<const ComplexVector> states, const Partition &partition) {
    const int n = static_cast<int>(states.size());
    if (n < 1 || n > kFockPhotonLimit) {
        throw Error(ErrorKind::domain, "Fock oracle refuses n outside 1..3");
    }
    if (static_cast<int>(input_modes.size()) != n) {
        throw Error(ErrorKind::shape, "need one input mode per internal state");
    }
    if (partition.total_modes() != u.dim()) {
        throw Error(ErrorKind::shape, "partition does not match the interferometer size");
    }
    const int m = u.dim();
    auto coords = detail::internal_coordinates(states);
    const int rank = static_cast<int>(coords.front().size());
    auto photon_vectors = [&](bool evolve) {
        std::vector<ComplexVector> vectors;
        for (int p = 0; p < n; ++p) {
            if (input_modes[p] < 0 || input_modes[p] >= m) {
                throw Error(ErrorKind::shape, "input mode out of range");
            }
            ComplexVector w = ComplexVector::Zero(static_cast<Eigen::Index>(m) * rank);
            for (int mode = 0; mode < m; ++mode) {
                Complex amp = evolve ? u(mode, input_modes[p]) : Complex(mode == input_modes[p] ? 1.0 : 0.0, 0.0);
                for (int r = 0; r < rank; ++r) {
                    w(mode * rank + r) = amp * coords[p](r);
                }
            }
            vectors.push_back(std::move(w));
        }
        return vectors;
    };
    double input_norm = 0.0;
    for (const auto &[slots, coeff] : detail::expand_product(photon_vectors(false))) {
        input_norm += std::norm(coeff) * detail::occupation_weight(slots);
    }
    BinnedDistribution dist = BinnedDistribution::zeros(n, partition.bins());
    const auto &bin_of = partition.bin_of_mode();
    std::vector<int> k(partition.bins());
    for (const auto &[slots, coeff] : detail::expand_product(photon_vectors(true))) {
        std::fill(k.begin(), k.end(), 0);
        for (int slot : slots) {
            int z = bin_of[slot / rank];
            if (z >= 0) {
                ++k[z];
            }
        }
        dist[dist.flat_index(k)] += std::norm(coeff) * detail::occupation_weight(slots) / input_norm;
    }
    dist.method().kind = "oracle";
    return dist;
}

/// Standard input: photon p in mode p.
inline BinnedDistribution fock_binned_distribution(const UnitaryMatrix &u, std::span<const ComplexVector> states,
                                                   const Partition &partition) {
    std::vector<int> modes(states.size());
    std::iota(modes.begin(), modes.end(), 0);
    return fock_binned_distribution(u, modes, states, partition);
}

/// |perm(U_{s,in})|^2 / mu(s) for indistinguishable photons in inputs 1..n,
/// output occupation s (rows of U repeated per s).
inline double ideal_outcome_probability(const UnitaryMatrix &u, std::span<const int> s) {
    int n = 0;
    ComplexMatrix sub = detail::outcome_submatrix(u, s, n);
    return std::norm(detail::permutation_sum(sub)) / detail::factorial_product(s);
}

/// perm(|U_{s,in}|^2) / mu(s): the classical transfer-matrix rule.
inline double distinguishable_outcome_probability(const UnitaryMatrix &u, std::span<const int> s) {
    int n = 0;
    ComplexMatrix sub = detail::outcome_submatrix(u, s, n);
    ComplexMatrix weights = sub.cwiseAbs2().cast<Complex>();
    return detail::permutation_sum(weights).real() / detail::factorial_product(s);
}

/// All occupation vectors of length m with total n.
inline std::vector<std::vector<int>> enumerate_occupations(int m, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> s(m, 0);
    auto rec = [&](auto &&self, int mode, int left) -> void {
        if (mode == m - 1) {
            s[mode] = left;
            out.push_back(s);
            return;
        }
        for (int c = left; c >= 0; --c) {
            s[mode] = c;
            self(self, mode + 1, left - c);
        }
    };
    if (m >= 1) {
        rec(rec, 0, n);
    }
    return out;
}

/// Inverse-CDF sampler over the flat outcome index of a distribution.
class BinnedSampler {
  public:
    explicit BinnedSampler(const BinnedDistribution &dist) : cdf_(dist.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (dist[i] < 0.0) {
                throw Error(ErrorKind::domain, "cannot sample from a distribution with negative entries");
            }
            acc += dist[i];
            cdf_[i] = acc;
        }
        if (!(acc > 0.0)) {
            throw Error(ErrorKind::domain, "cannot sample from an empty distribution");
        }
    }

    std::size_t draw(Engine &engine) const {
        // upper_bound lands on the first entry with cdf > u, which has positive mass.
        double u = uniform01(engine) * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

  private:
    std::vector<double> cdf_;
};

/// count i.i.d. draws from dist; deterministic per seed.
inline std::vector<std::vector<int>> sample_binned(const BinnedDistribution &dist, std::size_t count,
                                                   std::uint64_t seed) {
    BinnedSampler sampler(dist);
    Engine engine = make_engine(seed);
    std::vector<std::vector<int>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(dist.outcome(sampler.draw(engine)));
    }
    return out;
}

}  // namespace bosonbins::oracle
