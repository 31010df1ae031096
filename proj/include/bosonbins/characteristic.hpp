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
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/SVD>

#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/gram.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/parallel.hpp"
#include "bosonbins/partition.hpp"
#include "bosonbins/permanent.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins {

/// Photons per input mode together with the Gram matrix of their internal
/// states. Photon p occupies mode mode_assignment()[p]; photons sharing a
/// mode must share an internal state.
class InputSpec {
  public:
    InputSpec(std::vector<int> occupation, GramMatrix gram)
        : occupation_(std::move(occupation)), gram_(std::move(gram)) {
        int n = 0;
        for (std::size_t j = 0; j < occupation_.size(); ++j) {
            if (occupation_[j] < 0) {
                throw Error(ErrorKind::domain, "occupation numbers must be nonnegative");
            }
            for (int c = 0; c < occupation_[j]; ++c) {
                assignment_.push_back(static_cast<int>(j));
            }
            n += occupation_[j];
        }
        if (n < 1) {
            throw Error(ErrorKind::domain, "input needs at least one photon");
        }
        if (gram_.dim() != n) {
            throw Error(ErrorKind::invalid_gram, "Gram dimension " + std::to_string(gram_.dim()) +
                                                     " does not match photon count " + std::to_string(n));
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (assignment_[p] == assignment_[q] && std::abs(gram_(p, q) - Complex(1.0, 0.0)) > 1e-9) {
                    throw Error(ErrorKind::invalid_gram,
                                "photons in the same input mode must have identical internal states");
                }
            }
        }
    }

    /// One photon in each of the first n of m modes.
    static InputSpec standard(int photons, int modes, GramMatrix gram) {
        if (photons < 1 || photons > modes) {
            throw Error(ErrorKind::domain, "standard input needs 1 <= n <= m");
        }
        std::vector<int> occupation(modes, 0);
        std::fill(occupation.begin(), occupation.begin() + photons, 1);
        return InputSpec(std::move(occupation), std::move(gram));
    }

    int photons() const { return static_cast<int>(assignment_.size()); }
    int modes() const { return static_cast<int>(occupation_.size()); }
    const std::vector<int> &occupation() const { return occupation_; }
    const GramMatrix &gram() const { return gram_; }
    const std::vector<int> &mode_assignment() const { return assignment_; }

    /// mu(r) = prod_j r_j!
    double occupation_factor() const {
        double mu = 1.0;
        for (int r : occupation_) {
            for (int c = 2; c <= r; ++c) {
                mu *= c;
            }
        }
        return mu;
    }

  private:
    std::vector<int> occupation_;
    GramMatrix gram_;
    std::vector<int> assignment_;
};

struct RyserMethod {};
struct GlynnMethod {
    double epsilon = 0.01;
    std::uint64_t seed = 0;
};
using PermanentMethod = std::variant<RyserMethod, GlynnMethod>;

struct ExactMethod {};
struct ApproximateMethod {
    double beta = 0.1;
    std::uint64_t seed = 0;
};
using DistributionMethod = std::variant<ExactMethod, ApproximateMethod>;

namespace detail {

inline void require_eta(const Partition &partition, std::span<const double> eta) {
    if (static_cast<int>(eta.size()) != partition.bins()) {
        throw Error(ErrorKind::shape, "phase vector has " + std::to_string(eta.size()) +
                                          " entries, partition has " + std::to_string(partition.bins()) + " bins");
    }
    for (double e : eta) {
        if (!std::isfinite(e)) {
            throw Error(ErrorKind::domain, "phase vector entries must be finite");
        }
    }
}

inline void require_compatible(const UnitaryMatrix &u, const Partition &partition) {
    if (partition.total_modes() != u.dim()) {
        throw Error(ErrorKind::shape, "partition spans " + std::to_string(partition.total_modes()) +
                                          " modes but the interferometer has " + std::to_string(u.dim()));
    }
}

}  // namespace detail

/// Lambda(eta): diagonal M x M, entry a = exp(i eta_z) when a is in bin z, else 1.
inline ComplexMatrix phase_mask(const Partition &partition, std::span<const double> eta) {
    detail::require_eta(partition, eta);
    const int m = partition.total_modes();
    ComplexMatrix lambda = ComplexMatrix::Identity(m, m);
    const auto &bin_of = partition.bin_of_mode();
    for (int a = 0; a < m; ++a) {
        if (bin_of[a] >= 0) {
            lambda(a, a) = std::polar(1.0, eta[bin_of[a]]);
        }
    }
    return lambda;
}

/// V(eta) = U^dagger Lambda(eta) U.
inline ComplexMatrix virtual_interferometer(const UnitaryMatrix &u, const Partition &partition,
                                            std::span<const double> eta) {
    detail::require_compatible(u, partition);
    ComplexMatrix lambda = phase_mask(partition, eta);
    return u.matrix().adjoint() * lambda.diagonal().asDiagonal() * u.matrix();
}

/// Evaluates x(eta) = perm(S ⊙ V_n(eta)) / mu(r) for a fixed interferometer,
/// input and partition. Precomputes per-bin blocks so each evaluation costs
/// O(K n^2) plus one permanent.
class CharacteristicFunction {
  public:
    CharacteristicFunction(const UnitaryMatrix &u, const InputSpec &input, const Partition &partition)
        : gram_(input.gram().matrix()), bins_(partition.bins()), mu_(input.occupation_factor()) {
        detail::require_compatible(u, partition);
        if (input.modes() > u.dim()) {
            throw Error(ErrorKind::shape, "input occupies more modes than the interferometer has");
        }
        const auto &d = input.mode_assignment();
        const int n = input.photons();
        const int m = u.dim();
        ComplexMatrix columns(m, n);
        for (int p = 0; p < n; ++p) {
            columns.col(p) = u.matrix().col(d[p]);
        }
        // U_d^dagger U_d is exactly 0/1: photons share a column iff they share an input mode.
        base_ = ComplexMatrix::Zero(n, n);
        for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
                if (d[p] == d[q]) {
                    base_(p, q) = 1.0;
                }
            }
        }
        blocks_.assign(bins_, ComplexMatrix::Zero(n, n));
        const auto &bin_of = partition.bin_of_mode();
        for (int l = 0; l < m; ++l) {
            if (bin_of[l] >= 0) {
                auto row = columns.row(l);
                blocks_[bin_of[l]] += row.adjoint() * row;
            }
        }
    }

    int photons() const { return static_cast<int>(base_.rows()); }
    int bins() const { return bins_; }

    /// S ⊙ V_n(eta) for the reduced (photon-indexed) matrices.
    ComplexMatrix hadamard_matrix(std::span<const double> eta) const {
        ComplexMatrix v = base_;
        for (int z = 0; z < bins_; ++z) {
            v += (std::polar(1.0, eta[z]) - Complex(1.0, 0.0)) * blocks_[z];
        }
        return gram_.cwiseProduct(v);
    }

    Complex operator()(std::span<const double> eta, const PermanentMethod &method = RyserMethod{}) const {
        if (static_cast<int>(eta.size()) != bins_) {
            throw Error(ErrorKind::shape, "phase vector length does not match bin count");
        }
        ComplexMatrix b = hadamard_matrix(eta);
        Complex perm = std::visit(
            [&](const auto &m) -> Complex {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, RyserMethod>) {
                    return perm_ryser(b);
                } else {
                    return perm_glynn_estimate(b, m.epsilon, m.seed).value;
                }
            },
            method);
        return perm / mu_;
    }

  private:
    ComplexMatrix gram_;
    int bins_;
    double mu_;
    ComplexMatrix base_;
    std::vector<ComplexMatrix> blocks_;
};

inline Complex characteristic_value(const UnitaryMatrix &u, const InputSpec &input, const Partition &partition,
                                    std::span<const double> eta, const PermanentMethod &method = RyserMethod{}) {
    detail::require_eta(partition, eta);
    return CharacteristicFunction(u, input, partition)(eta, method);
}

/// x(nu_l) on the grid nu_l = 2 pi l / (n+1), l in {0..n}^K, row-major with
/// the last axis fastest.
struct CharacteristicGrid {
    int photons = 0;
    int bins = 0;
    std::vector<Complex> values;

    std::size_t side() const { return static_cast<std::size_t>(photons) + 1; }

    std::vector<int> index(std::size_t flat) const {
        std::vector<int> l(bins);
        for (int z = bins; z-- > 0;) {
            l[z] = static_cast<int>(flat % side());
            flat /= side();
        }
        return l;
    }

    /// Flat index of -l (mod n+1).
    std::size_t mirror(std::size_t flat) const {
        std::size_t out = 0;
        std::size_t scale = 1;
        for (int z = 0; z < bins; ++z) {
            std::size_t digit = flat % side();
            flat /= side();
            out += ((side() - digit) % side()) * scale;
            scale *= side();
        }
        return out;
    }
};

struct GridOptions {
    bool approximate = false;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = default_thread_count();
};

/// Fills the grid using x(-nu) = conj(x(nu)): only one point of each mirror
/// pair is evaluated. l = 0 is pinned to 1.
inline CharacteristicGrid characteristic_grid(const CharacteristicFunction &x, const GridOptions &options = {}) {
    CharacteristicGrid grid;
    grid.photons = x.photons();
    grid.bins = x.bins();
    std::size_t count = 1;
    for (int z = 0; z < grid.bins; ++z) {
        count *= grid.side();
    }
    grid.values.assign(count, Complex(0.0, 0.0));
    std::vector<std::size_t> todo;
    for (std::size_t flat = 1; flat < count; ++flat) {
        if (grid.mirror(flat) >= flat) {
            todo.push_back(flat);
        }
    }
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid.side());
    parallel_for(
        todo.size(),
        [&](std::size_t t) {
            const std::size_t flat = todo[t];
            auto l = grid.index(flat);
            std::vector<double> eta(l.size());
            for (std::size_t z = 0; z < l.size(); ++z) {
                eta[z] = step * l[z];
            }
            PermanentMethod method = RyserMethod{};
            if (options.approximate) {
                method = GlynnMethod{options.epsilon, derive_seed(options.seed, flat)};
            }
            Complex value = x(eta, method);
            const std::size_t mirror = grid.mirror(flat);
            if (mirror == flat) {
                value = Complex(value.real(), 0.0);
            }
            grid.values[flat] = value;
            grid.values[mirror] = std::conj(value);
        },
        options.threads);
    grid.values[0] = Complex(1.0, 0.0);
    return grid;
}

/// P(k) = (n+1)^-K sum_l x(nu_l) exp(-i nu_l . k), one axis at a time with a
/// precomputed twiddle table. Returns the complex result before any clamping.
inline std::vector<Complex> inverse_transform(const CharacteristicGrid &grid) {
    const std::size_t side = grid.side();
    std::vector<Complex> twiddle(side);
    for (std::size_t j = 0; j < side; ++j) {
        twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(side));
    }
    std::vector<Complex> data = grid.values;
    std::vector<Complex> line(side);
    std::size_t stride = 1;
    for (int axis = grid.bins; axis-- > 0;) {
        const std::size_t block = stride * side;
        for (std::size_t outer = 0; outer < data.size(); outer += block) {
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const std::size_t base = outer + inner;
                for (std::size_t k = 0; k < side; ++k) {
                    Complex acc(0.0, 0.0);
                    for (std::size_t l = 0; l < side; ++l) {
                        acc += data[base + l * stride] * twiddle[(l * k) % side];
                    }
                    line[k] = acc;
                }
                for (std::size_t k = 0; k < side; ++k) {
                    data[base + k * stride] = line[k] / static_cast<double>(side);
                }
            }
        }
        stride = block;
    }
    return data;
}

inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kNormalizationTolerance = 1e-6;

namespace detail {

inline BinnedDistribution finalize_exact(int photons, int bins, const std::vector<Complex> &raw) {
    BinnedDistribution dist = BinnedDistribution::zeros(photons, bins);
    double raw_total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double p = raw[i].real();
        if (std::abs(raw[i].imag()) > kClampTolerance) {
            throw Error(ErrorKind::numerical_failure,
                        "imaginary residue " + std::to_string(raw[i].imag()) + " in inverted distribution");
        }
        if (p < -kClampTolerance) {
            throw Error(ErrorKind::numerical_failure, "negative probability " + std::to_string(p));
        }
        raw_total += p;
        dist[i] = p < 0.0 ? 0.0 : p;
    }
    if (std::abs(raw_total - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorKind::numerical_failure, "distribution sums to " + std::to_string(raw_total));
    }
    double total = dist.total();
    for (auto &p : dist.probabilities()) {
        p /= total;
    }
    dist.method().raw_total = raw_total;
    return dist;
}

}  // namespace detail

/// Exact binned distribution (Ryser permanents on the full K-dimensional grid).
inline BinnedDistribution binned_distribution(const UnitaryMatrix &u, const InputSpec &input,
                                              const Partition &partition,
                                              unsigned threads = default_thread_count()) {
    CharacteristicFunction x(u, input, partition);
    GridOptions options;
    options.threads = threads;
    auto grid = characteristic_grid(x, options);
    auto dist = detail::finalize_exact(grid.photons, grid.bins, inverse_transform(grid));
    dist.method().kind = "ryser";
    return dist;
}

/// Randomized binned distribution with l1 error <= beta (with high
/// probability): each grid point is a Glynn estimate with
/// epsilon = beta (n+1)^(-K/2). Negative entries are clamped and the result
/// renormalized; both are recorded in method().
inline BinnedDistribution approx_binned_distribution(const UnitaryMatrix &u, const InputSpec &input,
                                                     const Partition &partition, double beta, std::uint64_t seed,
                                                     unsigned threads = default_thread_count()) {
    if (!(beta > 0.0)) {
        throw Error(ErrorKind::domain, "beta must be > 0");
    }
    CharacteristicFunction x(u, input, partition);
    GridOptions options;
    options.approximate = true;
    options.epsilon = beta * std::pow(static_cast<double>(input.photons() + 1), -0.5 * partition.bins());
    options.seed = seed;
    options.threads = threads;
    auto grid = characteristic_grid(x, options);
    auto raw = inverse_transform(grid);
    BinnedDistribution dist = BinnedDistribution::zeros(grid.photons, grid.bins);
    double raw_total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw_total += raw[i].real();
        dist[i] = std::max(raw[i].real(), 0.0);
    }
    double total = dist.total();
    if (!(total > 0.0)) {
        throw Error(ErrorKind::numerical_failure, "approximate distribution has no positive mass");
    }
    for (auto &p : dist.probabilities()) {
        p /= total;
    }
    auto &info = dist.method();
    info.kind = "glynn";
    info.beta = beta;
    info.epsilon = options.epsilon;
    info.trials_per_point = glynn_trial_count(options.epsilon);
    info.seed = seed;
    info.renormalized = true;
    info.raw_total = raw_total;
    return dist;
}

inline BinnedDistribution compute_distribution(const UnitaryMatrix &u, const InputSpec &input,
                                               const Partition &partition, const DistributionMethod &method) {
    return std::visit(
        [&](const auto &m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ExactMethod>) {
                return binned_distribution(u, input, partition);
            } else {
                return approx_binned_distribution(u, input, partition, m.beta, m.seed);
            }
        },
        method);
}

/// Joint distribution of photon counts in individual modes (1-based labels).
inline BinnedDistribution marginal_distribution(const UnitaryMatrix &u, const InputSpec &input,
                                                std::span<const int> modes) {
    std::vector<std::vector<int>> singletons;
    for (int mode : modes) {
        singletons.push_back({mode});
    }
    return binned_distribution(u, input, Partition(std::move(singletons), u.dim()));
}

/// Numerical rank of W(eta) = U^dagger (Lambda(eta) - 1) U (singular values
/// above 1e-8). Throws if it exceeds the number of modes with a nontrivial phase.
inline int rank_check_W(const UnitaryMatrix &u, const Partition &partition, std::span<const double> eta) {
    detail::require_compatible(u, partition);
    ComplexMatrix lambda = phase_mask(partition, eta);
    ComplexMatrix shifted = lambda - ComplexMatrix::Identity(u.dim(), u.dim());
    int phased = 0;
    for (int a = 0; a < u.dim(); ++a) {
        if (std::abs(shifted(a, a)) > 1e-12) {
            ++phased;
        }
    }
    ComplexMatrix w = u.matrix().adjoint() * shifted * u.matrix();
    Eigen::JacobiSVD<ComplexMatrix> svd(w);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > 1e-8) {
            ++rank;
        }
    }
    if (rank > phased) {
        throw Error(ErrorKind::numerical_failure, "rank of W exceeds the number of phased modes");
    }
    return rank;
}

}  // namespace bosonbins
