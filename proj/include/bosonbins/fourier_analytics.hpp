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
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/gram.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/permanent.hpp"

namespace bosonbins {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt binomial_exact(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    BigInt out = 1;
    for (int i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double out = 1.0;
    for (int i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

namespace detail {

inline BinnedDistribution single_axis(int photons, const std::vector<Rational> &p, const char *kind) {
    std::vector<double> values;
    values.reserve(p.size());
    for (const auto &v : p) {
        values.push_back(v.convert_to<double>());
    }
    BinnedDistribution dist(photons, {photons + 1}, std::move(values));
    dist.method().kind = kind;
    return dist;
}

inline void require_single_mode(int n, int m) {
    if (n < 1 || m < 1 || n > m) {
        throw Error(ErrorKind::domain, "single-mode closed forms need 1 <= n <= m");
    }
}

}  // namespace detail

/// Photon count in one output mode of the m-mode Fourier interferometer,
/// n indistinguishable photons in the first n inputs:
/// P_k = sum_{a=k}^n (-1)^(k+a) C(a,k) C(n,a) a! / m^a, in exact arithmetic.
inline BinnedDistribution single_mode_bosonic(int n, int m) {
    detail::require_single_mode(n, m);
    std::vector<Rational> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        Rational acc = 0;
        BigInt m_pow = 1;  // m^a, built up incrementally
        BigInt falling = 1;  // n!/(n-a)! = C(n,a) a!
        for (int a = 0; a <= n; ++a) {
            if (a > 0) {
                m_pow *= m;
                falling *= (n - a + 1);
            }
            if (a < k) {
                continue;
            }
            Rational term(binomial_exact(a, k) * falling, m_pow);
            if ((k + a) % 2 != 0) {
                acc -= term;
            } else {
                acc += term;
            }
        }
        p[k] = acc;
    }
    return detail::single_axis(n, p, "closed_form");
}

/// Binomial(n, 1/m): distinguishable photons in one Fourier output mode.
inline BinnedDistribution single_mode_distinguishable(int n, int m) {
    detail::require_single_mode(n, m);
    std::vector<Rational> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        BigInt num = binomial_exact(n, k) * boost::multiprecision::pow(BigInt(m - 1), n - k);
        p[k] = Rational(num, boost::multiprecision::pow(BigInt(m), n));
    }
    return detail::single_axis(n, p, "closed_form");
}

/// Photons found in the odd modes {1, 3, ..., n-1} of the n-mode Fourier
/// interferometer (one photon per input): zero for odd k,
/// 2^(-n/2) C(n/2, k/2) for even k.
inline BinnedDistribution odd_modes_bosonic(int n) {
    if (n < 2 || n % 2 != 0) {
        throw Error(ErrorKind::domain, "odd-mode closed form needs even n >= 2");
    }
    std::vector<Rational> p(n + 1, Rational(0));
    const int half = n / 2;
    for (int k = 0; k <= n; k += 2) {
        p[k] = Rational(binomial_exact(half, k / 2), boost::multiprecision::pow(BigInt(2), half));
    }
    return detail::single_axis(n, p, "closed_form");
}

/// 2^-n C(n, k).
inline BinnedDistribution odd_modes_distinguishable(int n) {
    if (n < 1) {
        throw Error(ErrorKind::domain, "odd-mode closed form needs n >= 1");
    }
    std::vector<Rational> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        p[k] = Rational(binomial_exact(n, k), boost::multiprecision::pow(BigInt(2), n));
    }
    return detail::single_axis(n, p, "closed_form");
}

/// H_ab = sum_{l in subset} conj(U_la) U_lb, subset given as 1-based modes.
inline ComplexMatrix subset_H(const UnitaryMatrix &u, std::span<const int> subset) {
    ComplexMatrix h = ComplexMatrix::Zero(u.dim(), u.dim());
    for (int mode : subset) {
        if (mode < 1 || mode > u.dim()) {
            throw Error(ErrorKind::invalid_partition, "subset mode out of range");
        }
        auto row = u.matrix().row(mode - 1);
        h += row.adjoint() * row;
    }
    return h;
}

inline constexpr int kExpansionLimit = 10;

struct SubsetExpansion {
    std::vector<Complex> coefficients;  // c_0 = 1, c_1, ..., c_n
    BinnedDistribution distribution;
};

/// x(eta) = perm(1 + (e^{i eta} - 1) H'_n) = 1 + sum_a c_a (1 - e^{i eta})^a with
/// c_a = (-1)^a sum over a-element principal minors of H'_n = S ⊙ H_n, giving
/// P(k) = (-1)^k sum_{a>=k} C(a,k) c_a. Exponential in n; refuses n > 10.
inline SubsetExpansion single_subset_expansion(const UnitaryMatrix &u, const GramMatrix &gram,
                                               std::span<const int> subset) {
    const int n = gram.dim();
    if (n > kExpansionLimit) {
        throw Error(ErrorKind::domain, "single_subset_expansion: refusing n > 10");
    }
    if (n > u.dim()) {
        throw Error(ErrorKind::shape, "more photons than modes");
    }
    ComplexMatrix h = subset_H(u, subset).topLeftCorner(n, n);
    ComplexMatrix hp = gram.matrix().cwiseProduct(h);
    std::vector<Complex> c(n + 1, Complex(0.0, 0.0));
    c[0] = Complex(1.0, 0.0);
    const unsigned full = 1u << n;
    for (unsigned mask = 1; mask < full; ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                idx.push_back(i);
            }
        }
        const int a = static_cast<int>(idx.size());
        ComplexMatrix sub(a, a);
        for (int r = 0; r < a; ++r) {
            for (int s = 0; s < a; ++s) {
                sub(r, s) = hp(idx[r], idx[s]);
            }
        }
        c[a] += perm_ryser(sub);
    }
    for (int a = 1; a <= n; a += 2) {
        c[a] = -c[a];
    }
    std::vector<double> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        Complex acc(0.0, 0.0);
        for (int a = k; a <= n; ++a) {
            acc += binomial(a, k) * c[a];
        }
        p[k] = (k % 2 == 0 ? acc : -acc).real();
    }
    BinnedDistribution dist(n, {n + 1}, std::move(p));
    dist.method().kind = "subset_expansion";
    return {std::move(c), std::move(dist)};
}

namespace detail {

inline void require_spanning(int n, std::span<const int> bin_sizes, int m) {
    if (n < 1 || bin_sizes.empty()) {
        throw Error(ErrorKind::domain, "Haar averages need n >= 1 and at least one bin");
    }
    int total = 0;
    for (int s : bin_sizes) {
        if (s < 1) {
            throw Error(ErrorKind::invalid_partition, "bin sizes must be >= 1");
        }
        total += s;
    }
    if (total != m) {
        throw Error(ErrorKind::invalid_partition, "Haar-average formulas need bins spanning all m modes");
    }
}

template <typename Weight>
BinnedDistribution haar_average(int n, std::span<const int> bin_sizes, Weight weight) {
    const int bins = static_cast<int>(bin_sizes.size());
    BinnedDistribution dist = BinnedDistribution::zeros(n, bins);
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
        auto k = dist.outcome(flat);
        if (std::accumulate(k.begin(), k.end(), 0) == n) {
            dist[flat] = weight(k);
        }
    }
    dist.method().kind = "haar_average";
    return dist;
}

inline double multinomial_weight(int n, std::span<const int> k, std::span<const int> bin_sizes, int m) {
    double log_p = std::lgamma(n + 1.0);
    for (std::size_t z = 0; z < k.size(); ++z) {
        log_p -= std::lgamma(k[z] + 1.0);
        if (k[z] > 0) {
            log_p += k[z] * std::log(static_cast<double>(bin_sizes[z]) / m);
        }
    }
    return std::exp(log_p);
}

}  // namespace detail

/// Haar-averaged distinguishable-particle law: multinomial with q_z = K_z / m.
inline BinnedDistribution haar_average_distinguishable(int n, std::span<const int> bin_sizes, int m) {
    detail::require_spanning(n, bin_sizes, m);
    return detail::haar_average(n, bin_sizes, [&](const std::vector<int> &k) {
        return detail::multinomial_weight(n, k, bin_sizes, m);
    });
}

/// Haar-averaged bosonic law: the multinomial reweighted by
/// prod_z prod_{l<k_z} (1 + l/K_z) / prod_{l<n} (1 + l/m).
inline BinnedDistribution haar_average_bosonic(int n, std::span<const int> bin_sizes, int m) {
    detail::require_spanning(n, bin_sizes, m);
    double denominator = 1.0;
    for (int l = 0; l < n; ++l) {
        denominator *= 1.0 + static_cast<double>(l) / m;
    }
    return detail::haar_average(n, bin_sizes, [&](const std::vector<int> &k) {
        double numerator = 1.0;
        for (std::size_t z = 0; z < k.size(); ++z) {
            for (int l = 0; l < k[z]; ++l) {
                numerator *= 1.0 + static_cast<double>(l) / bin_sizes[z];
            }
        }
        return detail::multinomial_weight(n, k, bin_sizes, m) * numerator / denominator;
    });
}

/// Leading-order Gaussian density of the Haar-averaged binned counts for
/// large n, m at density rho = n/m; sigma = 1 for bosons (variance widened by
/// 1 + rho), 0 for distinguishable particles. Uses x_z = k_z / n so the peak
/// sits at k_z = n q_z.
inline double gaussian_asymptotic(int n, int m, std::span<const double> q, int sigma, std::span<const double> k) {
    if (q.size() != k.size() || q.empty()) {
        throw Error(ErrorKind::shape, "gaussian_asymptotic: q and k must have equal nonzero length");
    }
    if (sigma != 0 && sigma != 1) {
        throw Error(ErrorKind::domain, "sigma must be 0 or 1");
    }
    double q_total = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::abs(q_total - 1.0) > 1e-9) {
        throw Error(ErrorKind::domain, "bin fractions must sum to 1");
    }
    const double rho = static_cast<double>(n) / m;
    const double width = 1.0 + sigma * rho;
    double exponent = 0.0;
    double sqrt_q = 1.0;
    for (std::size_t z = 0; z < q.size(); ++z) {
        double xz = k[z] / n;
        exponent += (xz - q[z]) * (xz - q[z]) / (2.0 * width * q[z]);
        sqrt_q *= std::sqrt(q[z]);
    }
    const double dims = (static_cast<double>(q.size()) - 1.0) / 2.0;
    return std::exp(-n * exponent) / (std::pow(2.0 * std::numbers::pi * width * n, dims) * sqrt_q);
}

}  // namespace bosonbins
