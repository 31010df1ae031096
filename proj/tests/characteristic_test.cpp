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


#include <gtest/gtest.h>

#include "bosonbins/characteristic.hpp"
#include "bosonbins/oracle.hpp"
#include "reference.hpp"

namespace bosonbins {
namespace {

constexpr double kPi = std::numbers::pi;

InputSpec standard(int n, int m, double x) { return InputSpec::standard(n, m, gram_interpolation(n, x)); }

TEST(PhaseMask, DiagonalEntries) {
    Partition p({{1}, {2}}, 3);
    std::vector<double> eta{kPi, 0.0};
    ComplexMatrix d = phase_mask(p, eta);
    EXPECT_NEAR(std::abs(d(0, 0) - Complex(-1.0)), 0.0, 1e-15);
    EXPECT_EQ(d(1, 1), Complex(1.0));
    EXPECT_EQ(d(2, 2), Complex(1.0));
    std::vector<double> zero{0.0, 0.0};
    EXPECT_TRUE(phase_mask(p, zero).isIdentity(0.0));
    std::vector<double> short_eta{0.0};
    EXPECT_THROW(phase_mask(p, short_eta), Error);
}

TEST(VirtualInterferometer, IdentityGlobalPhaseAndUnitarity) {
    auto u = haar_unitary(5, 17);
    auto all = equipartition(5, 1);
    std::vector<double> zero{0.0};
    EXPECT_TRUE(virtual_interferometer(u, all, zero).isIdentity(1e-12));
    std::vector<double> phi{0.7};
    ComplexMatrix v = virtual_interferometer(u, all, phi);
    EXPECT_TRUE(v.isApprox(std::polar(1.0, 0.7) * ComplexMatrix::Identity(5, 5), 1e-12));
    Partition p({{1, 3}, {4}}, 5);
    std::vector<double> eta{1.3, -2.1};
    EXPECT_LT(unitarity_defect(virtual_interferometer(u, p, eta)), 1e-10);
    EXPECT_THROW(virtual_interferometer(u, equipartition(6, 2), eta), Error);
}

TEST(CharacteristicValue, OriginIsOneAndBounded) {
    auto u = haar_unitary(6, 2);
    auto p = equipartition(6, 3);
    auto input = standard(4, 6, 0.6);
    std::vector<double> zero{0.0, 0.0, 0.0};
    EXPECT_EQ(characteristic_value(u, input, p, zero), Complex(1.0));
    Engine engine = make_engine(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> eta{6 * uniform01(engine), 6 * uniform01(engine), 6 * uniform01(engine)};
        EXPECT_LE(std::abs(characteristic_value(u, input, p, eta)), 1.0 + 1e-9);
    }
}

TEST(CharacteristicValue, MatchesOracleExpectationOnBeamSplitter) {
    // x(eta) = sum_k P(k) exp(i eta.k) with P from the Fock-space oracle.
    auto u = fourier_matrix(2);
    Partition p({{1}, {2}}, 2);
    std::vector<ComplexVector> states(2, ComplexVector::Ones(1));
    auto dist = oracle::fock_binned_distribution(u, states, p);
    std::vector<double> eta{kPi, 0.0};
    Complex expected = 0.0;
    for (std::size_t f = 0; f < dist.size(); ++f) {
        expected += dist[f] * std::polar(1.0, eta[0] * dist.outcome(f)[0]);
    }
    EXPECT_NEAR(std::abs(characteristic_value(u, standard(2, 2, 1.0), p, eta) - expected), 0.0, 1e-10);
}

TEST(CharacteristicValue, RejectsBadGramAndShapes) {
    auto u = haar_unitary(3, 1);
    Partition p({{1}}, 3);
    EXPECT_THROW(InputSpec::standard(2, 3, gram_interpolation(3, 0.5)), Error);
    ComplexMatrix s = ComplexMatrix::Identity(2, 2) * 2.0;
    EXPECT_THROW(GramMatrix{s}, Error);
    std::vector<double> eta{0.1, 0.2};
    EXPECT_THROW(characteristic_value(u, standard(2, 3, 1.0), p, eta), Error);
}

TEST(BinnedDistribution, HongOuMandel) {
    auto u = fourier_matrix(2);
    Partition p({{1}, {2}}, 2);
    auto bosons = binned_distribution(u, standard(2, 2, 1.0), p);
    EXPECT_NEAR(bosons.probability(std::vector<int>{2, 0}), 0.5, 1e-12);
    EXPECT_NEAR(bosons.probability(std::vector<int>{0, 2}), 0.5, 1e-12);
    EXPECT_NEAR(bosons.probability(std::vector<int>{1, 1}), 0.0, 1e-12);
    auto classical = binned_distribution(u, standard(2, 2, 0.0), p);
    EXPECT_NEAR(classical.probability(std::vector<int>{2, 0}), 0.25, 1e-12);
    EXPECT_NEAR(classical.probability(std::vector<int>{1, 1}), 0.5, 1e-12);
    EXPECT_EQ(bosons.method().kind, "ryser");
}

TEST(BinnedDistribution, SingleSubsetOfAllModesHoldsEveryPhoton) {
    auto u = haar_unitary(5, 9);
    auto d = binned_distribution(u, standard(3, 5, 0.4), equipartition(5, 1));
    EXPECT_NEAR(d[3], 1.0, 1e-12);
}

TEST(BinnedDistribution, MatchesPermutationSumReference) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const int m = 4, n = 3;
        reference::Matrix ref_u = reference::haar(m, rng);
        UnitaryMatrix u(ref_u);
        // Complex Gram from random unit vectors in C^2.
        std::normal_distribution<double> g;
        std::vector<ComplexVector> states;
        for (int p = 0; p < n; ++p) {
            ComplexVector v(2);
            v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
            states.push_back(v.normalized());
        }
        GramMatrix gram = gram_from_states(states);
        Partition part({{1, 3}, {4}}, m);
        auto engine = binned_distribution(u, InputSpec::standard(n, m, gram), part);
        auto expected = reference::binned(ref_u, gram.matrix(), part.bin_of_mode(), part.bins());
        for (const auto &[k, p] : expected) {
            EXPECT_NEAR(engine.probability(k), p, 1e-10) << trial;
        }
    }
}

TEST(BinnedDistribution, PermutingBinsPermutesAxes) {
    auto u = haar_unitary(5, 4);
    auto input = standard(3, 5, 0.7);
    auto a = binned_distribution(u, input, Partition({{1, 2}, {4}, {5}}, 5));
    auto b = binned_distribution(u, input, Partition({{5}, {1, 2}, {4}}, 5));
    for (std::size_t f = 0; f < a.size(); ++f) {
        auto k = a.outcome(f);
        std::vector<int> kb{k[2], k[0], k[1]};
        EXPECT_NEAR(a[f], b.probability(kb), 1e-12);
    }
}

TEST(BinnedDistribution, GeneralOccupationMatchesOutcomeEnumeration) {
    // Two photons in mode 1, one in mode 3; all indistinguishable.
    auto u = haar_unitary(3, 31);
    InputSpec input({2, 0, 1}, gram_interpolation(3, 1.0));
    auto d = marginal_distribution(u, input, std::vector<int>{1, 2, 3});
    // Reference: |perm(U[s, in])|^2 / (mu(s) mu(r)) with inputs {0, 0, 2}.
    reference::Matrix mat = u.matrix();
    double total = 0.0;
    for (const auto &s : reference::occupations(3, 3)) {
        reference::Matrix sub(3, 3);
        int row = 0;
        for (int mode = 0; mode < 3; ++mode) {
            for (int c = 0; c < s[mode]; ++c, ++row) {
                sub(row, 0) = mat(mode, 0);
                sub(row, 1) = mat(mode, 0);
                sub(row, 2) = mat(mode, 2);
            }
        }
        double mu = reference::factorial(s[0]) * reference::factorial(s[1]) * reference::factorial(s[2]) * 2.0;
        double p = std::norm(reference::permanent(sub)) / mu;
        total += p;
        EXPECT_NEAR(d.probability(s), p, 1e-10);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_THROW(InputSpec({2, 0, 1}, gram_interpolation(3, 0.5)), Error);
}

TEST(MarginalDistribution, MeanPhotonNumberAndSinglePhoton) {
    auto u = haar_unitary(5, 6);
    for (double x : {0.0, 0.5, 1.0}) {
        auto d = marginal_distribution(u, standard(3, 5, x), std::vector<int>{2});
        double mean = 0.0;
        for (int k = 0; k <= 3; ++k) {
            mean += k * d[k];
        }
        double expected = 0.0;
        for (int j = 0; j < 3; ++j) {
            expected += std::norm(u(1, j));
        }
        EXPECT_NEAR(mean, expected, 1e-10);
    }
    auto one = marginal_distribution(u, standard(1, 5, 1.0), std::vector<int>{4});
    EXPECT_NEAR(one[1], std::norm(u(3, 0)), 1e-12);
    EXPECT_THROW(marginal_distribution(u, standard(1, 5, 1.0), std::vector<int>{2, 2}), Error);
}

TEST(ApproxBinnedDistribution, MetadataAndPinnedOrigin) {
    auto u = haar_unitary(4, 5);
    auto p = equipartition(4, 2);
    auto input = standard(3, 4, 1.0);
    auto d = approx_binned_distribution(u, input, p, 0.5, 77, 1);
    EXPECT_EQ(d.method().kind, "glynn");
    EXPECT_DOUBLE_EQ(d.method().epsilon, 0.5 / 4.0);
    EXPECT_EQ(d.method().trials_per_point, glynn_trial_count(0.125));
    EXPECT_TRUE(d.method().renormalized);
    EXPECT_NEAR(d.method().raw_total, 1.0, 1e-12);  // the l = 0 term alone fixes the total
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
    EXPECT_EQ(d, approx_binned_distribution(u, input, p, 0.5, 77, 2));
    EXPECT_THROW(approx_binned_distribution(u, input, p, 0.0, 1), Error);
    auto loose = approx_binned_distribution(u, input, p, 2.0, 3);
    EXPECT_NEAR(loose.total(), 1.0, 1e-12);
}

TEST(CharacteristicGrid, HermitianMirror) {
    auto u = haar_unitary(4, 8);
    CharacteristicFunction x(u, standard(3, 4, 0.3), equipartition(4, 2));
    auto grid = characteristic_grid(x);
    EXPECT_EQ(grid.values[0], Complex(1.0));
    for (std::size_t f = 0; f < grid.values.size(); ++f) {
        auto l = grid.index(f);
        std::vector<double> eta{2 * kPi * l[0] / 4.0, 2 * kPi * l[1] / 4.0};
        EXPECT_NEAR(std::abs(grid.values[f] - x(eta)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(grid.values[grid.mirror(f)] - std::conj(grid.values[f])), 0.0, 1e-12);
    }
}

TEST(RankCheck, Bounds) {
    auto u = haar_unitary(6, 10);
    std::vector<double> zero{0.0, 0.0};
    EXPECT_EQ(rank_check_W(u, Partition({{1}, {3}}, 6), zero), 0);
    std::vector<double> eta{0.9, 2.2};
    EXPECT_EQ(rank_check_W(u, Partition({{1}, {3}}, 6), eta), 2);
    std::vector<double> one{1.1};
    EXPECT_EQ(rank_check_W(u, Partition({{2, 4, 5}}, 6), one), 3);
}

}  // namespace
}  // namespace bosonbins
