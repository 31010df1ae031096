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

#include "bosonbins/linalg.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins {
namespace {

TEST(UnitaryMatrix, RejectsNonUnitary) {
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    a(0, 1) = 0.1;
    try {
        UnitaryMatrix u(a);
        FAIL() << "accepted a non-unitary matrix";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
    EXPECT_THROW(UnitaryMatrix(ComplexMatrix::Identity(2, 3)), Error);
    EXPECT_THROW(UnitaryMatrix(ComplexMatrix(0, 0)), Error);
}

TEST(HaarUnitary, IsUnitaryAndDeterministic) {
    for (int m : {1, 2, 5, 17, 40}) {
        auto u = haar_unitary(m, 99);
        EXPECT_LT(unitarity_defect(u.matrix()), 1e-12) << m;
        EXPECT_EQ(u, haar_unitary(m, 99));
    }
    EXPECT_FALSE(haar_unitary(4, 1) == haar_unitary(4, 2));
    EXPECT_THROW(haar_unitary(0, 1), Error);
}

TEST(HaarUnitary, EntryMomentsMatchHaarMeasure) {
    // For Haar U(m): E|U_11|^2 = 1/m and E|U_11|^4 = 2/(m(m+1)).
    const int m = 4, draws = 20000;
    double s2 = 0.0, s4 = 0.0;
    for (int t = 0; t < draws; ++t) {
        double p = std::norm(haar_unitary(m, derive_seed(5, t))(0, 0));
        s2 += p;
        s4 += p * p;
    }
    EXPECT_NEAR(s2 / draws, 1.0 / m, 0.005);
    EXPECT_NEAR(s4 / draws, 2.0 / (m * (m + 1.0)), 0.005);
}

TEST(FourierMatrix, EntriesAndUnitarity) {
    auto f = fourier_matrix(6);
    EXPECT_LT(unitarity_defect(f.matrix()), 1e-12);
    for (int j = 0; j < 6; ++j) {
        for (int k = 0; k < 6; ++k) {
            EXPECT_NEAR(std::abs(f(j, k)), 1.0 / std::sqrt(6.0), 1e-15);
        }
    }
    EXPECT_NEAR(std::arg(f(1, 1)), -2.0 * std::numbers::pi / 6.0, 1e-14);
    auto f2 = fourier_matrix(2);
    EXPECT_NEAR(f2(1, 1).real(), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(LossEmbedding, UnitaryWithScaledBlock) {
    auto u = haar_unitary(5, 3);
    for (double t : {0.0, 0.3, 0.8, 1.0}) {
        auto big = embed_uniform_loss(u, t);
        EXPECT_EQ(big.dim(), 10);
        EXPECT_LT(unitarity_defect(big.matrix()), 1e-12);
        EXPECT_NEAR(std::abs(big(2, 1) - std::sqrt(t) * u(2, 1)), 0.0, 1e-15);
    }
    EXPECT_THROW(embed_uniform_loss(u, 1.2), Error);
    EXPECT_THROW(embed_uniform_loss(u, -0.1), Error);
}

TEST(Random, DerivedSeedsAreDistinctAndStable) {
    EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
    Engine a = make_engine(7), b = make_engine(7);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(uniform01(a), uniform01(b));
    }
}

}  // namespace
}  // namespace bosonbins
