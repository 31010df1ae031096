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


// Acceptance gate. Prints one PASS/FAIL line per criterion; exits nonzero
// if any selected criterion fails. `--only N` runs a single criterion.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bosonbins/bosonbins.hpp"
#include "instances.hpp"
#include "reference.hpp"

namespace {

using namespace bosonbins;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GramMatrix gram_with_overlap(int n, double x, Engine &engine) {
    // Half the cases use the uniform-overlap family, half random internal states.
    if (uniform01(engine) < 0.5) {
        return gram_interpolation(n, x);
    }
    return testing_support::random_gram(n, engine);
}

Outcome oracle_equivalence() {
    auto start = std::chrono::steady_clock::now();
    Engine engine = make_engine(101);
    const double xs[] = {0.0, 0.5, 1.0};
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const int m = 2 + static_cast<int>(uniform01(engine) * 4);              // 2..5
        const int n = 1 + static_cast<int>(uniform01(engine) * std::min(m, 3));  // 1..3
        const int bins = 1 + static_cast<int>(uniform01(engine) * std::min(m, 3));
        auto u = haar_unitary(m, engine());
        auto partition = testing_support::random_partition(m, bins, engine, false);
        // Internal states realizing the Gram matrix: explicit vectors for the
        // oracle, their overlaps for the engine.
        std::vector<ComplexVector> states;
        if (c % 2 == 0) {
            const double x = xs[(c / 2) % 3];
            // Common component sqrt(x) plus a private orthogonal direction.
            for (int p = 0; p < n; ++p) {
                ComplexVector v = ComplexVector::Zero(n + 1);
                v(0) = std::sqrt(x);
                v(p + 1) = std::sqrt(1.0 - x);
                states.push_back(v);
            }
        } else {
            const int dim = 1 + static_cast<int>(uniform01(engine) * n);
            for (int p = 0; p < n; ++p) {
                ComplexVector v(dim);
                for (int r = 0; r < dim; ++r) {
                    v(r) = Complex(standard_normal(engine), standard_normal(engine));
                }
                states.push_back(v.normalized());
            }
        }
        auto gram = gram_from_states(states);
        auto engine_dist = binned_distribution(u, InputSpec::standard(n, m, gram), partition, 1);
        auto oracle_dist = oracle::fock_binned_distribution(u, states, partition);
        for (std::size_t f = 0; f < engine_dist.size(); ++f) {
            worst = std::max(worst, std::abs(engine_dist[f] - oracle_dist[f]));
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-8 && elapsed < 60.0,
            fmt("50 cases, max |engine - oracle| = %.3g (tol 1e-8), %.1f s (limit 60 s)", worst, elapsed)};
}

Outcome fourier_closed_forms() {
    double worst = 0.0, worst_gap = 0.0;
    for (int n = 2; n <= 8; ++n) {
        auto f = fourier_matrix(n);
        std::vector<int> mode{1};
        for (double x : {0.0, 1.0}) {
            auto engine = marginal_distribution(f, InputSpec::standard(n, n, gram_interpolation(n, x)), mode);
            auto closed = x == 1.0 ? single_mode_bosonic(n, n) : single_mode_distinguishable(n, n);
            for (int k = 0; k <= n; ++k) {
                worst = std::max(worst, std::abs(engine[k] - closed[k]));
            }
            if (x == 1.0) {
                worst_gap = std::max(worst_gap, std::abs(engine[n - 1]));
            }
        }
    }
    return {worst <= 1e-9 && worst_gap < 1e-10,
            fmt("n=m in 2..8, max deviation %.3g (tol 1e-9), max P(n-1) bosonic %.3g (tol 1e-10)", worst, worst_gap)};
}

Outcome odd_mode_suppression() {
    double worst_odd = 0.0, worst_even = 0.0;
    for (int n : {2, 4, 6, 8}) {
        std::vector<int> odd;
        for (int mode = 1; mode <= n; mode += 2) {
            odd.push_back(mode);
        }
        auto dist = binned_distribution(fourier_matrix(n), InputSpec::standard(n, n, gram_interpolation(n, 1.0)),
                                        Partition({odd}, n));
        for (int k = 0; k <= n; ++k) {
            if (k % 2) {
                worst_odd = std::max(worst_odd, std::abs(dist[k]));
            } else {
                double expected = reference::factorial(n / 2) /
                                  (reference::factorial(k / 2) * reference::factorial(n / 2 - k / 2)) /
                                  std::pow(2.0, n / 2);
                worst_even = std::max(worst_even, std::abs(dist[k] - expected));
            }
        }
    }
    return {worst_odd < 1e-10 && worst_even <= 1e-9,
            fmt("n in {2,4,6,8}, max odd-k mass %.3g (tol 1e-10), max even-k deviation %.3g (tol 1e-9)", worst_odd,
                worst_even)};
}

Outcome bunching_endpoints() {
    Engine engine = make_engine(404);
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const int n = 1 + static_cast<int>(uniform01(engine) * 6);
        const int m = n + static_cast<int>(uniform01(engine) * 4);
        auto u = haar_unitary(m, engine());
        auto gram = testing_support::random_gram(n, engine);
        auto subset = testing_support::random_partition(m, 1, engine, false).subset(0);
        auto dist = binned_distribution(u, InputSpec::standard(n, m, gram), Partition({subset}, m), 1);
        // H'_n = S ⊙ (U_sub^dagger U_sub) restricted to the input columns.
        reference::Matrix h = reference::Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int l : subset) {
                    h(a, b) += std::conj(u(l - 1, a)) * u(l - 1, b);
                }
            }
        }
        reference::Matrix hp = gram.matrix().cwiseProduct(h);
        worst = std::max(worst, std::abs(dist[n] - reference::permanent(hp).real()));
        reference::Matrix rest = reference::Matrix::Identity(n, n) - hp;
        worst = std::max(worst, std::abs(dist[0] - reference::permanent(rest).real()));
    }
    return {worst <= 1e-9, fmt("50 random cases n<=6, max |P(n)-perm(H')|, |P(0)-perm(1-H')| = %.3g (tol 1e-9)", worst)};
}

Outcome theorem_one_bound() {
    auto start = std::chrono::steady_clock::now();
    const int n = 6, m = 6;
    auto partition = equipartition(m, 2);
    auto input = InputSpec::standard(n, m, gram_interpolation(n, 1.0));
    int within = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto u = haar_unitary(m, derive_seed(505, seed));
        auto exact = binned_distribution(u, input, partition);
        auto approx = approx_binned_distribution(u, input, partition, 0.1, derive_seed(506, seed));
        double l1 = tvd(exact, approx);
        worst = std::max(worst, l1);
        within += l1 <= 0.1;
    }
    const double elapsed = seconds_since(start);
    return {within >= 95 && elapsed < 600.0,
            fmt("n=m=6, K=2, beta=0.1: %d/100 seeds with l1 <= 0.1 (need 95), worst %.4f, %.1f s (limit 600 s)", within,
                worst, elapsed)};
}

Outcome haar_average_formulas() {
    const int n = 4, m = 8, trials = 1000;
    auto partition = equipartition(m, 2);
    auto sizes = partition.bin_sizes();
    std::string detail;
    bool pass = true;
    for (double x : {0.0, 1.0}) {
        auto input = InputSpec::standard(n, m, gram_interpolation(n, x));
        std::vector<std::vector<double>> samples(trials);
        parallel_for(trials, [&](std::size_t t) {
            auto d = binned_distribution(haar_unitary(m, derive_seed(606, t)), input, partition, 1);
            samples[t].assign(d.probabilities().begin(), d.probabilities().end());
        });
        auto formula = x == 0.0 ? haar_average_distinguishable(n, sizes, m) : haar_average_bosonic(n, sizes, m);
        double worst_z = 0.0;
        for (std::size_t f = 0; f < formula.size(); ++f) {
            std::vector<double> column;
            for (const auto &s : samples) {
                column.push_back(s[f]);
            }
            auto stats = summarize(column);
            double se = stats.std / std::sqrt(static_cast<double>(trials));
            double diff = std::abs(stats.mean - formula[f]);
            // Outside the conservation support both sides are zero up to roundoff.
            if (diff <= 1e-12) {
                continue;
            }
            if (se == 0.0) {
                worst_z = INFINITY;
                continue;
            }
            worst_z = std::max(worst_z, diff / se);
        }
        pass = pass && worst_z <= 3.0;
        detail += fmt("%s max |mean - formula|/SE = %.2f; ", x == 0.0 ? "x=0" : "x=1", worst_z);
    }
    return {pass, "n=4, m=8, K=2, 1000 unitaries: " + detail + "(tol 3 SE)"};
}

Outcome tvd_density_law() {
    auto start = std::chrono::steady_clock::now();
    const int n = 6;
    std::vector<std::pair<double, double>> points;
    std::string detail;
    for (int m : {12, 18, 30, 60, 120}) {
        auto s = haar_tvd_study(n, m, 2, gram_interpolation(n, 1.0), gram_interpolation(n, 0.0), 100,
                                derive_seed(707, m));
        points.emplace_back(static_cast<double>(n) / m, s.mean);
        detail += fmt("%.3f ", s.mean);
    }
    auto fit = powerlaw_fit(points);
    const double elapsed = seconds_since(start);
    bool pass = fit.exponent >= 0.8 && fit.exponent <= 1.1 && fit.prefactor >= 0.41 / 1.5 &&
                fit.prefactor <= 0.41 * 1.5 && elapsed < 1800.0;
    return {pass, fmt("mean TVD [%s] -> c = %.3f (need [0.273, 0.615]), r = %.3f (need [0.8, 1.1]), %.1f s",
                      detail.c_str(), fit.prefactor, fit.exponent, elapsed)};
}

Outcome bayesian_sample_count() {
    DecisionOptions options;  // reject at p_null < 0.05, 10^5 shot budget
    auto null_gram = gram_interpolation(10, 1.0), alt_gram = gram_interpolation(10, 0.8);
    auto k2 = haar_sample_study(10, 10, 2, null_gram, alt_gram, true, options, 100, 20, 808);
    auto k3 = haar_sample_study(10, 10, 3, null_gram, alt_gram, true, options, 100, 20, 808);
    bool pass = k2.median >= 50 && k2.median <= 2000 && k3.median < k2.median;
    return {pass, fmt("n=m=10, x=0.8: median shots K=2 %.1f (need [50, 2000]), K=3 %.1f (need < K=2); censored %d/%d",
                      k2.median, k3.median, k2.censored_runs, k3.censored_runs)};
}

Outcome loss_speedup() {
    auto r = loss_speedup_study(10, 10, 0.9, 0.8, 10, 20, 200, 909);
    const double speedup = r.ratio.back();
    // Nondecreasing within noise: each step may drop by at most 3 of its spreads / sqrt(trials).
    bool monotone = true;
    for (int l = 1; l <= 10; ++l) {
        double slack = 3.0 * r.ratio_std[l] / std::sqrt(static_cast<double>(r.trials));
        monotone = monotone && r.ratio[l] >= r.ratio[l - 1] - slack;
    }
    std::string curve;
    for (double v : r.ratio) {
        curve += fmt("%.2f ", v);
    }
    return {speedup >= 10.0 && speedup <= 100.0 && monotone,
            fmt("n=m=10, t=0.8, x_alt=0.9: T_0/T_l = [%s] -> T_0/T_10 = %.2f (need [10, 100]), monotone %s, "
                "censored %d",
                curve.c_str(), speedup, monotone ? "yes" : "no", r.censored_runs)};
}

Outcome permanent_engine() {
    Engine engine = make_engine(1010);
    double worst_rel = 0.0;
    for (int c = 0; c < 100; ++c) {
        const int n = 1 + c % 8;
        ComplexMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                a(i, j) = Complex(standard_normal(engine), standard_normal(engine));
            }
        }
        Complex exact = perm_naive(a);
        worst_rel = std::max(worst_rel, std::abs(perm_ryser(a) - exact) / std::abs(exact));
    }
    const std::int64_t trials = 100000;
    double worst_z = 0.0;
    for (int c = 0; c < 10; ++c) {
        auto u = haar_unitary(8, engine());
        ComplexMatrix a = u.matrix().topLeftCorner(5, 5);
        Complex sum = 0.0;
        double sum_sq = 0.0;
        for (std::int64_t t = 0; t < trials; ++t) {
            Complex v = glynn_trial(a, engine());
            sum += v;
            sum_sq += std::norm(v);
        }
        Complex mean = sum / static_cast<double>(trials);
        double var = sum_sq / trials - std::norm(mean);
        double se = std::sqrt(var / trials);
        worst_z = std::max(worst_z, std::abs(mean - perm_ryser(a)) / se);
    }
    return {worst_rel <= 1e-10 && worst_z <= 3.0,
            fmt("Ryser vs naive, 100 matrices n<=8: max rel error %.3g (tol 1e-10); Glynn 10 5x5 unitary blocks at "
                "1e5 trials: max |mean - perm|/SE = %.2f (tol 3)",
                worst_rel, worst_z)};
}

Outcome property_suites() {
    auto start = std::chrono::steady_clock::now();
    int violations = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto inst = testing_support::make_instance(i, i % 2 == 0);
        const auto &[u, input, partition, eta] = inst;
        CharacteristicFunction x(u, input, partition);
        auto raw = inverse_transform(characteristic_grid(x, {.threads = 1}));
        double total = 0.0;
        for (const auto &p : raw) {
            violations += p.real() < -1e-9;
            total += p.real();
        }
        violations += std::abs(total - 1.0) > 1e-8;
        auto dist = binned_distribution(u, input, partition, 1);
        if (partition.spans_all_modes()) {
            double off = 0.0;
            for (std::size_t f = 0; f < dist.size(); ++f) {
                auto k = dist.outcome(f);
                if (std::accumulate(k.begin(), k.end(), 0) != input.photons()) {
                    off += dist[f];
                }
            }
            violations += off >= 1e-9;
        }
        std::vector<double> zero(partition.bins(), 0.0);
        violations += std::abs(x(zero) - Complex(1.0)) > 1e-9;
        violations += unitarity_defect(virtual_interferometer(u, partition, eta)) > 1e-10;
        int phased = 0;
        for (const auto &bin : partition.subsets()) {
            phased += static_cast<int>(bin.size());
        }
        try {
            violations += rank_check_W(u, partition, eta) > phased;
        } catch (const Error &) {
            ++violations;
        }
        auto noisy = dark_counts_convolve(dist, 0.05 + 0.001 * static_cast<double>(i), partition.bin_sizes());
        violations += std::abs(noisy.total() - 1.0) > 1e-12;
    }
    const double elapsed = seconds_since(start);
    return {violations == 0 && elapsed < 300.0,
            fmt("200 instances x 7 properties: %d violations, %.1f s (limit 300 s)", violations, elapsed)};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "Fourier single-mode closed forms", fourier_closed_forms},
        {3, "odd-mode suppression", odd_mode_suppression},
        {4, "bunching endpoints", bunching_endpoints},
        {5, "randomized l1 bound", theorem_one_bound},
        {6, "Haar-average formulas", haar_average_formulas},
        {7, "TVD density law", tvd_density_law},
        {8, "Bayesian sample count", bayesian_sample_count},
        {9, "loss speedup", loss_speedup},
        {10, "permanent engine", permanent_engine},
        {11, "property suites", property_suites},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    int failures = 0, ran = 0;
    for (const auto &c : criteria) {
        if (only != 0 && c.id != only) {
            continue;
        }
        ++ran;
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        failures += !outcome.pass;
        std::printf("[%s] %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
