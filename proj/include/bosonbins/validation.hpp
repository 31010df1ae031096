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
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosonbins/characteristic.hpp"
#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/gram.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/noise.hpp"
#include "bosonbins/oracle.hpp"
#include "bosonbins/parallel.hpp"
#include "bosonbins/partition.hpp"
#include "bosonbins/random.hpp"

namespace bosonbins {

enum class SampleKind { raw_occupations, binned_counts };

/// Experimental records: full occupation vectors (width m) or binned count
/// vectors (width K, or K+1 with an environment axis).
struct SampleSet {
    SampleKind kind = SampleKind::binned_counts;
    int width = 0;
    std::vector<std::vector<int>> records;
};

/// Sum_k |p(k) - q(k)| over the union of both domains (no 1/2 factor), in [0, 2].
inline double tvd(const BinnedDistribution &p, const BinnedDistribution &q) {
    if (p.bins() != q.bins()) {
        throw Error(ErrorKind::shape, "tvd: distributions have different bin counts");
    }
    double total = 0.0;
    for (std::size_t flat = 0; flat < p.size(); ++flat) {
        total += std::abs(p[flat] - q.probability(p.outcome(flat)));
    }
    for (std::size_t flat = 0; flat < q.size(); ++flat) {
        auto k = q.outcome(flat);
        if (!p.contains(k)) {
            total += std::abs(q[flat]);
        }
    }
    return total;
}

/// k_z = sum of s_j over the modes of bin z.
inline SampleSet bin_samples(const SampleSet &raw, const Partition &partition) {
    if (raw.kind != SampleKind::raw_occupations) {
        throw Error(ErrorKind::ingestion, "bin_samples expects raw occupation records");
    }
    SampleSet out{SampleKind::binned_counts, partition.bins(), {}};
    out.records.reserve(raw.records.size());
    const auto &bin_of = partition.bin_of_mode();
    for (std::size_t i = 0; i < raw.records.size(); ++i) {
        const auto &s = raw.records[i];
        if (static_cast<int>(s.size()) != partition.total_modes()) {
            throw Error(ErrorKind::ingestion, "record " + std::to_string(i + 1) + " has " + std::to_string(s.size()) +
                                                  " modes, expected " + std::to_string(partition.total_modes()));
        }
        std::vector<int> k(partition.bins(), 0);
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] < 0) {
                throw Error(ErrorKind::ingestion, "record " + std::to_string(i + 1) + " has a negative count");
            }
            if (bin_of[j] >= 0) {
                k[bin_of[j]] += s[j];
            }
        }
        out.records.push_back(std::move(k));
    }
    return out;
}

inline constexpr double kDefaultProbabilityFloor = 1e-12;

/// p_null = chi / (chi + 1) evaluated from log chi without overflow.
inline double p_null_from_log_chi(double log_chi) {
    if (log_chi >= 0.0) {
        return 1.0 / (1.0 + std::exp(-log_chi));
    }
    double e = std::exp(log_chi);
    return e / (1.0 + e);
}

struct ValidationReport {
    double log_chi = 0.0;
    double chi = 1.0;
    double p_null = 0.5;
    std::size_t samples_used = 0;
    double threshold = 0.0;
    bool censored = false;
    double floor = kDefaultProbabilityFloor;
    std::uint64_t seed = 0;
    std::vector<double> running_p_null;
};

/// Bayes factor chi = prod_i P0(k_i) / Pa(k_i), accumulated in the log
/// domain. Model probabilities are floored at `floor` so a sample on a
/// suppressed outcome yields a finite log-odds step.
inline ValidationReport bayes_update(const SampleSet &samples, const BinnedDistribution &null_model,
                                     const BinnedDistribution &alt_model, double floor = kDefaultProbabilityFloor,
                                     bool keep_running = false) {
    if (samples.kind != SampleKind::binned_counts) {
        throw Error(ErrorKind::ingestion, "bayes_update expects binned count records");
    }
    if (!(floor > 0.0)) {
        throw Error(ErrorKind::domain, "probability floor must be > 0");
    }
    if (null_model.bins() != alt_model.bins()) {
        throw Error(ErrorKind::shape, "null and alternative models have different bin counts");
    }
    ValidationReport report;
    report.floor = floor;
    for (std::size_t i = 0; i < samples.records.size(); ++i) {
        const auto &k = samples.records[i];
        if (static_cast<int>(k.size()) != null_model.bins()) {
            throw Error(ErrorKind::ingestion, "record " + std::to_string(i + 1) + " has " + std::to_string(k.size()) +
                                                  " bins, models have " + std::to_string(null_model.bins()));
        }
        report.log_chi += std::log(std::max(null_model.probability(k), floor)) -
                          std::log(std::max(alt_model.probability(k), floor));
        if (keep_running) {
            report.running_p_null.push_back(p_null_from_log_chi(report.log_chi));
        }
    }
    report.samples_used = samples.records.size();
    report.chi = std::exp(report.log_chi);
    report.p_null = p_null_from_log_chi(report.log_chi);
    return report;
}

struct DecisionOptions {
    double threshold = 0.05;  // < 0.5: reject H0 when p_null <= threshold; > 0.5: confirm when p_null >= threshold
    std::size_t max_samples = 100000;  // budget in drawn shots
    double floor = kDefaultProbabilityFloor;
    std::function<bool(std::span<const int>)> accept;  // events failing this are drawn but ignored
};

struct DecisionResult {
    std::size_t samples_drawn = 0;
    std::size_t samples_used = 0;
    bool censored = false;
    double p_null = 0.5;
};

/// Draws i.i.d. events from `truth` and updates the Bayes factor until p_null
/// crosses the threshold or the shot budget runs out (censored).
inline DecisionResult samples_to_decision(const BinnedDistribution &truth, const BinnedDistribution &null_model,
                                          const BinnedDistribution &alt_model, const DecisionOptions &options,
                                          std::uint64_t seed) {
    const double t = options.threshold;
    if (!(t > 0.0 && t < 1.0) || t == 0.5) {
        throw Error(ErrorKind::domain, "decision threshold must lie in (0, 1) and differ from 0.5");
    }
    if (!(options.floor > 0.0)) {
        throw Error(ErrorKind::domain, "probability floor must be > 0");
    }
    const double log_odds = std::log(t / (1.0 - t));
    const bool confirm = t > 0.5;
    std::vector<double> step(truth.size());
    std::vector<char> accepted(truth.size(), 1);
    for (std::size_t flat = 0; flat < truth.size(); ++flat) {
        auto k = truth.outcome(flat);
        step[flat] = std::log(std::max(null_model.probability(k), options.floor)) -
                     std::log(std::max(alt_model.probability(k), options.floor));
        if (options.accept && !options.accept(k)) {
            accepted[flat] = 0;
        }
    }
    oracle::BinnedSampler sampler(truth);
    Engine engine = make_engine(seed);
    DecisionResult result;
    double log_chi = 0.0;
    while (result.samples_drawn < options.max_samples) {
        std::size_t flat = sampler.draw(engine);
        ++result.samples_drawn;
        if (!accepted[flat]) {
            continue;
        }
        ++result.samples_used;
        log_chi += step[flat];
        if (confirm ? log_chi >= log_odds : log_chi <= log_odds) {
            result.p_null = p_null_from_log_chi(log_chi);
            return result;
        }
    }
    result.censored = true;
    result.p_null = p_null_from_log_chi(log_chi);
    return result;
}

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
    std::vector<double> values;
};

inline SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    if (!values.empty()) {
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) {
                ss += (v - s.mean) * (v - s.mean);
            }
            s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
    }
    s.values = std::move(values);
    return s;
}

inline double median(std::vector<double> values) {
    if (values.empty()) {
        return NAN;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

/// Haar-averaged TVD between the exact equipartition distributions of two
/// inputs (standard input, n photons in m modes, K bins). Trial t uses the
/// unitary seeded by derive_seed(seed, t).
inline SummaryStats haar_tvd_study(int n, int m, int bins, const GramMatrix &gram_a, const GramMatrix &gram_b,
                                   int trials, std::uint64_t seed, unsigned threads = default_thread_count()) {
    if (trials < 1) {
        throw Error(ErrorKind::domain, "need at least one trial");
    }
    Partition partition = equipartition(m, bins);
    InputSpec input_a = InputSpec::standard(n, m, gram_a);
    InputSpec input_b = InputSpec::standard(n, m, gram_b);
    std::vector<double> values(trials);
    parallel_for(
        static_cast<std::size_t>(trials),
        [&](std::size_t t) {
            UnitaryMatrix u = haar_unitary(m, derive_seed(seed, t));
            values[t] = tvd(binned_distribution(u, input_a, partition, 1), binned_distribution(u, input_b, partition, 1));
        },
        threads);
    return summarize(std::move(values));
}

struct PowerLawFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    std::vector<double> residuals;  // log(value) - log(fit), per point
};

/// Least squares on (log rho, log value): value ~ prefactor * rho^exponent.
inline PowerLawFit powerlaw_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw Error(ErrorKind::domain, "power-law fit needs at least 3 points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto &[rho, value] : points) {
        if (!(rho > 0.0) || !(value > 0.0)) {
            throw Error(ErrorKind::domain, "power-law fit needs positive coordinates");
        }
        double x = std::log(rho), y = std::log(value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(points.size());
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) {
        throw Error(ErrorKind::domain, "power-law fit needs at least two distinct densities");
    }
    PowerLawFit fit;
    fit.exponent = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / count;
    fit.prefactor = std::exp(intercept);
    for (const auto &[rho, value] : points) {
        fit.residuals.push_back(std::log(value) - (intercept + fit.exponent * std::log(rho)));
    }
    return fit;
}

struct SampleCountStudy {
    std::vector<double> per_unitary;  // mean shots to decision over uncensored runs
    double median = 0.0;
    double mean = 0.0;
    double std = 0.0;
    int censored_runs = 0;
};

/// Shots needed to decide between two equipartition models over Haar
/// unitaries. `truth_is_alternative` selects which model generates the data.
inline SampleCountStudy haar_sample_study(int n, int m, int bins, const GramMatrix &null_gram,
                                          const GramMatrix &alt_gram, bool truth_is_alternative,
                                          const DecisionOptions &options, int trials, int runs_per_trial,
                                          std::uint64_t seed, unsigned threads = default_thread_count()) {
    if (trials < 1 || runs_per_trial < 1) {
        throw Error(ErrorKind::domain, "need at least one trial and one run");
    }
    Partition partition = equipartition(m, bins);
    InputSpec null_input = InputSpec::standard(n, m, null_gram);
    InputSpec alt_input = InputSpec::standard(n, m, alt_gram);
    std::vector<double> per_unitary(trials, NAN);
    std::vector<int> censored(trials, 0);
    parallel_for(
        static_cast<std::size_t>(trials),
        [&](std::size_t t) {
            UnitaryMatrix u = haar_unitary(m, derive_seed(seed, t));
            auto p0 = binned_distribution(u, null_input, partition, 1);
            auto pa = binned_distribution(u, alt_input, partition, 1);
            const auto &truth = truth_is_alternative ? pa : p0;
            double sum = 0.0;
            int used = 0;
            for (int r = 0; r < runs_per_trial; ++r) {
                auto result = samples_to_decision(truth, p0, pa, options, derive_seed(derive_seed(seed, t), r + 1));
                if (result.censored) {
                    ++censored[t];
                } else {
                    sum += static_cast<double>(result.samples_drawn);
                    ++used;
                }
            }
            if (used > 0) {
                per_unitary[t] = sum / used;
            }
        },
        threads);
    SampleCountStudy study;
    std::vector<double> finite;
    for (double v : per_unitary) {
        if (std::isfinite(v)) {
            finite.push_back(v);
        }
    }
    study.censored_runs = std::accumulate(censored.begin(), censored.end(), 0);
    study.median = median(finite);
    auto stats = summarize(finite);
    study.mean = stats.mean;
    study.std = stats.std;
    study.per_unitary = std::move(per_unitary);
    return study;
}

struct LossSpeedupResult {
    std::vector<double> mean_time;     // T_l, l = 0..l_max, shots drawn per decision
    std::vector<double> ratio;         // T_0 / T_l
    std::vector<double> ratio_std;     // spread of per-unitary T_0/T_l
    int censored_runs = 0;
    int trials = 0;
};

/// Validation-time speedup from keeping events with up to l lost photons.
/// Truth is the lossy x = x_alt model; H0 is the lossy ideal (x = 1) model;
/// bins are a single subset holding the first half of the modes plus the
/// environment. Time counts every shot drawn, including discarded ones.
inline LossSpeedupResult loss_speedup_study(int n, int m, double x_alt, double transmissivity, int l_max, int trials,
                                            int runs_per_trial, std::uint64_t seed, DecisionOptions options = {},
                                            unsigned threads = default_thread_count()) {
    if (trials < 1 || runs_per_trial < 1) {
        throw Error(ErrorKind::domain, "need at least one trial and one run");
    }
    if (l_max < 0 || l_max > n) {
        throw Error(ErrorKind::domain, "l_max must lie in 0..n");
    }
    std::vector<int> half;
    for (int mode = 1; mode <= std::max(1, m / 2); ++mode) {
        half.push_back(mode);
    }
    Partition partition({half}, m);
    InputSpec null_input = InputSpec::standard(n, m, gram_interpolation(n, 1.0));
    InputSpec alt_input = InputSpec::standard(n, m, gram_interpolation(n, x_alt));
    const int levels = l_max + 1;
    std::vector<std::vector<double>> times(trials, std::vector<double>(levels, NAN));
    std::vector<int> censored(trials, 0);
    parallel_for(
        static_cast<std::size_t>(trials),
        [&](std::size_t t) {
            UnitaryMatrix u = haar_unitary(m, derive_seed(seed, t));
            auto p0 = lossy_binned_distribution(u, null_input, partition, transmissivity);
            auto pa = lossy_binned_distribution(u, alt_input, partition, transmissivity);
            for (int l = 0; l < levels; ++l) {
                DecisionOptions opts = options;
                opts.accept = [l](std::span<const int> k) { return k.back() <= l; };
                double sum = 0.0;
                int used = 0;
                for (int r = 0; r < runs_per_trial; ++r) {
                    // Same shot stream for every l: the comparison across l is paired.
                    auto result = samples_to_decision(pa, p0, pa, opts, derive_seed(derive_seed(seed, t), r + 1));
                    if (result.censored) {
                        ++censored[t];
                    } else {
                        sum += static_cast<double>(result.samples_drawn);
                        ++used;
                    }
                }
                if (used > 0) {
                    times[t][l] = sum / used;
                }
            }
        },
        threads);
    LossSpeedupResult result;
    result.trials = trials;
    result.censored_runs = std::accumulate(censored.begin(), censored.end(), 0);
    for (int l = 0; l < levels; ++l) {
        std::vector<double> column, ratios;
        for (int t = 0; t < trials; ++t) {
            if (std::isfinite(times[t][l])) {
                column.push_back(times[t][l]);
            }
            if (std::isfinite(times[t][l]) && std::isfinite(times[t][0])) {
                ratios.push_back(times[t][0] / times[t][l]);
            }
        }
        result.mean_time.push_back(summarize(column).mean);
        result.ratio_std.push_back(summarize(ratios).std);
    }
    for (int l = 0; l < levels; ++l) {
        result.ratio.push_back(result.mean_time[0] / result.mean_time[l]);
    }
    return result;
}

}  // namespace bosonbins
