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

// The bosonbins command line, kept in a header so tests can drive it
// in-process through run_cli().

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonbins/bosonbins.hpp"

namespace bosonbins::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kIngestionError = 4 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ingestion:
        return kIngestionError;
    case ErrorKind::numerical_failure:
        return kNumericalError;
    default:
        return kConfigError;
    }
}

namespace detail {

inline Error config_error(const std::string &what) { return Error(ErrorKind::config, what); }

inline void require_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) {
        throw config_error(where + " must be a JSON object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &item : j.items()) {
        if (!ok.count(item.key())) {
            throw config_error("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

template <typename T>
T get(const json &j, const char *key, const std::string &where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw config_error(where + ": missing or malformed \"" + key + "\"");
    }
}

template <typename T>
T get_or(const json &j, const char *key, T fallback, const std::string &where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

inline json read_json_file(const std::filesystem::path &path, ErrorKind kind) {
    std::ifstream in(path);
    if (!in) {
        throw Error(kind, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(kind, path.string() + ": " + e.what());
    }
}

/// Real matrix [[...]] or {"re": [[...]], "im": [[...]]}.
inline GramMatrix parse_gram(const json &j) {
    auto fill = [](const json &rows, ComplexMatrix &s, bool imag) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.size()) {
                throw Error(ErrorKind::invalid_gram, "Gram matrix must be square");
            }
            for (std::size_t c = 0; c < rows.size(); ++c) {
                double v = rows[r][c].get<double>();
                if (imag) {
                    s(r, c) += Complex(0.0, v);
                } else {
                    s(r, c) += Complex(v, 0.0);
                }
            }
        }
    };
    try {
        const json &re = j.is_array() ? j : j.at("re");
        const auto n = static_cast<Eigen::Index>(re.size());
        if (n < 1) {
            throw Error(ErrorKind::invalid_gram, "Gram matrix is empty");
        }
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        fill(re, s, false);
        if (j.is_object() && j.contains("im")) {
            if (j.at("im").size() != re.size()) {
                throw Error(ErrorKind::invalid_gram, "Gram re/im shapes differ");
            }
            fill(j.at("im"), s, true);
        }
        return GramMatrix(std::move(s));
    } catch (const json::exception &e) {
        throw config_error(std::string("malformed Gram matrix: ") + e.what());
    }
}

inline NoiseConfig parse_noise(const json &j, const std::string &where) {
    require_keys(j, where, {"x", "gram", "transmissivity", "dark_count_p"});
    NoiseConfig noise;
    noise.x = get_or(j, "x", 1.0, where);
    noise.transmissivity = get_or(j, "transmissivity", 1.0, where);
    noise.dark_count_p = get_or(j, "dark_count_p", 0.0, where);
    if (j.contains("gram")) {
        noise.gram = parse_gram(j.at("gram"));
    }
    noise.validate();
    return noise;
}

}  // namespace detail

/// Parameters of the sweep commands (tvd, estimate-samples, loss-speedup, sample).
struct StudyConfig {
    int trials = 100;
    int runs = 1;
    std::vector<int> m_values;
    std::vector<int> k_values;
    std::vector<double> x_values;
    double threshold = 0.05;
    std::size_t max_samples = 100000;
    double floor = kDefaultProbabilityFloor;
    int l_max = -1;  // -1: n
    std::size_t count = 1000;
};

struct Config {
    int n = 0;
    int m = 0;
    json unitary = {{"kind", "haar"}};
    std::optional<Partition> partition;
    int equipartition_bins = 0;  // 0 when subsets were given explicitly
    NoiseConfig noise;
    NoiseConfig alternative;
    std::string method = "ryser";
    double beta = 0.1;
    std::optional<std::uint64_t> method_seed;
    std::optional<std::uint64_t> seed;
    StudyConfig study;
    std::filesystem::path base_dir = ".";
};

inline Config parse_config(const json &j, const std::filesystem::path &base_dir = ".") {
    using namespace detail;
    require_keys(j, "config",
                 {"n", "m", "unitary", "partition", "noise", "alternative", "method", "seed", "study"});
    Config c;
    c.base_dir = base_dir;
    c.n = get<int>(j, "n", "config");
    c.m = get<int>(j, "m", "config");
    if (c.n < 1 || c.m < 1 || c.n > c.m) {
        throw Error(ErrorKind::invalid_dimension, "config needs 1 <= n <= m");
    }
    if (j.contains("unitary")) {
        c.unitary = j.at("unitary");
        require_keys(c.unitary, "unitary", {"kind", "seed", "path", "dim", "re", "im"});
        const auto kind = get<std::string>(c.unitary, "kind", "unitary");
        if (kind != "haar" && kind != "fourier" && kind != "file" && kind != "matrix") {
            throw config_error("unitary kind must be haar, fourier, file or matrix");
        }
    }
    if (j.contains("partition")) {
        const auto &p = j.at("partition");
        require_keys(p, "partition", {"kind", "K", "subsets"});
        if (p.contains("subsets")) {
            if (p.contains("K") || (p.contains("kind") && p.at("kind") != "subsets")) {
                throw config_error("partition takes either subsets or an equipartition K");
            }
            auto subsets = get<std::vector<std::vector<int>>>(p, "subsets", "partition");
            c.partition = Partition(std::move(subsets), c.m);
        } else {
            if (get_or<std::string>(p, "kind", "equipartition", "partition") != "equipartition") {
                throw config_error("partition kind must be equipartition or subsets");
            }
            c.equipartition_bins = get<int>(p, "K", "partition");
            c.partition = equipartition(c.m, c.equipartition_bins);
        }
    }
    if (j.contains("noise")) {
        c.noise = parse_noise(j.at("noise"), "noise");
    }
    c.alternative.x = 0.0;
    if (j.contains("alternative")) {
        c.alternative = parse_noise(j.at("alternative"), "alternative");
    }
    if (j.contains("method")) {
        const auto &mj = j.at("method");
        require_keys(mj, "method", {"kind", "beta", "seed"});
        c.method = get_or<std::string>(mj, "kind", "ryser", "method");
        c.beta = get_or(mj, "beta", c.beta, "method");
        if (mj.contains("seed")) {
            c.method_seed = get<std::uint64_t>(mj, "seed", "method");
        }
    }
    if (j.contains("seed")) {
        c.seed = get<std::uint64_t>(j, "seed", "config");
    }
    if (j.contains("study")) {
        const auto &s = j.at("study");
        require_keys(s, "study",
                     {"trials", "runs", "m_values", "K_values", "x_values", "threshold", "max_samples", "floor",
                      "l_max", "count"});
        auto &st = c.study;
        st.trials = get_or(s, "trials", st.trials, "study");
        st.runs = get_or(s, "runs", st.runs, "study");
        st.m_values = get_or(s, "m_values", st.m_values, "study");
        st.k_values = get_or(s, "K_values", st.k_values, "study");
        st.x_values = get_or(s, "x_values", st.x_values, "study");
        st.threshold = get_or(s, "threshold", st.threshold, "study");
        st.max_samples = get_or(s, "max_samples", st.max_samples, "study");
        st.floor = get_or(s, "floor", st.floor, "study");
        st.l_max = get_or(s, "l_max", st.l_max, "study");
        st.count = get_or(s, "count", st.count, "study");
        if (st.trials < 1 || st.runs < 1) {
            throw config_error("study trials and runs must be >= 1");
        }
    }
    return c;
}

namespace detail {

inline const Partition &require_partition(const Config &c) {
    if (!c.partition) {
        throw config_error("config has no partition");
    }
    return *c.partition;
}

inline UnitaryMatrix build_unitary(const Config &c, std::uint64_t seed) {
    const auto kind = c.unitary.at("kind").get<std::string>();
    UnitaryMatrix u = [&] {
        if (kind == "fourier") {
            return fourier_matrix(c.m);
        }
        if (kind == "haar") {
            return haar_unitary(c.m, get_or<std::uint64_t>(c.unitary, "seed", derive_seed(seed, 0), "unitary"));
        }
        if (kind == "matrix") {
            return io::unitary_from_json(c.unitary);
        }
        auto path = std::filesystem::path(get<std::string>(c.unitary, "path", "unitary"));
        if (path.is_relative()) {
            path = c.base_dir / path;
        }
        return io::unitary_from_json(read_json_file(path, ErrorKind::config));
    }();
    if (u.dim() != c.m) {
        throw Error(ErrorKind::shape, "unitary dimension does not match m");
    }
    return u;
}

inline void require_noiseless(const NoiseConfig &noise, const char *command) {
    if (noise.transmissivity != 1.0 || noise.dark_count_p != 0.0) {
        throw config_error(std::string(command) + " supports distinguishability only (no loss or dark counts)");
    }
}

/// Model for one hypothesis: lossy distributions carry the environment axis
/// last; dark counts are added to the physical bins only.
inline BinnedDistribution model_distribution(const Config &c, const UnitaryMatrix &u, const NoiseConfig &noise,
                                             const DistributionMethod &method) {
    const Partition &partition = require_partition(c);
    InputSpec input = InputSpec::standard(c.n, c.m, noise.gram_for(c.n));
    const bool lossy = noise.transmissivity < 1.0;
    BinnedDistribution dist = lossy ? lossy_binned_distribution(u, input, partition, noise.transmissivity, method)
                                    : compute_distribution(u, input, partition, method);
    if (noise.dark_count_p > 0.0) {
        auto sizes = partition.bin_sizes();
        if (lossy) {
            sizes.push_back(0);
        }
        dist = dark_counts_convolve(dist, noise.dark_count_p, sizes);
    }
    return dist;
}

/// The part of a model that a detector sees: the environment axis summed out.
inline BinnedDistribution observed(const Config &c, const NoiseConfig &noise, const BinnedDistribution &dist) {
    if (noise.transmissivity >= 1.0) {
        return dist;
    }
    std::vector<int> keep(require_partition(c).bins());
    std::iota(keep.begin(), keep.end(), 0);
    return dist.marginal(keep);
}

inline std::vector<std::vector<int>> output_bins(const Config &c, const NoiseConfig &noise) {
    const Partition &partition = require_partition(c);
    return noise.transmissivity < 1.0 ? with_environment_bin(partition).subsets() : partition.subsets();
}

inline std::vector<int> k_values(const Config &c) {
    if (!c.study.k_values.empty()) {
        return c.study.k_values;
    }
    return {c.equipartition_bins > 0 ? c.equipartition_bins : 2};
}

/// Internal states reproducing a Gram matrix: S = Q D Q^dagger gives
/// psi_p = sqrt(D) conj(Q_p.).
inline std::vector<ComplexVector> states_from_gram(const GramMatrix &gram) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram.matrix());
    const auto &q = eig.eigenvectors();
    const auto &d = eig.eigenvalues();
    std::vector<ComplexVector> states;
    for (int p = 0; p < gram.dim(); ++p) {
        ComplexVector psi(gram.dim());
        for (int r = 0; r < gram.dim(); ++r) {
            psi(r) = std::sqrt(std::max(d(r), 0.0)) * std::conj(q(p, r));
        }
        states.push_back(std::move(psi));
    }
    return states;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream &out) : out_(out) { out_ << std::setprecision(17); }
    template <typename... Ts>
    void row(const Ts &...values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << values, first = false), ...);
        out_ << '\n';
    }

  private:
    std::ostream &out_;
};

}  // namespace detail

struct Invocation {
    std::string command;
    std::string config_path;
    std::string samples_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method;
    std::optional<double> beta;
};

namespace detail {

struct Context {
    Config config;
    std::uint64_t seed = 0;
    bool seed_from_entropy = false;
};

inline Context load(const Invocation &inv) {
    if (inv.config_path.empty()) {
        throw config_error("--config is required");
    }
    std::filesystem::path path(inv.config_path);
    Context ctx;
    ctx.config = parse_config(read_json_file(path, ErrorKind::config), path.parent_path());
    if (inv.method) {
        ctx.config.method = *inv.method;
    }
    if (inv.beta) {
        ctx.config.beta = *inv.beta;
    }
    if (ctx.config.method != "ryser" && ctx.config.method != "glynn") {
        throw config_error("method must be ryser or glynn");
    }
    if (inv.seed) {
        ctx.seed = *inv.seed;
    } else if (ctx.config.seed) {
        ctx.seed = *ctx.config.seed;
    } else {
        ctx.seed = entropy_seed();
        ctx.seed_from_entropy = true;
    }
    return ctx;
}

inline DistributionMethod method_of(const Context &ctx) {
    if (ctx.config.method == "glynn") {
        return ApproximateMethod{ctx.config.beta, ctx.config.method_seed.value_or(derive_seed(ctx.seed, 1))};
    }
    return ExactMethod{};
}

inline DecisionOptions decision_options(const StudyConfig &s) {
    DecisionOptions o;
    o.threshold = s.threshold;
    o.max_samples = s.max_samples;
    o.floor = s.floor;
    return o;
}

inline void seed_comment(const Context &ctx, std::ostream &out) {
    if (ctx.seed_from_entropy) {
        out << "# seed=" << ctx.seed << '\n';
    }
}

inline void cmd_dist(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    UnitaryMatrix u = build_unitary(c, ctx.seed);
    auto dist = model_distribution(c, u, c.noise, method_of(ctx));
    json j = io::distribution_to_json(dist, output_bins(c, c.noise));
    j["seed"] = ctx.seed;
    out << j.dump(2) << '\n';
}

inline void cmd_validate(const Context &ctx, const std::string &samples_path, std::ostream &out) {
    const auto &c = ctx.config;
    if (samples_path.empty()) {
        throw config_error("validate needs --samples");
    }
    std::ifstream in(samples_path);
    if (!in) {
        throw Error(ErrorKind::ingestion, "cannot open " + samples_path);
    }
    SampleSet samples = io::read_samples(in);
    const Partition &partition = require_partition(c);
    if (samples.kind == SampleKind::raw_occupations) {
        if (samples.width != c.m) {
            throw Error(ErrorKind::ingestion, "samples header declares m=" + std::to_string(samples.width) +
                                                  " but the config has m=" + std::to_string(c.m));
        }
        samples = bin_samples(samples, partition);
    } else if (samples.width != partition.bins()) {
        throw Error(ErrorKind::ingestion, "samples header declares K=" + std::to_string(samples.width) +
                                              " but the partition has " + std::to_string(partition.bins()) + " bins");
    }
    UnitaryMatrix u = build_unitary(c, ctx.seed);
    auto method = method_of(ctx);
    auto p0 = observed(c, c.noise, model_distribution(c, u, c.noise, method));
    auto pa = observed(c, c.alternative, model_distribution(c, u, c.alternative, method));
    auto report = bayes_update(samples, p0, pa, c.study.floor);
    report.threshold = c.study.threshold;
    report.seed = ctx.seed;
    out << io::report_to_json(report).dump(2) << '\n';
}

inline void cmd_tvd(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    require_noiseless(c.noise, "tvd");
    require_noiseless(c.alternative, "tvd");
    std::vector<int> ms = c.study.m_values.empty() ? std::vector<int>{c.m} : c.study.m_values;
    seed_comment(ctx, out);
    CsvWriter csv(out);
    csv.row("rho", "m", "K", "mean", "std", "trials");
    std::uint64_t point = 0;
    for (int k : k_values(c)) {
        for (int m : ms) {
            auto stats = haar_tvd_study(c.n, m, k, c.noise.gram_for(c.n), c.alternative.gram_for(c.n), c.study.trials,
                                        derive_seed(ctx.seed, point++));
            csv.row(static_cast<double>(c.n) / m, m, k, stats.mean, stats.std, c.study.trials);
        }
    }
}

inline void cmd_estimate_samples(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    require_noiseless(c.noise, "estimate-samples");
    require_noiseless(c.alternative, "estimate-samples");
    std::vector<double> xs = c.study.x_values.empty() ? std::vector<double>{c.alternative.x} : c.study.x_values;
    seed_comment(ctx, out);
    CsvWriter csv(out);
    csv.row("x", "K", "median", "mean", "std", "trials", "censored_runs");
    std::uint64_t point = 0;
    for (int k : k_values(c)) {
        for (double x : xs) {
            GramMatrix alt = c.alternative.gram ? *c.alternative.gram : gram_interpolation(c.n, x);
            auto study = haar_sample_study(c.n, c.m, k, c.noise.gram_for(c.n), alt, true,
                                           decision_options(c.study), c.study.trials, c.study.runs,
                                           derive_seed(ctx.seed, point++));
            csv.row(x, k, study.median, study.mean, study.std, c.study.trials, study.censored_runs);
        }
    }
}

inline void cmd_loss_speedup(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    const int l_max = c.study.l_max < 0 ? c.n : c.study.l_max;
    auto result = loss_speedup_study(c.n, c.m, c.alternative.x, c.noise.transmissivity, l_max, c.study.trials,
                                     c.study.runs, ctx.seed, decision_options(c.study));
    seed_comment(ctx, out);
    CsvWriter csv(out);
    csv.row("l", "mean", "std", "trials", "mean_time", "censored_runs");
    for (int l = 0; l <= l_max; ++l) {
        csv.row(l, result.ratio[l], result.ratio_std[l], result.trials, result.mean_time[l], result.censored_runs);
    }
}

inline void cmd_fourier(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    const auto kind = c.unitary.at("kind").get<std::string>();
    if (kind != "fourier") {
        throw config_error("fourier needs a fourier unitary");
    }
    const bool odd_modes = c.partition && c.partition->bins() == 1 && c.n == c.m && c.n % 2 == 0 &&
                           c.partition->subset(0).size() == static_cast<std::size_t>(c.n / 2) &&
                           std::all_of(c.partition->subset(0).begin(), c.partition->subset(0).end(),
                                       [](int mode) { return mode % 2 == 1; });
    auto bosonic = odd_modes ? odd_modes_bosonic(c.n) : single_mode_bosonic(c.n, c.m);
    auto distinguishable = odd_modes ? odd_modes_distinguishable(c.n) : single_mode_distinguishable(c.n, c.m);
    CsvWriter csv(out);
    csv.row("k", "bosonic", "distinguishable");
    for (int k = 0; k <= c.n; ++k) {
        csv.row(k, bosonic[k], distinguishable[k]);
    }
}

inline void cmd_haar_avg(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    const Partition &partition = require_partition(c);
    auto sizes = partition.bin_sizes();
    json j = {{"bosonic", io::distribution_to_json(haar_average_bosonic(c.n, sizes, c.m), partition.subsets())},
              {"distinguishable",
               io::distribution_to_json(haar_average_distinguishable(c.n, sizes, c.m), partition.subsets())}};
    out << j.dump(2) << '\n';
}

inline void cmd_oracle(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    require_noiseless(c.noise, "oracle");
    UnitaryMatrix u = build_unitary(c, ctx.seed);
    auto states = states_from_gram(c.noise.gram_for(c.n));
    const Partition &partition = require_partition(c);
    json j = io::distribution_to_json(oracle::fock_binned_distribution(u, states, partition), partition.subsets());
    j["seed"] = ctx.seed;
    out << j.dump(2) << '\n';
}

inline void cmd_sample(const Context &ctx, std::ostream &out) {
    const auto &c = ctx.config;
    UnitaryMatrix u = build_unitary(c, ctx.seed);
    auto dist = observed(c, c.noise, model_distribution(c, u, c.noise, method_of(ctx)));
    SampleSet set{SampleKind::binned_counts, dist.bins(), oracle::sample_binned(dist, c.study.count,
                                                                                derive_seed(ctx.seed, 2))};
    out << io::write_samples(set);
}

inline void emit_error(std::ostream &err, const std::string &kind, const std::string &message, int code) {
    err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace detail

inline int execute(const Invocation &inv, std::ostream &out) {
    using namespace detail;
    Context ctx = load(inv);
    std::ofstream file;
    std::ostream *sink = &out;
    if (!inv.out_path.empty()) {
        file.open(inv.out_path);
        if (!file) {
            throw config_error("cannot write " + inv.out_path);
        }
        sink = &file;
    }
    // Render to a buffer first so a failure never leaves a partial file.
    std::ostringstream buffer;
    if (inv.command == "dist") {
        cmd_dist(ctx, buffer);
    } else if (inv.command == "validate") {
        cmd_validate(ctx, inv.samples_path, buffer);
    } else if (inv.command == "tvd") {
        cmd_tvd(ctx, buffer);
    } else if (inv.command == "estimate-samples") {
        cmd_estimate_samples(ctx, buffer);
    } else if (inv.command == "loss-speedup") {
        cmd_loss_speedup(ctx, buffer);
    } else if (inv.command == "fourier") {
        cmd_fourier(ctx, buffer);
    } else if (inv.command == "haar-avg") {
        cmd_haar_avg(ctx, buffer);
    } else if (inv.command == "oracle") {
        cmd_oracle(ctx, buffer);
    } else if (inv.command == "sample") {
        cmd_sample(ctx, buffer);
    } else {
        throw config_error("unknown command " + inv.command);
    }
    *sink << buffer.str();
    return kOk;
}

/// Parses `args` (without the program name) and runs one subcommand.
/// Errors are reported as a single JSON object on `err`.
inline int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Binned photon-number distributions of boson samplers", "bosonbins"};
    app.require_subcommand(1);
    Invocation inv;
    std::uint64_t seed = 0;
    std::string method;
    double beta = 0.0;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"dist", "binned distribution of the configured model (JSON)"},
        {"validate", "Bayesian test of a samples file against the null and alternative models (JSON)"},
        {"tvd", "Haar-averaged TVD between null and alternative (CSV)"},
        {"estimate-samples", "median shots needed to reject the null over Haar unitaries (CSV)"},
        {"loss-speedup", "validation speedup from keeping lossy events (CSV)"},
        {"fourier", "closed-form Fourier-interferometer distributions (CSV)"},
        {"haar-avg", "Haar-averaged binned distributions (JSON)"},
        {"oracle", "brute-force Fock-space binned distribution, n <= 3 (JSON)"},
        {"sample", "draw binned samples from the configured model (samples file)"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config_path, "JSON configuration file")->required();
        sub->add_option("--out", inv.out_path, "write output here instead of stdout");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--method", method, "permanent method")->check(CLI::IsMember({"ryser", "glynn"}));
        sub->add_option("--beta", beta, "l1 error target for --method glynn")->check(CLI::PositiveNumber);
        if (name == "validate") {
            sub->add_option("--samples", inv.samples_path, "samples file")->required();
        }
        sub->callback([&inv, name = name] { inv.command = name; });
    }
    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        detail::emit_error(err, "config", e.what(), kConfigError);
        return kConfigError;
    }
    for (auto *sub : app.get_subcommands()) {
        if (sub->count("--seed")) {
            inv.seed = seed;
        }
        if (sub->count("--method")) {
            inv.method = method;
        }
        if (sub->count("--beta")) {
            inv.beta = beta;
        }
    }
    try {
        return execute(inv, out);
    } catch (const Error &e) {
        int code = exit_code_for(e.kind());
        detail::emit_error(err, std::string(to_string(e.kind())), e.what(), code);
        return code;
    } catch (const json::exception &e) {
        detail::emit_error(err, "config", e.what(), kConfigError);
        return kConfigError;
    } catch (const std::exception &e) {
        detail::emit_error(err, "numerical_failure", e.what(), kNumericalError);
        return kNumericalError;
    }
}

}  // namespace bosonbins::cli
