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

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/partition.hpp"
#include "bosonbins/validation.hpp"

namespace bosonbins::io {

using nlohmann::json;

/// {"dim": m, "re": [[...]], "im": [[...]]}, row-major; row k, column j is the
/// amplitude from input mode j+1 to output mode k+1.
inline json unitary_to_json(const UnitaryMatrix &u) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < u.dim(); ++r) {
        json re_row = json::array(), im_row = json::array();
        for (int c = 0; c < u.dim(); ++c) {
            re_row.push_back(u(r, c).real());
            im_row.push_back(u(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return {{"dim", u.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline UnitaryMatrix unitary_from_json(const json &j) {
    try {
        const int dim = j.at("dim").get<int>();
        if (dim < 1) {
            throw Error(ErrorKind::invalid_dimension, "unitary dim must be >= 1");
        }
        const auto &re = j.at("re");
        const auto &im = j.at("im");
        if (re.size() != static_cast<std::size_t>(dim) || im.size() != static_cast<std::size_t>(dim)) {
            throw Error(ErrorKind::shape, "unitary re/im must have dim rows");
        }
        ComplexMatrix u(dim, dim);
        for (int r = 0; r < dim; ++r) {
            if (re[r].size() != static_cast<std::size_t>(dim) || im[r].size() != static_cast<std::size_t>(dim)) {
                throw Error(ErrorKind::shape, "unitary row " + std::to_string(r + 1) + " has the wrong length");
            }
            for (int c = 0; c < dim; ++c) {
                u(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
            }
        }
        return UnitaryMatrix(std::move(u));
    } catch (const json::exception &e) {
        throw Error(ErrorKind::config, std::string("malformed unitary JSON: ") + e.what());
    }
}

inline json method_to_json(const MethodInfo &m) {
    json out = {{"kind", m.kind}, {"renormalized", m.renormalized}, {"raw_total", m.raw_total}};
    if (m.kind == "glynn") {
        out["beta"] = m.beta;
        out["epsilon"] = m.epsilon;
        out["trials_per_point"] = m.trials_per_point;
        out["seed"] = m.seed;
    }
    return out;
}

inline MethodInfo method_from_json(const json &j) {
    MethodInfo m;
    m.kind = j.at("kind").get<std::string>();
    m.renormalized = j.value("renormalized", false);
    m.raw_total = j.value("raw_total", 1.0);
    if (m.kind == "glynn") {
        m.beta = j.at("beta").get<double>();
        m.epsilon = j.at("epsilon").get<double>();
        m.trials_per_point = j.at("trials_per_point").get<std::int64_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
    }
    return m;
}

/// {"n", "K", "bins": [[modes...]...], "extents", "probabilities": [{"k", "p"}...], "method"}.
/// Only outcomes with nonzero probability are listed.
inline json distribution_to_json(const BinnedDistribution &dist, const std::vector<std::vector<int>> &bins) {
    json probs = json::array();
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
        if (dist[flat] != 0.0) {
            probs.push_back({{"k", dist.outcome(flat)}, {"p", dist[flat]}});
        }
    }
    return {{"n", dist.photons()},         {"K", dist.bins()},
            {"bins", bins},                {"extents", dist.extents()},
            {"probabilities", std::move(probs)}, {"method", method_to_json(dist.method())}};
}

inline BinnedDistribution distribution_from_json(const json &j) {
    try {
        const int n = j.at("n").get<int>();
        const int bins = j.at("K").get<int>();
        std::vector<int> extents = j.contains("extents") ? j.at("extents").get<std::vector<int>>()
                                                         : std::vector<int>(bins, n + 1);
        if (static_cast<int>(extents.size()) != bins) {
            throw Error(ErrorKind::shape, "distribution extents do not match K");
        }
        std::size_t size = 1;
        for (int e : extents) {
            size *= static_cast<std::size_t>(e);
        }
        BinnedDistribution dist(n, extents, std::vector<double>(size, 0.0));
        for (const auto &entry : j.at("probabilities")) {
            auto k = entry.at("k").get<std::vector<int>>();
            dist[dist.flat_index(k)] = entry.at("p").get<double>();
        }
        if (j.contains("method")) {
            dist.method() = method_from_json(j.at("method"));
        }
        return dist;
    } catch (const json::exception &e) {
        throw Error(ErrorKind::config, std::string("malformed distribution JSON: ") + e.what());
    }
}

inline json report_to_json(const ValidationReport &r) {
    json out = {{"chi", r.chi},   {"log_chi", r.log_chi},         {"p_null", r.p_null},
                {"samples_used", r.samples_used}, {"threshold", r.threshold}, {"censored", r.censored},
                {"floor", r.floor}, {"seed", r.seed}};
    return out;
}

/// Line-oriented samples file: a header object {"kind": "raw_occupations", "m": M}
/// or {"kind": "binned_counts", "K": K}, then one JSON integer array per line.
/// Blank lines are skipped. Errors name the offending line.
inline SampleSet read_samples(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &what) -> Error {
        return Error(ErrorKind::ingestion, "samples line " + std::to_string(line_no) + ": " + what);
    };
    SampleSet set;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception &) {
            throw fail("not valid JSON");
        }
        if (!have_header) {
            if (!j.is_object() || !j.contains("kind")) {
                throw fail("expected a header object with \"kind\"");
            }
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "raw_occupations") {
                set.kind = SampleKind::raw_occupations;
                if (!j.contains("m")) {
                    throw fail("raw_occupations header needs \"m\"");
                }
                set.width = j.at("m").get<int>();
            } else if (kind == "binned_counts") {
                set.kind = SampleKind::binned_counts;
                if (!j.contains("K")) {
                    throw fail("binned_counts header needs \"K\"");
                }
                set.width = j.at("K").get<int>();
            } else {
                throw fail("unknown sample kind \"" + kind + "\"");
            }
            if (set.width < 1) {
                throw fail("record width must be >= 1");
            }
            have_header = true;
            continue;
        }
        if (!j.is_array()) {
            throw fail("expected an array of counts");
        }
        std::vector<int> record;
        for (const auto &v : j) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                throw fail("counts must be nonnegative integers");
            }
            record.push_back(v.get<int>());
        }
        if (static_cast<int>(record.size()) != set.width) {
            throw fail("record has " + std::to_string(record.size()) + " entries, expected " +
                       std::to_string(set.width));
        }
        set.records.push_back(std::move(record));
    }
    if (!have_header) {
        throw Error(ErrorKind::ingestion, "samples file has no header line");
    }
    return set;
}

inline std::string write_samples(const SampleSet &set) {
    std::string out;
    json header = set.kind == SampleKind::raw_occupations ? json{{"kind", "raw_occupations"}, {"m", set.width}}
                                                          : json{{"kind", "binned_counts"}, {"K", set.width}};
    out += header.dump() + "\n";
    for (const auto &r : set.records) {
        out += json(r).dump() + "\n";
    }
    return out;
}

}  // namespace bosonbins::io
