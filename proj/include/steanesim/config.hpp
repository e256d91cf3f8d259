// Copyright 2026 The steanesim Authors
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

// Experiment configuration: one JSON document. Keys mirror the CLI flags;
// anything unrecognized is rejected so a typo cannot silently fall back to
// a default.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steanesim/harness.hpp"

namespace steanesim {

class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

struct Config {
    SweepSpec spec;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 0;  // 0: hardware concurrency
    std::string out;
    std::string precision = "double";

    unsigned effective_jobs() const {
        if (jobs > 0) return jobs;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Final checks once flags are merged; the seed becomes mandatory here.
    void finalize() {
        if (!seed) throw ConfigError("seed: missing (every run needs an explicit seed)");
        if (precision != "double") throw ConfigError("precision: only \"double\" is supported, got \"" + precision + "\"");
        spec.seed = *seed;
        spec.validate();
    }
};

inline const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys{
        "preset",        "p",          "custom_weights", "q",           "sequence",       "sequence_order",
        "round_order",   "every_other_offset", "input",  "engine",      "n_traj",         "seed",
        "jobs",          "out",        "noisy_prep",     "noisy_measure", "noisy_recovery", "ideal_theta_ancilla",
        "precision",     "record_timing", "decoder"};
    return keys;
}

inline Preset parse_preset(const std::string& s) {
    if (s == "depolarizing") return Preset::Depolarizing;
    if (s == "x" || s == "x-dominant") return Preset::XDominant;
    if (s == "y" || s == "y-dominant") return Preset::YDominant;
    if (s == "z" || s == "z-dominant") return Preset::ZDominant;
    if (s == "custom") return Preset::Custom;
    throw ConfigError("preset: unknown value \"" + s + "\" (expected depolarizing, x, y, z or custom)");
}

inline Engine parse_engine(const std::string& s) {
    if (s == "dense") return Engine::Dense;
    if (s == "mc") return Engine::MonteCarlo;
    throw ConfigError("engine: unknown value \"" + s + "\" (expected dense or mc)");
}

inline SequenceOrder parse_sequence_order(const std::string& s) {
    if (s == "right_to_left") return SequenceOrder::RightToLeft;
    if (s == "left_to_right") return SequenceOrder::LeftToRight;
    throw ConfigError("sequence_order: unknown value \"" + s + "\" (expected right_to_left or left_to_right)");
}

inline RoundOrder parse_round_order(const std::string& s) {
    if (s == "interleaved") return RoundOrder::Interleaved;
    if (s == "grouped") return RoundOrder::Grouped;
    throw ConfigError("round_order: unknown value \"" + s + "\" (expected interleaved or grouped)");
}

inline EveryOtherOffset parse_offset(const std::string& s) {
    if (s == "even") return EveryOtherOffset::Even;
    if (s == "odd") return EveryOtherOffset::Odd;
    throw ConfigError("every_other_offset: unknown value \"" + s + "\" (expected even or odd)");
}

/// "1e-6,1e-5" or "1e-4" -> numbers.
inline std::vector<double> parse_double_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError(field + ": cannot parse \"" + item + "\" as a number");
        }
        if (used != item.size()) throw ConfigError(field + ": cannot parse \"" + item + "\" as a number");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(field + ": empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& field) {
    std::vector<int> out;
    for (double v : parse_double_list(text, field)) {
        if (v != std::floor(v)) throw ConfigError(field + ": expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

namespace detail {

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key + ": wrong type");
    }
}

}  // namespace detail

/// Applies a JSON document on top of `cfg`.
inline void apply_json(Config& cfg, const nlohmann::json& j) {
    using detail::get_as;
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!config_keys().contains(key)) throw ConfigError(key + ": unknown config key");
    auto& s = cfg.spec;
    if (j.contains("preset")) s.preset = parse_preset(get_as<std::string>(j, "preset"));
    if (j.contains("p")) {
        if (j["p"].is_array()) {
            s.p_grid = get_as<std::vector<double>>(j, "p");
        } else {
            s.p_grid = {get_as<double>(j, "p")};
        }
    }
    if (j.contains("custom_weights")) {
        auto w = get_as<std::vector<double>>(j, "custom_weights");
        if (w.size() != 3) throw ConfigError("custom_weights: expected [w_x, w_y, w_z]");
        s.custom_weights = {w[0], w[1], w[2]};
    }
    if (j.contains("q")) {
        if (j["q"].is_array()) {
            s.schemes = get_as<std::vector<int>>(j, "q");
        } else {
            s.schemes = {get_as<int>(j, "q")};
        }
    }
    if (j.contains("sequence")) s.sequence = get_as<std::string>(j, "sequence");
    if (j.contains("sequence_order")) s.sequence_order = parse_sequence_order(get_as<std::string>(j, "sequence_order"));
    if (j.contains("round_order")) s.protocol.round_order = parse_round_order(get_as<std::string>(j, "round_order"));
    if (j.contains("every_other_offset")) s.every_other = parse_offset(get_as<std::string>(j, "every_other_offset"));
    if (j.contains("input")) {
        const auto& in = j["input"];
        if (!in.is_object()) throw ConfigError("input: expected {\"alpha\": a, \"beta\": b}");
        for (const auto& [key, _] : in.items())
            if (key != "alpha" && key != "beta") throw ConfigError("input." + key + ": unknown config key");
        if (in.contains("alpha")) s.input.alpha = get_as<double>(in, "alpha");
        if (in.contains("beta")) s.input.beta = get_as<double>(in, "beta");
    }
    if (j.contains("engine")) s.engine = parse_engine(get_as<std::string>(j, "engine"));
    if (j.contains("n_traj")) s.n_traj = get_as<std::uint64_t>(j, "n_traj");
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("jobs")) cfg.jobs = get_as<unsigned>(j, "jobs");
    if (j.contains("out")) cfg.out = get_as<std::string>(j, "out");
    if (j.contains("noisy_prep")) s.flags.noisy_prep = get_as<bool>(j, "noisy_prep");
    if (j.contains("noisy_measure")) s.flags.noisy_measure = get_as<bool>(j, "noisy_measure");
    if (j.contains("noisy_recovery")) s.flags.noisy_recovery = get_as<bool>(j, "noisy_recovery");
    if (j.contains("ideal_theta_ancilla")) s.flags.ideal_theta_ancilla = get_as<bool>(j, "ideal_theta_ancilla");
    if (j.contains("precision")) cfg.precision = get_as<std::string>(j, "precision");
    if (j.contains("record_timing")) s.record_timing = get_as<bool>(j, "record_timing");
    if (j.contains("decoder")) {
        auto d = get_as<std::vector<int>>(j, "decoder");
        if (d.size() != 8) throw ConfigError("decoder: expected 8 entries");
        for (std::size_t i = 0; i < 8; ++i) {
            if (d[i] < 0 || d[i] > 7) throw ConfigError("decoder: entries must lie in 0..7");
            s.protocol.decoder[i] = d[i];
        }
    }
}

inline Config parse_config_text(const std::string& text) {
    Config cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    apply_json(cfg, j);
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace steanesim
