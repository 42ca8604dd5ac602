// Copyright 2026 The bellrot Authors
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

#include "bellrot/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bellrot/io.hpp"

namespace bellrot {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string &text) {
    // Accept plain decimals and simple ratios such as -2/3.
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return parse_double(text.substr(0, slash)) / parse_double(text.substr(slash + 1));
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string &text) {
    std::uint64_t v = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("not a non-negative integer");
    }
    return v;
}

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Setter = std::function<void(ParsedConfig &, const std::string &)>;

const std::map<std::string, Setter> &setters() {
    static const std::map<std::string, Setter> table{
        {"estimator", [](ParsedConfig &p, const std::string &v) { p.config.estimator = parse_estimator_kind(v); }},
        {"n_runs", [](ParsedConfig &p, const std::string &v) { p.config.n_runs = parse_unsigned(v); }},
        {"max_resources", [](ParsedConfig &p, const std::string &v) { p.config.max_resources = parse_unsigned(v); }},
        {"alpha", [](ParsedConfig &p, const std::string &v) { p.config.alpha = parse_double(v); }},
        {"truth_sigma", [](ParsedConfig &p, const std::string &v) { p.config.truth_sigma = parse_double(v); }},
        {"prior.sigma_prior", [](ParsedConfig &p, const std::string &v) { p.config.prior.sigma_prior = parse_double(v); }},
        {"prior.N_theta", [](ParsedConfig &p, const std::string &v) { p.config.prior.n_theta = parse_unsigned(v); }},
        {"filter.resample_threshold_fraction",
         [](ParsedConfig &p, const std::string &v) { p.config.filter.resample_threshold_fraction = parse_double(v); }},
        {"filter.defensive_small_scale",
         [](ParsedConfig &p, const std::string &v) { p.config.filter.defensive_small_scale = parse_double(v); }},
        {"filter.defensive_small_prob",
         [](ParsedConfig &p, const std::string &v) { p.config.filter.defensive_small_prob = parse_double(v); }},
        {"filter.process_noise_coeff",
         [](ParsedConfig &p, const std::string &v) { p.config.filter.process_noise_coeff = parse_double(v); }},
        {"filter.process_noise_exponent",
         [](ParsedConfig &p, const std::string &v) { p.config.filter.process_noise_exponent = parse_double(v); }},
        {"resource_mode", [](ParsedConfig &p, const std::string &v) { p.config.resource_mode = parse_resource_mode(v); }},
        {"master_seed",
         [](ParsedConfig &p, const std::string &v) {
             p.config.master_seed = parse_unsigned(v);
             p.seed_given = true;
         }},
        {"record_stride", [](ParsedConfig &p, const std::string &v) { p.config.record_stride = parse_unsigned(v); }},
    };
    return table;
}

}  // namespace

ParsedConfig parse_config(std::istream &in) {
    ParsedConfig parsed;
    std::vector<std::string> bad;
    std::vector<std::string> messages;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back("line " + std::to_string(line_no));
            messages.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            bad.push_back(key);
            messages.push_back("unknown key '" + key + "'");
            continue;
        }
        if (!seen.insert(key).second) {
            bad.push_back(key);
            messages.push_back("duplicate key '" + key + "'");
            continue;
        }
        try {
            it->second(parsed, value);
        } catch (const std::exception &e) {
            bad.push_back(key);
            messages.push_back("bad value for '" + key + "': '" + value + "' (" + e.what() + ")");
        }
    }
    if (bad.empty()) {
        try {
            parsed.config.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("invalid configuration: ") + e.what(), {});
        }
        return parsed;
    }
    std::string what = "configuration errors:";
    for (const auto &m : messages) what += "\n  " + m;
    throw ConfigError(what, std::move(bad));
}

ParsedConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &cfg) {
    return {
        {"estimator", to_string(cfg.estimator)},
        {"n_runs", std::to_string(cfg.n_runs)},
        {"max_resources", std::to_string(cfg.max_resources)},
        {"alpha", exact(cfg.alpha)},
        {"truth_sigma", exact(cfg.truth_sigma)},
        {"prior.sigma_prior", exact(cfg.prior.sigma_prior)},
        {"prior.N_theta", std::to_string(cfg.prior.n_theta)},
        {"filter.resample_threshold_fraction", exact(cfg.filter.resample_threshold_fraction)},
        {"filter.defensive_small_scale", exact(cfg.filter.defensive_small_scale)},
        {"filter.defensive_small_prob", exact(cfg.filter.defensive_small_prob)},
        {"filter.process_noise_coeff", exact(cfg.filter.process_noise_coeff)},
        {"filter.process_noise_exponent", exact(cfg.filter.process_noise_exponent)},
        {"resource_mode", to_string(cfg.resource_mode)},
        {"master_seed", std::to_string(cfg.master_seed)},
        {"record_stride", std::to_string(cfg.record_stride)},
    };
}

}  // namespace bellrot
