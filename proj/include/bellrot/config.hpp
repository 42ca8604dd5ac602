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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellrot/experiments.hpp"

namespace bellrot {

/// Bad experiment configuration. `keys` names every offending entry.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string &what, std::vector<std::string> offending)
        : std::runtime_error(what), keys(std::move(offending)) {}

    std::vector<std::string> keys;
};

struct ParsedConfig {
    ExperimentConfig config;
    bool seed_given = false;
};

/// Reads `key = value` lines. Keys mirror ExperimentConfig fields; the nested
/// prior and filter fields are written `prior.sigma_prior`, `filter.process_noise_coeff`
/// and so on. `#` starts a comment. Unknown, duplicate or malformed keys are
/// collected and reported together.
ParsedConfig parse_config(std::istream &in);
ParsedConfig load_config(const std::filesystem::path &path);

/// Every config field in canonical order, formatted so that parsing the
/// result reproduces the config exactly.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &cfg);

}  // namespace bellrot
