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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellrot/experiments.hpp"

namespace bellrot {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void write_file_atomically(const std::filesystem::path &path, std::string_view content);

/// %.9g
std::string format_sig9(double v);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Tool version, command name, seed and the full config echo.
Metadata run_metadata(const std::string &command, const ExperimentConfig &cfg);

/// `# key: value` lines.
std::string metadata_comment_block(const Metadata &meta);

/// Header `resources,mean_error_rad,std_error_rad,estimator,alpha,n_runs`.
std::string results_csv(const Metadata &meta, const ExperimentConfig &cfg, const AggregateResult &agg);
std::string sweep_csv(const Metadata &meta, std::span<const SweepRow> rows);

std::string results_json(const Metadata &meta, const ExperimentConfig &cfg, const AggregateResult &agg,
                         std::span<const RunRecord> records, bool include_runs);
std::string sweep_json(const Metadata &meta, std::span<const SweepRow> rows);

}  // namespace bellrot
