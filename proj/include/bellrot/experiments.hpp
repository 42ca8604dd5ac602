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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bellrot/estimators.hpp"
#include "bellrot/quantum.hpp"

namespace bellrot {

enum class EstimatorKind { BellPf, SingleQubitAnalytic, SingleQubitPf };
enum class ResourceMode { QubitCount, TraceFormula };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string &text);
std::string to_string(ResourceMode mode);
ResourceMode parse_resource_mode(const std::string &text);

struct ExperimentConfig {
    EstimatorKind estimator = EstimatorKind::BellPf;
    std::size_t n_runs = 100;
    std::size_t max_resources = 8000;
    double alpha = 0.0;
    double truth_sigma = 0.0873;
    PriorConfig prior;
    FilterConfig filter;
    ResourceMode resource_mode = ResourceMode::QubitCount;
    std::uint64_t master_seed = 0;
    std::size_t record_stride = 80;

    void validate() const;
};

/// Cumulative count of quantum systems consumed by a run.
class ResourceLedger {
   public:
    void add(std::size_t units) { total_ += units; }
    std::size_t total() const { return total_; }

   private:
    std::size_t total_ = 0;
};

struct Checkpoint {
    std::size_t resources = 0;
    RotationVector estimate;
    RotationVector truth;
    double total_error = 0.0;  // |estimate - truth|_2
};

struct RunRecord {
    std::size_t run_index = 0;
    RotationVector truth;
    std::vector<Checkpoint> checkpoints;
    std::size_t restarts = 0;
    std::size_t measurements = 0;
    /// Sampled outcomes by BellKind (Bell runs) or {successes, failures, 0, 0}.
    std::array<std::size_t, 4> outcome_counts{};
};

struct AggregatePoint {
    std::size_t resources = 0;
    double mean_error = 0.0;
    double std_error = 0.0;  // population standard deviation across runs
    std::array<double, 3> mean_abs_component_error{};
};

struct AggregateResult {
    std::size_t n_runs = 0;
    std::vector<AggregatePoint> points;
};

/// Deterministic per-run seed derived from (master, run, stream) with splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index, std::uint64_t stream);

/// Units charged for one measurement of the given estimator family.
std::size_t resource_units(const ExperimentConfig &cfg);

RunRecord run_bell_trial(const ExperimentConfig &cfg, std::size_t run_index);
RunRecord run_single_qubit_trial(const ExperimentConfig &cfg, std::size_t run_index);
RunRecord run_trial(const ExperimentConfig &cfg, std::size_t run_index);

/// Runs cfg.n_runs independent trials on up to `workers` threads; the result is
/// ordered by run index and does not depend on the worker count.
std::vector<RunRecord> run_campaign(const ExperimentConfig &cfg, unsigned workers);

/// Per-checkpoint mean and standard deviation of the total error. Throws if the
/// records do not share one checkpoint grid.
AggregateResult aggregate(std::span<const RunRecord> records);

/// sum_j Tr(rho sigma_j (x) sigma_j)
double resource_trace_formula(const DensityMatrix &rho);

struct SweepRow {
    double alpha = 0.0;
    EstimatorKind estimator = EstimatorKind::BellPf;
    std::size_t resources = 0;
    double mean_error = 0.0;
    double std_error = 0.0;
    std::size_t n_runs = 0;
};

/// Final-checkpoint errors of the Bell filter and a single-qubit estimator
/// (cfg.estimator if it is a single-qubit kind, otherwise the analytic one) at
/// each alpha.
std::vector<SweepRow> alpha_sweep(const ExperimentConfig &cfg, std::span<const double> alphas,
                                  unsigned workers);

}  // namespace bellrot
