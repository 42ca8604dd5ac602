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

#include "bellrot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "bellrot/bell_model.hpp"

namespace bellrot {

namespace {

constexpr std::size_t kMaxRestarts = 16;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RotationVector draw_truth(const ExperimentConfig &cfg, std::size_t run_index) {
    std::mt19937_64 rng(derive_seed(cfg.master_seed, run_index, 0));
    std::normal_distribution<double> gauss(0.0, cfg.truth_sigma);
    RotationVector truth;
    truth.x = gauss(rng);
    truth.y = gauss(rng);
    truth.z = gauss(rng);
    return truth;
}

BellKind sample_outcome(const OutcomeDistribution &dist, std::mt19937_64 &rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cumulative = 0.0;
    BellKind last_possible = BellKind::PhiPlus;
    for (BellKind kind : kAllBellKinds) {
        const double p = dist[kind];
        if (p <= 0.0) continue;
        cumulative += p;
        last_possible = kind;
        if (u < cumulative) return kind;
    }
    return last_possible;
}

Checkpoint make_checkpoint(std::size_t resources, const RotationVector &estimate,
                           const RotationVector &truth) {
    const RotationVector diff{estimate.x - truth.x, estimate.y - truth.y, estimate.z - truth.z};
    return {resources, estimate, truth, diff.norm()};
}

void validate_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
}

/// Drives the measurement loop shared by all estimators; `step` performs one
/// measurement and `current` reports the estimate.
template <class Step, class Current>
void measurement_loop(const ExperimentConfig &cfg, RunRecord &rec, Step &&step, Current &&current) {
    const std::size_t units = resource_units(cfg);
    ResourceLedger ledger;
    std::size_t next_checkpoint = cfg.record_stride;
    std::size_t m = 0;
    while (ledger.total() + units <= cfg.max_resources) {
        ++m;
        step(m);
        ledger.add(units);
        while (ledger.total() >= next_checkpoint) {
            rec.checkpoints.push_back(make_checkpoint(next_checkpoint, current(), rec.truth));
            next_checkpoint += cfg.record_stride;
        }
    }
    rec.measurements = m;
}

}  // namespace

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::BellPf:
            return "bell_pf";
        case EstimatorKind::SingleQubitAnalytic:
            return "single_qubit_analytic";
        case EstimatorKind::SingleQubitPf:
            return "single_qubit_pf";
    }
    return "?";
}

EstimatorKind parse_estimator_kind(const std::string &text) {
    for (auto kind : {EstimatorKind::BellPf, EstimatorKind::SingleQubitAnalytic,
                      EstimatorKind::SingleQubitPf}) {
        if (text == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown estimator '" + text + "'");
}

std::string to_string(ResourceMode mode) {
    return mode == ResourceMode::QubitCount ? "qubit_count" : "trace_formula";
}

ResourceMode parse_resource_mode(const std::string &text) {
    if (text == "qubit_count") return ResourceMode::QubitCount;
    if (text == "trace_formula") return ResourceMode::TraceFormula;
    throw std::invalid_argument("unknown resource mode '" + text + "'");
}

void ExperimentConfig::validate() const {
    if (n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
    if (max_resources < 2) throw std::invalid_argument("max_resources must be at least 2");
    if (record_stride < 1) throw std::invalid_argument("record_stride must be at least 1");
    if (!(truth_sigma >= 0.0)) throw std::invalid_argument("truth_sigma must be non-negative");
    validate_alpha(alpha);
    prior.validate();
    filter.validate();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(master) ^ run_index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

double resource_trace_formula(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("the two-qubit resource count needs a 4x4 density matrix");
    }
    double total = 0.0;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const ComplexMatrix generator = kron(pauli(a), pauli(a));
        total += (rho.matrix() * generator).trace().real();
    }
    return total;
}

std::size_t resource_units(const ExperimentConfig &cfg) {
    const bool bell = cfg.estimator == EstimatorKind::BellPf;
    if (cfg.resource_mode == ResourceMode::QubitCount) {
        return bell ? 2 : 1;
    }
    double units = 0.0;
    if (bell) {
        units = resource_trace_formula(DensityMatrix::pure(bell_state(BellKind::PhiPlus)));
    } else {
        const auto up = DensityMatrix::pure(StateVector(2, {1.0, 0.0}));
        units = (up.matrix() * pauli(Axis::Z)).trace().real();
    }
    const auto rounded = static_cast<std::size_t>(std::lround(std::abs(units)));
    if (rounded == 0) {
        throw std::logic_error("trace-formula resource count is zero for the prepared state");
    }
    return rounded;
}

RunRecord run_bell_trial(const ExperimentConfig &cfg, std::size_t run_index) {
    cfg.validate();
    RunRecord rec;
    rec.run_index = run_index;
    rec.truth = draw_truth(cfg, run_index);

    const BellLikelihood model_plus(BellKind::PhiPlus, kPhiPlusAxis, cfg.alpha);
    const BellLikelihood model_minus(BellKind::PhiMinus, kPhiMinusAxis, cfg.alpha);
    const OutcomeDistribution truth_plus =
        outcome_distribution(BellKind::PhiPlus, rec.truth, kPhiPlusAxis, cfg.alpha);
    const OutcomeDistribution truth_minus =
        outcome_distribution(BellKind::PhiMinus, rec.truth, kPhiMinusAxis, cfg.alpha);

    for (std::size_t attempt = 0; attempt <= kMaxRestarts; ++attempt) {
        rec.checkpoints.clear();
        rec.outcome_counts = {};
        Ensemble ens = init_ensemble(cfg.prior, derive_seed(cfg.master_seed, run_index, 2 + 2 * attempt));
        std::mt19937_64 sim(derive_seed(cfg.master_seed, run_index, 1 + 2 * attempt));
        try {
            measurement_loop(
                cfg, rec,
                [&](std::size_t m) {
                    const bool odd = (m % 2) == 1;
                    const BellLikelihood &model = odd ? model_plus : model_minus;
                    ens.predict(cfg.filter);
                    const BellKind observed = sample_outcome(odd ? truth_plus : truth_minus, sim);
                    ++rec.outcome_counts[static_cast<int>(observed)];
                    update_weights(ens, model, observed);
                    if (ens.needs_resample(cfg.filter)) {
                        ens.resample_defensive(cfg.filter);
                    }
                },
                [&] { return ens.estimate().mean; });
            return rec;
        } catch (const DegenerateLikelihood &) {
            ++rec.restarts;
        }
    }
    throw std::runtime_error("run " + std::to_string(run_index) + " exceeded the restart limit");
}

RunRecord run_single_qubit_trial(const ExperimentConfig &cfg, std::size_t run_index) {
    cfg.validate();
    RunRecord rec;
    rec.run_index = run_index;
    rec.truth = draw_truth(cfg, run_index);
    const double visibility = 1.0 - cfg.alpha;
    // (1 - alpha)|psi><psi| + alpha I/2 shrinks the Bloch vector by (1 - alpha).
    auto success_prob = [visibility](double theta) {
        return 0.5 * (1.0 + visibility * std::sin(theta));
    };

    std::mt19937_64 sim(derive_seed(cfg.master_seed, run_index, 1));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    auto measure = [&](std::size_t m, CycleStep &step) {
        step = single_qubit_cycle_schedule(m);
        const bool success = uniform(sim) < success_prob(rec.truth[step.estimated]);
        ++rec.outcome_counts[success ? 0 : 1];
        return success;
    };

    if (cfg.estimator == EstimatorKind::SingleQubitPf) {
        for (std::size_t attempt = 0; attempt <= kMaxRestarts; ++attempt) {
            rec.checkpoints.clear();
            rec.outcome_counts = {};
            sim.seed(derive_seed(cfg.master_seed, run_index, 1 + 2 * attempt));
            Ensemble ens = init_ensemble(cfg.prior, derive_seed(cfg.master_seed, run_index, 2 + 2 * attempt));
            try {
                measurement_loop(
                    cfg, rec,
                    [&](std::size_t m) {
                        ens.predict(cfg.filter);
                        CycleStep step{};
                        const bool success = measure(m, step);
                        ens.reweight([&](const RotationVector &theta) {
                            const double p = success_prob(theta[step.estimated]);
                            return success ? p : 1.0 - p;
                        });
                        if (ens.needs_resample(cfg.filter)) {
                            ens.resample_defensive(cfg.filter);
                        }
                    },
                    [&] { return ens.estimate().mean; });
                return rec;
            } catch (const DegenerateLikelihood &) {
                ++rec.restarts;
            }
        }
        throw std::runtime_error("run " + std::to_string(run_index) + " exceeded the restart limit");
    }

    SingleQubitTally tally;
    measurement_loop(
        cfg, rec,
        [&](std::size_t m) {
            CycleStep step{};
            const bool success = measure(m, step);
            tally.record(step.estimated, success);
        },
        [&] {
            // Components not yet measured stay at the prior mean.
            SingleQubitTally seen = tally;
            std::array<bool, 3> missing{};
            for (std::size_t i = 0; i < 3; ++i) {
                if (seen.trials[i] == 0) {
                    missing[i] = true;
                    seen.trials[i] = 2;
                    seen.successes[i] = 1;
                }
            }
            RotationVector est = single_qubit_estimate(seen).theta;
            if (missing[0]) est.x = 0.0;
            if (missing[1]) est.y = 0.0;
            if (missing[2]) est.z = 0.0;
            return est;
        });
    return rec;
}

RunRecord run_trial(const ExperimentConfig &cfg, std::size_t run_index) {
    return cfg.estimator == EstimatorKind::BellPf ? run_bell_trial(cfg, run_index)
                                                  : run_single_qubit_trial(cfg, run_index);
}

std::vector<RunRecord> run_campaign(const ExperimentConfig &cfg, unsigned workers) {
    cfg.validate();
    std::vector<RunRecord> records(cfg.n_runs);
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(cfg.n_runs));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.n_runs; i = next++) {
            try {
                records[i] = run_trial(cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

AggregateResult aggregate(std::span<const RunRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("nothing to aggregate");
    }
    const auto &grid = records.front().checkpoints;
    for (const auto &rec : records) {
        if (rec.checkpoints.size() != grid.size()) {
            throw std::invalid_argument("run records have different checkpoint grids");
        }
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (rec.checkpoints[k].resources != grid[k].resources) {
                throw std::invalid_argument("run records have different checkpoint grids");
            }
        }
    }
    AggregateResult out;
    out.n_runs = records.size();
    const double n = static_cast<double>(records.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        AggregatePoint pt;
        pt.resources = grid[k].resources;
        double sum = 0.0;
        for (const auto &rec : records) {
            const auto &c = rec.checkpoints[k];
            sum += c.total_error;
            pt.mean_abs_component_error[0] += std::abs(c.estimate.x - c.truth.x) / n;
            pt.mean_abs_component_error[1] += std::abs(c.estimate.y - c.truth.y) / n;
            pt.mean_abs_component_error[2] += std::abs(c.estimate.z - c.truth.z) / n;
        }
        pt.mean_error = sum / n;
        double ss = 0.0;
        for (const auto &rec : records) {
            const double d = rec.checkpoints[k].total_error - pt.mean_error;
            ss += d * d;
        }
        pt.std_error = std::sqrt(ss / n);
        out.points.push_back(pt);
    }
    return out;
}

std::vector<SweepRow> alpha_sweep(const ExperimentConfig &cfg, std::span<const double> alphas,
                                  unsigned workers) {
    const EstimatorKind single = cfg.estimator == EstimatorKind::SingleQubitPf
                                     ? EstimatorKind::SingleQubitPf
                                     : EstimatorKind::SingleQubitAnalytic;
    std::vector<SweepRow> rows;
    for (double alpha : alphas) {
        validate_alpha(alpha);
        for (EstimatorKind kind : {EstimatorKind::BellPf, single}) {
            ExperimentConfig run_cfg = cfg;
            run_cfg.alpha = alpha;
            run_cfg.estimator = kind;
            const auto records = run_campaign(run_cfg, workers);
            const auto agg = aggregate(records);
            if (agg.points.empty()) {
                throw std::invalid_argument("max_resources is below the first checkpoint");
            }
            const auto &last = agg.points.back();
            rows.push_back({alpha, kind, last.resources, last.mean_error, last.std_error, agg.n_runs});
        }
    }
    return rows;
}

}  // namespace bellrot
