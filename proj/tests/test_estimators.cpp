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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "bellrot/bell_model.hpp"
#include "bellrot/estimators.hpp"

namespace bellrot {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> weights_of(const Ensemble &ens) {
    std::vector<double> w;
    for (const auto &p : ens.particles()) w.push_back(p.weight);
    return w;
}

Ensemble zeros(std::size_t n, std::uint64_t seed) {
    return Ensemble(std::vector<Particle>(n, Particle{{}, 1.0}), seed);
}

TEST(InitEnsemble, PriorSpread) {
    PriorConfig prior;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Ensemble ens = init_ensemble(prior, seed);
        ASSERT_EQ(ens.size(), 1000u);
        ASSERT_EQ(ens.measurement_index(), 0u);
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            double s = 0.0, ss = 0.0;
            for (const auto &p : ens.particles()) {
                s += p.theta[a];
                ss += p.theta[a] * p.theta[a];
            }
            const double n = 1000.0;
            const double sd = std::sqrt((ss - s * s / n) / (n - 1));
            EXPECT_GE(sd, 0.15);
            EXPECT_LE(sd, 0.20);
        }
    }
}

TEST(InitEnsemble, WeightsAndDeterminism) {
    const Ensemble a = init_ensemble(PriorConfig{}, 42);
    const Ensemble b = init_ensemble(PriorConfig{}, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.particles()[i].weight, 1.0 / 1000);
        EXPECT_EQ(a.particles()[i].theta, b.particles()[i].theta);
    }
    EXPECT_THROW(init_ensemble(PriorConfig{0.1, 1}, 1), std::invalid_argument);
    EXPECT_THROW(init_ensemble(PriorConfig{0.0, 100}, 1), std::invalid_argument);
}

TEST(ProcessNoise, Schedule) {
    const FilterConfig cfg;
    EXPECT_NEAR(process_noise_sigma(1, cfg), 0.1, 1e-15);
    EXPECT_NEAR(process_noise_sigma(1000, cfg), 0.001, 1e-15);
    EXPECT_NEAR(process_noise_sigma(8, cfg), 0.025, 1e-15);
    EXPECT_THROW(process_noise_sigma(0, cfg), std::invalid_argument);
}

TEST(Predict, ZeroCoefficientLeavesParticles) {
    Ensemble ens = init_ensemble(PriorConfig{}, 3);
    const std::vector<Particle> before(ens.particles().begin(), ens.particles().end());
    FilterConfig cfg;
    cfg.process_noise_coeff = 0.0;
    ens.predict(cfg);
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(ens.particles()[i].theta, before[i].theta);
        EXPECT_EQ(ens.particles()[i].weight, before[i].weight);
    }
}

TEST(Predict, PerturbationScale) {
    Ensemble ens = zeros(100000, 4);
    const auto w_before = weights_of(ens);
    ens.predict(FilterConfig{});
    double ss = 0.0;
    for (const auto &p : ens.particles()) ss += p.theta.x * p.theta.x + p.theta.y * p.theta.y + p.theta.z * p.theta.z;
    const double sd = std::sqrt(ss / (3.0 * 100000));
    EXPECT_NEAR(sd, 0.1, 0.002);
    EXPECT_EQ(weights_of(ens), w_before);
}

TEST(UpdateWeights, TwoParticleArithmetic) {
    Ensemble ens(std::vector<Particle>{{{0.1, 0, 0}, 1.0}, {{0.2, 0, 0}, 1.0}}, 0);
    ens.reweight([](const RotationVector &t) { return t.x < 0.15 ? 0.2 : 0.6; });
    EXPECT_NEAR(ens.particles()[0].weight, 0.25, 1e-15);
    EXPECT_NEAR(ens.particles()[1].weight, 0.75, 1e-15);
    EXPECT_EQ(ens.measurement_index(), 1u);
}

TEST(UpdateWeights, FavorsLikelierParticle) {
    const RotationVector truth{0.05, -0.02, 0.08};
    const RotationVector other{-0.1, 0.1, -0.1};
    const BellLikelihood model(BellKind::PhiPlus, kPhiPlusAxis, 0.0);
    for (BellKind obs : {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus}) {
        Ensemble ens(std::vector<Particle>{{truth, 1.0}, {other, 1.0}}, 0);
        update_weights(ens, model, obs);
        const bool truth_likelier = model.probability(obs, truth) > model.probability(obs, other);
        EXPECT_EQ(ens.particles()[0].weight > ens.particles()[1].weight, truth_likelier);
    }
}

TEST(UpdateWeights, SingletOutcomeIsDegenerate) {
    Ensemble ens = init_ensemble(PriorConfig{0.1745, 50}, 5);
    const auto before = weights_of(ens);
    EXPECT_THROW(update_weights(ens, BellKind::PhiPlus, kPhiPlusAxis, BellKind::PsiMinus, 0.0), DegenerateLikelihood);
    EXPECT_EQ(weights_of(ens), before);
    EXPECT_EQ(ens.measurement_index(), 0u);
    EXPECT_NO_THROW(update_weights(ens, BellKind::PhiPlus, kPhiPlusAxis, BellKind::PsiMinus, 0.01));
}

TEST(UpdateWeights, StaysNormalized) {
    Ensemble ens = init_ensemble(PriorConfig{}, 6);
    const BellLikelihood plus(BellKind::PhiPlus, kPhiPlusAxis, 0.0);
    const BellLikelihood minus(BellKind::PhiMinus, kPhiMinusAxis, 0.0);
    std::mt19937_64 rng(7);
    for (int m = 0; m < 300; ++m) {
        update_weights(ens, m % 2 ? minus : plus, kAllBellKinds[rng() % 3]);
        const auto w = weights_of(ens);
        ASSERT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    }
}

TEST(EffectiveSampleSize, Examples) {
    std::vector<double> uniform(500, 1.0 / 500);
    EXPECT_NEAR(effective_sample_size(uniform), 500.0, 1e-9);
    std::vector<double> spike(10, 0.0);
    spike[3] = 1.0;
    EXPECT_EQ(effective_sample_size(spike), 1.0);
    std::vector<double> pair(10, 0.0);
    pair[0] = pair[1] = 0.5;
    EXPECT_EQ(effective_sample_size(pair), 2.0);
    EXPECT_NEAR(zeros(500, 0).effective_sample_size(), 500.0, 1e-9);
}

TEST(Resample, SpikeCollapsesAroundParent) {
    std::vector<Particle> ps(200, Particle{{0.3, -0.2, 0.1}, 0.0});
    for (std::size_t i = 0; i < ps.size(); ++i) ps[i].theta.x += 0.001 * static_cast<double>(i);
    ps[17].weight = 1.0;
    Ensemble ens(ps, 8);
    const RotationVector parent = ps[17].theta;
    ens.resample_defensive(FilterConfig{});
    for (const auto &p : ens.particles()) {
        EXPECT_NEAR(p.theta.x, parent.x, 1e-4);
        EXPECT_NEAR(p.theta.y, parent.y, 1e-4);
        EXPECT_NEAR(p.theta.z, parent.z, 1e-4);
        EXPECT_EQ(p.weight, 1.0 / 200);
    }
}

TEST(Resample, PreservesMeanOnAverage) {
    const int reps = 200;
    const std::size_t n = 1000;
    double sum_diff = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        Ensemble ens = init_ensemble(PriorConfig{0.1745, n}, 100 + r);
        const double before = ens.estimate().mean.x;
        ens.resample_defensive(FilterConfig{});
        const double diff = ens.estimate().mean.x - before;
        sum_diff += diff;
        sum_sq += diff * diff;
    }
    const double mean = sum_diff / reps;
    const double se = std::sqrt((sum_sq / reps - mean * mean) / reps);
    EXPECT_LT(std::abs(mean), 3.0 * se);
    // Each difference is of order sigma / sqrt(N).
    EXPECT_LT(std::sqrt(sum_sq / reps), 3.0 * 0.1745 / std::sqrt(static_cast<double>(n)));
}

TEST(Resample, WeightedMeanPreservedForSkewedWeights) {
    const int reps = 200;
    const std::size_t n = 1000;
    double sum_diff = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        Ensemble ens = init_ensemble(PriorConfig{0.1745, n}, 500 + r);
        ens.reweight([](const RotationVector &t) { return std::exp(5.0 * t.y); });
        const double before = ens.estimate().mean.y;
        ens.resample_defensive(FilterConfig{});
        const double diff = ens.estimate().mean.y - before;
        sum_diff += diff;
        sum_sq += diff * diff;
    }
    const double mean = sum_diff / reps;
    const double se = std::sqrt((sum_sq / reps - mean * mean) / reps);
    EXPECT_LT(std::abs(mean), 3.0 * se);
}

TEST(Estimate, SinglePointAndPair) {
    Ensemble one(std::vector<Particle>{{{0.1, 0.2, 0.3}, 1.0}, {{5.0, 5.0, 5.0}, 0.0}}, 0);
    const Estimate e1 = one.estimate();
    EXPECT_NEAR(e1.mean.x, 0.1, 1e-15);
    EXPECT_NEAR(e1.mean.z, 0.3, 1e-15);
    EXPECT_NEAR(e1.covariance.norm(), 0.0, 1e-15);

    const RotationVector v{0.1, -0.2, 0.05};
    Ensemble two(std::vector<Particle>{{v, 1.0}, {{-v.x, -v.y, -v.z}, 1.0}}, 0);
    const Estimate e2 = two.estimate();
    EXPECT_NEAR(e2.mean.norm(), 0.0, 1e-15);
    const Eigen::Vector3d vv(v.x, v.y, v.z);
    EXPECT_LT((e2.covariance - vv * vv.transpose()).norm(), 1e-15);
}

TEST(Estimate, PriorCovariance) {
    const double s2 = 0.1745 * 0.1745;
    const Estimate e = init_ensemble(PriorConfig{0.1745, 100000}, 9).estimate();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(e.covariance(i, j), i == j ? s2 : 0.0, 0.03 * s2);
        }
    }
}

TEST(SingleQubit, SuccessProbability) {
    EXPECT_EQ(single_qubit_success_prob(0.0), 0.5);
    EXPECT_NEAR(single_qubit_success_prob(kPi / 2), 1.0, 1e-15);
    EXPECT_NEAR(single_qubit_success_prob(0.1), 0.549917, 1e-6);
}

TEST(SingleQubit, EstimatorBoundaries) {
    SingleQubitTally t;
    t.trials = {10, 10, 10};
    t.successes = {5, 10, 0};
    const auto e = single_qubit_estimate(t);
    EXPECT_NEAR(e.theta.x, 0.0, 1e-15);
    EXPECT_LT(e.theta.y, kPi / 2);
    EXPECT_NEAR(e.theta.y, kPi / 2, 2e-6);
    EXPECT_GT(e.theta.z, -kPi / 2);
    EXPECT_NEAR(e.theta.z, -kPi / 2, 2e-6);
    for (double v : e.variance) EXPECT_NEAR(v, 0.1, 1e-15);
    t.trials[0] = 0;
    t.successes[0] = 0;
    EXPECT_THROW(single_qubit_estimate(t), std::invalid_argument);
}

TEST(SingleQubit, RecordIndexesByComponent) {
    SingleQubitTally t;
    t.record(Axis::Y, true);
    t.record(Axis::Y, false);
    t.record(Axis::Z, true);
    EXPECT_EQ(t.trials[1], 2u);
    EXPECT_EQ(t.successes[1], 1u);
    EXPECT_EQ(t.trials[2], 1u);
    EXPECT_EQ(t.trials[0], 0u);
}

TEST(SingleQubit, VarianceLaw) {
    const std::uint64_t n = 10000;
    std::mt19937_64 rng(10);
    for (double theta : {0.0, 0.05, 0.1}) {
        std::binomial_distribution<std::uint64_t> draws(n, single_qubit_success_prob(theta));
        const int reps = 2000;
        double s = 0.0, ss = 0.0;
        for (int r = 0; r < reps; ++r) {
            SingleQubitTally t;
            t.trials = {n, n, n};
            t.successes = {draws(rng), n / 2, n / 2};
            const double est = single_qubit_estimate(t).theta.x;
            s += est;
            ss += est * est;
        }
        const double var = (ss - s * s / reps) / (reps - 1);
        EXPECT_NEAR(var * n, 1.0, 0.15) << theta;
        EXPECT_NEAR(s / reps, theta, 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST(SingleQubit, CycleSchedule) {
    auto check = [](std::size_t m, Axis prep, Axis meas, Axis est) {
        const CycleStep s = single_qubit_cycle_schedule(m);
        EXPECT_EQ(s.prepare, prep) << m;
        EXPECT_EQ(s.measure, meas) << m;
        EXPECT_EQ(s.estimated, est) << m;
    };
    check(1, Axis::Z, Axis::X, Axis::Y);
    check(2, Axis::X, Axis::Y, Axis::Z);
    check(3, Axis::Y, Axis::Z, Axis::X);
    check(4, Axis::Z, Axis::X, Axis::Y);
    EXPECT_THROW(single_qubit_cycle_schedule(0), std::invalid_argument);
}

TEST(BayesOracle, PinnedGridMatchesBruteForce) {
    std::vector<RotationVector> grid;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) grid.push_back({-0.3 + 0.06 * i, -0.3 + 0.06 * j, -0.3 + 0.06 * k});
    for (double alpha : {0.0, 0.01}) {
        std::vector<Particle> ps;
        for (const auto &g : grid) ps.push_back({g, 1.0});
        Ensemble ens(ps, 0);
        const RotationVector truth{0.07, -0.11, 0.02};
        std::mt19937_64 rng(11);
        std::vector<double> log_post(grid.size(), 0.0);
        for (int m = 1; m <= 50; ++m) {
            const BellKind prepared = m % 2 ? BellKind::PhiPlus : BellKind::PhiMinus;
            const MeasurementAxis axis = m % 2 ? kPhiPlusAxis : kPhiMinusAxis;
            const auto dist = outcome_distribution(prepared, truth, axis, alpha);
            std::discrete_distribution<int> pick(dist.p.begin(), dist.p.end());
            const BellKind observed = kAllBellKinds[pick(rng)];
            update_weights(ens, prepared, axis, observed, alpha);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                log_post[i] += std::log(outcome_distribution(prepared, grid[i], axis, alpha)[observed]);
            }
            const double top = *std::max_element(log_post.begin(), log_post.end());
            double z = 0.0;
            for (double lp : log_post) z += std::exp(lp - top);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                ASSERT_NEAR(ens.particles()[i].weight, std::exp(log_post[i] - top) / z, 1e-10) << m;
            }
        }
    }
}

}  // namespace
}  // namespace bellrot
