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

#include "bellrot/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <numeric>

namespace bellrot {

void PriorConfig::validate() const {
    if (!(sigma_prior > 0.0)) {
        throw std::invalid_argument("prior sigma must be positive");
    }
    if (n_theta < 2) {
        throw std::invalid_argument("particle count must be at least 2");
    }
}

void FilterConfig::validate() const {
    auto fraction = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!fraction(resample_threshold_fraction) || !fraction(defensive_small_prob)) {
        throw std::invalid_argument("filter fractions must lie in (0, 1]");
    }
    if (!(defensive_small_scale > 0.0)) {
        throw std::invalid_argument("defensive jitter scale must be positive");
    }
    if (!(process_noise_coeff >= 0.0) || !std::isfinite(process_noise_exponent)) {
        throw std::invalid_argument("process noise parameters are invalid");
    }
}

Ensemble::Ensemble(std::vector<Particle> particles, std::uint64_t seed)
    : particles_(std::move(particles)), rng_(seed) {
    if (particles_.size() < 2) {
        throw std::invalid_argument("an ensemble needs at least two particles");
    }
    std::vector<double> w(particles_.size());
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        if (!(particles_[i].weight >= 0.0)) {
            throw std::invalid_argument("particle weights must be non-negative");
        }
        w[i] = particles_[i].weight;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::invalid_argument("particle weights must have a positive finite sum");
    }
    const bool uniform = std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
    for (auto &p : particles_) {
        p.weight = uniform ? 1.0 / static_cast<double>(particles_.size()) : p.weight / total;
    }
}

void Ensemble::predict(const FilterConfig &cfg) {
    const double sigma = process_noise_sigma(m_ + 1, cfg);
    if (sigma == 0.0) {
        return;
    }
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto &p : particles_) {
        p.theta.x += noise(rng_);
        p.theta.y += noise(rng_);
        p.theta.z += noise(rng_);
    }
}

void Ensemble::commit_weights(std::vector<double> &unnormalized) {
    const double total = std::accumulate(unnormalized.begin(), unnormalized.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DegenerateLikelihood("all particle likelihoods vanished at measurement " +
                                   std::to_string(m_ + 1));
    }
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        particles_[i].weight = unnormalized[i] / total;
    }
    ++m_;
}

double effective_sample_size(std::span<const double> weights) {
    double sum_sq = 0.0;
    for (double w : weights) {
        sum_sq += w * w;
    }
    return 1.0 / sum_sq;
}

double Ensemble::effective_sample_size() const {
    double sum_sq = 0.0;
    for (const auto &p : particles_) {
        sum_sq += p.weight * p.weight;
    }
    return 1.0 / sum_sq;
}

bool Ensemble::needs_resample(const FilterConfig &cfg) const {
    return effective_sample_size() <
           cfg.resample_threshold_fraction * static_cast<double>(particles_.size());
}

Estimate Ensemble::estimate() const {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto &p : particles_) {
        mean += p.weight * Eigen::Vector3d(p.theta.x, p.theta.y, p.theta.z);
    }
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto &p : particles_) {
        const Eigen::Vector3d d = Eigen::Vector3d(p.theta.x, p.theta.y, p.theta.z) - mean;
        cov += p.weight * d * d.transpose();
    }
    return {{mean.x(), mean.y(), mean.z()}, cov};
}

void Ensemble::resample_defensive(const FilterConfig &cfg) {
    const std::size_t n = particles_.size();
    const Eigen::Matrix3d sigma = estimate().covariance + 1e-12 * Eigen::Matrix3d::Identity();
    const Eigen::Matrix3d wide = sigma.llt().matrixL();
    const Eigen::Matrix3d narrow = std::sqrt(cfg.defensive_small_scale) * wide;

    std::vector<double> cumulative(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        running += particles_[i].weight;
        cumulative[i] = running;
    }

    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Particle> offspring(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniform(rng_) * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t parent = std::min<std::size_t>(it - cumulative.begin(), n - 1);
        const Eigen::Matrix3d &chol = uniform(rng_) < cfg.defensive_small_prob ? narrow : wide;
        const Eigen::Vector3d z(gauss(rng_), gauss(rng_), gauss(rng_));
        const Eigen::Vector3d jitter = chol * z;
        const auto &src = particles_[parent].theta;
        offspring[k].theta = {src.x + jitter.x(), src.y + jitter.y(), src.z + jitter.z()};
        offspring[k].weight = 1.0 / static_cast<double>(n);
    }
    particles_ = std::move(offspring);
}

Ensemble init_ensemble(const PriorConfig &prior, std::uint64_t seed) {
    prior.validate();
    std::mt19937_64 draw_rng(seed);
    std::normal_distribution<double> gauss(0.0, prior.sigma_prior);
    std::vector<Particle> particles(prior.n_theta);
    const double w = 1.0 / static_cast<double>(prior.n_theta);
    for (auto &p : particles) {
        p.theta.x = gauss(draw_rng);
        p.theta.y = gauss(draw_rng);
        p.theta.z = gauss(draw_rng);
        p.weight = w;
    }
    // The ensemble's own stream continues from the generator that drew the prior.
    Ensemble ens(std::move(particles), 0);
    ens.rng() = draw_rng;
    return ens;
}

double process_noise_sigma(std::size_t m, const FilterConfig &cfg) {
    if (m == 0) {
        throw std::invalid_argument("process noise is indexed from m = 1");
    }
    return cfg.process_noise_coeff * std::pow(static_cast<double>(m), cfg.process_noise_exponent);
}

void update_weights(Ensemble &ens, const BellLikelihood &model, BellKind observed) {
    ens.reweight([&](const RotationVector &theta) { return model.probability(observed, theta); });
}

void update_weights(Ensemble &ens, BellKind prepared, const MeasurementAxis &axis, BellKind observed,
                    double alpha) {
    update_weights(ens, BellLikelihood(prepared, axis, alpha), observed);
}

double single_qubit_success_prob(double theta) { return 0.5 * (1.0 + std::sin(theta)); }

void SingleQubitTally::record(Axis component, bool success) {
    const auto i = static_cast<std::size_t>(component);
    ++trials[i];
    if (success) {
        ++successes[i];
    }
}

SingleQubitEstimate single_qubit_estimate(const SingleQubitTally &tally) {
    SingleQubitEstimate out;
    std::array<double, 3> theta{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (tally.trials[i] == 0) {
            throw std::invalid_argument("single-qubit estimate needs at least one measurement per axis");
        }
        if (tally.successes[i] > tally.trials[i]) {
            throw std::invalid_argument("success count exceeds trial count");
        }
        const double n = static_cast<double>(tally.trials[i]);
        const double arg = 2.0 * static_cast<double>(tally.successes[i]) / n - 1.0;
        constexpr double kLimit = 1.0 - 1e-12;
        theta[i] = std::asin(std::clamp(arg, -kLimit, kLimit));
        // 4p(1-p) / (N (1 - (2p-1)^2)) reduces to 1/N.
        out.variance[i] = 1.0 / n;
    }
    out.theta = {theta[0], theta[1], theta[2]};
    return out;
}

CycleStep single_qubit_cycle_schedule(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("cycle schedule is indexed from m = 1");
    }
    switch ((m - 1) % 3) {
        case 0:
            return {Axis::Z, Axis::X, Axis::Y};
        case 1:
            return {Axis::X, Axis::Y, Axis::Z};
        default:
            return {Axis::Y, Axis::Z, Axis::X};
    }
}

}  // namespace bellrot
