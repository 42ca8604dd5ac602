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

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "bellrot/bell_model.hpp"
#include "bellrot/quantum.hpp"

namespace bellrot {

/// Every particle assigned zero probability to the observed outcome.
struct DegenerateLikelihood : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Particle {
    RotationVector theta;
    double weight = 0.0;
};

struct PriorConfig {
    double sigma_prior = 0.1745;  // radians, per component
    std::size_t n_theta = 1000;

    void validate() const;
};

struct FilterConfig {
    double resample_threshold_fraction = 0.5;  // resample when N_eff < fraction * N
    double defensive_small_scale = 0.1;        // covariance multiplier of the narrow jitter
    double defensive_small_prob = 0.9;         // probability of using the narrow jitter
    double process_noise_coeff = 0.1;
    double process_noise_exponent = -2.0 / 3.0;

    void validate() const;
};

struct Estimate {
    RotationVector mean;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

/// Weighted particle approximation of the posterior over rotation vectors.
///
/// Owns its random generator; all perturbations and resampling draws come from it.
/// Weights always sum to one.
class Ensemble {
   public:
    /// Weights are normalized on construction, equal weights becoming exactly 1/N.
    /// Throws if fewer than two particles are given or the weights are not
    /// positive in total.
    Ensemble(std::vector<Particle> particles, std::uint64_t seed);

    std::span<const Particle> particles() const { return particles_; }
    std::size_t size() const { return particles_.size(); }
    /// Number of measurement updates absorbed so far.
    std::size_t measurement_index() const { return m_; }
    std::mt19937_64 &rng() { return rng_; }

    /// Adds N(0, sigma_{m+1}^2) to every component of every particle.
    void predict(const FilterConfig &cfg);

    /// w_i <- L(theta_i) w_i, renormalized; advances the measurement index.
    /// Throws DegenerateLikelihood (leaving the ensemble untouched) if every
    /// product is zero.
    template <class Likelihood>
    void reweight(Likelihood &&likelihood);

    double effective_sample_size() const;
    bool needs_resample(const FilterConfig &cfg) const;

    /// Multinomial resampling with defensive Gaussian jitter drawn from the
    /// pre-resampling weighted covariance.
    void resample_defensive(const FilterConfig &cfg);

    Estimate estimate() const;

   private:
    void commit_weights(std::vector<double> &unnormalized);

    std::vector<Particle> particles_;
    std::size_t m_ = 0;
    std::mt19937_64 rng_;
    std::vector<double> scratch_;
};

template <class Likelihood>
void Ensemble::reweight(Likelihood &&likelihood) {
    scratch_.resize(particles_.size());
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        scratch_[i] = likelihood(particles_[i].theta) * particles_[i].weight;
    }
    commit_weights(scratch_);
}

/// Components i.i.d. N(0, sigma_prior^2), equal weights, m = 0.
Ensemble init_ensemble(const PriorConfig &prior, std::uint64_t seed);

/// coeff * m^exponent; m must be >= 1.
double process_noise_sigma(std::size_t m, const FilterConfig &cfg);

void update_weights(Ensemble &ens, const BellLikelihood &model, BellKind observed);
void update_weights(Ensemble &ens, BellKind prepared, const MeasurementAxis &axis, BellKind observed,
                    double alpha);

double effective_sample_size(std::span<const double> weights);

// Single-qubit baseline -------------------------------------------------------

/// (1 + sin theta) / 2
double single_qubit_success_prob(double theta);

/// Measurement counts per estimated rotation component.
struct SingleQubitTally {
    std::array<std::uint64_t, 3> trials{};
    std::array<std::uint64_t, 3> successes{};

    void record(Axis component, bool success);
};

struct SingleQubitEstimate {
    RotationVector theta;
    std::array<double, 3> variance{};
};

/// Per-component arcsin(2 n / N - 1) with variance 1/N. The arcsin argument is
/// clamped to +-(1 - 1e-12). Throws if any component has N = 0.
SingleQubitEstimate single_qubit_estimate(const SingleQubitTally &tally);

struct CycleStep {
    Axis prepare;
    Axis measure;
    Axis estimated;
};

/// Period-3 cycle starting at m = 1: (z, x, y), (x, y, z), (y, z, x).
CycleStep single_qubit_cycle_schedule(std::size_t m);

}  // namespace bellrot
