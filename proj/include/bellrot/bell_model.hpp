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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellrot/quantum.hpp"

namespace bellrot {

/// Raised when the equal-probability search cannot reach its tolerance.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Orientation of a Bell-measurement frame, theta in [0, pi], lambda in [0, 2 pi).
///
/// The frame is U = R_z(theta) R_y(lambda). U|0> points along
/// n = (sin(lambda) cos(theta), sin(lambda) sin(theta), cos(lambda)), so lambda
/// sweeps the polar angle of the quantization axis and theta turns it about z.
struct MeasurementAxis {
    double theta = 0.0;
    double lambda = 0.0;

    void validate() const;
};

/// Bell-measurement axes used by the rotation estimator for the two prepared states.
inline constexpr MeasurementAxis kPhiPlusAxis{0.95531662, 0.78539816};
inline constexpr MeasurementAxis kPhiMinusAxis{0.61547971, 0.78539816};

/// Outcome probabilities indexed by BellKind.
struct OutcomeDistribution {
    std::array<double, 4> p{};

    double operator[](BellKind kind) const { return p[static_cast<int>(kind)]; }
    double phi_plus() const { return p[0]; }
    double phi_minus() const { return p[1]; }
    double psi_plus() const { return p[2]; }
    double psi_minus() const { return p[3]; }
    double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

ComplexMatrix measurement_frame(const MeasurementAxis &axis);

/// Probabilities of each Bell outcome in `frame` for the mixed state
/// mix(R rho R^dagger, alpha), computed from density matrices.
OutcomeDistribution outcome_distribution(const DensityMatrix &rho, const ComplexMatrix &frame);

/// Prepare `initial` in the z basis, rotate both qubits by `rot`, depolarize by
/// `alpha`, then measure in the Bell basis of `axis`.
OutcomeDistribution outcome_distribution(BellKind initial, const RotationVector &rot,
                                         const MeasurementAxis &axis, double alpha);

/// Amplitudes of R(theta)|initial> on the z-basis Bell states, ordered
/// (phi+, phi-, psi+, psi-), from the closed-form rotation polynomials.
std::array<cplx, 4> closed_form_coefficients(BellKind initial, const AxisAngle &aa);

/// Tabulated effect of an axial joint rotation on each Bell state, ordered as
/// closed_form_coefficients.
std::array<cplx, 4> axial_rotation_table(Axis axis, BellKind initial, double theta);

/// Per-particle likelihood of a Bell outcome for a fixed preparation, measurement
/// axis and mixing fraction.
///
/// The measurement basis is expanded once onto the z-basis Bell states so that
/// evaluating a rotation costs one closed-form coefficient vector and a dot product.
class BellLikelihood {
   public:
    BellLikelihood(BellKind prepared, const MeasurementAxis &axis, double alpha);

    BellKind prepared() const { return prepared_; }
    double alpha() const { return alpha_; }

    double probability(BellKind observed, const RotationVector &rot) const;
    OutcomeDistribution distribution(const RotationVector &rot) const;

   private:
    BellKind prepared_;
    double alpha_;
    // overlap_[z][j] = <measured Bell state z | z-basis Bell state j>
    std::array<std::array<cplx, 4>, 4> overlap_{};
};

struct SphereMap {
    BellKind initial = BellKind::PhiPlus;
    RotationVector rot;
    double alpha = 0.0;
    int n_theta = 0;
    int n_lambda = 0;
    std::vector<OutcomeDistribution> cells;  // row-major in theta, then lambda

    double theta_at(int i) const;
    double lambda_at(int j) const;
    const OutcomeDistribution &at(int i, int j) const { return cells[i * n_lambda + j]; }
};

/// Theta is sampled endpoint-inclusive on [0, pi]; lambda endpoint-exclusive on [0, 2 pi).
SphereMap sphere_map(BellKind initial, const RotationVector &rot, double alpha, int n_theta,
                     int n_lambda);

/// Writes `theta_rad,lambda_rad,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus`
/// rows with 9 significant digits.
void write_sphere_csv(std::ostream &out, const SphereMap &map);

/// Outcome probabilities along theta = theta_slice for n_lambda evenly spaced lambdas.
std::vector<OutcomeDistribution> lambda_slice(BellKind initial, const RotationVector &rot,
                                              double alpha, double theta_slice, int n_lambda);

struct EqualPoint {
    MeasurementAxis axis;
    double variance = 0.0;  // of the three non-singlet outcome probabilities
    double spread = 0.0;    // max - min of the same three
};

/// Maps any (theta, lambda) onto the equivalent point with theta in [0, pi), lambda in [0, 2 pi).
MeasurementAxis canonical_axis(double theta, double lambda);

/// Axes where phi+, phi- and psi+ are equally likely for an unrotated, pure
/// `initial` (phi+ or phi-). Coarse 1-degree scan, then Nelder-Mead on the
/// variance of the three probabilities. Throws SolverError if nothing reaches
/// variance < 1e-18.
std::vector<EqualPoint> equal_probability_axes(BellKind initial);

}  // namespace bellrot
