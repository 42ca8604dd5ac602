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

#include "bellrot/bell_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "bellrot/nelder_mead.hpp"

namespace bellrot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double three_way_variance(const OutcomeDistribution &d) {
    const double mean = (d.phi_plus() + d.phi_minus() + d.psi_plus()) / 3.0;
    const double a = d.phi_plus() - mean;
    const double b = d.phi_minus() - mean;
    const double c = d.psi_plus() - mean;
    return (a * a + b * b + c * c) / 3.0;
}

double three_way_spread(const OutcomeDistribution &d) {
    const auto [lo, hi] = std::minmax({d.phi_plus(), d.phi_minus(), d.psi_plus()});
    return hi - lo;
}

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

}  // namespace

void MeasurementAxis::validate() const {
    if (!(theta >= 0.0 && theta <= kPi) || !(lambda >= 0.0 && lambda < kTwoPi)) {
        throw std::invalid_argument("measurement axis out of range: theta must lie in [0, pi], "
                                    "lambda in [0, 2 pi)");
    }
}

ComplexMatrix measurement_frame(const MeasurementAxis &axis) {
    axis.validate();
    return rotation_single(Axis::Z, axis.theta) * rotation_single(Axis::Y, axis.lambda);
}

OutcomeDistribution outcome_distribution(const DensityMatrix &rho, const ComplexMatrix &frame) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("Bell outcomes need a two-qubit density matrix");
    }
    OutcomeDistribution dist;
    for (BellKind kind : kAllBellKinds) {
        const DensityMatrix projector = DensityMatrix::pure(bell_state(kind, frame));
        dist.p[static_cast<int>(kind)] = trace_probability(projector, rho);
    }
    if (std::abs(dist.sum() - 1.0) > 1e-10) {
        throw ConsistencyError("Bell outcome probabilities do not sum to one");
    }
    return dist;
}

OutcomeDistribution outcome_distribution(BellKind initial, const RotationVector &rot,
                                         const MeasurementAxis &axis, double alpha) {
    const ComplexMatrix frame = measurement_frame(axis);
    const DensityMatrix rotated =
        DensityMatrix::pure(bell_state(initial)).conjugated(joint_rotation(to_axis_angle(rot)));
    return outcome_distribution(mix_with_identity(rotated, alpha), frame);
}

std::array<cplx, 4> closed_form_coefficients(BellKind initial, const AxisAngle &aa) {
    const double kx = aa.k[0];
    const double ky = aa.k[1];
    const double kz = aa.k[2];
    if (std::abs(std::sqrt(kx * kx + ky * ky + kz * kz) - 1.0) > 1e-9) {
        throw std::invalid_argument("rotation axis is not a unit vector");
    }
    const double c = std::cos(aa.theta);
    const double s = std::sin(aa.theta);
    const double one_minus_c = 1.0 - c;

    // Order: phi+, phi-, psi+, psi-.
    switch (initial) {
        case BellKind::PhiPlus:
            return {c - ky * ky * c + ky * ky,
                    -kI * (kz * s - kx * ky * one_minus_c),
                    -kI * (kx * s + ky * kz * one_minus_c),
                    0.0};
        case BellKind::PhiMinus:
            return {-kI * (kz * s + kx * ky * one_minus_c),
                    c - kx * kx * c + kx * kx,
                    ky * s - kx * kz * one_minus_c,
                    0.0};
        case BellKind::PsiPlus:
            return {-kI * (kx * s - ky * kz * one_minus_c),
                    -ky * s - kx * kz * one_minus_c,
                    c - kz * kz * c + kz * kz,
                    0.0};
        case BellKind::PsiMinus:
            return {0.0, 0.0, 0.0, 1.0};
    }
    throw std::invalid_argument("unknown Bell state");
}

std::array<cplx, 4> axial_rotation_table(Axis axis, BellKind initial, double theta) {
    const cplx c = std::cos(theta);
    const cplx s = std::sin(theta);
    constexpr cplx z = 0.0;
    constexpr cplx one = 1.0;
    if (initial == BellKind::PsiMinus) {
        return {z, z, z, one};
    }
    switch (axis) {
        case Axis::X:
            switch (initial) {
                case BellKind::PsiPlus:
                    return {-kI * s, z, c, z};
                case BellKind::PhiPlus:
                    return {c, z, -kI * s, z};
                default:
                    return {z, one, z, z};
            }
        case Axis::Y:
            switch (initial) {
                case BellKind::PsiPlus:
                    return {z, -s, c, z};
                case BellKind::PhiPlus:
                    return {one, z, z, z};
                default:
                    return {z, c, s, z};
            }
        case Axis::Z:
            switch (initial) {
                case BellKind::PsiPlus:
                    return {z, z, one, z};
                case BellKind::PhiPlus:
                    return {c, -kI * s, z, z};
                default:
                    return {-kI * s, c, z, z};
            }
    }
    throw std::invalid_argument("unknown axis");
}

BellLikelihood::BellLikelihood(BellKind prepared, const MeasurementAxis &axis, double alpha)
    : prepared_(prepared), alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("mixing fraction must lie in [0, 1]");
    }
    const ComplexMatrix frame = measurement_frame(axis);
    for (BellKind measured : kAllBellKinds) {
        const StateVector m = bell_state(measured, frame);
        for (BellKind basis : kAllBellKinds) {
            overlap_[static_cast<int>(measured)][static_cast<int>(basis)] =
                overlap(m, bell_state(basis));
        }
    }
}

double BellLikelihood::probability(BellKind observed, const RotationVector &rot) const {
    const auto coeffs = closed_form_coefficients(prepared_, to_axis_angle(rot));
    const auto &row = overlap_[static_cast<int>(observed)];
    const cplx amp = row[0] * coeffs[0] + row[1] * coeffs[1] + row[2] * coeffs[2] + row[3] * coeffs[3];
    return (1.0 - alpha_) * std::norm(amp) + alpha_ / 4.0;
}

OutcomeDistribution BellLikelihood::distribution(const RotationVector &rot) const {
    OutcomeDistribution d;
    for (BellKind kind : kAllBellKinds) {
        d.p[static_cast<int>(kind)] = probability(kind, rot);
    }
    return d;
}

double SphereMap::theta_at(int i) const { return kPi * i / (n_theta - 1); }

double SphereMap::lambda_at(int j) const { return kTwoPi * j / n_lambda; }

SphereMap sphere_map(BellKind initial, const RotationVector &rot, double alpha, int n_theta,
                     int n_lambda) {
    if (n_theta < 2 || n_lambda < 2) {
        throw std::invalid_argument("sphere grid needs at least 2 points per axis");
    }
    SphereMap map{initial, rot, alpha, n_theta, n_lambda, {}};
    map.cells.reserve(static_cast<std::size_t>(n_theta) * n_lambda);
    const DensityMatrix rotated = mix_with_identity(
        DensityMatrix::pure(bell_state(initial)).conjugated(joint_rotation(to_axis_angle(rot))),
        alpha);
    for (int i = 0; i < n_theta; ++i) {
        for (int j = 0; j < n_lambda; ++j) {
            map.cells.push_back(
                outcome_distribution(rotated, measurement_frame({map.theta_at(i), map.lambda_at(j)})));
        }
    }
    return map;
}

void write_sphere_csv(std::ostream &out, const SphereMap &map) {
    out << "theta_rad,lambda_rad,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus\n";
    char line[256];
    for (int i = 0; i < map.n_theta; ++i) {
        for (int j = 0; j < map.n_lambda; ++j) {
            const auto &d = map.at(i, j);
            std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", map.theta_at(i),
                          map.lambda_at(j), d.phi_plus(), d.phi_minus(), d.psi_plus(),
                          d.psi_minus());
            out << line;
        }
    }
}

std::vector<OutcomeDistribution> lambda_slice(BellKind initial, const RotationVector &rot,
                                              double alpha, double theta_slice, int n_lambda) {
    if (n_lambda < 2) {
        throw std::invalid_argument("slice needs at least 2 points");
    }
    std::vector<OutcomeDistribution> out;
    out.reserve(n_lambda);
    for (int j = 0; j < n_lambda; ++j) {
        out.push_back(outcome_distribution(initial, rot, {theta_slice, kTwoPi * j / n_lambda}, alpha));
    }
    return out;
}

MeasurementAxis canonical_axis(double theta, double lambda) {
    // R_z(theta + pi) R_y(lambda) equals R_z(theta) R_y(-lambda) up to a frame
    // relabeling that leaves every Bell outcome probability unchanged.
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    while (theta >= kPi - 1e-12) {
        theta -= kPi;
        lambda = -lambda;
    }
    theta = std::max(theta, 0.0);
    lambda = std::fmod(lambda, kTwoPi);
    if (lambda < 0.0) lambda += kTwoPi;
    if (lambda >= kTwoPi) lambda = 0.0;
    return {theta, lambda};
}

std::vector<EqualPoint> equal_probability_axes(BellKind initial) {
    if (initial != BellKind::PhiPlus && initial != BellKind::PhiMinus) {
        throw std::invalid_argument("equal-probability axes are defined for phi+ and phi- only");
    }
    const DensityMatrix rho = DensityMatrix::pure(bell_state(initial));
    auto objective = [&](const std::array<double, 2> &x) {
        return three_way_variance(outcome_distribution(rho, measurement_frame(canonical_axis(x[0], x[1]))));
    };

    constexpr int kThetaSteps = 181;  // 0..180 degrees inclusive
    constexpr int kLambdaSteps = 360;
    constexpr double kDeg = kPi / 180.0;
    std::vector<double> grid(static_cast<std::size_t>(kThetaSteps) * kLambdaSteps);
    auto cell = [&](int i, int j) -> double & { return grid[i * kLambdaSteps + j]; };
    for (int i = 0; i < kThetaSteps; ++i) {
        for (int j = 0; j < kLambdaSteps; ++j) {
            cell(i, j) = objective({i * kDeg, j * kDeg});
        }
    }

    std::vector<EqualPoint> found;
    NelderMeadOptions opts;
    opts.initial_step = kDeg;
    opts.x_tolerance = 1e-15;
    opts.max_evaluations = 5000;
    for (int i = 0; i < kThetaSteps; ++i) {
        for (int j = 0; j < kLambdaSteps; ++j) {
            const double v = cell(i, j);
            if (v > 1e-2) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ni = i + di;
                    if ((di == 0 && dj == 0) || ni < 0 || ni >= kThetaSteps) continue;
                    const int nj = (j + dj + kLambdaSteps) % kLambdaSteps;
                    if (cell(ni, nj) < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (!is_min) continue;

            const auto result = nelder_mead<2>(objective, {i * kDeg, j * kDeg}, opts);
            if (!(result.value < 1e-18)) continue;
            const MeasurementAxis axis = canonical_axis(result.x[0], result.x[1]);
            const bool duplicate = std::any_of(found.begin(), found.end(), [&](const EqualPoint &p) {
                return std::abs(p.axis.theta - axis.theta) < 1e-7 &&
                       circular_distance(p.axis.lambda, axis.lambda) < 1e-7;
            });
            if (duplicate) continue;
            const auto dist = outcome_distribution(rho, measurement_frame(axis));
            found.push_back({axis, three_way_variance(dist), three_way_spread(dist)});
        }
    }
    if (found.empty()) {
        throw SolverError("no equal-probability axis reached variance below 1e-18");
    }
    std::sort(found.begin(), found.end(), [](const EqualPoint &a, const EqualPoint &b) {
        return a.axis.theta != b.axis.theta ? a.axis.theta < b.axis.theta
                                            : a.axis.lambda < b.axis.lambda;
    });
    return found;
}

}  // namespace bellrot
