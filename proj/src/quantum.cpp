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

#include "bellrot/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>

namespace bellrot {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_dim(int dim) {
    if (dim != 2 && dim != 4) {
        throw std::invalid_argument("matrix dimension must be 2 or 4, got " + std::to_string(dim));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) { require_dim(dim); }

ComplexMatrix::ComplexMatrix(int dim, std::initializer_list<cplx> row_major) : dim_(dim) {
    require_dim(dim);
    if (row_major.size() != static_cast<std::size_t>(dim * dim)) {
        throw std::invalid_argument("expected dim*dim entries");
    }
    std::copy(row_major.begin(), row_major.end(), entries_.begin());
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    double worst = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i) {
        worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    }
    return worst;
}

bool ComplexMatrix::is_unitary(double tol) const {
    return (adjoint() * *this).max_abs_diff(identity(dim_)) < tol;
}

bool ComplexMatrix::is_hermitian(double tol) const { return max_abs_diff(adjoint()) < tol; }

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs) {
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (int i = 0; i < dim_ * dim_; ++i) {
        entries_[i] += rhs.entries_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs) {
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (int i = 0; i < dim_ * dim_; ++i) {
        entries_[i] -= rhs.entries_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx scale) {
    for (int i = 0; i < dim_ * dim_; ++i) {
        entries_[i] *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim_ != b.dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    const int n = a.dim_;
    ComplexMatrix out(n);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            for (int c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw std::invalid_argument("kron is defined for 2x2 factors only");
    }
    ComplexMatrix out(4);
    for (int ar = 0; ar < 2; ++ar) {
        for (int ac = 0; ac < 2; ++ac) {
            for (int br = 0; br < 2; ++br) {
                for (int bc = 0; bc < 2; ++bc) {
                    out(2 * ar + br, 2 * ac + bc) = a(ar, ac) * b(br, bc);
                }
            }
        }
    }
    return out;
}

StateVector::StateVector(int dim, std::initializer_list<cplx> amplitudes) : dim_(dim) {
    if (dim != 2 && dim != 4) {
        throw std::invalid_argument("state dimension must be 2 or 4");
    }
    if (amplitudes.size() != static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("expected dim amplitudes");
    }
    std::copy(amplitudes.begin(), amplitudes.end(), amps_.begin());
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        norm2 += std::norm(amps_[i]);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

StateVector operator*(const ComplexMatrix &op, const StateVector &psi) {
    if (op.dim() != psi.dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    StateVector out;
    out.dim_ = psi.dim_;
    for (int r = 0; r < psi.dim_; ++r) {
        cplx acc = 0.0;
        for (int c = 0; c < psi.dim_; ++c) {
            acc += op(r, c) * psi.amps_[c];
        }
        out.amps_[r] = acc;
    }
    return out;
}

cplx overlap(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("dimension mismatch");
    }
    cplx acc = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (!rho_.is_hermitian(1e-12)) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - 1.0) > 1e-12) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    const int n = rho_.dim();
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = rho_(r, c);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
    const int n = psi.dim();
    ComplexMatrix rho(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            rho(r, c) = psi[r] * std::conj(psi[c]);
        }
    }
    return {std::move(rho), Trusted{}};
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return {(1.0 / dim) * ComplexMatrix::identity(dim), Trusted{}};
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

DensityMatrix DensityMatrix::conjugated(const ComplexMatrix &unitary) const {
    return {unitary * rho_ * unitary.adjoint(), Trusted{}};
}

double RotationVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

AxisAngle to_axis_angle(const RotationVector &v) {
    const double theta = v.norm();
    if (theta < 1e-12) {
        return AxisAngle{};
    }
    return AxisAngle{{v.x / theta, v.y / theta, v.z / theta}, theta};
}

ComplexMatrix pauli(Axis axis) {
    switch (axis) {
        case Axis::X:
            return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
        case Axis::Y:
            return ComplexMatrix(2, {0.0, -kI, kI, 0.0});
        case Axis::Z:
            return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    }
    throw std::invalid_argument("unknown axis");
}

ComplexMatrix rotation_single(Axis axis, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return c * ComplexMatrix::identity(2) + (-kI * s) * pauli(axis);
}

ComplexMatrix rotation_axis_angle(const AxisAngle &aa) {
    const auto &k = aa.k;
    const double norm = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("rotation axis is not a unit vector");
    }
    const double c = std::cos(aa.theta / 2.0);
    const double s = std::sin(aa.theta / 2.0);
    // k . sigma = [[kz, kx - i ky], [kx + i ky, -kz]]
    const cplx kx_m = {k[0], -k[1]};
    const cplx kx_p = {k[0], k[1]};
    return ComplexMatrix(2, {cplx{c, -s * k[2]}, -kI * s * kx_m, -kI * s * kx_p, cplx{c, s * k[2]}});
}

ComplexMatrix joint_rotation(const AxisAngle &aa) {
    const ComplexMatrix r = rotation_axis_angle(aa);
    return kron(r, r);
}

std::string to_string(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus:
            return "phi+";
        case BellKind::PhiMinus:
            return "phi-";
        case BellKind::PsiPlus:
            return "psi+";
        case BellKind::PsiMinus:
            return "psi-";
    }
    return "?";
}

BellKind parse_bell_kind(const std::string &text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (BellKind kind : kAllBellKinds) {
        if (lower == to_string(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown Bell state '" + text + "' (expected phi+, phi-, psi+, psi-)");
}

StateVector bell_state(BellKind kind, const ComplexMatrix &frame) {
    if (frame.dim() != 2 || !frame.is_unitary(1e-10)) {
        throw std::invalid_argument("Bell frame must be a 2x2 unitary");
    }
    StateVector z;
    z.dim_ = 4;
    const double h = kInvSqrt2;
    switch (kind) {
        case BellKind::PhiPlus:
            z.amps_ = {h, 0.0, 0.0, h};
            break;
        case BellKind::PhiMinus:
            z.amps_ = {h, 0.0, 0.0, -h};
            break;
        case BellKind::PsiPlus:
            z.amps_ = {0.0, h, h, 0.0};
            break;
        case BellKind::PsiMinus:
            z.amps_ = {0.0, h, -h, 0.0};
            break;
    }
    return kron(frame, frame) * z;
}

StateVector bell_state(BellKind kind) { return bell_state(kind, ComplexMatrix::identity(2)); }

DensityMatrix mix_with_identity(const DensityMatrix &rho, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("mixing fraction must lie in [0, 1]");
    }
    const int n = rho.dim();
    ComplexMatrix out = (1.0 - alpha) * rho.matrix();
    for (int i = 0; i < n; ++i) {
        out(i, i) += alpha / n;
    }
    return {std::move(out), DensityMatrix::Trusted{}};
}

double entanglement_entropy(const StateVector &psi) {
    if (psi.dim() != 4) {
        throw std::invalid_argument("entanglement entropy needs a two-qubit state");
    }
    // rho_A(i, j) = sum_b psi(i b) conj(psi(j b))
    double a00 = 0.0;
    double a11 = 0.0;
    cplx a01 = 0.0;
    for (int b = 0; b < 2; ++b) {
        a00 += std::norm(psi[b]);
        a11 += std::norm(psi[2 + b]);
        a01 += psi[b] * std::conj(psi[2 + b]);
    }
    const double tr = a00 + a11;
    const double det = a00 * a11 - std::norm(a01);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    double entropy = 0.0;
    for (double lambda : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
        if (lambda >= 1e-14) {
            entropy -= lambda * std::log2(lambda);
        }
    }
    return entropy;
}

double trace_probability(const DensityMatrix &rho_a, const DensityMatrix &rho_b) {
    if (rho_a.dim() != rho_b.dim()) {
        throw std::invalid_argument("density matrix dimensions differ");
    }
    const ComplexMatrix &a = rho_a.matrix();
    const ComplexMatrix &b = rho_b.matrix();
    const int n = a.dim();
    double value = 0.0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            value += (a(r, c) * b(c, r)).real();
        }
    }
    if (value < -1e-10 || value > 1.0 + 1e-10) {
        throw ConsistencyError("trace probability out of range: " + std::to_string(value));
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace bellrot
