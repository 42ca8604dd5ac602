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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace bellrot {

using cplx = std::complex<double>;

/// Raised when a trace or probability computation lands outside the range
/// that rounding alone can explain.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Dense square complex matrix of dimension 2 or 4, stored row-major.
///
/// Two-qubit objects use the basis order |00>, |01>, |10>, |11>.
class ComplexMatrix {
   public:
    explicit ComplexMatrix(int dim);
    ComplexMatrix(int dim, std::initializer_list<cplx> row_major);

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    cplx &operator()(int row, int col) { return entries_[row * dim_ + col]; }
    const cplx &operator()(int row, int col) const { return entries_[row * dim_ + col]; }

    ComplexMatrix adjoint() const;
    cplx trace() const;

    /// Largest elementwise modulus of (this - other).
    double max_abs_diff(const ComplexMatrix &other) const;
    bool is_unitary(double tol = 1e-12) const;
    bool is_hermitian(double tol = 1e-12) const;

    ComplexMatrix &operator+=(const ComplexMatrix &rhs);
    ComplexMatrix &operator-=(const ComplexMatrix &rhs);
    ComplexMatrix &operator*=(cplx scale);

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

   private:
    int dim_;
    std::array<cplx, 16> entries_{};
};

/// Kronecker product of two 2x2 matrices.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

enum class BellKind { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

/// Normalized pure state of one (dim 2) or two (dim 4) qubits.
class StateVector {
   public:
    /// Throws std::invalid_argument unless the amplitudes have unit norm within 1e-12.
    StateVector(int dim, std::initializer_list<cplx> amplitudes);

    int dim() const { return dim_; }
    const cplx &operator[](int i) const { return amps_[i]; }

    friend StateVector operator*(const ComplexMatrix &op, const StateVector &psi);
    friend StateVector bell_state(BellKind kind, const ComplexMatrix &frame);

   private:
    StateVector() = default;

    int dim_ = 0;
    std::array<cplx, 4> amps_{};
};

/// <a|b>
cplx overlap(const StateVector &a, const StateVector &b);

class DensityMatrix {
   public:
    /// Validates hermiticity, unit trace and eigenvalues >= -1e-10.
    explicit DensityMatrix(ComplexMatrix rho);

    static DensityMatrix pure(const StateVector &psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return rho_.dim(); }
    const ComplexMatrix &matrix() const { return rho_; }

    double purity() const;

    /// U rho U^dagger.
    DensityMatrix conjugated(const ComplexMatrix &unitary) const;

   private:
    struct Trusted {};
    DensityMatrix(ComplexMatrix rho, Trusted) : rho_(std::move(rho)) {}

    friend DensityMatrix mix_with_identity(const DensityMatrix &rho, double alpha);

    ComplexMatrix rho_;
};

enum class Axis { X, Y, Z };

/// Angles in radians.
struct RotationVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double operator[](Axis a) const { return a == Axis::X ? x : a == Axis::Y ? y : z; }
    double norm() const;
    friend bool operator==(const RotationVector &, const RotationVector &) = default;
};

struct AxisAngle {
    std::array<double, 3> k{0.0, 0.0, 1.0};
    double theta = 0.0;
};

/// theta = |v|, k = v / |v|; vectors shorter than 1e-12 give the identity rotation.
AxisAngle to_axis_angle(const RotationVector &v);

ComplexMatrix pauli(Axis axis);

/// cos(theta/2) I - i sin(theta/2) sigma_axis
ComplexMatrix rotation_single(Axis axis, double theta);

/// cos(theta/2) I - i sin(theta/2) (k . sigma). Rejects |k| != 1 beyond 1e-9.
ComplexMatrix rotation_axis_angle(const AxisAngle &aa);

/// R(theta) (x) R(theta): the same rotation applied to both qubits.
ComplexMatrix joint_rotation(const AxisAngle &aa);

inline constexpr std::array<BellKind, 4> kAllBellKinds{BellKind::PhiPlus, BellKind::PhiMinus,
                                                       BellKind::PsiPlus, BellKind::PsiMinus};

std::string to_string(BellKind kind);
/// Accepts "phi+", "phi-", "psi+", "psi-" (case-insensitive).
BellKind parse_bell_kind(const std::string &text);

/// (U (x) U)|kind>_z for a single-qubit basis change U. Rejects non-unitary frames.
StateVector bell_state(BellKind kind, const ComplexMatrix &frame);
StateVector bell_state(BellKind kind);

/// (1 - alpha) rho + alpha I/d, alpha in [0, 1].
DensityMatrix mix_with_identity(const DensityMatrix &rho, double alpha);

/// Von Neumann entropy (bits) of the reduced state of qubit A.
double entanglement_entropy(const StateVector &psi);

/// Tr(rho_a rho_b), clamped to [0, 1]. Throws ConsistencyError if the raw value
/// falls outside [-1e-10, 1 + 1e-10].
double trace_probability(const DensityMatrix &rho_a, const DensityMatrix &rho_b);

}  // namespace bellrot
