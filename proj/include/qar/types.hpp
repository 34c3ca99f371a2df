// types.hpp — matrix aliases, Pauli building blocks, density-matrix checks
//
// Conventions used throughout the library:
//   * three-qubit computational basis |q1 q2 q3>, qubit 1 most significant,
//     ordered |000>, |001>, ..., |111>;
//   * |0> is the *excited* single-qubit state (energy +E/2) and |1> the ground
//     state (energy -E/2), i.e. sigma_z|0> = +|0>, sigma_z|1> = -|1>;
//   * dimensionless units, hbar = k_B = 1.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qar {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Matrix8 = Eigen::Matrix<Complex, 8, 8>;
using Vector8 = Eigen::Matrix<Complex, 8, 1>;
using SuperMatrix = Eigen::MatrixXcd;  // 64x64 vectorized generator

// Raised when an iterative numerical procedure fails to converge or a linear
// solve is ill-posed (maps to CLI exit code 2).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Matrix2 sigma_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix2 sigma_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix2 sigma_plus() {  // |0><1|
    Matrix2 m = Matrix2::Zero();
    m(0, 1) = 1;
    return m;
}

inline Matrix2 sigma_minus() {  // |1><0|
    Matrix2 m = Matrix2::Zero();
    m(1, 0) = 1;
    return m;
}

// Bit of qubit i (1..3) in basis index b (0..7); 0 = excited component.
inline int qubit_bit(int b, int qubit) {
    return (b >> (3 - qubit)) & 1;
}

// A 2x2 operator acting on one qubit, embedded into the three-qubit space.
inline Matrix8 embed(int qubit, const Matrix2& op) {
    if (qubit < 1 || qubit > 3) throw std::invalid_argument("embed: qubit index must be 1..3");
    Matrix8 out = Matrix8::Zero();
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            if ((r & ~(1 << (3 - qubit))) != (c & ~(1 << (3 - qubit)))) continue;
            out(r, c) = op(qubit_bit(r, qubit), qubit_bit(c, qubit));
        }
    }
    return out;
}

inline Matrix8 kron(const Matrix4& a, const Matrix2& b) {
    Matrix8 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Matrix8 kron(const Matrix2& a, const Matrix2& b, const Matrix2& c) {
    return kron(kron(a, b), c);
}

// ------------------------------ partial traces ------------------------------

inline Matrix2 reduced_qubit(const Matrix8& rho, int qubit) {
    if (qubit < 1 || qubit > 3) throw std::invalid_argument("reduced_qubit: qubit index must be 1..3");
    Matrix2 out = Matrix2::Zero();
    const int shift = 3 - qubit;
    const int mask = ~(1 << shift) & 7;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            if ((r & mask) != (c & mask)) continue;
            out(qubit_bit(r, qubit), qubit_bit(c, qubit)) += rho(r, c);
        }
    }
    return out;
}

// Trace out qubit 3; rows/cols indexed |q1 q2>.
inline Matrix4 reduced_pair_12(const Matrix8& rho) {
    Matrix4 out = Matrix4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 2; ++k)
                out(i, j) += rho(2 * i + k, 2 * j + k);
    return out;
}

// Trace out qubit 1; rows/cols indexed |q2 q3>.
inline Matrix4 reduced_pair_23(const Matrix8& rho) {
    Matrix4 out = Matrix4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 2; ++k)
                out(i, j) += rho(4 * k + i, 4 * k + j);
    return out;
}

// --------------------------- density-matrix checks ---------------------------

template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double trace_error(const Matrix8& rho) {
    return std::abs(rho.trace() - Complex(1.0, 0.0));
}

inline double min_eigenvalue(const Matrix8& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix8> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// Enforces the DensityMatrix invariants: Hermitian to 1e-12, unit trace to
// 1e-10, minimum eigenvalue >= -1e-8.
inline void validate_density(const Matrix8& rho) {
    if (hermiticity_error(rho) > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian within 1e-12");
    if (trace_error(rho) > 1e-10)
        throw std::invalid_argument("density matrix trace differs from 1 by more than 1e-10");
    if (min_eigenvalue(rho) < -1e-8)
        throw std::invalid_argument("density matrix has an eigenvalue below -1e-8");
}

inline Matrix8 hermitized(const Matrix8& m) {
    return 0.5 * (m + m.adjoint()).eval();
}

}  // namespace qar
