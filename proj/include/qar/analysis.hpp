// analysis.hpp — thermodynamic and information-theoretic diagnostics: heat
// currents, entropy production rate, negativity, l1 coherence, mutual
// information.

#pragma once

#include <cmath>
#include <vector>

#include "qar/dynamics.hpp"
#include "qar/types.hpp"

namespace qar {

// Q_i = Tr(H_S * dissipator_i(rho)), channels restricted to one bath
// (global-Hamiltonian definition).
inline double heat_current(const Matrix8& rho, const Matrix8& h_s,
                           const std::vector<DissipationChannel>& bath_channels) {
    return (h_s * apply_dissipator(rho, bath_channels)).trace().real();
}

// Von Neumann entropy in nats; eigenvalues below 1e-14 are dropped (0 ln 0 = 0).
template <typename MatrixT>
double von_neumann_entropy(const MatrixT& rho) {
    Eigen::SelfAdjointEigenSolver<MatrixT> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > 1e-14) s -= lam * std::log(lam);
    }
    return s;
}

// dS/dt = -Tr(rho_dot ln rho), evaluated in the eigenbasis of rho with the
// same 1e-14 eigenvalue floor.
inline double entropy_rate(const Matrix8& rho, const Matrix8& rho_dot) {
    Eigen::SelfAdjointEigenSolver<Matrix8> es(rho);
    double ds = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam <= 1e-14) continue;
        const Vector8 v = es.eigenvectors().col(i);
        ds -= (v.adjoint() * rho_dot * v)(0).real() * std::log(lam);
    }
    return ds;
}

// Entropy production rate Delta = dS/dt - sum_i beta_i Q_i. `per_bath` holds
// the channel list of each bath, `taus` the matching bath temperatures; the
// generator for rho_dot is H_S plus the union of all baths.
inline double entropy_production_rate(const Matrix8& rho, const Matrix8& h_s,
                                      const std::vector<std::vector<DissipationChannel>>& per_bath,
                                      const std::vector<double>& taus) {
    if (per_bath.size() != taus.size())
        throw std::invalid_argument("entropy_production_rate: one temperature per bath required");
    Matrix8 rho_dot = Complex(0, -1) * (h_s * rho - rho * h_s);
    double clausius = 0.0;
    for (std::size_t i = 0; i < per_bath.size(); ++i) {
        const Matrix8 d = apply_dissipator(rho, per_bath[i]);
        rho_dot += d;
        clausius += (h_s * d).trace().real() / taus[i];
    }
    return entropy_rate(rho, rho_dot) - clausius;
}

// Partial transpose over qubit 1.
inline Matrix8 partial_transpose_1(const Matrix8& rho) {
    Matrix8 out;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            const int r1 = r >> 2, c1 = c >> 2;
            out((c1 << 2) | (r & 3), (r1 << 2) | (c & 3)) = rho(r, c);
        }
    }
    return out;
}

// Negativity in the 1:23 bipartition: sum of |negative eigenvalues| of the
// partial transpose.
inline double negativity_1_23(const Matrix8& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix8> es(partial_transpose_1(rho), Eigen::EigenvaluesOnly);
    double n = 0.0;
    for (int i = 0; i < 8; ++i)
        if (es.eigenvalues()(i) < 0.0) n -= es.eigenvalues()(i);
    return n;
}

// l1 coherence sum_{i != j} |M_ij| of the matrix as given. The computational
// product basis coincides with the eigenbasis of the local Hamiltonian, so
// passing the full state or a reduced state covers both variants.
template <typename MatrixT>
double l1_coherence(const MatrixT& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j) s += std::abs(m(i, j));
    return s;
}

// I(1:23) = S(rho_1) + S(rho_23) - S(rho), in nats.
inline double mutual_information_1_23(const Matrix8& rho) {
    return von_neumann_entropy(reduced_qubit(rho, 1)) +
           von_neumann_entropy(reduced_pair_23(rho)) - von_neumann_entropy(rho);
}

}  // namespace qar
