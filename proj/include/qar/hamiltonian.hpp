// hamiltonian.hpp — three-qubit Hamiltonian, closed-form eigensystem, thermal
// and initial states, working-principle transition probabilities.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "qar/types.hpp"

namespace qar {

// Qubit energies E1..E3 and qubit-qubit coupling g (dimensionless).
struct SystemParams {
    double e1 = 1.0;
    double e2 = 2.0;
    double e3 = 1.0;
    double g = 1e-2;

    double delta_e() const { return e2 - e1; }
    double e12() const { return e1 + e2; }
    // sqrt((E3 - dE)^2 + 4 g^2) >= 2g
    double e_tilde() const { return std::hypot(e3 - delta_e(), 2.0 * g); }

    void validate() const {
        if (!(e1 > 0.0) || !(e2 > 0.0) || !(e3 > 0.0))
            throw std::invalid_argument("SystemParams: qubit energies must be positive");
        if (!(g >= 0.0))
            throw std::invalid_argument("SystemParams: coupling g must be non-negative");
    }
};

// Labeled eigensystem in the fixed order 0..7:
//   0..5 are the computational states |000>,|001>,|100>,|011>,|110>,|111>;
//   6,7 live in span{|010>,|101>} with energies +-E_tilde/2.
struct Eigensystem {
    std::array<Vector8, 8> state;
    std::array<double, 8> energy{};
    bool zero_coupling = false;  // g = 0 branch (superposition states undefined)

    Matrix8 basis() const {
        Matrix8 v;
        for (int a = 0; a < 8; ++a) v.col(a) = state[a];
        return v;
    }
};

// H0 = sum_i (E_i/2) sigma_z^i; diagonal, |1> is the single-qubit ground state.
inline Matrix8 build_local_hamiltonian(const SystemParams& p) {
    p.validate();
    Matrix8 h = Matrix8::Zero();
    const double e[3] = {p.e1, p.e2, p.e3};
    for (int b = 0; b < 8; ++b) {
        double sum = 0.0;
        for (int q = 1; q <= 3; ++q) sum += e[q - 1] / 2.0 * (qubit_bit(b, q) == 0 ? 1.0 : -1.0);
        h(b, b) = sum;
    }
    return h;
}

// H1 = |010><101| + h.c.
inline Matrix8 build_interaction_hamiltonian() {
    Matrix8 h = Matrix8::Zero();
    h(0b010, 0b101) = 1.0;
    h(0b101, 0b010) = 1.0;
    return h;
}

inline Matrix8 build_system_hamiltonian(const SystemParams& p) {
    return build_local_hamiltonian(p) + p.g * build_interaction_hamiltonian();
}

inline Eigensystem closed_form_eigensystem(const SystemParams& p) {
    p.validate();
    Eigensystem eig;
    const double dE = p.delta_e(), e12 = p.e12(), e3 = p.e3;
    constexpr int comp[6] = {0b000, 0b001, 0b100, 0b011, 0b110, 0b111};
    for (int lbl = 0; lbl < 6; ++lbl) {
        eig.state[lbl] = Vector8::Zero();
        eig.state[lbl](comp[lbl]) = 1.0;
    }
    eig.energy[0] = (e12 + e3) / 2.0;
    eig.energy[1] = (e12 - e3) / 2.0;
    eig.energy[2] = (e3 + dE) / 2.0;
    eig.energy[3] = -(e3 + dE) / 2.0;
    eig.energy[4] = -(e12 - e3) / 2.0;
    eig.energy[5] = -(e12 + e3) / 2.0;
    if (p.g > 0.0) {
        const double et = p.e_tilde();
        const double eps_p = (e3 - dE + et) / (2.0 * p.g);
        const double eps_m = (e3 - dE - et) / (2.0 * p.g);
        const double pm[2][2] = {{eps_p, et / 2.0}, {eps_m, -et / 2.0}};
        for (int k = 0; k < 2; ++k) {
            Vector8 v = Vector8::Zero();
            v(0b010) = pm[k][0];
            v(0b101) = 1.0;
            eig.state[6 + k] = v / v.norm();
            eig.energy[6 + k] = pm[k][1];
        }
    } else {
        // Degenerate-free g -> 0 limit: computational states with H0 energies,
        // label 6 taking the higher of the two.
        eig.zero_coupling = true;
        const double e010 = (e3 - dE) / 2.0;
        const int hi = e010 >= 0.0 ? 0b010 : 0b101;
        const int lo = e010 >= 0.0 ? 0b101 : 0b010;
        eig.state[6] = Vector8::Zero();
        eig.state[6](hi) = 1.0;
        eig.energy[6] = std::abs(e010);
        eig.state[7] = Vector8::Zero();
        eig.state[7](lo) = 1.0;
        eig.energy[7] = -std::abs(e010);
    }
    return eig;
}

// Thermal single-qubit state diag(r, 1-r), r = exp(-e/2t)/Z the excited-state
// probability. t -> 0+ collapses onto the ground state.
inline Matrix2 thermal_qubit_state(double e, double t) {
    if (!(e > 0.0)) throw std::invalid_argument("thermal_qubit_state: energy must be positive");
    if (!(t > 0.0)) throw std::domain_error("thermal_qubit_state: temperature must be positive");
    const double x = e / t;  // r = 1/(1+e^x)
    const double r = x > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(x));
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = r;
    m(1, 1) = 1.0 - r;
    return m;
}

// rho_1(tau1) x rho_2(tau1) x rho_3(tau2): qubits 1 and 2 equilibrated with
// bath 1, qubit 3 with bath 2.
inline Matrix8 initial_product_state(const SystemParams& p, double tau1, double tau2) {
    p.validate();
    return kron(thermal_qubit_state(p.e1, tau1), thermal_qubit_state(p.e2, tau1),
                thermal_qubit_state(p.e3, tau2));
}

struct TransitionProbabilities {
    double p010;
    double p101;
};

// Closed-form populations of |010> and |101> in the t=0 product state, valid
// on the resonance manifold dE = E3 (E_010 = E_101 = 0).
inline TransitionProbabilities transition_probabilities(const SystemParams& p, double tau1,
                                                        double tau2) {
    p.validate();
    if (!(tau1 > 0.0) || !(tau2 > 0.0))
        throw std::domain_error("transition_probabilities: temperatures must be positive");
    if (std::abs(p.delta_e() - p.e3) > 1e-12)
        throw std::invalid_argument("transition_probabilities: requires dE = E3");
    const double zs[3] = {p.e1 / tau1, p.e2 / tau1, p.e3 / tau2};
    double zprod = 1.0;
    for (double x : zs) zprod *= 2.0 * std::cosh(x / 2.0);
    const double arg = p.delta_e() / 2.0 * (1.0 / tau1 - 1.0 / tau2);
    return {std::exp(arg) / zprod, std::exp(-arg) / zprod};
}

}  // namespace qar
