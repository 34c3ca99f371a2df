// reset.hpp — probabilistic reset dissipator: bath 1 resets the qubit pair
// (1,2) jointly at rate p1, bath 2 resets qubit 3 at rate p2, each toward the
// t=0 thermal state. Both the direct superoperator form and the equivalent
// 20-channel decomposition are provided; their equality is a test target.

#pragma once

#include <array>
#include <vector>

#include "qar/channels.hpp"
#include "qar/hamiltonian.hpp"
#include "qar/types.hpp"

namespace qar {

struct ResetParams {
    double p1 = 0.0;
    double p2 = 0.0;
    double tau1 = 1.0;
    double tau2 = 5.0;

    void validate() const {
        if (!(p1 >= 0.0) || !(p2 >= 0.0))
            throw std::invalid_argument("ResetParams: reset rates must be non-negative");
        if (!(tau1 > 0.0) || !(tau2 > 0.0))
            throw std::invalid_argument("ResetParams: temperatures must be positive");
    }
};

// p1 [ (rho1 x rho2) x Tr_12 rho - rho ] + p2 [ Tr_3 rho x rho3 - rho ],
// with rho_i the frozen t=0 thermal states. Traceless for any input.
inline Matrix8 reset_rhs_direct(const Matrix8& rho, const ResetParams& rp,
                                const SystemParams& p) {
    rp.validate();
    p.validate();
    const Matrix4 pair_thermal =
        kron(thermal_qubit_state(p.e1, rp.tau1), thermal_qubit_state(p.e2, rp.tau1));
    const Matrix2 q3_thermal = thermal_qubit_state(p.e3, rp.tau2);
    Matrix8 out = Matrix8::Zero();
    if (rp.p1 > 0.0) {
        Matrix8 repl = Matrix8::Zero();
        const Matrix2 keep3 = reduced_qubit(rho, 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                repl.block<2, 2>(2 * i, 2 * j) = pair_thermal(i, j) * keep3;
        out += rp.p1 * (repl - rho);
    }
    if (rp.p2 > 0.0) {
        const Matrix4 keep12 = reduced_pair_12(rho);
        out += rp.p2 * (kron(keep12, q3_thermal) - rho);
    }
    return out;
}

// The 20 Lindblad channels reproducing reset_rhs_direct: 16 pair operators
// A_{1,j} x A_{2,k} x I at rates p1 * r~_j * r~_k and 4 single-qubit operators
// I x I x A_{3,j} at rates p2 * r~_j, where A_1 = sigma-, A_2 = sigma+,
// A_3 = |0><0|, A_4 = |1><1| and the r~ factors come from the t=0 thermal
// populations. Channels are tagged order 0 (not an interaction order).
inline std::vector<DissipationChannel> build_reset_channels(const ResetParams& rp,
                                                            const SystemParams& p) {
    rp.validate();
    p.validate();
    const std::array<Matrix2, 4> a = {sigma_minus(), sigma_plus(),
                                      0.5 * (Matrix2::Identity() + sigma_z()),
                                      0.5 * (Matrix2::Identity() - sigma_z())};
    auto weights = [](double r) { return std::array<double, 4>{1.0 - r, r, r, 1.0 - r}; };
    const double r1 = thermal_qubit_state(p.e1, rp.tau1)(0, 0).real();
    const double r2 = thermal_qubit_state(p.e2, rp.tau1)(0, 0).real();
    const double r3 = thermal_qubit_state(p.e3, rp.tau2)(0, 0).real();
    const auto w1 = weights(r1), w2 = weights(r2), w3 = weights(r3);

    std::vector<DissipationChannel> chans;
    chans.reserve(20);
    const Matrix2 id = Matrix2::Identity();
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            chans.push_back({kron(a[j], a[k], id), rp.p1 * w1[j] * w2[k], 0.0, 1, 0});
    for (int j = 0; j < 4; ++j)
        chans.push_back({kron(id, id, a[j]), rp.p2 * w3[j], 0.0, 2, 0});
    return chans;
}

}  // namespace qar
