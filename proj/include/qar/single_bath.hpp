// single_bath.hpp — dissipator for the variant where all three qubits couple
// to one common bosonic bath.

#pragma once

#include <vector>

#include "qar/channels.hpp"

namespace qar {

// Channels for the single-common-bath model: one collective two-body coupling
// sum_i sigma_x^i, and (for kappa1 > 0) the summed pairwise exchange coupling
// over the pairs (1,2), (2,3), (1,3) — all pairs couple to the same bath mode,
// so one eigenoperator decomposition of the sum applies (channels at
// coinciding gaps merge). Four-body terms are absent in this model.
inline std::vector<DissipationChannel> build_single_bath_dissipator(const SystemParams& p,
                                                                    const BathParams& b,
                                                                    double kappa1) {
    p.validate();
    b.validate();
    if (!(kappa1 >= 0.0))
        throw std::invalid_argument("build_single_bath_dissipator: kappa1 must be >= 0");
    const Eigensystem eig = closed_form_eigensystem(p);
    std::vector<DissipationChannel> chans;

    const Matrix8 a2 = embed(1, sigma_x()) + embed(2, sigma_x()) + embed(3, sigma_x());
    detail::append_channels(chans, eig, a2, 1, 2,
                            [&b](double e) { return two_body_rate(e, b); });

    if (kappa1 > 0.0) {
        Matrix8 a3 = Matrix8::Zero();
        constexpr int pairs[3][2] = {{1, 2}, {2, 3}, {1, 3}};
        for (const auto& pr : pairs) {
            a3 += embed(pr[0], sigma_plus()) * embed(pr[1], sigma_minus()) +
                  embed(pr[0], sigma_minus()) * embed(pr[1], sigma_plus());
        }
        detail::append_channels(chans, eig, a3, 1, 3,
                                [&](double e) { return three_body_rate(e, b, kappa1); });
    }
    return chans;
}

}  // namespace qar
