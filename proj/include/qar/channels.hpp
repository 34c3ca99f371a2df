// channels.hpp — eigenoperator decomposition of the qubit-bath coupling
// operators and assembly of the dissipation channels for the two-bath model.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qar/bath.hpp"
#include "qar/hamiltonian.hpp"
#include "qar/types.hpp"

namespace qar {

// One Lindblad channel: [H_S, op] = -energy * op, applied at `rate`.
// `order` is the interaction order (2, 3 or 4; 0 for reset channels) and
// `bath` the bath index (1 or 2).
struct DissipationChannel {
    Matrix8 op;
    double rate;
    double energy;
    int bath;
    int order;
};

struct EigenoperatorDecomposition {
    std::vector<std::pair<Matrix8, double>> positive;  // (L^E, E) with E > 0
    Matrix8 zero_gap;                                  // E = 0 component (if any)
};

// Decomposes a Hermitian coupling operator A into eigenoperators of H_S:
// L^E = sum_{E_a' - E_a = E} |a><a| A |a'><a'|.  Gaps equal within gap_tol are
// grouped into a single operator; sum_E (L^E + L^E(dagger)) + zero_gap == A.
inline EigenoperatorDecomposition eigenoperator_decomposition(const Eigensystem& eig,
                                                              const Matrix8& a_op,
                                                              double gap_tol = 1e-9) {
    if (hermiticity_error(a_op) > 1e-12)
        throw std::invalid_argument("eigenoperator_decomposition: coupling operator must be Hermitian");
    const Matrix8 v = eig.basis();
    const Matrix8 m = v.adjoint() * a_op * v;  // A in the eigenbasis

    struct Element {
        double gap;
        int a, ap;
    };
    std::vector<Element> elems;
    EigenoperatorDecomposition out;
    out.zero_gap = Matrix8::Zero();
    for (int a = 0; a < 8; ++a) {
        for (int ap = 0; ap < 8; ++ap) {
            if (std::abs(m(a, ap)) <= 1e-12) continue;
            const double gap = eig.energy[ap] - eig.energy[a];
            if (std::abs(gap) <= gap_tol) {
                out.zero_gap += m(a, ap) * (v.col(a) * v.col(ap).adjoint());
            } else if (gap > 0.0) {
                elems.push_back({gap, a, ap});
            }
        }
    }
    std::sort(elems.begin(), elems.end(),
              [](const Element& x, const Element& y) { return x.gap < y.gap; });
    for (std::size_t i = 0; i < elems.size();) {
        const double gap0 = elems[i].gap;
        Matrix8 L = Matrix8::Zero();
        double gap_sum = 0.0;
        std::size_t n = 0;
        while (i < elems.size() && elems[i].gap - gap0 <= gap_tol) {
            L += m(elems[i].a, elems[i].ap) * (v.col(elems[i].a) * v.col(elems[i].ap).adjoint());
            gap_sum += elems[i].gap;
            ++i;
            ++n;
        }
        out.positive.emplace_back(std::move(L), gap_sum / static_cast<double>(n));
    }
    return out;
}

namespace detail {

// Emits the (+E, -E) channel pair for every positive-gap eigenoperator of
// a_op, with rates given by `rate(E)`; zero-gap components are discarded.
template <typename RateFn>
void append_channels(std::vector<DissipationChannel>& chans, const Eigensystem& eig,
                     const Matrix8& a_op, int bath, int order, RateFn&& rate) {
    for (const auto& [L, gap] : eigenoperator_decomposition(eig, a_op).positive) {
        chans.push_back({L, rate(gap), gap, bath, order});
        chans.push_back({L.adjoint(), rate(-gap), -gap, bath, order});
    }
}

}  // namespace detail

// All dissipation channels of the two-bath model: bath 1 couples to qubits 1
// and 2 (orders 2, 3, 4; the latter two only for nonzero kappa), bath 2 to
// qubit 3 (order 2).
inline std::vector<DissipationChannel> build_two_bath_dissipator(const SystemParams& p,
                                                                 const BathParams& b1,
                                                                 const BathParams& b2,
                                                                 const CouplingParams& c) {
    p.validate();
    b1.validate();
    b2.validate();
    c.validate();
    const Eigensystem eig = closed_form_eigensystem(p);
    std::vector<DissipationChannel> chans;

    const Matrix8 a2 = embed(1, sigma_x()) + embed(2, sigma_x());
    detail::append_channels(chans, eig, a2, 1, 2,
                            [&b1](double e) { return two_body_rate(e, b1); });

    if (c.kappa1 > 0.0) {
        const Matrix8 a3 = embed(1, sigma_plus()) * embed(2, sigma_minus()) +
                           embed(1, sigma_minus()) * embed(2, sigma_plus());
        detail::append_channels(chans, eig, a3, 1, 3,
                                [&](double e) { return three_body_rate(e, b1, c.kappa1); });
    }

    if (c.kappa2 > 0.0) {
        const Matrix8 a4 = embed(1, sigma_plus()) * embed(2, sigma_plus()) +
                           embed(1, sigma_minus()) * embed(2, sigma_minus());
        detail::append_channels(chans, eig, a4, 1, 4, [&](double e) {
            return four_body_rate(e, b1, c.kappa2, p.e12());
        });
    }

    const Matrix8 a2b = embed(3, sigma_x());
    detail::append_channels(chans, eig, a2b, 2, 2,
                            [&b2](double e) { return two_body_rate(e, b2); });
    return chans;
}

inline std::vector<DissipationChannel> channels_of_bath(
    const std::vector<DissipationChannel>& chans, int bath) {
    std::vector<DissipationChannel> out;
    for (const auto& ch : chans)
        if (ch.bath == bath) out.push_back(ch);
    return out;
}

// Rotating-wave validity report: the largest channel rate against
// min(g, E1, E2, E3). Thresholds: ratio <= 0.05 pass, <= 0.2 warn, else fail.
struct RwaReport {
    enum class Verdict { pass, warn, fail };
    double max_rate = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
    Verdict verdict = Verdict::pass;
    int bath = 0;      // offending channel
    int order = 0;
    double energy = 0.0;
};

inline const char* to_string(RwaReport::Verdict v) {
    switch (v) {
        case RwaReport::Verdict::pass: return "pass";
        case RwaReport::Verdict::warn: return "warn";
        default: return "fail";
    }
}

inline RwaReport validate_rwa(const std::vector<DissipationChannel>& chans,
                              const SystemParams& p) {
    RwaReport r;
    r.reference = std::min({p.g, p.e1, p.e2, p.e3});
    for (const auto& ch : chans) {
        if (ch.rate > r.max_rate) {
            r.max_rate = ch.rate;
            r.bath = ch.bath;
            r.order = ch.order;
            r.energy = ch.energy;
        }
    }
    r.ratio = r.reference > 0.0 ? r.max_rate / r.reference
                                : std::numeric_limits<double>::infinity();
    r.verdict = r.ratio <= 0.05   ? RwaReport::Verdict::pass
                : r.ratio <= 0.2 ? RwaReport::Verdict::warn
                                 : RwaReport::Verdict::fail;
    return r;
}

}  // namespace qar
