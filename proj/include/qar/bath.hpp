// bath.hpp — Ohmic spectral density, Bose-Einstein occupation, and the
// transition rates for the two-, three-, and four-body qubit-bath couplings.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qar/types.hpp"

namespace qar {

// One bosonic bath: temperature tau, Ohmic strength delta, exponential cutoff
// Omega, and the upper frequency limit omega_max used by the occupation
// integral (0 = auto, max(50 tau, 50); the integrand decays like e^{-w/tau}).
struct BathParams {
    double tau = 1.0;
    double delta = 1e-4;
    double omega_cutoff = 1e3;
    double omega_max = 0.0;

    double effective_omega_max() const {
        return omega_max > 0.0 ? omega_max : std::max(50.0 * tau, 50.0);
    }

    void validate() const {
        if (!(tau > 0.0)) throw std::invalid_argument("BathParams: tau must be positive");
        if (!(delta >= 0.0)) throw std::invalid_argument("BathParams: delta must be non-negative");
        if (!(omega_cutoff > 0.0))
            throw std::invalid_argument("BathParams: omega_cutoff must be positive");
        if (omega_max != 0.0 && !(omega_max > 0.0))
            throw std::invalid_argument("BathParams: omega_max must be positive (or 0 for auto)");
        if (effective_omega_max() < 10.0 * std::max(tau, 1.0))
            throw std::invalid_argument("BathParams: omega_max must be >= 10*max(tau,1)");
    }
};

// Relative strengths of the three- and four-body couplings to bath 1.
struct CouplingParams {
    double kappa1 = 0.0;
    double kappa2 = 0.0;

    void validate() const {
        if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0))
            throw std::invalid_argument("CouplingParams: kappa values must be non-negative");
    }
};

// J(E) = delta * E * exp(-E/Omega)
inline double ohmic_spectral_density(double e, const BathParams& b) {
    if (e < 0.0) throw std::invalid_argument("ohmic_spectral_density: energy must be >= 0");
    return b.delta * e * std::exp(-e / b.omega_cutoff);
}

// f(E, tau) = 1/(e^{E/tau} - 1); callers handle the sign of E.
inline double bose_einstein(double e, double tau) {
    if (!(e > 0.0)) throw std::domain_error("bose_einstein: energy must be positive");
    if (!(tau > 0.0)) throw std::domain_error("bose_einstein: temperature must be positive");
    return 1.0 / std::expm1(e / tau);
}

namespace detail {

// Nodes/weights of 32-point Gauss-Legendre on [-1, 1], by Newton iteration on
// the Legendre recurrence.
inline const std::array<std::array<double, 32>, 2>& gauss_legendre_32() {
    static const auto table = [] {
        std::array<std::array<double, 32>, 2> t{};
        constexpr int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            t[0][i] = -x;
            t[0][n - 1 - i] = x;
            t[1][i] = w;
            t[1][n - 1 - i] = w;
        }
        return t;
    }();
    return table;
}

template <typename F>
double gl_panels(F&& f, double a, double b, int panels) {
    const auto& t = gauss_legendre_32();
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        for (int k = 0; k < 32; ++k) sum += t[1][k] * f(lo + 0.5 * w * (t[0][k] + 1.0)) * 0.5 * w;
    }
    return sum;
}

}  // namespace detail

// int_0^{omega_max} sqrt(J(w)) f(w, tau) dw.  The integrand diverges like
// w^{-1/2} at the origin; substituting w = u^2 makes it smooth. Panels are
// doubled until the relative change drops below 1e-8.
inline double sqrt_j_occupation_integral(const BathParams& b) {
    b.validate();
    if (b.delta == 0.0) return 0.0;
    const double umax = std::sqrt(b.effective_omega_max());
    auto integrand = [&b](double u) {
        const double w = u * u;
        if (w == 0.0) return 2.0 * std::sqrt(b.delta) * b.tau;
        return 2.0 * u * std::sqrt(ohmic_spectral_density(w, b)) / std::expm1(w / b.tau);
    };
    double prev = detail::gl_panels(integrand, 0.0, umax, 4);
    for (int panels = 8; panels <= 1024; panels *= 2) {
        const double cur = detail::gl_panels(integrand, 0.0, umax, panels);
        if (std::abs(cur - prev) <= 1e-8 * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    throw NumericalError("sqrt_j_occupation_integral: quadrature did not converge");
}

// gamma_{j,2}(E): 2 pi J(E)(1+f) for emission (E>0), 2 pi J(|E|) f for
// absorption (E<0). Satisfies detailed balance gamma(+E)/gamma(-E) = e^{E/tau}.
inline double two_body_rate(double e, const BathParams& b) {
    if (e == 0.0) throw std::invalid_argument("two_body_rate: zero transition energy");
    const double ae = std::abs(e);
    const double j = ohmic_spectral_density(ae, b);
    const double f = bose_einstein(ae, b.tau);
    return 2.0 * M_PI * j * (e > 0.0 ? 1.0 + f : f);
}

// gamma_{1,3}(E) = 2 pi kappa1^2 sqrt(J(|E|)) f(|E|) * int sqrt(J) f; depends
// only on |E| (no detailed balance for this channel).
inline double three_body_rate(double e, const BathParams& b, double kappa1) {
    if (e == 0.0) throw std::invalid_argument("three_body_rate: zero transition energy");
    if (!(kappa1 >= 0.0)) throw std::invalid_argument("three_body_rate: kappa1 must be >= 0");
    if (kappa1 == 0.0) return 0.0;
    const double ae = std::abs(e);
    return 2.0 * M_PI * kappa1 * kappa1 * std::sqrt(ohmic_spectral_density(ae, b)) *
           bose_einstein(ae, b.tau) * sqrt_j_occupation_integral(b);
}

// gamma_{1,4}(E) for the pair-creation/annihilation channel; gaps are bounded
// by E12. The factor at the complementary energy E12-|E| is non-analytic as
// |E| -> E12 and is replaced by its finite limit delta*tau within 1e-6 of it.
inline double four_body_rate(double e, const BathParams& b, double kappa2, double e12) {
    if (e == 0.0) throw std::invalid_argument("four_body_rate: zero transition energy");
    if (!(kappa2 >= 0.0)) throw std::invalid_argument("four_body_rate: kappa2 must be >= 0");
    const double ae = std::abs(e);
    if (ae > e12 + 1e-12) throw std::invalid_argument("four_body_rate: |E| exceeds E12");
    if (kappa2 == 0.0) return 0.0;
    const double x = e12 - ae;
    double tail;
    if (x < 1e-6) {
        tail = b.delta * b.tau;  // lim_{x->0} J(x)(1+f(x)) = lim J(x) f(x) = delta tau
    } else {
        tail = ohmic_spectral_density(x, b) *
               (e > 0.0 ? 1.0 + bose_einstein(x, b.tau) : bose_einstein(x, b.tau));
    }
    const double j = ohmic_spectral_density(ae, b);
    const double f = bose_einstein(ae, b.tau);
    return 2.0 * M_PI * kappa2 * kappa2 * j * (e > 0.0 ? 1.0 + f : f) * tail;
}

// Largest kappa1 with gamma_{1,3}(e) <= gamma_bound (rates scale as kappa1^2).
inline double max_kappa1(const BathParams& b, double gamma_bound, double e) {
    if (!(gamma_bound > 0.0)) throw std::invalid_argument("max_kappa1: gamma_bound must be > 0");
    const double unit = three_body_rate(e, b, 1.0);
    if (unit <= 0.0) throw NumericalError("max_kappa1: unit-coupling rate vanishes");
    return std::sqrt(gamma_bound / unit);
}

inline double max_kappa2(const BathParams& b, double gamma_bound, double e, double e12) {
    if (!(gamma_bound > 0.0)) throw std::invalid_argument("max_kappa2: gamma_bound must be > 0");
    const double unit = four_body_rate(e, b, 1.0, e12);
    if (unit <= 0.0) throw NumericalError("max_kappa2: unit-coupling rate vanishes");
    return std::sqrt(gamma_bound / unit);
}

}  // namespace qar
