// dynamics.hpp — master-equation right-hand side, RK4 time evolution with the
// finite-window steady-state criterion, local temperatures, regime
// classification, and the direct Liouvillian steady-state solver.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "qar/channels.hpp"
#include "qar/reset.hpp"
#include "qar/types.hpp"

namespace qar {

struct SimulationConfig {
    double step = 1e-2;            // RK4 step h
    double t_max = 1e6;            // hard cap for full integration
    double steady_tol = 1e-9;      // |T1(t) - T1(t - dt)| threshold
    double steady_sample = 0.1;    // dt, criterion sampling interval
    double steady_window = 5e2;    // Dt, window the criterion must hold over
    int record_stride = 10;        // observable recording interval in steps

    // `automatic` is resolved by the scenario runner (two-phase when the
    // smallest coupling makes full integration infeasible); evolve itself
    // treats it as `full`.
    enum class Schedule { automatic, full, two_phase } schedule = Schedule::automatic;
    double transient_horizon = 2e4;  // phase-1 cap of the two-phase schedule

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("SimulationConfig: step must be positive");
        if (!(steady_sample > 0.0) || !(steady_window > 0.0) || !(steady_tol > 0.0))
            throw std::invalid_argument("SimulationConfig: steady-state parameters must be positive");
        if (steady_window < 100.0 * steady_sample)
            throw std::invalid_argument("SimulationConfig: steady_window must be >= 100 * steady_sample");
        if (!(t_max > steady_window))
            throw std::invalid_argument("SimulationConfig: t_max must exceed steady_window");
        if (record_stride < 1)
            throw std::invalid_argument("SimulationConfig: record_stride must be >= 1");
    }
};

struct TrajectorySample {
    double t, T1, T2, T3, r1, r2, r3, trace_error, min_eig;
};

struct SteadyVerdict {
    double t_s;     // NaN when the value comes from the Liouvillian oracle
    double T1_s;
    bool from_oracle;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::optional<SteadyVerdict> steady;
    double transient_min_T1 = std::numeric_limits<double>::infinity();
    double transient_min_t = 0.0;
    Matrix8 final_state = Matrix8::Zero();
    long renormalizations = 0;
    bool reached_t_max = false;
};

// Full generator of one model: Hamiltonian plus dissipator. For the reset
// model the direct superoperator form drives the right-hand side (two partial
// traces) while the channel form remains available for the Liouvillian matrix.
class Generator {
public:
    Generator(const Matrix8& h, std::vector<DissipationChannel> channels)
        : h_(h), channels_(std::move(channels)) {
        precompute();
    }

    Generator(const Matrix8& h, const ResetParams& rp, const SystemParams& sp)
        : h_(h), channels_(build_reset_channels(rp, sp)), reset_(std::pair{rp, sp}) {
        precompute();
    }

    const Matrix8& hamiltonian() const { return h_; }
    const std::vector<DissipationChannel>& channels() const { return channels_; }
    bool is_reset() const { return reset_.has_value(); }

    // d rho / dt
    Matrix8 rhs(const Matrix8& rho) const {
        if (reset_) {
            Matrix8 out = Complex(0, -1) * (h_ * rho - rho * h_);
            out += reset_rhs_direct(rho, reset_->first, reset_->second);
            return out;
        }
        Matrix8 out = drift_ * rho + rho * drift_.adjoint();
        for (const auto& l : scaled_ops_) out += l * rho * l.adjoint();
        return out;
    }

    // 64x64 matrix of the generator acting on column-major vec(rho).
    SuperMatrix superoperator() const {
        SuperMatrix sup(64, 64);
        for (int j = 0; j < 8; ++j) {
            for (int i = 0; i < 8; ++i) {
                Matrix8 unit = Matrix8::Zero();
                unit(i, j) = 1.0;
                const Matrix8 col = rhs(unit);
                sup.col(8 * j + i) = Eigen::Map<const Eigen::VectorXcd>(col.data(), 64);
            }
        }
        return sup;
    }

private:
    void precompute() {
        drift_ = Complex(0, -1) * h_;
        for (const auto& ch : channels_) {
            if (ch.rate <= 0.0) continue;
            drift_ -= 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
            scaled_ops_.push_back(std::sqrt(ch.rate) * ch.op);
        }
    }

    Matrix8 h_;
    std::vector<DissipationChannel> channels_;
    std::optional<std::pair<ResetParams, SystemParams>> reset_;
    Matrix8 drift_;  // -iH - (1/2) sum gamma L(dag)L
    std::vector<Matrix8> scaled_ops_;
};

// -i[H, rho] + sum_k gamma_k (L rho L+ - 1/2 {L+L, rho}) (+ optional extra
// dissipator term, e.g. the direct reset form).
inline Matrix8 lindblad_rhs(const Matrix8& rho, const Matrix8& h_s,
                            const std::vector<DissipationChannel>& channels,
                            const std::function<Matrix8(const Matrix8&)>& extra = {}) {
    Matrix8 out = Complex(0, -1) * (h_s * rho - rho * h_s);
    for (const auto& ch : channels) {
        if (ch.rate <= 0.0) continue;
        const Matrix8 ldl = ch.op.adjoint() * ch.op;
        out += ch.rate * (ch.op * rho * ch.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    if (extra) out += extra(rho);
    return out;
}

// Dissipator only (no Hamiltonian part); used for per-bath heat currents.
inline Matrix8 apply_dissipator(const Matrix8& rho,
                                const std::vector<DissipationChannel>& channels) {
    Matrix8 out = Matrix8::Zero();
    for (const auto& ch : channels) {
        if (ch.rate <= 0.0) continue;
        const Matrix8 ldl = ch.op.adjoint() * ch.op;
        out += ch.rate * (ch.op * rho * ch.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

// One classical RK4 step. The result is re-Hermitized and, when the trace has
// drifted beyond 1e-12, renormalized (flagged through `renormalized`).
inline Matrix8 rk4_step(const Matrix8& rho, double h,
                        const std::function<Matrix8(const Matrix8&)>& rhs,
                        bool* renormalized = nullptr) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: step must be positive");
    const Matrix8 k1 = rhs(rho);
    const Matrix8 k2 = rhs(rho + 0.5 * h * k1);
    const Matrix8 k3 = rhs(rho + 0.5 * h * k2);
    const Matrix8 k4 = rhs(rho + h * k3);
    Matrix8 next = rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next = hermitized(next);
    if (renormalized) *renormalized = false;
    const double tr = next.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) {
        next /= tr;
        if (renormalized) *renormalized = true;
    }
    const double mev = min_eigenvalue(next);
    if (mev < -1e-8) {
        std::ostringstream msg;
        msg << "rk4_step: positivity violated (min eigenvalue " << mev << ")";
        throw NumericalError(msg.str());
    }
    return next;
}

// Excited-state population of qubit i.
inline double excited_population(const Matrix8& rho, int qubit) {
    double r = 0.0;
    for (int b = 0; b < 8; ++b)
        if (qubit_bit(b, qubit) == 0) r += rho(b, b).real();
    return r;
}

// T = E / ln((1-r)/r) from the diagonal reduced state. Population at or above
// 1/2 returns +infinity (inversion boundary); the dynamics never produces a
// non-diagonal reduced state, so that case is rejected as a model violation.
inline double local_temperature(const Matrix8& rho, int qubit, double e) {
    const Matrix2 red = reduced_qubit(rho, qubit);
    if (std::abs(red(0, 1)) > 1e-8)
        throw std::domain_error("local_temperature: reduced state is not diagonal");
    const double r = red(0, 0).real();
    if (r >= 0.5 - 1e-12) return std::numeric_limits<double>::infinity();
    if (r < 1e-300) return 0.0;
    return e / std::log((1.0 - r) / r);
}

// ---------------------------- steady-state oracle ----------------------------

// Stationary state from the null space of the vectorized generator. The null
// space must be one-dimensional; otherwise a degeneracy error is raised (the
// caller decides what to do, nothing is guessed). The SVD null vector is
// polished by a trace-constrained least-squares solve.
inline Matrix8 steady_state_direct(const Generator& gen) {
    const SuperMatrix sup = gen.superoperator();
    Eigen::JacobiSVD<SuperMatrix> svd(sup, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = sv(0);
    const double s_last = sv(63), s_next = sv(62);
    if (scale <= 0.0 || s_last > 1e-8 * scale)
        throw NumericalError("steady_state_direct: generator has no numerical null vector");
    if (s_next <= std::max(1e-12 * scale, 1e3 * s_last)) {
        std::ostringstream msg;
        msg << "steady_state_direct: stationary state is degenerate (sigma_62/sigma_0 = "
            << s_next / scale << ")";
        throw NumericalError(msg.str());
    }
    Eigen::VectorXcd x = svd.matrixV().col(63);

    // Refinement: min ||sup x|| subject to trace(x) = 1.
    Eigen::MatrixXcd aug(65, 64);
    aug.topRows(64) = sup;
    Eigen::RowVectorXcd tr_row = Eigen::RowVectorXcd::Zero(64);
    for (int i = 0; i < 8; ++i) tr_row(8 * i + i) = scale;
    aug.row(64) = tr_row;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(65);
    b(64) = scale;
    x = aug.colPivHouseholderQr().solve(b);

    Matrix8 rho = Eigen::Map<const Matrix8>(x.data());
    rho = hermitized(rho);
    rho /= rho.trace().real();
    return rho;
}

inline Matrix8 steady_state_direct(const Matrix8& h_s,
                                   const std::vector<DissipationChannel>& channels) {
    return steady_state_direct(Generator(h_s, channels));
}

// ------------------------------- time evolution ------------------------------

using Observer = std::function<void(double, const Matrix8&)>;

// Integrates rho0 under the generator until the steady-state criterion
// |T1(t) - T1(t - dt)| < steady_tol holds at every dt sample across a window
// Dt (then t_s = t' - Dt and T1_s = T1(t_s)), or until t_max. Under the
// two-phase schedule the transient is integrated up to transient_horizon and
// the steady values are taken from steady_state_direct instead.
//
// RK4 for a linear time-independent generator is applied as its stability
// polynomial I + hL + .. + (hL)^4/24 acting on vec(rho), one matrix-vector
// product per step; the state is re-Hermitized every step and renormalized
// when the trace drifts beyond 1e-12.
inline Trajectory evolve(const Matrix8& rho0, const Generator& gen, const SimulationConfig& cfg,
                         const Observer& observer = {}) {
    cfg.validate();
    validate_density(rho0);
    const bool two_phase = cfg.schedule == SimulationConfig::Schedule::two_phase;
    const double horizon = two_phase ? std::min(cfg.t_max, cfg.transient_horizon) : cfg.t_max;

    const double h = cfg.step;
    const SuperMatrix sup = gen.superoperator();
    SuperMatrix stepper = SuperMatrix::Identity(64, 64);
    {
        SuperMatrix term = SuperMatrix::Identity(64, 64);
        for (int k = 1; k <= 4; ++k) {
            term = (term * sup * (h / k)).eval();
            stepper += term;
        }
    }

    const std::int64_t n_steps = static_cast<std::int64_t>(std::ceil(horizon / h - 1e-9));
    const std::int64_t sample_stride =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(cfg.steady_sample / h)));
    const std::int64_t window_samples = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(cfg.steady_window / cfg.steady_sample)));

    // T1 ring buffer over the detection window (T1_s = value window_samples back).
    std::vector<double> t1_ring(static_cast<std::size_t>(window_samples) + 1,
                                std::numeric_limits<double>::quiet_NaN());

    // Qubit energies are recovered from the diagonal of H_S (H1 has no
    // diagonal part): E_i = <0..0|H|0..0> - <only qubit i flipped|H|...>.
    const double h000 = gen.hamiltonian()(0b000, 0b000).real();
    const double energies[3] = {h000 - gen.hamiltonian()(0b100, 0b100).real(),
                               h000 - gen.hamiltonian()(0b010, 0b010).real(),
                               h000 - gen.hamiltonian()(0b001, 0b001).real()};

    Trajectory traj;
    Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), 64);
    Eigen::VectorXcd xnext(64);

    auto record = [&](double t, const Matrix8& rho, double tr_err) {
        const double mev = min_eigenvalue(rho);
        if (mev < -1e-8) {
            std::ostringstream msg;
            msg << "evolve: positivity violated at t = " << t << " (min eigenvalue " << mev << ")";
            throw NumericalError(msg.str());
        }
        TrajectorySample s;
        s.t = t;
        s.r1 = excited_population(rho, 1);
        s.r2 = excited_population(rho, 2);
        s.r3 = excited_population(rho, 3);
        s.T1 = local_temperature(rho, 1, energies[0]);
        s.T2 = local_temperature(rho, 2, energies[1]);
        s.T3 = local_temperature(rho, 3, energies[2]);
        s.trace_error = tr_err;
        s.min_eig = mev;
        traj.samples.push_back(s);
        if (observer) observer(t, rho);
    };

    {
        const Matrix8 rho = rho0;
        record(0.0, rho, trace_error(rho));
        const double t1 = traj.samples.front().T1;
        t1_ring[0] = t1;
        traj.transient_min_T1 = t1;
        traj.transient_min_t = 0.0;
    }

    std::int64_t consecutive = 0;
    double prev_t1 = t1_ring[0];
    bool detected = false;
    double detect_time = 0.0;
    double steady_t1 = std::numeric_limits<double>::quiet_NaN();
    Matrix8 rho = rho0;
    double last_trace_error = trace_error(rho0);

    for (std::int64_t k = 1; k <= n_steps && !detected; ++k) {
        xnext.noalias() = stepper * x;
        x.swap(xnext);
        Eigen::Map<Matrix8> m(x.data());
        // re-Hermitize in place
        for (int i = 0; i < 8; ++i) {
            m(i, i) = Complex(m(i, i).real(), 0.0);
            for (int j = i + 1; j < 8; ++j) {
                const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
                m(i, j) = v;
                m(j, i) = std::conj(v);
            }
        }
        const double tr = m.trace().real();
        last_trace_error = std::abs(tr - 1.0);
        if (last_trace_error > 1e-12) {
            m /= tr;
            ++traj.renormalizations;
        }
        const double t = static_cast<double>(k) * h;

        if (k % sample_stride == 0) {
            rho = m;
            const double t1 = local_temperature(rho, 1, energies[0]);
            const std::int64_t sample_idx = k / sample_stride;
            t1_ring[static_cast<std::size_t>(sample_idx % (window_samples + 1))] = t1;
            if (t1 < traj.transient_min_T1) {
                traj.transient_min_T1 = t1;
                traj.transient_min_t = t;
            }
            if (std::abs(t1 - prev_t1) < cfg.steady_tol)
                ++consecutive;
            else
                consecutive = 0;
            prev_t1 = t1;
            if (consecutive >= window_samples) {
                detected = true;
                detect_time = t;
                steady_t1 =
                    t1_ring[static_cast<std::size_t>((sample_idx - window_samples) %
                                                     (window_samples + 1))];
            }
        }
        if (k % cfg.record_stride == 0 || detected || k == n_steps) {
            rho = m;
            record(t, rho, last_trace_error);
        }
    }

    traj.final_state = rho;
    if (detected) {
        traj.steady = SteadyVerdict{detect_time - cfg.steady_window, steady_t1, false};
    } else if (two_phase) {
        const Matrix8 ss = steady_state_direct(gen);
        traj.steady = SteadyVerdict{std::numeric_limits<double>::quiet_NaN(),
                                    local_temperature(ss, 1, energies[0]), true};
    } else {
        traj.reached_t_max = true;
    }
    return traj;
}

// ------------------------------- classification ------------------------------

enum class Classification { S1, S2, S3, NoCooling };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::S1: return "S1";
        case Classification::S2: return "S2";
        case Classification::S3: return "S3";
        default: return "NoCooling";
    }
}

// S1: steady-state cooling at least as good as the transient; S2: transient
// better than steady; S3: transient cooling without steady-state cooling.
// Cooling margin 1e-3 (dimensionless temperature), S1/S2 tie tolerance 1e-6.
inline Classification classify_dynamics(const Trajectory& traj, double tau1) {
    if (!traj.steady)
        throw std::invalid_argument("classify_dynamics: trajectory has no steady verdict");
    constexpr double theta = 1e-3;
    constexpr double tie = 1e-6;
    const double t1s = traj.steady->T1_s;
    const double t1t = traj.transient_min_T1;
    const bool ssc = t1s < tau1 - theta;
    const bool tc = t1t < tau1 - theta;
    if (ssc) return t1t >= t1s - tie ? Classification::S1 : Classification::S2;
    if (tc) return Classification::S3;
    return Classification::NoCooling;
}

}  // namespace qar
