// experiments.hpp — scenario presets, configuration parsing, sweep runner and
// CSV emission. Owns every I/O surface of the library.

#pragma once

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qar/analysis.hpp"
#include "qar/dynamics.hpp"
#include "qar/single_bath.hpp"

namespace qar {

enum class Model { two_bath_bosonic, single_bath_bosonic, reset };

inline const char* to_string(Model m) {
    switch (m) {
        case Model::two_bath_bosonic: return "two_bath_bosonic";
        case Model::single_bath_bosonic: return "single_bath_bosonic";
        default: return "reset";
    }
}

// A complete experiment description: model choice, system, baths, couplings
// and integrator settings. Defaults are the fixed values used throughout:
// E = (1, 2, 1), tau = (1, 5), Omega = 1e3.
struct Scenario {
    Model model = Model::two_bath_bosonic;
    SystemParams sys{1.0, 2.0, 1.0, 1e-2};
    double tau1 = 1.0;
    double tau2 = 5.0;
    double delta1 = 1e-4;
    double delta2 = 1e-5;
    double omega_cutoff = 1e3;
    double omega_max = 0.0;  // 0 = auto
    CouplingParams coupling{0.0, 0.0};
    double p1 = 3.16227766016837933e-4;  // 10^-3.5
    double p2 = 3.16227766016837933e-3;  // 10^-2.5
    SimulationConfig sim;

    BathParams bath1() const { return {tau1, delta1, omega_cutoff, omega_max}; }
    BathParams bath2() const { return {tau2, delta2, omega_cutoff, omega_max}; }
    ResetParams reset_params() const { return {p1, p2, tau1, tau2}; }

    Matrix8 hamiltonian() const { return build_system_hamiltonian(sys); }

    Generator make_generator() const {
        switch (model) {
            case Model::two_bath_bosonic:
                return Generator(hamiltonian(),
                                 build_two_bath_dissipator(sys, bath1(), bath2(), coupling));
            case Model::single_bath_bosonic:
                return Generator(hamiltonian(),
                                 build_single_bath_dissipator(sys, bath1(), coupling.kappa1));
            default:
                return Generator(hamiltonian(), reset_params(), sys);
        }
    }

    Matrix8 initial_state() const {
        return model == Model::single_bath_bosonic ? initial_product_state(sys, tau1, tau1)
                                                   : initial_product_state(sys, tau1, tau2);
    }

    // Smallest positive coupling; drives the automatic schedule choice.
    double min_coupling() const {
        double m = std::numeric_limits<double>::infinity();
        auto acc = [&m](double v) {
            if (v > 0.0 && v < m) m = v;
        };
        if (model == Model::reset) {
            acc(p1);
            acc(p2);
        } else {
            acc(delta1);
            if (model == Model::two_bath_bosonic) acc(delta2);
        }
        return m;
    }

    // Couplings <= 1e-7 put the relaxation time beyond any feasible RK4
    // horizon; the steady value is then taken from the Liouvillian oracle.
    SimulationConfig resolved_sim() const {
        SimulationConfig c = sim;
        if (c.schedule == SimulationConfig::Schedule::automatic) {
            c.schedule = min_coupling() <= 1e-7 ? SimulationConfig::Schedule::two_phase
                                                : SimulationConfig::Schedule::full;
        }
        return c;
    }

    void validate() const {
        sys.validate();
        coupling.validate();
        sim.validate();
        if (model == Model::reset) {
            reset_params().validate();
        } else {
            bath1().validate();
            if (model == Model::two_bath_bosonic) bath2().validate();
        }
        if (!(tau1 > 0.0) || !(tau2 > 0.0))
            throw std::invalid_argument("Scenario: temperatures must be positive");
    }
};

// ------------------------------- config format -------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line) {
    double out;
    const char* begin = v.data();
    const char* end = v.data() + v.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream msg;
        msg << "config line " << line << ": malformed number '" << v << "'";
        throw std::invalid_argument(msg.str());
    }
    return out;
}

inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Flat `key = value` lines, '#' starts a comment, unknown keys rejected with
// their line number, missing keys fall back to the documented defaults.
inline Scenario parse_config(const std::string& text) {
    static const std::vector<std::string> keys = {
        "model", "e1", "e2", "e3", "g", "tau1", "tau2", "delta1", "delta2",
        "omega_cutoff", "omega_max", "kappa1", "kappa2", "p1", "p2", "step",
        "t_max", "steady_tol", "steady_sample", "steady_window", "record_stride"};
    Scenario sc;
    std::map<std::string, bool> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = detail::trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config line " << line << ": expected 'key = value'";
            throw std::invalid_argument(msg.str());
        }
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            std::ostringstream msg;
            msg << "config line " << line << ": unknown key '" << key << "'";
            throw std::invalid_argument(msg.str());
        }
        if (seen[key]) {
            std::ostringstream msg;
            msg << "config line " << line << ": duplicate key '" << key << "'";
            throw std::invalid_argument(msg.str());
        }
        seen[key] = true;
        if (key == "model") {
            if (value == "two_bath_bosonic")
                sc.model = Model::two_bath_bosonic;
            else if (value == "single_bath_bosonic")
                sc.model = Model::single_bath_bosonic;
            else if (value == "reset")
                sc.model = Model::reset;
            else {
                std::ostringstream msg;
                msg << "config line " << line << ": unknown model '" << value << "'";
                throw std::invalid_argument(msg.str());
            }
            continue;
        }
        if (key == "record_stride") {
            const double d = detail::parse_double(value, line);
            if (d != std::floor(d) || d < 1) {
                std::ostringstream msg;
                msg << "config line " << line << ": record_stride must be a positive integer";
                throw std::invalid_argument(msg.str());
            }
            sc.sim.record_stride = static_cast<int>(d);
            continue;
        }
        const double d = detail::parse_double(value, line);
        if (key == "e1") sc.sys.e1 = d;
        else if (key == "e2") sc.sys.e2 = d;
        else if (key == "e3") sc.sys.e3 = d;
        else if (key == "g") sc.sys.g = d;
        else if (key == "tau1") sc.tau1 = d;
        else if (key == "tau2") sc.tau2 = d;
        else if (key == "delta1") sc.delta1 = d;
        else if (key == "delta2") sc.delta2 = d;
        else if (key == "omega_cutoff") sc.omega_cutoff = d;
        else if (key == "omega_max") sc.omega_max = d;
        else if (key == "kappa1") sc.coupling.kappa1 = d;
        else if (key == "kappa2") sc.coupling.kappa2 = d;
        else if (key == "p1") sc.p1 = d;
        else if (key == "p2") sc.p2 = d;
        else if (key == "step") sc.sim.step = d;
        else if (key == "t_max") sc.sim.t_max = d;
        else if (key == "steady_tol") sc.sim.steady_tol = d;
        else if (key == "steady_sample") sc.sim.steady_sample = d;
        else if (key == "steady_window") sc.sim.steady_window = d;
    }
    sc.validate();
    return sc;
}

// Canonical form; parse(emit_config(sc)) reproduces sc.
inline std::string emit_config(const Scenario& sc) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "model = " << to_string(sc.model) << "\n";
    out << "e1 = " << fmt_double(sc.sys.e1) << "\n";
    out << "e2 = " << fmt_double(sc.sys.e2) << "\n";
    out << "e3 = " << fmt_double(sc.sys.e3) << "\n";
    out << "g = " << fmt_double(sc.sys.g) << "\n";
    out << "tau1 = " << fmt_double(sc.tau1) << "\n";
    out << "tau2 = " << fmt_double(sc.tau2) << "\n";
    out << "delta1 = " << fmt_double(sc.delta1) << "\n";
    out << "delta2 = " << fmt_double(sc.delta2) << "\n";
    out << "omega_cutoff = " << fmt_double(sc.omega_cutoff) << "\n";
    out << "omega_max = " << fmt_double(sc.omega_max) << "\n";
    out << "kappa1 = " << fmt_double(sc.coupling.kappa1) << "\n";
    out << "kappa2 = " << fmt_double(sc.coupling.kappa2) << "\n";
    out << "p1 = " << fmt_double(sc.p1) << "\n";
    out << "p2 = " << fmt_double(sc.p2) << "\n";
    out << "step = " << fmt_double(sc.sim.step) << "\n";
    out << "t_max = " << fmt_double(sc.sim.t_max) << "\n";
    out << "steady_tol = " << fmt_double(sc.sim.steady_tol) << "\n";
    out << "steady_sample = " << fmt_double(sc.sim.steady_sample) << "\n";
    out << "steady_window = " << fmt_double(sc.sim.steady_window) << "\n";
    out << "record_stride = " << sc.sim.record_stride << "\n";
    return out.str();
}

// --------------------------------- presets ----------------------------------

// Named parameter points. The bosonic S1/S2/S3 pairs are the weak- and
// strong-coupling operating points; reset presets carry the published reset
// rates assigned to the regime they produce; single-bath presets default to
// dE = 1 (override e2/e3 for other gaps).
inline Scenario preset(const std::string& name) {
    Scenario sc;
    auto bosonic = [&](double d1, double d2, double g) {
        sc.model = Model::two_bath_bosonic;
        sc.delta1 = d1;
        sc.delta2 = d2;
        sc.sys.g = g;
    };
    auto reset = [&](double q1, double q2) {
        sc.model = Model::reset;
        sc.p1 = q1;
        sc.p2 = q2;
        sc.sys.g = 1e-2;
    };
    auto single = [&](double g, double k1) {
        sc.model = Model::single_bath_bosonic;
        sc.sys.g = g;
        sc.tau1 = 1.0;
        sc.delta1 = 1e-4;
        sc.coupling.kappa1 = k1;
    };
    const double p35 = 3.16227766016837933e-4;   // 10^-3.5
    const double p75 = 3.16227766016837933e-8;   // 10^-7.5
    if (name == "S1_weak") bosonic(1e-8, 1e-4, 1e-2);
    else if (name == "S2_weak") bosonic(1e-4, 1e-5, 1e-2);
    else if (name == "S3_weak") bosonic(1e-4, 1e-8, 1e-2);
    else if (name == "S1_strong") bosonic(1e-8, 1e-4, 0.5);
    else if (name == "S2_strong") bosonic(1e-4, 1e-5, 0.5);
    else if (name == "S3_strong") bosonic(1e-4, 1e-8, 0.5);
    else if (name == "reset_S1") reset(p75, p35);
    else if (name == "reset_S2") reset(1e-3, 1e-4);
    else if (name == "reset_S3") reset(p35, p75);
    else if (name == "single_bath_weak_k1") single(1e-2, 1.0);
    else if (name == "single_bath_weak_k2") single(1e-2, 2.0);
    else if (name == "single_bath_strong_k1") single(0.5, 1.0);
    else if (name == "single_bath_strong_k4") single(0.5, 4.0);
    else throw std::invalid_argument("unknown preset '" + name + "'");
    return sc;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "S1_weak", "S2_weak", "S3_weak", "S1_strong", "S2_strong", "S3_strong",
        "reset_S1", "reset_S2", "reset_S3", "single_bath_weak_k1",
        "single_bath_weak_k2", "single_bath_strong_k1", "single_bath_strong_k4"};
    return names;
}

// ------------------------------ scenario runner ------------------------------

struct SweepRecord {
    std::string parameter;  // empty outside sweeps
    double value = std::numeric_limits<double>::quiet_NaN();
    double T1_s = std::numeric_limits<double>::quiet_NaN();
    double T1_t = std::numeric_limits<double>::quiet_NaN();
    double t_s = std::numeric_limits<double>::quiet_NaN();
    std::optional<Classification> classification;
    std::string rwa = "na";
    double oracle_T1_s = std::numeric_limits<double>::quiet_NaN();
    std::string error;  // nonempty when the point failed (not part of the CSV)
};

struct ScenarioResult {
    Trajectory trajectory;
    SweepRecord record;
};

inline ScenarioResult run_scenario_config(const Scenario& sc, const Observer& observer = {}) {
    sc.validate();
    const Generator gen = sc.make_generator();
    SimulationConfig cfg = sc.resolved_sim();

    ScenarioResult res;
    if (sc.model != Model::reset) {
        res.record.rwa = to_string(validate_rwa(gen.channels(), sc.sys).verdict);
    }
    res.trajectory = evolve(sc.initial_state(), gen, cfg, observer);

    try {
        const Matrix8 ss = steady_state_direct(gen);
        res.record.oracle_T1_s = local_temperature(ss, 1, sc.sys.e1);
    } catch (const NumericalError&) {
        // degenerate or missing stationary state: recorded as NaN
    }

    Trajectory& traj = res.trajectory;
    if (!traj.steady && !std::isnan(res.record.oracle_T1_s)) {
        // t_max reached without the criterion firing: fall back to the oracle
        traj.steady = SteadyVerdict{std::numeric_limits<double>::quiet_NaN(),
                                    res.record.oracle_T1_s, true};
    }
    res.record.T1_t = traj.transient_min_T1;
    if (traj.steady) {
        res.record.T1_s = traj.steady->T1_s;
        res.record.t_s = traj.steady->t_s;
        res.record.classification = classify_dynamics(traj, sc.tau1);
    }
    return res;
}

inline ScenarioResult run_scenario(const std::string& preset_name, const Observer& observer = {}) {
    return run_scenario_config(preset(preset_name), observer);
}

// --------------------------------- sweeps -----------------------------------

struct SweepSpec {
    std::string parameter;  // kappa1 | kappa2 | delta_e | g | delta_tau
    std::vector<double> values;
    Scenario base;

    void validate() const {
        base.validate();
        if (values.empty()) throw std::invalid_argument("SweepSpec: values must be nonempty");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("SweepSpec: values must be finite");
        static const std::vector<std::string> names = {"kappa1", "kappa2", "delta_e", "g",
                                                       "delta_tau"};
        if (std::find(names.begin(), names.end(), parameter) == names.end())
            throw std::invalid_argument("SweepSpec: unknown parameter '" + parameter + "'");
        const Model m = base.model;
        const bool ok =
            (parameter == "kappa1" && m != Model::reset) ||
            (parameter == "kappa2" && m == Model::two_bath_bosonic) ||
            parameter == "delta_e" || parameter == "g" ||
            (parameter == "delta_tau" && m != Model::single_bath_bosonic);
        if (!ok)
            throw std::invalid_argument("SweepSpec: parameter '" + parameter +
                                        "' not applicable to model " + to_string(m));
    }
};

// dE is applied as e2 = e1 + dE and e3 = dE, preserving the resonance
// condition dE = E3 that the cooling mechanism presupposes.
inline Scenario apply_sweep_value(const Scenario& base, const std::string& parameter,
                                  double value) {
    Scenario sc = base;
    if (parameter == "kappa1") sc.coupling.kappa1 = value;
    else if (parameter == "kappa2") sc.coupling.kappa2 = value;
    else if (parameter == "g") sc.sys.g = value;
    else if (parameter == "delta_e") {
        sc.sys.e2 = sc.sys.e1 + value;
        sc.sys.e3 = value;
    } else if (parameter == "delta_tau") sc.tau2 = sc.tau1 + value;
    else throw std::invalid_argument("apply_sweep_value: unknown parameter");
    return sc;
}

inline unsigned sweep_worker_count(std::size_t points) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("QAR_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n < 1) n = 1;
    return static_cast<unsigned>(std::min<std::size_t>(n, points));
}

// One record per value, computed independently (worker pool, QAR_WORKERS
// override); output order follows the input value list. Per-point failures
// land in the row's error field, they do not abort the sweep.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRecord> out(spec.values.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers = sweep_worker_count(spec.values.size());
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= spec.values.size()) return;
            SweepRecord rec;
            rec.parameter = spec.parameter;
            rec.value = spec.values[i];
            try {
                const Scenario sc = apply_sweep_value(spec.base, spec.parameter, spec.values[i]);
                ScenarioResult res = run_scenario_config(sc);
                res.record.parameter = spec.parameter;
                res.record.value = spec.values[i];
                rec = std::move(res.record);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            out[i] = std::move(rec);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

// ------------------------------- CSV emission --------------------------------

// Columns: t,T1,T2,T3,r1,r2,r3,trace_error,min_eig. LF line endings, shortest
// round-trip decimals.
inline void emit_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    using detail::fmt_double;
    out << "t,T1,T2,T3,r1,r2,r3,trace_error,min_eig\n";
    for (const auto& s : traj.samples) {
        out << fmt_double(s.t) << ',' << fmt_double(s.T1) << ',' << fmt_double(s.T2) << ','
            << fmt_double(s.T3) << ',' << fmt_double(s.r1) << ',' << fmt_double(s.r2) << ','
            << fmt_double(s.r3) << ',' << fmt_double(s.trace_error) << ','
            << fmt_double(s.min_eig) << '\n';
    }
}

// Columns: param,value,T1_s,T1_t,t_s,class,rwa,oracle_T1_s. Failed points
// print "error" in the class column.
inline void emit_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    using detail::fmt_double;
    out << "param,value,T1_s,T1_t,t_s,class,rwa,oracle_T1_s\n";
    for (const auto& r : records) {
        out << r.parameter << ',' << fmt_double(r.value) << ',' << fmt_double(r.T1_s) << ','
            << fmt_double(r.T1_t) << ',' << fmt_double(r.t_s) << ','
            << (r.classification ? to_string(*r.classification)
                                 : (r.error.empty() ? "NoCooling" : "error"))
            << ',' << r.rwa << ',' << fmt_double(r.oracle_T1_s) << '\n';
    }
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qar
