#ifndef PCMTES_ENGINE_SCENARIO_HPP
#define PCMTES_ENGINE_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "pcmtes/continuous/model.hpp"
#include "pcmtes/discrete/model.hpp"
#include "pcmtes/engine/rk4.hpp"
#include "pcmtes/solution.hpp"

namespace pcmtes {

struct ScenarioStep {
    CycleMode mode = CycleMode::standby;
    double duration = 0.0;  // s
    OperatingInputs inputs;

    void validate() const {
        if (!(duration > 0.0)) throw ConfigError("scenario step duration must be positive");
        inputs.validate();
    }
};

struct RunOptions {
    double dt = 1.0;
    double event_tolerance = 0.01;
    InitialCharge initial = InitialCharge::discharged;
    double T_int0 = absent;  // defaults to the PCM melting temperature
    double completion_threshold = 0.99;
};

struct StepRecord {
    double t = 0.0;
    CycleMode mode = CycleMode::standby;
    double T_int = 0.0;
    double gamma = 0.0;
    double U_capsule = 0.0;            // J, one capsule
    std::vector<double> state_values;  // front radii or layer enthalpies
    AlgebraicSolution solution;
};

struct CoefficientRange {
    double min = absent;
    double max = absent;

    void include(double x) {
        if (!present(x)) return;
        min = present(min) ? std::min(min, x) : x;
        max = present(max) ? std::max(max, x) : x;
    }
};

struct HtcRanges {
    CoefficientRange pcm_ext, ref2_int, ref2_ext, refv_int, refv_ext, sec_int, sec_ext;

    void include(const HtcSnapshot& h) {
        pcm_ext.include(h.alpha_pcm_ext);
        ref2_int.include(h.alpha_ref2_int);
        ref2_ext.include(h.alpha_ref2_ext);
        refv_int.include(h.alpha_refv_int);
        refv_ext.include(h.alpha_refv_ext);
        sec_int.include(h.alpha_sec_int);
        sec_ext.include(h.alpha_sec_ext);
    }
};

struct InterfaceEnergies {
    double pcm = 0.0;  // J, all capsules
    double ref = 0.0;  // J, all refrigerant pipes
    double sec = 0.0;  // J, all secondary pipes
};

struct StepSummary {
    CycleMode mode = CycleMode::standby;
    double t_start = 0.0, t_end = 0.0;
    double gamma_start = 0.0, gamma_end = 0.0;
    double T_int_start = 0.0, T_int_end = 0.0;
    double U_start = 0.0, U_end = 0.0;  // J, all capsules
    InterfaceEnergies energy;
    double completion_time = absent;   // s after step start at which the cycle finished
};

struct RunSummary {
    double final_gamma = 0.0;
    double final_T_int = 0.0;
    double final_time = 0.0;
    InterfaceEnergies energy;
    double delta_U_capsules = 0.0;  // J, all capsules
    std::vector<StepSummary> steps;
    HtcRanges htc;
    int extrapolated_records = 0;
    int out_of_range_records = 0;
};

struct RunResult {
    std::string model;
    int n_layers = 0;
    std::vector<std::string> state_columns;
    std::vector<StepRecord> records;
    std::vector<double> cumulative_pcm_energy;  // J, aligned with records
    std::vector<EventRecord> events;
    RunSummary summary;
};

namespace detail {

inline InterfaceEnergies powers(const AlgebraicSolution& a, const Plant& plant) {
    return {plant.capsule.n_capsules * a.Q_pcm, plant.ref_pipe.count * or_zero(a.Q_ref),
            plant.sec_pipe.count * or_zero(a.Q_sec)};
}

inline void add_trapezoid(InterfaceEnergies& e, const InterfaceEnergies& p0, const InterfaceEnergies& p1, double h) {
    e.pcm += 0.5 * h * (p0.pcm + p1.pcm);
    e.ref += 0.5 * h * (p0.ref + p1.ref);
    e.sec += 0.5 * h * (p0.sec + p1.sec);
}

inline bool cycle_finished(CycleMode mode, double gamma, double threshold) {
    if (mode == CycleMode::charging) return gamma >= threshold;
    if (mode == CycleMode::discharging) return gamma <= 1.0 - threshold;
    return false;
}

} // namespace detail

// Runs the scenario on an already initialised model. One record per dt plus
// the initial one; the last interval of a step is shortened so that step
// boundaries fall exactly on the time grid.
template <class Model>
RunResult run_scenario(Model& model, const std::vector<ScenarioStep>& scenario, const RunOptions& opt = {}) {
    if (!(opt.dt > 0.0)) throw ConfigError("dt must be positive");
    for (const ScenarioStep& s : scenario) s.validate();
    const Plant& plant = model.plant();
    const double n_cap = plant.capsule.n_capsules;

    RunResult out;
    out.model = Model::name;
    out.state_columns = model.state_columns();
    out.n_layers = static_cast<int>(out.state_columns.size());
    if constexpr (std::is_same_v<Model, ContinuousModel>) out.n_layers = 0;

    auto make_record = [&](double t, CycleMode mode, const AlgebraicSolution& a) {
        StepRecord r;
        r.t = t;
        r.mode = mode;
        r.T_int = model.T_int();
        r.gamma = model.charge_ratio();
        r.U_capsule = model.capsule_energy_now();
        r.state_values = model.state_values();
        r.solution = a;
        return r;
    };
    auto push = [&](StepRecord r) {
        out.summary.htc.include(r.solution.htc);
        out.summary.extrapolated_records += r.solution.diag.property_extrapolated ? 1 : 0;
        out.summary.out_of_range_records += r.solution.diag.correlation_out_of_range ? 1 : 0;
        out.records.push_back(std::move(r));
        out.cumulative_pcm_energy.push_back(out.summary.energy.pcm);
    };

    {
        const CycleMode first = scenario.empty() ? CycleMode::standby : scenario.front().mode;
        const OperatingInputs in = scenario.empty() ? OperatingInputs{}.gated(first)
                                                    : scenario.front().inputs.gated(first);
        if (!scenario.empty()) model.begin_step(first);
        const AlgebraicSolution a = model.solve(model.vector(), in);
        model.commit(model.vector(), a);
        push(make_record(0.0, first, a));
    }
    const double U0 = model.capsule_energy_now();

    double t = 0.0;
    for (const ScenarioStep& step : scenario) {
        model.begin_step(step.mode);
        const OperatingInputs in = step.inputs.gated(step.mode);
        StepSummary ss;
        ss.mode = step.mode;
        ss.t_start = t;
        ss.gamma_start = model.charge_ratio();
        ss.T_int_start = model.T_int();
        ss.U_start = n_cap * model.capsule_energy_now();

        auto deriv = [&](const StateVector& y) { return model.derivative(y, in); };
        auto events = [&](const StateVector& y) { return model.event_margins(y, in); };

        AlgebraicSolution left = model.solve(model.vector(), in);
        const double t_end = t + step.duration;
        const auto n_int = static_cast<long>(std::ceil(step.duration / opt.dt - 1e-9));
        for (long i = 1; i <= n_int; ++i) {
            const double t_next = (i == n_int) ? t_end : ss.t_start + static_cast<double>(i) * opt.dt;
            const double h = t_next - t;
            StateVector y = model.vector();
            double done = 0.0;
            while (h - done > 1e-9) {
                const double remaining = h - done;
                Rk4Options ro;
                ro.substeps = model.substeps(y, remaining);
                ro.event_tolerance = opt.event_tolerance;
                const Eigen::VectorXd g0 = events(y);
                Rk4StepResult res = integrate_rk4(deriv, y, remaining, events, ro);
                if (!res.fired.empty()) {
                    for (EventRecord e : model.apply_events(res.fired, g0, res.y)) {
                        e.t = t + done + res.h_taken;
                        out.events.push_back(std::move(e));
                    }
                }
                y = std::move(res.y);
                done += res.h_taken;
            }
            const AlgebraicSolution a = model.solve(y, in);
            model.commit(y, a);
            detail::add_trapezoid(ss.energy, detail::powers(left, plant), detail::powers(a, plant), h);
            detail::add_trapezoid(out.summary.energy, detail::powers(left, plant), detail::powers(a, plant), h);
            left = a;
            t = t_next;
            push(make_record(t, step.mode, a));
            if (!present(ss.completion_time) &&
                detail::cycle_finished(step.mode, model.charge_ratio(), opt.completion_threshold))
                ss.completion_time = t - ss.t_start;
        }
        t = t_end;
        ss.t_end = t;
        ss.gamma_end = model.charge_ratio();
        ss.T_int_end = model.T_int();
        ss.U_end = n_cap * model.capsule_energy_now();
        out.summary.steps.push_back(ss);
    }
    out.summary.final_gamma = model.charge_ratio();
    out.summary.final_T_int = model.T_int();
    out.summary.final_time = t;
    out.summary.delta_U_capsules = n_cap * (model.capsule_energy_now() - U0);
    return out;
}

struct ComparisonEntry {
    int n_layers = 0;
    double max_rel_error = 0.0;
    double t_at_max = 0.0;
    double final_rel_error = 0.0;
    std::vector<double> rel_error;  // aligned with the continuous records inside the horizon
};

struct ComparisonReport {
    double horizon = 0.0;  // s
    RunResult continuous;
    std::vector<RunResult> discrete;
    std::vector<ComparisonEntry> entries;
};

// Relative error of the cumulative PCM energy of a run against a reference
// run on the same time grid, up to the horizon.
inline ComparisonEntry compare_cumulative(const RunResult& reference, const RunResult& other, double horizon) {
    ComparisonEntry e;
    e.n_layers = other.n_layers;
    const std::size_t n = std::min(reference.records.size(), other.records.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (reference.records[i].t > horizon + 1e-9) break;
        const double ref = reference.cumulative_pcm_energy[i];
        if (ref == 0.0) continue;
        const double err = std::abs(other.cumulative_pcm_energy[i] - ref) / std::abs(ref);
        e.rel_error.push_back(err);
        if (err > e.max_rel_error) {
            e.max_rel_error = err;
            e.t_at_max = reference.records[i].t;
        }
        e.final_rel_error = err;
    }
    return e;
}

// Runs both models over a full charge or full discharge and reports the
// discrepancy in cumulative PCM energy until the continuous cycle completes.
inline ComparisonReport compare_models(const Plant& plant, const std::vector<ScenarioStep>& scenario,
                                       const std::vector<int>& layer_counts, const RunOptions& opt = {}) {
    for (const ScenarioStep& s : scenario)
        if (s.mode == CycleMode::standby || s.mode != scenario.front().mode)
            throw ConfigError("compare: scenario must be a pure full charge or full discharge");
    ComparisonReport rep;
    ContinuousModel cont(plant, opt.initial, opt.T_int0);
    rep.continuous = run_scenario(cont, scenario, opt);
    rep.horizon = rep.continuous.summary.final_time;
    for (const EventRecord& e : rep.continuous.events)
        if (e.kind == "charge_complete" || e.kind == "discharge_complete") {
            rep.horizon = e.t;
            break;
        }
    for (int n : layer_counts) {
        DiscreteModel disc(plant, n, opt.initial, opt.T_int0);
        rep.discrete.push_back(run_scenario(disc, scenario, opt));
        rep.entries.push_back(compare_cumulative(rep.continuous, rep.discrete.back(), rep.horizon));
    }
    return rep;
}

} // namespace pcmtes

#endif
