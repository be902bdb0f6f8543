#ifndef PCMTES_CONTINUOUS_MODEL_HPP
#define PCMTES_CONTINUOUS_MODEL_HPP

// Moving-boundary capsule: a single phase front at radius r inside PCM that
// fills a sphere of radius r_pcm. While charging the core is liquid and the
// shell frozen; while discharging the reverse.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcmtes/continuous/submodels.hpp"
#include "pcmtes/engine/rk4.hpp"
#include "pcmtes/network.hpp"
#include "pcmtes/solution.hpp"

namespace pcmtes {

enum class InitialCharge { discharged, charged };

struct ContinuousState {
    CycleMode cd = CycleMode::charging;
    CycleMode front = CycleMode::charging;  // last active form, kept through standby
    double r = 0.0;
    double r_pcm = 0.0;
    double T_int = 0.0;
    bool complete = false;  // front has collapsed; the cycle is over
};

inline ContinuousState continuous_initial_state(const Plant& plant, InitialCharge init, double T_int = absent) {
    ContinuousState s;
    const double T0 = present(T_int) ? T_int : plant.pcm.T_lat;
    if (init == InitialCharge::discharged) {
        s.cd = s.front = CycleMode::charging;
        s.r = s.r_pcm = plant.capsule.r_max;
    } else {
        s.cd = s.front = CycleMode::discharging;
        s.r = s.r_pcm = plant.capsule.r_min;
    }
    s.T_int = T0;
    return s;
}

inline double sphere_volume(double r) noexcept { return 4.0 * M_PI / 3.0 * r * r * r; }

// Internal energy of one capsule.
inline double capsule_energy(const ContinuousState& s, const PcmSpec& pcm, const CapsuleGeometry&) {
    const double core = sphere_volume(s.r);
    const double shell = sphere_volume(s.r_pcm) - core;
    const double liquid = pcm.rho_liquid * pcm.h_lat_plus();
    const double solid = pcm.rho_solid * pcm.h_lat_minus();
    if (s.front == CycleMode::discharging) return solid * core + liquid * shell;
    return liquid * core + solid * shell;
}

inline double capsule_energy_max(const PcmSpec& pcm, const CapsuleGeometry& geom) {
    return pcm.rho_liquid * pcm.h_lat_plus() * sphere_volume(geom.r_max);
}

inline double capsule_energy_min(const PcmSpec& pcm, const CapsuleGeometry& geom) {
    return pcm.rho_solid * pcm.h_lat_minus() * sphere_volume(geom.r_min);
}

inline double charge_ratio_continuous(const ContinuousState& s, const PcmSpec& pcm, const CapsuleGeometry& geom) {
    const double u_max = capsule_energy_max(pcm, geom);
    const double u_min = capsule_energy_min(pcm, geom);
    return (u_max - capsule_energy(s, pcm, geom)) / (u_max - u_min);
}

// Front and content-radius velocities for a heat flow Q into the capsule.
inline std::pair<double, double> pcm_front_odes(const ContinuousState& s, double Q_pcm, const PcmSpec& pcm) {
    if (!(s.r > 0.0) || Q_pcm == 0.0) return {0.0, 0.0};
    const double area = 4.0 * M_PI * s.r * s.r;
    const double geom = (s.r / s.r_pcm) * (s.r / s.r_pcm);
    const double drho = pcm.rho_solid - pcm.rho_liquid;
    if (s.front == CycleMode::discharging) {
        const double dr = -Q_pcm / (pcm.rho_solid * pcm.h_lat * area);
        return {dr, -drho / pcm.rho_liquid * geom * dr};
    }
    const double dr = Q_pcm / (pcm.rho_liquid * pcm.h_lat * area);
    return {dr, drho / pcm.rho_solid * geom * dr};
}

inline double continuous_shell_resistance(const ContinuousState& s, const PcmSpec& pcm, double r_collapse) {
    if (s.complete || s.r < r_collapse) return infinite_resistance;
    const double kappa = s.front == CycleMode::discharging ? pcm.kappa_eff_liquid() : pcm.kappa_solid;
    return r_cond_spherical_shell(s.r, std::max(s.r, s.r_pcm), kappa);
}

inline AlgebraicSolution solve_algebraic(const ContinuousState& s, const OperatingInputs& in, const Plant& plant,
                                         const SubmodelCache& cache = {}, double r_collapse = 1e-6) {
    AlgebraicSolution out;
    out.T_int_consistency = s.T_int;
    out.T_pcm = plant.pcm.T_lat;
    out.r_echo = s.r;
    out.r_pcm_echo = s.r_pcm;
    const CapsuleExchange cap = capsule_exchange(plant, s.T_int, plant.pcm.T_lat,
                                                 continuous_shell_resistance(s, plant.pcm, r_collapse),
                                                 cache.T_pcm_wall);
    out.Q_pcm = cap.Q;
    out.T_pcm_wall = cap.T_wall;
    out.htc.alpha_pcm_ext = cap.alpha_ext;
    out.diag.merge(cap.diag);
    solve_pipe_side(plant, in, s.T_int, cache, out);
    return out;
}

class ContinuousModel {
public:
    static constexpr const char* name = "continuous";
    static constexpr double r_collapse = 1e-6;

    enum Event { front_collapse = 0, refrigerant_mode = 1 };

    ContinuousModel(Plant plant, InitialCharge init, double T_int0 = absent)
        : plant_(std::move(plant)), state_(continuous_initial_state(plant_, init, T_int0)) {}

    const Plant& plant() const noexcept { return plant_; }
    const ContinuousState& state() const noexcept { return state_; }

    StateVector vector() const {
        StateVector y(3);
        y << state_.r, state_.r_pcm, state_.T_int;
        return y;
    }

    // Switches the operating mode at a scenario step boundary.
    void begin_step(CycleMode mode) {
        state_.cd = mode;
        if (mode == CycleMode::standby || mode == state_.front) return;
        const CapsuleGeometry& g = plant_.capsule;
        const bool untouched = state_.r == state_.r_pcm;
        if (!state_.complete && !untouched)
            throw UnsupportedOperation(std::string("the continuous model cannot reverse an incomplete ") +
                                       (state_.front == CycleMode::charging ? "charge" : "discharge") +
                                       "; use the discrete model for partial sequences");
        // A finished cycle is an untouched start of the opposite one, and vice versa.
        const bool start_fresh = state_.complete;
        state_.front = mode;
        state_.complete = !start_fresh;
        if (mode == CycleMode::charging) {
            state_.r = start_fresh ? g.r_max : 0.0;
            state_.r_pcm = start_fresh ? g.r_max : g.r_min;
        } else {
            state_.r = start_fresh ? g.r_min : 0.0;
            state_.r_pcm = start_fresh ? g.r_min : g.r_max;
        }
    }

    ContinuousState with(const StateVector& y) const {
        ContinuousState s = state_;
        s.r = y[0];
        s.r_pcm = y[1];
        s.T_int = y[2];
        return s;
    }

    AlgebraicSolution solve(const StateVector& y, const OperatingInputs& in) const {
        return solve_algebraic(with(y), in, plant_, cache_, r_collapse);
    }

    StateVector derivative(const StateVector& y, const OperatingInputs& in) const {
        const ContinuousState s = with(y);
        const AlgebraicSolution a = solve_algebraic(s, in, plant_, cache_, r_collapse);
        StateVector d = StateVector::Zero(3);
        if (!s.complete && s.r >= r_collapse) {
            const auto [dr, dr_pcm] = pcm_front_odes(s, a.Q_pcm, plant_.pcm);
            d[0] = dr;
            d[1] = dr_pcm;
        }
        d[2] = -a.bath_outflow(plant_) / (plant_.tank.m_int * plant_.bath_cp(s.T_int));
        return d;
    }

    Eigen::VectorXd event_margins(const StateVector& y, const OperatingInputs& in) const {
        Eigen::VectorXd g(2);
        g[front_collapse] = state_.complete ? -1.0 : y[0] - r_collapse;
        g[refrigerant_mode] = 0.0;
        if (in.mdot_ref > 0.0) g[refrigerant_mode] = refrigerant_submodel(plant_, in, y[2], cache_.refrigerant).mode_margin;
        return g;
    }

    int substeps(const StateVector&, double) const { return 1; }

    // Applies state changes for events found during the last step and names them.
    std::vector<EventRecord> apply_events(const std::vector<int>& fired, const Eigen::VectorXd& g_before,
                                          StateVector& y) {
        std::vector<EventRecord> out;
        for (int e : fired) {
            if (e == front_collapse) {
                state_.complete = true;
                y[0] = 0.0;
                y[1] = state_.front == CycleMode::charging ? plant_.capsule.r_min : plant_.capsule.r_max;
                out.push_back({0.0, state_.front == CycleMode::charging ? "charge_complete" : "discharge_complete", -1});
            } else if (e == refrigerant_mode) {
                out.push_back({0.0, g_before[e] < 0.0 ? "refrigerant_mode_1_to_2" : "refrigerant_mode_2_to_1", -1});
            }
        }
        return out;
    }

    void commit(const StateVector& y, const AlgebraicSolution& a) {
        state_ = with(y);
        check_invariants();
        cache_.accept(a);
    }

    double charge_ratio() const { return charge_ratio_continuous(state_, plant_.pcm, plant_.capsule); }
    double capsule_energy_now() const { return capsule_energy(state_, plant_.pcm, plant_.capsule); }
    double T_int() const noexcept { return state_.T_int; }

    std::vector<std::string> state_columns() const { return {"r_m", "r_pcm_m"}; }
    std::vector<double> state_values() const { return {state_.r, state_.r_pcm}; }

private:
    void check_invariants() const {
        const CapsuleGeometry& g = plant_.capsule;
        const double slack = 1e-9 * g.r_max;
        if (!(state_.r >= -slack && state_.r <= state_.r_pcm + slack) ||
            !(state_.r_pcm >= g.r_min - 1e-6 * g.r_max && state_.r_pcm <= g.r_max + 1e-6 * g.r_max) ||
            !std::isfinite(state_.T_int))
            throw std::logic_error("continuous model: state invariant violated (r=" + std::to_string(state_.r) +
                                   ", r_pcm=" + std::to_string(state_.r_pcm) + ")");
    }

    Plant plant_;
    ContinuousState state_;
    SubmodelCache cache_;
};

} // namespace pcmtes

#endif
