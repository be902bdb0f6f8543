#ifndef PCMTES_DISCRETE_MODEL_HPP
#define PCMTES_DISCRETE_MODEL_HPP

// Layered capsule: n equal-mass concentric shells, each carrying a specific
// enthalpy. Layer 1 is the innermost.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcmtes/continuous/model.hpp"
#include "pcmtes/continuous/submodels.hpp"
#include "pcmtes/engine/rk4.hpp"
#include "pcmtes/network.hpp"
#include "pcmtes/solution.hpp"

namespace pcmtes {

struct DiscreteState {
    std::vector<double> h_layers;  // J/kg
    double T_int = 0.0;

    int n_layers() const noexcept { return static_cast<int>(h_layers.size()); }
};

inline DiscreteState discrete_initial_state(const Plant& plant, int n_layers, InitialCharge init,
                                            double T_int = absent) {
    if (n_layers < 1) throw ConfigError("discrete model needs at least one layer");
    DiscreteState s;
    const double h = init == InitialCharge::discharged ? plant.pcm.h_lat_plus() : plant.pcm.h_lat_minus();
    s.h_layers.assign(static_cast<std::size_t>(n_layers), h);
    s.T_int = present(T_int) ? T_int : plant.pcm.T_lat;
    return s;
}

struct LayerGeometry {
    std::vector<double> radii;      // outer radius of each layer
    std::vector<double> volumes;
    std::vector<double> centroids;  // radius splitting each layer into equal volumes

    double inner_radius(std::size_t k) const noexcept { return k == 0 ? 0.0 : radii[k - 1]; }
};

inline double layer_mass(const Plant& plant, int n_layers) { return plant.capsule_mass() / n_layers; }

inline LayerGeometry layer_radii(const DiscreteState& s, const PcmSpec& pcm, const CapsuleGeometry& geom) {
    const std::size_t n = s.h_layers.size();
    const double m_lay = geom.pcm_mass(pcm) / static_cast<double>(n);
    LayerGeometry out;
    out.radii.resize(n);
    out.volumes.resize(n);
    out.centroids.resize(n);
    double r_prev3 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.volumes[k] = m_lay / pcm_density_of_enthalpy(s.h_layers[k], pcm);
        const double r3 = r_prev3 + 3.0 * out.volumes[k] / (4.0 * M_PI);
        out.radii[k] = std::cbrt(r3);
        out.centroids[k] = std::cbrt(0.5 * (r_prev3 + r3));
        r_prev3 = r3;
    }
    return out;
}

// Conduction resistance between the centroids of layers k and k+1 (0-based
// k). For the outermost layer, from its centroid to its outer surface.
inline double layer_conduction_resistance(std::size_t k, const LayerGeometry& g, const DiscreteState& s,
                                          const PcmSpec& pcm) {
    const double inner = r_cond_spherical_shell(g.centroids[k], g.radii[k], pcm_conductivity_of_enthalpy(s.h_layers[k], pcm));
    if (k + 1 >= s.h_layers.size()) return inner;
    return inner + r_cond_spherical_shell(g.radii[k], g.centroids[k + 1],
                                          pcm_conductivity_of_enthalpy(s.h_layers[k + 1], pcm));
}

struct LayerFlows {
    std::vector<double> Q_ext;  // into each layer through its outer surface
    std::vector<double> Q_int;  // out of each layer through its inner surface
    double Q_pcm = 0.0;
    CapsuleExchange capsule;
};

inline LayerFlows layer_heat_flows(const DiscreteState& s, const Plant& plant, double T_wall_guess = absent) {
    const PcmSpec& pcm = plant.pcm;
    const std::size_t n = s.h_layers.size();
    const LayerGeometry g = layer_radii(s, pcm, plant.capsule);
    LayerFlows f;
    f.Q_ext.assign(n, 0.0);
    f.Q_int.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dT = pcm_temperature_of_enthalpy(s.h_layers[k + 1], pcm) - pcm_temperature_of_enthalpy(s.h_layers[k], pcm);
        const double q = dT == 0.0 ? 0.0 : dT / layer_conduction_resistance(k, g, s, pcm);
        f.Q_ext[k] = q;
        f.Q_int[k + 1] = q;
    }
    const std::size_t out = n - 1;
    f.capsule = capsule_exchange(plant, s.T_int, pcm_temperature_of_enthalpy(s.h_layers[out], pcm),
                                 layer_conduction_resistance(out, g, s, pcm), T_wall_guess);
    f.Q_pcm = f.capsule.Q;
    f.Q_ext[out] = f.Q_pcm;
    return f;
}

inline double charge_ratio_discrete(const DiscreteState& s, const PcmSpec& pcm, const CapsuleGeometry&) {
    double sum = 0.0;
    for (double h : s.h_layers) sum += h;
    const double mean = sum / static_cast<double>(s.h_layers.size());
    return (pcm.h_lat_plus() - mean) / (pcm.h_lat_plus() - pcm.h_lat_minus());
}

class DiscreteModel {
public:
    static constexpr const char* name = "discrete";

    DiscreteModel(Plant plant, int n_layers, InitialCharge init, double T_int0 = absent)
        : plant_(std::move(plant)), state_(discrete_initial_state(plant_, n_layers, init, T_int0)),
          m_lay_(layer_mass(plant_, n_layers)) {}

    const Plant& plant() const noexcept { return plant_; }
    const DiscreteState& state() const noexcept { return state_; }
    int n_layers() const noexcept { return state_.n_layers(); }

    StateVector vector() const {
        const int n = n_layers();
        StateVector y(n + 1);
        for (int k = 0; k < n; ++k) y[k] = state_.h_layers[static_cast<std::size_t>(k)];
        y[n] = state_.T_int;
        return y;
    }

    DiscreteState with(const StateVector& y) const {
        DiscreteState s;
        const int n = n_layers();
        s.h_layers.assign(y.data(), y.data() + n);
        s.T_int = y[n];
        return s;
    }

    void begin_step(CycleMode) {}

    AlgebraicSolution solve(const StateVector& y, const OperatingInputs& in) const {
        return solve_with_flows(with(y), in).first;
    }

    StateVector derivative(const StateVector& y, const OperatingInputs& in) const {
        const DiscreteState s = with(y);
        const auto [a, f] = solve_with_flows(s, in);
        const int n = n_layers();
        StateVector d(n + 1);
        for (int k = 0; k < n; ++k) {
            const auto i = static_cast<std::size_t>(k);
            d[k] = (f.Q_ext[i] - f.Q_int[i]) / m_lay_;
        }
        d[n] = -a.bath_outflow(plant_) / (plant_.tank.m_int * plant_.bath_cp(s.T_int));
        return d;
    }

    // Margins: [2k] = h_k - h_lat-, [2k+1] = h_k - h_lat+, last = refrigerant mode.
    Eigen::VectorXd event_margins(const StateVector& y, const OperatingInputs& in) const {
        const int n = n_layers();
        Eigen::VectorXd g(2 * n + 1);
        for (int k = 0; k < n; ++k) {
            g[2 * k] = y[k] - plant_.pcm.h_lat_minus();
            g[2 * k + 1] = y[k] - plant_.pcm.h_lat_plus();
        }
        g[2 * n] = 0.0;
        if (in.mdot_ref > 0.0) g[2 * n] = refrigerant_submodel(plant_, in, y[n], cache_.refrigerant).mode_margin;
        return g;
    }

    // Upper bound on the RK4 substep count that keeps the layer conduction
    // stable: Gershgorin bound on the Jacobian of the layer equations.
    int substeps(const StateVector& y, double dt) const {
        const DiscreteState s = with(y);
        const PcmSpec& pcm = plant_.pcm;
        const std::size_t n = s.h_layers.size();
        const LayerGeometry g = layer_radii(s, pcm, plant_.capsule);
        std::vector<double> slope(n), G(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double h = s.h_layers[k];
            slope[k] = h < pcm.h_lat_minus() ? 1.0 / pcm.cp_solid : h > pcm.h_lat_plus() ? 1.0 / pcm.cp_liquid : 0.0;
            G[k] = 1.0 / layer_conduction_resistance(k, g, s, pcm);
        }
        const double R_wall = r_cond_spherical_shell(plant_.capsule.r_max, plant_.capsule.r_outer(), plant_.capsule.kappa_wall);
        G[n - 1] = 1.0 / (1.0 / G[n - 1] + R_wall);
        double lambda = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double g_in = k > 0 ? G[k - 1] : 0.0;
            const double g_out = G[k];
            double row = (g_in + g_out) * slope[k];
            if (k > 0) row += g_in * slope[k - 1];
            if (k + 1 < n) row += g_out * slope[k + 1];
            lambda = std::max(lambda, row / m_lay_);
        }
        return std::max(1, static_cast<int>(std::ceil(dt * lambda / 2.5)));
    }

    std::vector<EventRecord> apply_events(const std::vector<int>& fired, const Eigen::VectorXd& g_before, StateVector&) {
        std::vector<EventRecord> out;
        const int n = n_layers();
        for (int e : fired) {
            if (e == 2 * n) {
                out.push_back({0.0, g_before[e] < 0.0 ? "refrigerant_mode_1_to_2" : "refrigerant_mode_2_to_1", -1});
                continue;
            }
            const int layer = e / 2 + 1;
            const bool falling = g_before[e] > 0.0;
            if (e % 2 == 0)
                out.push_back({0.0, falling ? "layer_frozen" : "layer_melting_started", layer});
            else
                out.push_back({0.0, falling ? "layer_freezing_started" : "layer_melted", layer});
        }
        return out;
    }

    void commit(const StateVector& y, const AlgebraicSolution& a) {
        state_ = with(y);
        for (double h : state_.h_layers)
            if (!std::isfinite(h)) throw std::logic_error("discrete model: non-finite layer enthalpy");
        cache_.accept(a);
    }

    double charge_ratio() const { return charge_ratio_discrete(state_, plant_.pcm, plant_.capsule); }

    double capsule_energy_now() const {
        double sum = 0.0;
        for (double h : state_.h_layers) sum += m_lay_ * h;
        return sum;
    }

    double T_int() const noexcept { return state_.T_int; }

    std::vector<std::string> state_columns() const {
        std::vector<std::string> c;
        for (int k = 1; k <= n_layers(); ++k) c.push_back("h_layer_" + std::to_string(k));
        return c;
    }

    std::vector<double> state_values() const { return state_.h_layers; }

private:
    std::pair<AlgebraicSolution, LayerFlows> solve_with_flows(const DiscreteState& s, const OperatingInputs& in) const {
        AlgebraicSolution a;
        LayerFlows f = layer_heat_flows(s, plant_, cache_.T_pcm_wall);
        a.T_int_consistency = s.T_int;
        a.T_pcm = pcm_temperature_of_enthalpy(s.h_layers.back(), plant_.pcm);
        a.T_pcm_wall = f.capsule.T_wall;
        a.Q_pcm = f.Q_pcm;
        a.r_pcm_echo = layer_radii(s, plant_.pcm, plant_.capsule).radii.back();
        a.htc.alpha_pcm_ext = f.capsule.alpha_ext;
        a.diag.merge(f.capsule.diag);
        solve_pipe_side(plant_, in, s.T_int, cache_, a);
        return {a, std::move(f)};
    }

    Plant plant_;
    DiscreteState state_;
    double m_lay_;
    SubmodelCache cache_;
};

} // namespace pcmtes

#endif
