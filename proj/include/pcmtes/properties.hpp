#ifndef PCMTES_PROPERTIES_HPP
#define PCMTES_PROPERTIES_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "pcmtes/errors.hpp"

namespace pcmtes {

// ---------------------------------------------------------------------------
// Material constants
// ---------------------------------------------------------------------------

// Thermodynamic constants of the phase change material. Enthalpies are
// specific (J/kg) and measured from an arbitrary reference: the solid-side
// latent boundary h_lat- is a free reference level and h_lat+ = h_lat- + h_lat.
struct PcmSpec {
    double cp_liquid = 1990.0;          // J/(kg K)
    double cp_solid = 1390.0;           // J/(kg K)
    double h_lat = 145000.0;            // J/kg
    double T_lat = -30.0;               // degC
    double kappa_liquid = 0.15;         // W/(m K)
    double kappa_solid = 0.25;          // W/(m K)
    double kappa_eff_multiplier = 2.5;  // natural convection inside the melt
    double rho_liquid = 880.0;          // kg/m3
    double rho_solid = 970.0;           // kg/m3
    double h_lat_minus_ref = 0.0;       // J/kg

    double h_lat_minus() const noexcept { return h_lat_minus_ref; }
    double h_lat_plus() const noexcept { return h_lat_minus_ref + h_lat; }
    double kappa_eff_liquid() const noexcept { return kappa_eff_multiplier * kappa_liquid; }

    void validate() const {
        if (!(rho_solid > rho_liquid && rho_liquid > 0.0))
            throw ConfigError("pcm: require rho_solid > rho_liquid > 0");
        if (!(h_lat > 0.0)) throw ConfigError("pcm.h_lat must be positive");
        if (!(cp_liquid > 0.0 && cp_solid > 0.0)) throw ConfigError("pcm: specific heats must be positive");
        if (!(kappa_liquid > 0.0 && kappa_solid > 0.0))
            throw ConfigError("pcm: conductivities must be positive");
        if (!(kappa_eff_multiplier >= 1.0 && kappa_eff_multiplier <= 3.0))
            throw ConfigError("pcm.kappa_eff_multiplier must lie in [1, 3]");
    }
};

// Radius of a fully frozen capsule holding the same mass as a fully molten
// capsule of radius r_max.
inline double mass_conserving_r_min(double r_max, const PcmSpec& pcm) {
    return r_max * std::cbrt(pcm.rho_liquid / pcm.rho_solid);
}

struct CapsuleGeometry {
    double r_max = 0.0285;      // m, inner radius of the shell (all liquid)
    double r_min = mass_conserving_r_min(0.0285, PcmSpec{});  // m, all solid
    double e_wall = 0.0036;     // m, polymer coating
    double kappa_wall = 0.2;    // W/(m K)
    int n_capsules = 400;

    double r_outer() const noexcept { return r_max + e_wall; }

    // PCM mass of one capsule.
    double pcm_mass(const PcmSpec& pcm) const noexcept {
        return pcm.rho_liquid * (4.0 * M_PI / 3.0) * r_max * r_max * r_max;
    }

    void validate(const PcmSpec& pcm) const {
        if (!(r_min > 0.0 && r_min < r_max)) throw ConfigError("capsule: require 0 < r_min < r_max");
        if (!(e_wall > 0.0)) throw ConfigError("capsule.e_wall must be positive");
        if (!(kappa_wall > 0.0)) throw ConfigError("capsule.kappa_wall must be positive");
        if (n_capsules <= 0) throw ConfigError("capsule.n_capsules must be positive");
        const double expected = mass_conserving_r_min(r_max, pcm);
        if (std::abs(r_min - expected) > 1e-3 * expected)
            throw ConfigError("capsule.r_min violates mass conservation by more than 0.1%");
    }
};

struct PipeSpec {
    double r_inner = 0.0218;   // m
    double e_wall = 0.0036;    // m
    double length = 0.8;       // m
    int count = 50;
    double kappa_wall = 45.0;  // W/(m K)

    double r_outer() const noexcept { return r_inner + e_wall; }

    void validate(std::string_view name) const {
        if (!(r_inner > 0.0 && e_wall > 0.0 && length > 0.0 && count > 0 && kappa_wall > 0.0))
            throw ConfigError(std::string(name) + ": all pipe parameters must be strictly positive");
    }
};

// Saturation data of the refrigerant at its (constant) working pressure.
struct RefrigerantSpec {
    double h_lat = 197770.0;          // J/kg
    double rho_sat_liquid = 1291.60;  // kg/m3
    double rho_sat_vapour = 6.76;     // kg/m3
    double sigma = 0.01336;           // N/m
    double h_sat_liquid = 145257.0;   // J/kg
    double chi_mean = 0.7775;         // mean two-phase vapour quality
    double P = 126500.0;              // Pa
    double T_sat = -41.08;            // degC

    double h_sat_vapour() const noexcept { return h_sat_liquid + h_lat; }
    double quality(double h) const noexcept { return (h - h_sat_liquid) / h_lat; }

    void validate() const {
        if (!(chi_mean >= 0.0 && chi_mean <= 1.0)) throw ConfigError("refrigerant.chi_mean must lie in [0, 1]");
        if (!(rho_sat_liquid > rho_sat_vapour && rho_sat_vapour > 0.0))
            throw ConfigError("refrigerant: require rho_sat_liquid > rho_sat_vapour > 0");
        if (!(h_lat > 0.0 && sigma > 0.0 && P > 0.0)) throw ConfigError("refrigerant: h_lat, sigma, P must be positive");
    }
};

struct TankSpec {
    double m_int = 56.37;      // kg of intermediate fluid
    double P_int = 101325.0;   // Pa
    double g = 9.81;           // m/s2
    double T_env = 25.0;       // degC, unused while the tank is adiabatic

    void validate() const {
        if (!(m_int > 0.0)) throw ConfigError("tank.m_int must be positive");
        if (!(g > 0.0)) throw ConfigError("tank.g must be positive");
    }
};

// ---------------------------------------------------------------------------
// PCM enthalpy-indexed state functions
// ---------------------------------------------------------------------------

inline double layer_charge_ratio(double h, const PcmSpec& spec) noexcept {
    return (spec.h_lat_plus() - h) / (spec.h_lat_plus() - spec.h_lat_minus());
}

inline double pcm_temperature_of_enthalpy(double h, const PcmSpec& spec) noexcept {
    if (h < spec.h_lat_minus()) return spec.T_lat - (spec.h_lat_minus() - h) / spec.cp_solid;
    if (h > spec.h_lat_plus()) return spec.T_lat + (h - spec.h_lat_plus()) / spec.cp_liquid;
    return spec.T_lat;
}

inline double pcm_density_of_enthalpy(double h, const PcmSpec& spec) noexcept {
    if (h < spec.h_lat_minus()) return spec.rho_solid;
    if (h > spec.h_lat_plus()) return spec.rho_liquid;
    return spec.rho_liquid + layer_charge_ratio(h, spec) * (spec.rho_solid - spec.rho_liquid);
}

inline double pcm_conductivity_of_enthalpy(double h, const PcmSpec& spec) noexcept {
    const double liquid = spec.kappa_eff_liquid();
    if (h < spec.h_lat_minus()) return spec.kappa_solid;
    if (h > spec.h_lat_plus()) return liquid;
    return liquid + layer_charge_ratio(h, spec) * (spec.kappa_solid - liquid);
}

inline bool is_latent(double h, const PcmSpec& spec) noexcept {
    return h >= spec.h_lat_minus() && h <= spec.h_lat_plus();
}

// ---------------------------------------------------------------------------
// Fluid property provider
// ---------------------------------------------------------------------------

enum class Fluid { intermediate, secondary, refrigerant_vapour, refrigerant_sat_liquid };

inline constexpr std::array<std::string_view, 4> fluid_names{
    "intermediate", "secondary", "refrigerant_vapour", "refrigerant_sat_liquid"};

inline std::string_view to_string(Fluid f) noexcept { return fluid_names[static_cast<std::size_t>(f)]; }

inline Fluid fluid_from_string(std::string_view name) {
    for (std::size_t i = 0; i < fluid_names.size(); ++i)
        if (fluid_names[i] == name) return static_cast<Fluid>(i);
    throw ConfigError("unknown fluid id '" + std::string(name) + "'");
}

struct FluidProps {
    double rho;    // kg/m3
    double cp;     // J/(kg K)
    double kappa;  // W/(m K)
    double mu;     // kg/(m s)
    double beta;   // 1/K
    std::optional<double> sigma;  // N/m
};

// A property varying linearly between its values at the two ends of the
// validity window.
struct LinearProperty {
    double at_low = 0.0;
    double at_high = 0.0;

    double at(double fraction) const noexcept { return at_low + fraction * (at_high - at_low); }
};

struct FluidModel {
    LinearProperty rho, cp, kappa, mu, beta;
    std::optional<double> sigma;
};

struct PropertyEvaluation {
    FluidProps props;
    bool extrapolated = false;  // T was outside the window and got clamped
};

// Temperature-dependent properties by linear interpolation across a
// temperature window. Immutable once built; outside the window the endpoint
// value is returned and the evaluation is flagged.
class PropertyModel {
public:
    double window_low = -41.08;
    double window_high = -20.0;
    std::array<FluidModel, 4> fluids = default_fluids();

    static std::array<FluidModel, 4> default_fluids() {
        std::array<FluidModel, 4> f{};
        // 60 % v/v ethylene glycol (bath)
        f[0] = FluidModel{{1113.2, 1080.1}, {2720.2, 3159.6}, {0.3905, 0.4213}, {0.1174, 0.066}, {0.00044, 0.00057}, {}};
        // 60 % v/v propylene glycol (secondary loop). Expansion coefficient is not
        // needed by any correlation on this fluid; a nominal constant is kept.
        f[1] = FluidModel{{1068.4, 1040.7}, {3411.4, 3567.1}, {0.3624, 0.3692}, {0.2213, 0.0073}, {0.0005, 0.0005}, {}};
        // R404a superheated vapour at the working pressure (ideal-gas beta)
        f[2] = FluidModel{{6.76, 6.40}, {803.19, 810.69}, {0.0087, 0.0095}, {9.3e-6, 1.0e-5},
                          {1.0 / 232.07, 1.0 / 253.15}, {}};
        // R404a saturated liquid: a function of pressure only
        f[3] = FluidModel{{1291.6, 1291.6}, {1270.0, 1270.0}, {0.0875, 0.0875}, {2.8e-4, 2.8e-4},
                          {2.6e-3, 2.6e-3}, 0.01336};
        return f;
    }

    const FluidModel& model(Fluid f) const noexcept { return fluids[static_cast<std::size_t>(f)]; }
    FluidModel& model(Fluid f) noexcept { return fluids[static_cast<std::size_t>(f)]; }

    // Pressure is accepted for interface completeness; every configured fluid
    // works at a fixed pressure.
    PropertyEvaluation evaluate(Fluid fluid, double T, double /*P*/ = 0.0) const noexcept {
        PropertyEvaluation out;
        double frac = (T - window_low) / (window_high - window_low);
        if (!(frac >= 0.0)) {
            frac = 0.0;
            out.extrapolated = true;
        } else if (frac > 1.0) {
            frac = 1.0;
            out.extrapolated = true;
        }
        const FluidModel& m = model(fluid);
        out.props = FluidProps{m.rho.at(frac), m.cp.at(frac), m.kappa.at(frac), m.mu.at(frac), m.beta.at(frac), m.sigma};
        return out;
    }

    void validate() const {
        if (!(window_high > window_low)) throw ConfigError("properties.window: high must exceed low");
        for (std::size_t i = 0; i < fluids.size(); ++i) {
            const FluidModel& m = fluids[i];
            for (const LinearProperty* p : {&m.rho, &m.cp, &m.kappa, &m.mu, &m.beta})
                if (!(p->at_low > 0.0 && p->at_high > 0.0))
                    throw ConfigError("properties." + std::string(fluid_names[i]) + ": values must be positive");
        }
    }
};

inline FluidProps fluid_properties(const PropertyModel& model, Fluid fluid, double T_film, double P = 0.0) {
    return model.evaluate(fluid, T_film, P).props;
}

} // namespace pcmtes

#endif
