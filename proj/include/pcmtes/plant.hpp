#ifndef PCMTES_PLANT_HPP
#define PCMTES_PLANT_HPP

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "pcmtes/errors.hpp"
#include "pcmtes/properties.hpp"

namespace pcmtes {

// Marks a quantity that does not exist in the current operating state
// (e.g. the secondary outlet temperature while the secondary loop is stopped).
inline constexpr double absent = std::numeric_limits<double>::quiet_NaN();

inline bool present(double x) noexcept { return !std::isnan(x); }

inline double or_zero(double x) noexcept { return present(x) ? x : 0.0; }

enum class CycleMode { charging, discharging, standby };

inline std::string_view to_string(CycleMode m) noexcept {
    switch (m) {
    case CycleMode::charging: return "charge";
    case CycleMode::discharging: return "discharge";
    case CycleMode::standby: return "standby";
    }
    return "standby";
}

inline CycleMode cycle_mode_from_string(std::string_view s) {
    if (s == "charge" || s == "charging") return CycleMode::charging;
    if (s == "discharge" || s == "discharging") return CycleMode::discharging;
    if (s == "standby") return CycleMode::standby;
    throw ConfigError("unknown step mode '" + std::string(s) + "' (expected charge, discharge or standby)");
}

struct OperatingInputs {
    double mdot_ref = 0.00918;   // kg/s, total over all refrigerant pipes
    double mdot_sec = 0.074;     // kg/s, total over all secondary pipes
    double T_sec_in = -20.0;     // degC
    double T_ref_in = -41.08;    // degC
    double h_ref_in = 255000.0;  // J/kg
    double T_env = 25.0;         // degC

    void validate() const {
        if (mdot_ref < 0.0 || mdot_sec < 0.0) throw ConfigError("inputs: mass flows must be non-negative");
    }

    // Flows gated by the step mode: refrigerant only while charging, secondary
    // only while discharging.
    OperatingInputs gated(CycleMode mode) const {
        OperatingInputs out = *this;
        if (mode != CycleMode::charging) out.mdot_ref = 0.0;
        if (mode != CycleMode::discharging) out.mdot_sec = 0.0;
        return out;
    }
};

// Everything that describes the physical tank.
struct Plant {
    PcmSpec pcm;
    CapsuleGeometry capsule;
    PipeSpec ref_pipe;
    PipeSpec sec_pipe;
    RefrigerantSpec refrigerant;
    TankSpec tank;
    PropertyModel properties;

    void validate() const {
        pcm.validate();
        capsule.validate(pcm);
        ref_pipe.validate("ref_pipe");
        sec_pipe.validate("sec_pipe");
        refrigerant.validate();
        tank.validate();
        properties.validate();
    }

    double capsule_mass() const noexcept { return capsule.pcm_mass(pcm); }

    FluidProps bath(double T) const { return properties.evaluate(Fluid::intermediate, T, tank.P_int).props; }
    double bath_cp(double T) const { return bath(T).cp; }
};

} // namespace pcmtes

#endif
