#ifndef PCMTES_NETWORK_HPP
#define PCMTES_NETWORK_HPP

#include <cmath>
#include <limits>

#include "pcmtes/errors.hpp"
#include "pcmtes/properties.hpp"

namespace pcmtes {

// Returned where a resistance is unbounded (a shell with no core, a pipe zone
// of zero length). Output writers emit it as an empty field.
inline constexpr double infinite_resistance = std::numeric_limits<double>::infinity();

inline bool is_infinite_resistance(double R) noexcept { return std::isinf(R); }

// Conduction through a spherical shell.
inline double r_cond_spherical_shell(double r_inner, double r_outer, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("r_cond_spherical_shell: conductivity must be positive");
    if (r_inner > r_outer) throw DomainError("r_cond_spherical_shell: inner radius exceeds outer radius");
    if (r_inner == r_outer) return 0.0;
    if (!(r_inner > 0.0)) return infinite_resistance;
    return (1.0 / r_inner - 1.0 / r_outer) / (4.0 * M_PI * kappa);
}

inline double r_conv_sphere_ext(double alpha, double r_surface) {
    if (!(alpha > 0.0)) throw DomainError("r_conv_sphere_ext: alpha must be positive");
    if (!(r_surface > 0.0)) throw DomainError("r_conv_sphere_ext: radius must be positive");
    return 1.0 / (alpha * 4.0 * M_PI * r_surface * r_surface);
}

struct ResistanceStack {
    double r_conv_int = 0.0;
    double r_cond_wall = 0.0;
    double r_conv_ext = 0.0;
    double r_cond_internal_shell = 0.0;  // spheres only

    double total() const noexcept { return r_conv_int + r_cond_wall + r_conv_ext + r_cond_internal_shell; }
    // Resistance between the fluid inside the pipe and the outer wall surface.
    double inner_to_wall() const noexcept { return r_conv_int + r_cond_wall; }
};

inline double r_cond_pipe_wall(const PipeSpec& pipe, double zone_fraction) {
    if (zone_fraction < 0.0 || zone_fraction > 1.0) throw DomainError("pipe zone fraction outside [0, 1]");
    if (zone_fraction == 0.0) return infinite_resistance;
    return std::log(pipe.r_outer() / pipe.r_inner) / (pipe.kappa_wall * 2.0 * M_PI * pipe.length * zone_fraction);
}

// Inner convection, wall conduction and outer convection over the fraction
// zone_fraction of one pipe.
inline ResistanceStack r_pipe_stack(double alpha_int, double alpha_ext, const PipeSpec& pipe, double zone_fraction) {
    if (zone_fraction < 0.0 || zone_fraction > 1.0) throw DomainError("pipe zone fraction outside [0, 1]");
    ResistanceStack s;
    if (zone_fraction == 0.0) {
        s.r_conv_int = s.r_cond_wall = s.r_conv_ext = infinite_resistance;
        return s;
    }
    if (!(alpha_int > 0.0 && alpha_ext > 0.0)) throw DomainError("r_pipe_stack: alphas must be positive");
    const double len = pipe.length * zone_fraction;
    s.r_cond_wall = r_cond_pipe_wall(pipe, zone_fraction);
    s.r_conv_int = 1.0 / (alpha_int * 2.0 * M_PI * pipe.r_inner * len);
    s.r_conv_ext = 1.0 / (alpha_ext * 2.0 * M_PI * pipe.r_outer() * len);
    return s;
}

enum class FlowArrangement { parallel, counter, infinite_reservoir };

inline double ntu(double resistance_total, double c_min) {
    if (!(resistance_total > 0.0) || !(c_min > 0.0)) throw DomainError("ntu: resistance and capacity rate must be positive");
    return 1.0 / (resistance_total * c_min);
}

inline double effectiveness(double ntu_value, double c_rat, FlowArrangement arrangement) {
    if (ntu_value < 0.0) throw DomainError("effectiveness: negative NTU");
    if (c_rat < 0.0 || c_rat > 1.0) throw DomainError("effectiveness: capacity ratio outside [0, 1]");
    if (std::isinf(ntu_value)) {
        if (arrangement == FlowArrangement::parallel) return 1.0 / (1.0 + c_rat);
        return 1.0;
    }
    switch (arrangement) {
    case FlowArrangement::parallel:
        return -std::expm1(-ntu_value * (1.0 + c_rat)) / (1.0 + c_rat);
    case FlowArrangement::counter: {
        if (std::abs(1.0 - c_rat) < 1e-12) return ntu_value / (1.0 + ntu_value);
        const double e = std::exp(-ntu_value * (1.0 - c_rat));
        return (1.0 - e) / (1.0 - c_rat * e);
    }
    case FlowArrangement::infinite_reservoir:
        break;
    }
    return -std::expm1(-ntu_value);
}

} // namespace pcmtes

#endif
