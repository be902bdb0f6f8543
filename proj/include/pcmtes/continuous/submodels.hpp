#ifndef PCMTES_CONTINUOUS_SUBMODELS_HPP
#define PCMTES_CONTINUOUS_SUBMODELS_HPP

// Exchange between the intermediate fluid and the three families of elements
// immersed in it. Every Q here is the heat flowing out of the intermediate
// fluid into one element (one capsule or one pipe); it is the cooling power
// the element delivers to the bath.

#include <algorithm>
#include <cmath>

#include "pcmtes/correlations.hpp"
#include "pcmtes/engine/newton.hpp"
#include "pcmtes/network.hpp"
#include "pcmtes/plant.hpp"

namespace pcmtes {

struct Diagnostics {
    bool property_extrapolated = false;
    bool correlation_out_of_range = false;

    void merge(const Diagnostics& o) noexcept {
        property_extrapolated |= o.property_extrapolated;
        correlation_out_of_range |= o.correlation_out_of_range;
    }
};

struct HtcSnapshot {
    double alpha_pcm_ext = absent;
    double alpha_ref2_int = absent;
    double alpha_ref2_ext = absent;
    double alpha_refv_int = absent;
    double alpha_refv_ext = absent;
    double alpha_sec_int = absent;
    double alpha_sec_ext = absent;
};

namespace detail {

inline FluidProps props_at(const Plant& plant, Fluid fluid, double T, Diagnostics& diag) {
    const PropertyEvaluation e = plant.properties.evaluate(fluid, T);
    diag.property_extrapolated |= e.extrapolated;
    return e.props;
}

inline double bath_pipe_alpha(const Plant& plant, double T_int, double T_wall, double L, Diagnostics& diag) {
    const FluidProps bath = props_at(plant, Fluid::intermediate, 0.5 * (T_int + T_wall), diag);
    const ConvectionCoefficient c = pipe_natural_convection(bath, std::abs(T_int - T_wall), L, plant.tank.g);
    diag.correlation_out_of_range |= c.out_of_range;
    return c.alpha;
}

inline NewtonOptions solver_options(double scale) {
    NewtonOptions o;
    o.scale = std::max(scale, 1e-12);
    return o;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Capsule
// ---------------------------------------------------------------------------

struct CapsuleExchange {
    double Q = 0.0;        // W into one capsule
    double T_wall = 0.0;   // outer coating surface
    double alpha_ext = 0.0;
    Diagnostics diag;
};

// Heat from the bath at T_int through convection, the coating and an inner
// conduction resistance R_inner to PCM at T_core. The external coefficient
// depends on the coating surface temperature, which is solved for.
inline CapsuleExchange capsule_exchange(const Plant& plant, double T_int, double T_core, double R_inner,
                                        double T_wall_guess = absent) {
    const CapsuleGeometry& cap = plant.capsule;
    const double R_wall = r_cond_spherical_shell(cap.r_max, cap.r_outer(), cap.kappa_wall);
    const double D = 2.0 * cap.r_outer();
    const double area = 4.0 * M_PI * cap.r_outer() * cap.r_outer();

    CapsuleExchange out;
    auto alpha_at = [&](double T_wall, Diagnostics& diag) {
        const FluidProps bath = detail::props_at(plant, Fluid::intermediate, 0.5 * (T_wall + T_int), diag);
        return sphere_natural_convection(bath, std::abs(T_int - T_wall), D, plant.tank.g).alpha;
    };
    const double R_core = R_inner + R_wall;
    if (is_infinite_resistance(R_core) || T_int == T_core) {
        out.T_wall = T_int;
        out.alpha_ext = alpha_at(T_int, out.diag);
        return out;
    }
    Diagnostics scratch;
    auto residual = [&](double T_wall) {
        return (T_wall - T_core) / R_core - (T_int - T_wall) * alpha_at(T_wall, scratch) * area;
    };
    const double lo = std::min(T_core, T_int), hi = std::max(T_core, T_int);
    const ScalarRoot root = solve_bracketed(residual, lo, hi, present(T_wall_guess) ? T_wall_guess : 0.5 * (lo + hi),
                                            detail::solver_options(std::abs(T_int - T_core) / R_core));
    out.T_wall = root.x;
    out.alpha_ext = alpha_at(root.x, out.diag);
    out.Q = (out.T_wall - T_core) / R_core;
    return out;
}

// ---------------------------------------------------------------------------
// Refrigerant
// ---------------------------------------------------------------------------

struct RefrigerantResult {
    int mode = 0;            // 0: no flow, 1: superheated outlet, 2: two-phase outlet
    double Q_ref2 = 0.0;     // W per pipe
    double Q_refv = 0.0;     // W per pipe
    double zeta_ref = absent;
    double T_ref_out = absent;
    double h_ref_out = absent;
    double T_ref2_wall = absent;
    double T_refv_wall = absent;
    double alpha_ref2_int = absent;
    double alpha_ref2_ext = absent;
    double alpha_refv_int = absent;
    double alpha_refv_ext = absent;
    double mode_margin = -1.0;  // zeta - 1 in mode 1; equivalent zeta - 1 in mode 2
    Diagnostics diag;

    double Q_ref() const noexcept { return Q_ref2 + Q_refv; }
};

struct RefrigerantGuess {
    double zeta = absent;
    double Q_ref2 = absent;
    double T_out = absent;
};

namespace detail {

struct TwoPhaseZone {
    double alpha_int, alpha_ext, T_wall, capacity;
};

inline TwoPhaseZone two_phase_zone(const Plant& plant, const OperatingInputs& in, double T_int, double zeta,
                                   double Q2, Diagnostics& diag) {
    const PipeSpec& pipe = plant.ref_pipe;
    const FluidProps liquid = props_at(plant, Fluid::refrigerant_sat_liquid, in.T_ref_in, diag);
    const KlimenkoResult k = klimenko_two_phase_alpha({in.mdot_ref, Q2, zeta}, pipe, plant.refrigerant, liquid,
                                                      pipe.kappa_wall, plant.tank.g);
    const ResistanceStack inner = r_pipe_stack(k.alpha, 1.0, pipe, zeta);
    const double T_wall = in.T_ref_in + Q2 * inner.inner_to_wall();
    const double alpha_ext = bath_pipe_alpha(plant, T_int, T_wall, zeta * pipe.length, diag);
    const ResistanceStack s = r_pipe_stack(k.alpha, alpha_ext, pipe, zeta);
    return {k.alpha, alpha_ext, T_wall, (T_int - in.T_ref_in) / s.total()};
}

struct VapourZone {
    double Q, T_wall, alpha_int, alpha_ext, residual;
};

inline VapourZone vapour_zone(const Plant& plant, const OperatingInputs& in, double T_int, double zeta, double T_out,
                              Diagnostics& diag) {
    const PipeSpec& pipe = plant.ref_pipe;
    const double frac = 1.0 - zeta;
    const double m_pipe = in.mdot_ref / pipe.count;
    const double T_mean = 0.5 * (in.T_ref_in + T_out);
    const FluidProps vap = props_at(plant, Fluid::refrigerant_vapour, T_mean, diag);
    const double C = vap.cp * m_pipe;
    const double Q = C * (T_out - in.T_ref_in);
    const double alpha_int = pipe_forced_convection(vap, in.mdot_ref, pipe, frac * pipe.length).alpha;
    const ResistanceStack inner = r_pipe_stack(alpha_int, 1.0, pipe, frac);
    const double T_wall = T_mean + Q * inner.inner_to_wall();
    const double alpha_ext = bath_pipe_alpha(plant, T_int, T_wall, frac * pipe.length, diag);
    const ResistanceStack s = r_pipe_stack(alpha_int, alpha_ext, pipe, frac);
    const double eps = effectiveness(ntu(s.total(), C), 0.0, FlowArrangement::infinite_reservoir);
    return {Q, T_wall, alpha_int, alpha_ext, Q - eps * C * (T_int - in.T_ref_in)};
}

} // namespace detail

// Refrigerant pipes. Mode 1 fixes the two-phase duty from the enthalpy gap to
// saturated vapour and solves for the two-phase length; the remaining length
// superheats the vapour. When even the full pipe length cannot absorb that
// duty, the outlet stays two-phase (mode 2).
inline RefrigerantResult refrigerant_submodel(const Plant& plant, const OperatingInputs& in, double T_int,
                                              const RefrigerantGuess& guess = {}) {
    RefrigerantResult out;
    if (!(in.mdot_ref > 0.0)) return out;
    const PipeSpec& pipe = plant.ref_pipe;
    const RefrigerantSpec& ref = plant.refrigerant;
    const double m_pipe = in.mdot_ref / pipe.count;
    const double h_vap = ref.h_sat_vapour();
    const double Q2_required = std::max(0.0, m_pipe * (h_vap - in.h_ref_in));
    const double dT = T_int - in.T_ref_in;
    Diagnostics scratch;

    auto finish_vapour = [&](double zeta) {
        out.mode = 1;
        out.zeta_ref = zeta;
        out.mode_margin = zeta - 1.0;
        const double h_vap_in = std::max(in.h_ref_in, h_vap);
        if (zeta >= 1.0 || dT == 0.0) {
            out.T_ref_out = in.T_ref_in;
            out.h_ref_out = h_vap_in;
            return;
        }
        auto res = [&](double T_out) { return detail::vapour_zone(plant, in, T_int, zeta, T_out, scratch).residual; };
        const double lo = std::min(in.T_ref_in, T_int), hi = std::max(in.T_ref_in, T_int);
        const double C_bound = plant.properties.evaluate(Fluid::refrigerant_vapour, in.T_ref_in).props.cp * m_pipe;
        const ScalarRoot root = solve_bracketed(res, lo, hi, guess.T_out,
                                                detail::solver_options(C_bound * std::abs(dT)));
        const detail::VapourZone v = detail::vapour_zone(plant, in, T_int, zeta, root.x, out.diag);
        out.Q_refv = v.Q;
        out.T_ref_out = root.x;
        out.h_ref_out = h_vap_in + v.Q / m_pipe;
        out.T_refv_wall = v.T_wall;
        out.alpha_refv_int = v.alpha_int;
        out.alpha_refv_ext = v.alpha_ext;
    };

    if (Q2_required == 0.0) {
        finish_vapour(0.0);
        return out;
    }

    auto capacity_gap = [&](double zeta) {
        return detail::two_phase_zone(plant, in, T_int, zeta, Q2_required, scratch).capacity - Q2_required;
    };
    const double zeta_floor = 1e-9;
    if (dT > 0.0 && capacity_gap(1.0) > 0.0) {
        double zeta = zeta_floor;
        if (capacity_gap(zeta_floor) < 0.0) {
            const ScalarRoot root = solve_bracketed(capacity_gap, zeta_floor, 1.0, guess.zeta,
                                                    detail::solver_options(Q2_required));
            zeta = root.x;
        }
        const detail::TwoPhaseZone z = detail::two_phase_zone(plant, in, T_int, zeta, Q2_required, out.diag);
        out.Q_ref2 = Q2_required;
        out.T_ref2_wall = z.T_wall;
        out.alpha_ref2_int = z.alpha_int;
        out.alpha_ref2_ext = z.alpha_ext;
        finish_vapour(zeta);
        return out;
    }

    // Mode 2: whole pipe two-phase, duty limited by the exchanger.
    out.mode = 2;
    out.zeta_ref = 1.0;
    out.Q_refv = 0.0;
    out.T_ref_out = in.T_ref_in;
    double Q2 = 0.0;
    if (dT != 0.0) {
        auto res = [&](double q) { return detail::two_phase_zone(plant, in, T_int, 1.0, q, scratch).capacity - q; };
        const double bound = dT / r_cond_pipe_wall(pipe, 1.0);
        const ScalarRoot root = solve_bracketed(res, std::min(0.0, bound), std::max(0.0, bound), guess.Q_ref2,
                                                detail::solver_options(std::abs(bound)));
        Q2 = root.x;
    }
    const detail::TwoPhaseZone z = detail::two_phase_zone(plant, in, T_int, 1.0, Q2, out.diag);
    out.Q_ref2 = Q2;
    out.h_ref_out = in.h_ref_in + Q2 / m_pipe;
    out.T_ref2_wall = z.T_wall;
    out.alpha_ref2_int = z.alpha_int;
    out.alpha_ref2_ext = z.alpha_ext;
    out.mode_margin = Q2 > 0.0 ? Q2_required / Q2 - 1.0 : 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Secondary fluid
// ---------------------------------------------------------------------------

struct SecondaryResult {
    bool active = false;
    double Q_sec = 0.0;      // W per pipe
    double T_sec_out = absent;
    double T_sec_wall = absent;
    double alpha_int = absent;
    double alpha_ext = absent;
    Diagnostics diag;
};

namespace detail {

struct SecondaryState {
    double Q, T_wall, alpha_int, alpha_ext, residual;
};

inline SecondaryState secondary_state(const Plant& plant, const OperatingInputs& in, double T_int, double T_out,
                                      Diagnostics& diag) {
    const PipeSpec& pipe = plant.sec_pipe;
    const double T_mean = 0.5 * (in.T_sec_in + T_out);
    const FluidProps sec = props_at(plant, Fluid::secondary, T_mean, diag);
    const double C = sec.cp * in.mdot_sec / pipe.count;
    const double Q = C * (T_out - in.T_sec_in);
    const double alpha_int = pipe_forced_convection(sec, in.mdot_sec, pipe, pipe.length).alpha;
    const ResistanceStack inner = r_pipe_stack(alpha_int, 1.0, pipe, 1.0);
    const double T_wall = T_mean + Q * inner.inner_to_wall();
    const double alpha_ext = bath_pipe_alpha(plant, T_int, T_wall, pipe.length, diag);
    const ResistanceStack s = r_pipe_stack(alpha_int, alpha_ext, pipe, 1.0);
    const double eps = effectiveness(ntu(s.total(), C), 0.0, FlowArrangement::infinite_reservoir);
    return {Q, T_wall, alpha_int, alpha_ext, Q - eps * C * (T_int - in.T_sec_in)};
}

} // namespace detail

inline SecondaryResult secondary_submodel(const Plant& plant, const OperatingInputs& in, double T_int,
                                          double T_out_guess = absent) {
    SecondaryResult out;
    if (!(in.mdot_sec > 0.0)) return out;
    out.active = true;
    double T_out = in.T_sec_in;
    if (T_int != in.T_sec_in) {
        Diagnostics scratch;
        auto res = [&](double T) { return detail::secondary_state(plant, in, T_int, T, scratch).residual; };
        const double C_bound = plant.properties.evaluate(Fluid::secondary, in.T_sec_in).props.cp * in.mdot_sec /
                               plant.sec_pipe.count;
        const ScalarRoot root =
            solve_bracketed(res, std::min(in.T_sec_in, T_int), std::max(in.T_sec_in, T_int), T_out_guess,
                            detail::solver_options(C_bound * std::abs(T_int - in.T_sec_in)));
        T_out = root.x;
    }
    const detail::SecondaryState s = detail::secondary_state(plant, in, T_int, T_out, out.diag);
    out.Q_sec = s.Q;
    out.T_sec_out = T_out;
    out.T_sec_wall = s.T_wall;
    out.alpha_int = s.alpha_int;
    out.alpha_ext = s.alpha_ext;
    return out;
}

} // namespace pcmtes

#endif
