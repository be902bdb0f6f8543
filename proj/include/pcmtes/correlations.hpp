#ifndef PCMTES_CORRELATIONS_HPP
#define PCMTES_CORRELATIONS_HPP

// Dimensionless groups and Nusselt correlations for the exchangers in the
// tank: natural convection around spheres and vertical pipes, forced
// single-phase flow inside pipes, and Klimenko's two-phase method.

#include <algorithm>
#include <cmath>

#include "pcmtes/errors.hpp"
#include "pcmtes/properties.hpp"

namespace pcmtes {

struct DimensionlessSet {
    double Gr = 0.0, Pr = 0.0, Ra = 0.0, Re = 0.0, Gz = 0.0, Nu = 0.0;
};

inline double grashof(double beta, double dT_abs, double L, double rho, double mu, double g) {
    if (!(mu > 0.0)) throw DomainError("grashof: viscosity must be positive");
    const double nu = mu / rho;
    return g * beta * dT_abs * L * L * L / (nu * nu);
}

inline double prandtl(double cp, double mu, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("prandtl: conductivity must be positive");
    return cp * mu / kappa;
}

// Churchill, external natural convection around a sphere.
inline double nusselt_sphere_churchill(double Ra, double Pr) {
    if (Ra < 0.0) throw DomainError("nusselt_sphere_churchill: negative Rayleigh number");
    if (!(Pr > 0.0)) throw DomainError("nusselt_sphere_churchill: Prandtl must be positive");
    const double denom = std::pow(1.0 + std::pow(0.469 / Pr, 9.0 / 16.0), 4.0 / 9.0);
    return 2.0 + 0.589 * std::pow(Ra, 0.25) / denom;
}

inline constexpr double mcadams_ra_low = 1e4;
inline constexpr double mcadams_ra_switch = 1e9;
inline constexpr double mcadams_ra_high = 1e13;
inline constexpr double mcadams_ra_floor = 1.0;

inline bool mcadams_out_of_range(double Ra) noexcept {
    return Ra < mcadams_ra_low || Ra > mcadams_ra_high;
}

// McAdams, natural convection along a vertical surface. Outside [1e4, 1e13]
// the fit is extrapolated and callers flag the record. Below Ra = 1 the value
// is held, so a zero temperature difference still gives a finite resistance.
inline double nusselt_vertical_pipe_mcadams(double Ra) noexcept {
    Ra = std::max(Ra, mcadams_ra_floor);
    if (Ra <= mcadams_ra_switch) return 0.59 * std::pow(Ra, 0.25);
    return 0.10 * std::cbrt(Ra);
}

// Smooth-pipe friction coefficient used by Gnielinski.
inline double friction_factor(double Re) {
    const double bracket = 0.790 * std::log(Re) - 1.64;
    if (!(Re > 0.0) || !(bracket > 0.0)) throw DomainError("friction_factor: Reynolds number too small");
    return 1.0 / (bracket * bracket);
}

inline double graetz(double r, double l_effective, double Pr, double Re) {
    if (!(l_effective > 0.0)) throw DomainError("graetz: effective length must be positive");
    return 2.0 * r / l_effective * Pr * Re;
}

inline constexpr double laminar_reynolds_limit = 3000.0;

// Baehr (developing laminar flow, uniform wall temperature).
inline double nusselt_baehr(double Pr, double Gz) {
    if (!(Gz > 0.0)) throw DomainError("nusselt_baehr: Graetz number must be positive");
    const double a = std::tanh(2.264 * std::pow(Gz, -1.0 / 3.0) + 1.7 * std::pow(Gz, -2.0 / 3.0));
    const double b = 0.0499 * Gz * std::tanh(1.0 / Gz);
    const double c = std::tanh(2.432 * std::pow(Pr, 1.0 / 6.0) * std::pow(Gz, -1.0 / 6.0));
    return (3.66 / a + b) / c;
}

inline double nusselt_gnielinski(double Re, double Pr) {
    const double f8 = friction_factor(Re) / 8.0;
    return f8 * (Re - 1000.0) * Pr / (1.0 + 12.7 * std::sqrt(f8) * (std::pow(Pr, 2.0 / 3.0) - 1.0));
}

// Forced convection inside a pipe: Baehr up to Re = 3000, Gnielinski above.
inline double nusselt_internal(double Re, double Pr, double Gz) {
    if (Re < 0.0) throw DomainError("nusselt_internal: negative Reynolds number");
    if (!(Pr > 0.0)) throw DomainError("nusselt_internal: Prandtl must be positive");
    if (Re <= laminar_reynolds_limit) return nusselt_baehr(Pr, Gz);
    return nusselt_gnielinski(Re, Pr);
}

// ---------------------------------------------------------------------------
// Klimenko two-phase method
// ---------------------------------------------------------------------------

inline constexpr double klimenko_phi_bubbly = 12000.0;
inline constexpr double klimenko_phi_convective = 20000.0;

// Mass-flux-free form of Klimenko's phi function.
inline double klimenko_phi(double zeta_ref, const PipeSpec& geom, double chi, double chi_in, double chi_out,
                           double rho_l, double rho_v) {
    if (!(zeta_ref > 0.0)) throw DomainError("klimenko_phi: zone fraction must be positive");
    const double dchi = chi_out - chi_in;
    if (!(dchi > 0.0)) throw DomainError("klimenko_phi: outlet quality must exceed inlet quality");
    return 2.0 * geom.length * zeta_ref / (geom.r_inner * dchi) * (1.0 + chi * (rho_l / rho_v - 1.0)) *
           std::cbrt(rho_v / rho_l);
}

inline double klimenko_nu_bubbly(double q_reduced, double p_reduced, double Pr_l, double wall_ratio) {
    return 0.0076 * std::pow(q_reduced, 0.6) * std::sqrt(p_reduced) * std::pow(Pr_l, -1.0 / 3.0) *
           std::pow(wall_ratio, 0.15);
}

inline double klimenko_nu_convective(double Re_prime, double Pr_l, double density_ratio, double wall_ratio) {
    return 0.087 * std::pow(Re_prime, 0.6) * std::pow(Pr_l, 1.0 / 6.0) * std::pow(density_ratio, 0.2) *
           std::pow(wall_ratio, 0.09);
}

enum class KlimenkoBranch { bubbly, convective, maximum };

inline KlimenkoBranch klimenko_branch(double phi) noexcept {
    if (phi <= klimenko_phi_bubbly) return KlimenkoBranch::bubbly;
    if (phi > klimenko_phi_convective) return KlimenkoBranch::convective;
    return KlimenkoBranch::maximum;
}

struct TwoPhaseFlow {
    double mdot_total;    // kg/s over all pipes
    double Q_two_phase;   // W, per pipe
    double zeta_ref;      // fraction of the pipe length in two-phase state
};

struct KlimenkoResult {
    double alpha;          // combined coefficient
    double alpha_prime;    // Klimenko estimate
    double alpha_liquid;   // zero-quality liquid coefficient
    double phi;
    KlimenkoBranch branch;
};

inline KlimenkoResult klimenko_two_phase_alpha(const TwoPhaseFlow& flow, const PipeSpec& geom,
                                               const RefrigerantSpec& ref, const FluidProps& liquid,
                                               double kappa_wall, double g) {
    if (!(flow.zeta_ref > 0.0)) throw DomainError("klimenko: zone fraction must be positive");
    if (!(flow.mdot_total > 0.0)) throw DomainError("klimenko: refrigerant flow must be positive");
    if (!(geom.r_inner > 0.0 && geom.length > 0.0 && geom.count > 0)) throw DomainError("klimenko: degenerate pipe");

    const double r = geom.r_inner;
    const double m_pipe = flow.mdot_total / geom.count;
    const double area = M_PI * r * r;
    const double rho_l = ref.rho_sat_liquid;
    const double rho_v = ref.rho_sat_vapour;
    const double sigma = liquid.sigma.value_or(ref.sigma);
    const double bracket = 1.0 + ref.chi_mean * (rho_l / rho_v - 1.0);

    const double q = std::abs(flow.Q_two_phase) / (2.0 * M_PI * r * geom.length * flow.zeta_ref);
    const double dchi = std::abs(flow.Q_two_phase) / (m_pipe * ref.h_lat);
    const double phi = dchi > 0.0 ? klimenko_phi(flow.zeta_ref, geom, ref.chi_mean, 0.0, dchi, rho_l, rho_v)
                                  : HUGE_VAL;

    const double l_char = std::sqrt(sigma / (g * (rho_l - rho_v)));
    const double Pr_l = prandtl(liquid.cp, liquid.mu, liquid.kappa);
    const double wall_ratio = kappa_wall / liquid.kappa;

    const double q_reduced = q * l_char / (ref.h_lat * (rho_v / rho_l) * liquid.kappa / liquid.cp);
    const double p_reduced = ref.P * l_char / sigma;
    const double Re_prime = m_pipe * l_char / (liquid.mu * area) * bracket;

    const KlimenkoBranch branch = klimenko_branch(phi);
    double nu = 0.0;
    switch (branch) {
    case KlimenkoBranch::bubbly:
        nu = klimenko_nu_bubbly(q_reduced, p_reduced, Pr_l, wall_ratio);
        break;
    case KlimenkoBranch::convective:
        nu = klimenko_nu_convective(Re_prime, Pr_l, rho_v / rho_l, wall_ratio);
        break;
    case KlimenkoBranch::maximum:
        nu = std::max(klimenko_nu_bubbly(q_reduced, p_reduced, Pr_l, wall_ratio),
                      klimenko_nu_convective(Re_prime, Pr_l, rho_v / rho_l, wall_ratio));
        break;
    }
    const double alpha_prime = liquid.kappa / l_char * nu;

    // Hypothetical all-liquid flow at zero quality over the two-phase length.
    const double Re_l = 2.0 * m_pipe / (liquid.mu * M_PI * r) * (1.0 - ref.chi_mean);
    const double Gz_l = graetz(r, geom.length * flow.zeta_ref, Pr_l, Re_l);
    const double alpha_liquid = liquid.kappa / (2.0 * r) * nusselt_internal(Re_l, Pr_l, Gz_l);

    const double alpha = std::cbrt(alpha_prime * alpha_prime * alpha_prime +
                                   alpha_liquid * alpha_liquid * alpha_liquid);
    return {alpha, alpha_prime, alpha_liquid, phi, branch};
}

// ---------------------------------------------------------------------------
// Convective coefficients assembled from the correlations above
// ---------------------------------------------------------------------------

struct ConvectionCoefficient {
    double alpha;    // W/(m2 K)
    DimensionlessSet numbers;
    bool out_of_range = false;  // correlation evaluated outside its validity range
};

// Natural convection of the bath around a sphere of outer diameter D.
inline ConvectionCoefficient sphere_natural_convection(const FluidProps& bath, double dT_abs, double D, double g) {
    ConvectionCoefficient out{};
    out.numbers.Gr = grashof(bath.beta, dT_abs, D, bath.rho, bath.mu, g);
    out.numbers.Pr = prandtl(bath.cp, bath.mu, bath.kappa);
    out.numbers.Ra = out.numbers.Gr * out.numbers.Pr;
    out.numbers.Nu = nusselt_sphere_churchill(out.numbers.Ra, out.numbers.Pr);
    out.alpha = bath.kappa / D * out.numbers.Nu;
    return out;
}

// Natural convection of the bath along a vertical pipe section of height L.
inline ConvectionCoefficient pipe_natural_convection(const FluidProps& bath, double dT_abs, double L, double g) {
    ConvectionCoefficient out{};
    out.numbers.Gr = grashof(bath.beta, dT_abs, L, bath.rho, bath.mu, g);
    out.numbers.Pr = prandtl(bath.cp, bath.mu, bath.kappa);
    out.numbers.Ra = out.numbers.Gr * out.numbers.Pr;
    out.out_of_range = mcadams_out_of_range(out.numbers.Ra);
    out.numbers.Nu = nusselt_vertical_pipe_mcadams(out.numbers.Ra);
    out.alpha = bath.kappa / L * out.numbers.Nu;
    return out;
}

// Single-phase forced convection inside one of n parallel pipes carrying a
// total flow mdot_total, over a heated length L.
inline ConvectionCoefficient pipe_forced_convection(const FluidProps& fluid, double mdot_total, const PipeSpec& pipe,
                                                    double L) {
    ConvectionCoefficient out{};
    const double r = pipe.r_inner;
    out.numbers.Re = 2.0 * mdot_total / (fluid.mu * M_PI * r * pipe.count);
    out.numbers.Pr = prandtl(fluid.cp, fluid.mu, fluid.kappa);
    out.numbers.Gz = graetz(r, L, out.numbers.Pr, out.numbers.Re);
    out.numbers.Nu = nusselt_internal(out.numbers.Re, out.numbers.Pr, out.numbers.Gz);
    out.alpha = fluid.kappa / (2.0 * r) * out.numbers.Nu;
    return out;
}

} // namespace pcmtes

#endif
