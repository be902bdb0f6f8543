#include <gtest/gtest.h>

#include "pcmtes/engine/scenario.hpp"
#include "support.hpp"

using namespace pcmtes;
using pcmtes::testing::relative_gap;
using pcmtes::testing::single;

namespace {

DiscreteState with_layers(const Plant& p, std::vector<double> h, double T_int) {
    DiscreteState s = discrete_initial_state(p, static_cast<int>(h.size()), InitialCharge::discharged, T_int);
    s.h_layers = std::move(h);
    return s;
}

} // namespace

TEST(ChargeRatio, Endpoints) {
    const Plant p;
    const PcmSpec& pcm = p.pcm;
    EXPECT_EQ(charge_ratio_discrete(discrete_initial_state(p, 10, InitialCharge::discharged), pcm, p.capsule), 0.0);
    EXPECT_EQ(charge_ratio_discrete(discrete_initial_state(p, 10, InitialCharge::charged), pcm, p.capsule), 1.0);
    DiscreteState half = with_layers(p, {pcm.h_lat_plus(), pcm.h_lat_minus(), pcm.h_lat_plus(), pcm.h_lat_minus()}, -30.0);
    EXPECT_EQ(charge_ratio_discrete(half, pcm, p.capsule), 0.5);
}

TEST(LayerResistance, SingleLayerMatchesShell) {
    const Plant p;
    const DiscreteState s = discrete_initial_state(p, 1, InitialCharge::charged);
    const LayerGeometry g = layer_radii(s, p.pcm, p.capsule);
    EXPECT_NEAR(layer_conduction_resistance(0, g, s, p.pcm),
                r_cond_spherical_shell(g.centroids[0], g.radii[0], p.pcm.kappa_solid), 1e-12);
}

TEST(LayerResistance, SolidCapsuleComposesToSingleShell) {
    const Plant p;
    const DiscreteState s = discrete_initial_state(p, 10, InitialCharge::charged);
    const LayerGeometry g = layer_radii(s, p.pcm, p.capsule);
    double sum = 0.0;
    for (std::size_t k = 0; k < 10; ++k) sum += layer_conduction_resistance(k, g, s, p.pcm);
    const double shell = r_cond_spherical_shell(g.centroids[0], g.radii.back(), p.pcm.kappa_solid);
    EXPECT_LT(relative_gap(sum, shell), 0.02);
}

TEST(LayerResistance, OnlyInnerHalfDependsOnOwnConductivity) {
    const Plant p;
    DiscreteState s = discrete_initial_state(p, 4, InitialCharge::charged);
    s.h_layers[2] = p.pcm.h_lat_plus() + 100.0;  // liquid: kappa 0.375
    const LayerGeometry g = layer_radii(s, p.pcm, p.capsule);
    const double inner_half = r_cond_spherical_shell(g.centroids[1], g.radii[1], p.pcm.kappa_solid);
    const double outer_half = r_cond_spherical_shell(g.radii[1], g.centroids[2], p.pcm.kappa_eff_liquid());
    EXPECT_NEAR(layer_conduction_resistance(1, g, s, p.pcm), inner_half + outer_half, 1e-12);
}

TEST(LayerFlows, IsothermalIsQuiet) {
    const Plant p;
    const LayerFlows f = layer_heat_flows(discrete_initial_state(p, 10, InitialCharge::discharged), p);
    for (double q : f.Q_ext) { EXPECT_EQ(q, 0.0); }
    for (double q : f.Q_int) { EXPECT_EQ(q, 0.0); }
    EXPECT_EQ(f.Q_pcm, 0.0);
}

TEST(LayerFlows, BoundaryConditions) {
    const Plant p;
    const LayerFlows f = layer_heat_flows(discrete_initial_state(p, 6, InitialCharge::discharged, -35.0), p);
    EXPECT_EQ(f.Q_int.front(), 0.0);
    EXPECT_EQ(f.Q_ext.back(), f.Q_pcm);
    EXPECT_LT(f.Q_pcm, 0.0);
}

TEST(StuckLayer, DerivativeExactlyZero) {
    const Plant p;
    const PcmSpec& pcm = p.pcm;
    const DiscreteState s = with_layers(
        p, {pcm.h_lat_plus() + 500.0, pcm.h_lat_minus() + 0.2 * pcm.h_lat, pcm.h_lat_minus() + 0.5 * pcm.h_lat,
            pcm.h_lat_minus() + 0.9 * pcm.h_lat, pcm.h_lat_minus() - 3000.0},
        -36.0);
    DiscreteModel m(p, 5, InitialCharge::discharged, -36.0);
    StateVector y(6);
    for (int k = 0; k < 5; ++k) y[k] = s.h_layers[static_cast<std::size_t>(k)];
    y[5] = s.T_int;
    for (CycleMode mode : {CycleMode::charging, CycleMode::standby, CycleMode::discharging}) {
        const StateVector d = m.derivative(y, OperatingInputs{}.gated(mode));
        EXPECT_EQ(d[2], 0.0);
        EXPECT_NE(d[0], 0.0);
        EXPECT_NE(d[3], 0.0);
    }
}

TEST(Discrete, EquilibriumIsFixedPoint) {
    DiscreteModel m(Plant{}, 10, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::standby, 600.0));
    EXPECT_EQ(r.records.back().T_int, -30.0);
    EXPECT_EQ(r.records.back().state_values, std::vector<double>(10, Plant{}.pcm.h_lat_plus()));
}

TEST(Discrete, ChargeExtractsHeatFromCapsules) {
    DiscreteModel m(Plant{}, 10, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::charging, 1200.0));
    for (std::size_t i = 1; i < r.records.size(); ++i) {
        EXPECT_LT(r.records[i].solution.Q_pcm, 0.0);
        EXPECT_GE(r.records[i].gamma, r.records[i - 1].gamma);
    }
}

TEST(Discrete, FullChargeBaseline) {
    DiscreteModel m(Plant{}, 10, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::charging, 5.0 * 3600.0));
    const double t = r.summary.steps[0].completion_time;
    EXPECT_GT(t, 3600.0);
    EXPECT_LT(t, 8.0 * 3600.0);
    EXPECT_NEAR(t, 10732.0, 0.01 * 10732.0);
    EXPECT_NEAR(r.summary.final_gamma, 1.10415, 0.01 * 1.10415);
    EXPECT_NEAR(r.summary.energy.pcm, -5.464651e6, 0.01 * 5.464651e6);
    EXPECT_NEAR(r.summary.energy.ref, 7.213112e6, 0.01 * 7.213112e6);
    int frozen = 0;
    for (const EventRecord& e : r.events) frozen += e.kind == "layer_frozen";
    EXPECT_EQ(frozen, 10);
}

TEST(Discrete, EnergyAudit) {
    for (int n : {5, 10, 20}) {
        DiscreteModel m(Plant{}, n, InitialCharge::discharged);
        const RunResult r = run_scenario(m, pcmtes::testing::partial_sequence());
        EXPECT_LT(relative_gap(r.summary.delta_U_capsules, r.summary.energy.pcm), 5e-3) << n;
    }
}

TEST(Discrete, StandbyConservesTotalEnergy) {
    const Plant p;
    DiscreteModel m(p, 10, InitialCharge::discharged);
    run_scenario(m, single(CycleMode::charging, 2400.0));
    const double T0 = m.T_int();
    const double U0 = m.capsule_energy_now();
    run_scenario(m, single(CycleMode::standby, 1800.0));
    const double T1 = m.T_int();
    const double dU = p.capsule.n_capsules * (m.capsule_energy_now() - U0);
    const double cp_mean = p.bath_cp(0.5 * (T0 + T1));
    const double bath = p.tank.m_int * cp_mean * (T1 - T0);
    ASSERT_GT(std::abs(dU), 1e4);
    EXPECT_LT(std::abs(bath + dU) / std::abs(dU), 5e-3);
}

TEST(Discrete, LongStandbyReachesMeltingTemperature) {
    DiscreteModel m(Plant{}, 10, InitialCharge::discharged);
    run_scenario(m, single(CycleMode::charging, 2000.0));
    ASSERT_LT(m.T_int(), -31.0);
    run_scenario(m, single(CycleMode::standby, 6.0 * 3600.0));
    bool any_latent = false;
    for (double h : m.state().h_layers) any_latent |= is_latent(h, Plant{}.pcm);
    ASSERT_TRUE(any_latent);
    EXPECT_NEAR(m.T_int(), -30.0, 0.05);
}
