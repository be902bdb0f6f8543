#include <gtest/gtest.h>

#include "pcmtes/engine/scenario.hpp"
#include "support.hpp"

using namespace pcmtes;
using pcmtes::testing::single;

namespace {

ContinuousState make_state(CycleMode front, double r, double r_pcm, double T = -30.0) {
    ContinuousState s;
    s.cd = s.front = front;
    s.r = r;
    s.r_pcm = r_pcm;
    s.T_int = T;
    return s;
}

} // namespace

TEST(CapsuleEnergy, Endpoints) {
    const Plant p;
    EXPECT_NEAR(capsule_energy(make_state(CycleMode::charging, 0.0285, 0.0285), p.pcm, p.capsule), 12372.967, 1e-3);
    EXPECT_EQ(capsule_energy(make_state(CycleMode::charging, 0.0, p.capsule.r_min), p.pcm, p.capsule), 0.0);
    const double span = capsule_energy_max(p.pcm, p.capsule) - capsule_energy_min(p.pcm, p.capsule);
    EXPECT_NEAR(p.capsule.n_capsules * span, 4.9491869e6, 1.0);
}

TEST(ChargeRatio, EndpointsExact) {
    const Plant p;
    const double r_max = p.capsule.r_max, r_min = p.capsule.r_min;
    EXPECT_EQ(charge_ratio_continuous(make_state(CycleMode::charging, r_max, r_max), p.pcm, p.capsule), 0.0);
    EXPECT_EQ(charge_ratio_continuous(make_state(CycleMode::charging, 0.0, r_min), p.pcm, p.capsule), 1.0);
    EXPECT_EQ(charge_ratio_continuous(make_state(CycleMode::discharging, 0.0, r_max), p.pcm, p.capsule), 0.0);
    EXPECT_EQ(charge_ratio_continuous(make_state(CycleMode::discharging, r_min, r_min), p.pcm, p.capsule), 1.0);
}

TEST(FrontOdes, Values) {
    const PcmSpec pcm;
    const ContinuousState s = make_state(CycleMode::charging, 0.02, 0.0282);
    const auto zero = pcm_front_odes(s, 0.0, pcm);
    EXPECT_EQ(zero.first, 0.0);
    EXPECT_EQ(zero.second, 0.0);
    const auto [dr, dr_pcm] = pcm_front_odes(s, -10.0, pcm);
    EXPECT_NEAR(dr, -1.55912e-5, 1e-10);
    EXPECT_LT(dr_pcm, 0.0);
    PcmSpec same = pcm;
    same.rho_solid = same.rho_liquid;
    EXPECT_EQ(pcm_front_odes(s, -10.0, same).second, 0.0);
}

TEST(FrontOdes, DischargeGrowsContent) {
    const PcmSpec pcm;
    const auto [dr, dr_pcm] = pcm_front_odes(make_state(CycleMode::discharging, 0.02, 0.0279), 10.0, pcm);
    EXPECT_LT(dr, 0.0);
    EXPECT_GT(dr_pcm, 0.0);
}

TEST(Algebraic, StandbyEquilibrium) {
    const Plant p;
    const ContinuousState s = make_state(CycleMode::charging, 0.02, 0.0281, p.pcm.T_lat);
    const AlgebraicSolution a = solve_algebraic(s, OperatingInputs{}.gated(CycleMode::standby), p);
    EXPECT_EQ(a.Q_pcm, 0.0);
    EXPECT_EQ(a.bath_outflow(p), 0.0);
    EXPECT_FALSE(present(a.Q_ref));
    EXPECT_FALSE(present(a.Q_sec));
}

TEST(Algebraic, NominalChargeSuperheatedOutlet) {
    const Plant p;
    const ContinuousState s = make_state(CycleMode::charging, 0.025, 0.0282, -33.0);
    const AlgebraicSolution a = solve_algebraic(s, OperatingInputs{}.gated(CycleMode::charging), p);
    EXPECT_EQ(a.mode, 1);
    EXPECT_GT(a.zeta_ref, 0.0);
    EXPECT_LT(a.zeta_ref, 1.0);
    EXPECT_LT(a.Q_pcm, 0.0);
    EXPECT_GT(a.Q_ref, 0.0);
    EXPECT_GT(a.h_ref_out, p.refrigerant.h_sat_vapour());
    EXPECT_NEAR(a.Q_refv, 0.00918 / 50 * (a.h_ref_out - p.refrigerant.h_sat_vapour()), 1e-9);
}

TEST(Algebraic, NominalDischargeCoolsSecondary) {
    const Plant p;
    const ContinuousState s = make_state(CycleMode::discharging, 0.02, 0.0280, -30.0);
    const AlgebraicSolution a = solve_algebraic(s, OperatingInputs{}.gated(CycleMode::discharging), p);
    EXPECT_LT(a.T_sec_out, -20.0);
    EXPECT_GT(a.T_sec_out, -30.0);
    EXPECT_GT(a.htc.alpha_sec_int, 40.4 * 0.8);
    EXPECT_LT(a.htc.alpha_sec_int, 40.5 * 1.2);
}

TEST(Refrigerant, InletQuality) {
    EXPECT_NEAR(RefrigerantSpec{}.quality(255000.0), 0.5549, 1e-4);
}

TEST(Refrigerant, SaturatedVapourInlet) {
    const Plant p;
    OperatingInputs in;
    in.h_ref_in = p.refrigerant.h_sat_vapour();
    const RefrigerantResult r = refrigerant_submodel(p, in, -33.0);
    EXPECT_EQ(r.Q_ref2, 0.0);
    EXPECT_EQ(r.zeta_ref, 0.0);
    EXPECT_GT(r.Q_refv, 0.0);
}

TEST(Refrigerant, StoppedFlow) {
    OperatingInputs in;
    in.mdot_ref = 0.0;
    EXPECT_EQ(refrigerant_submodel(Plant{}, in, -33.0).mode, 0);
}

TEST(Refrigerant, WarmBathSwitchesToTwoPhaseOutlet) {
    const Plant p;
    const RefrigerantResult cold = refrigerant_submodel(p, OperatingInputs{}, -40.5);
    EXPECT_EQ(cold.mode, 2);
    EXPECT_EQ(cold.zeta_ref, 1.0);
    EXPECT_LT(cold.h_ref_out, p.refrigerant.h_sat_vapour());
}

TEST(Secondary, NoDrivingDifference) {
    OperatingInputs in;
    in.T_sec_in = -30.0;
    const SecondaryResult s = secondary_submodel(Plant{}, in, -30.0);
    EXPECT_EQ(s.Q_sec, 0.0);
    EXPECT_EQ(s.T_sec_out, -30.0);
}

TEST(Secondary, LongPipeApproachesBath) {
    Plant p;
    p.sec_pipe.length = 200.0;
    const SecondaryResult s = secondary_submodel(p, OperatingInputs{}, -30.0);
    EXPECT_NEAR(s.T_sec_out, -30.0, 1e-3);
}

TEST(Continuous, EquilibriumIsFixedPoint) {
    ContinuousModel m(Plant{}, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::standby, 600.0));
    EXPECT_EQ(r.records.back().T_int, -30.0);
    EXPECT_EQ(r.records.back().gamma, 0.0);
    EXPECT_EQ(r.summary.energy.pcm, 0.0);
}

TEST(Continuous, ReversalOfIncompleteCycleRejected) {
    ContinuousModel m(Plant{}, InitialCharge::discharged);
    const std::vector<ScenarioStep> sc{{CycleMode::charging, 1800.0, {}}, {CycleMode::discharging, 600.0, {}}};
    try {
        run_scenario(m, sc);
        FAIL() << "expected UnsupportedOperation";
    } catch (const UnsupportedOperation& e) {
        EXPECT_NE(std::string(e.what()).find("discrete"), std::string::npos);
    }
}

TEST(Continuous, StandbyBetweenSameDirectionSteps) {
    ContinuousModel m(Plant{}, InitialCharge::discharged);
    const std::vector<ScenarioStep> sc{{CycleMode::charging, 900.0, {}}, {CycleMode::standby, 300.0, {}},
                                       {CycleMode::charging, 300.0, {}}};
    const RunResult r = run_scenario(m, sc);
    EXPECT_EQ(r.records.size(), 1501u);
    EXPECT_GT(r.summary.final_gamma, r.summary.steps[0].gamma_end);
}

TEST(Continuous, FullChargeBaseline) {
    ContinuousModel m(Plant{}, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::charging, 5.0 * 3600.0));
    double t_complete = -1.0;
    for (const EventRecord& e : r.events)
        if (e.kind == "charge_complete") t_complete = e.t;
    ASSERT_GT(t_complete, 0.0);
    EXPECT_GT(t_complete, 3600.0);
    EXPECT_LT(t_complete, 8.0 * 3600.0);
    EXPECT_NEAR(t_complete, 12983.17, 0.01 * 12983.17);
    EXPECT_NEAR(r.summary.steps[0].completion_time, 12137.0, 0.01 * 12137.0);
    EXPECT_EQ(r.summary.final_gamma, 1.0);
    EXPECT_NEAR(r.summary.energy.pcm, -4.949187e6, 0.01 * 4.949187e6);
    EXPECT_NEAR(r.summary.energy.ref, 6.714564e6, 0.01 * 6.714564e6);
    EXPECT_NEAR(m.state().r_pcm, Plant{}.capsule.r_min, 1e-12);
}

TEST(Continuous, FullDischargeAfterCharge) {
    ContinuousModel m(Plant{}, InitialCharge::charged);
    const RunResult r = run_scenario(m, single(CycleMode::discharging, 5.0 * 3600.0));
    bool done = false;
    for (const EventRecord& e : r.events) done |= e.kind == "discharge_complete";
    EXPECT_TRUE(done);
    EXPECT_EQ(r.summary.final_gamma, 0.0);
    EXPECT_NEAR(m.state().r_pcm, Plant{}.capsule.r_max, 1e-12);
    for (const StepRecord& rec : r.records)
        if (rec.t > 0.0) { EXPECT_LT(rec.solution.T_sec_out, -20.0); }
}

TEST(Continuous, EnergyAuditPartialCharge) {
    ContinuousModel m(Plant{}, InitialCharge::discharged);
    const RunResult r = run_scenario(m, single(CycleMode::charging, 5000.0));
    EXPECT_LT(pcmtes::testing::relative_gap(r.summary.delta_U_capsules, r.summary.energy.pcm), 5e-3);
}

TEST(Continuous, MassConserved) {
    const Plant p;
    ContinuousModel m(p, InitialCharge::discharged);
    run_scenario(m, single(CycleMode::charging, 6000.0));
    const ContinuousState& s = m.state();
    const double mass = p.pcm.rho_liquid * sphere_volume(s.r) + p.pcm.rho_solid * (sphere_volume(s.r_pcm) - sphere_volume(s.r));
    const double m0 = p.capsule_mass();
    EXPECT_LT(std::abs(mass - m0) / m0, 1e-3);
}
