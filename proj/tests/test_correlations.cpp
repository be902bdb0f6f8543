#include <gtest/gtest.h>

#include "pcmtes/correlations.hpp"

using namespace pcmtes;

TEST(Grashof, Values) {
    EXPECT_EQ(grashof(5e-4, 0.0, 0.057, 1100.0, 0.09, 9.81), 0.0);
    EXPECT_NEAR(grashof(5e-4, 5.0, 0.057, 1100.0, 0.09, 9.81), 678.4751325, 1e-6);
    EXPECT_NEAR(grashof(5e-4, 5.0, 0.114, 1100.0, 0.09, 9.81) / grashof(5e-4, 5.0, 0.057, 1100.0, 0.09, 9.81), 8.0, 1e-12);
    EXPECT_THROW(grashof(5e-4, 5.0, 0.057, 1100.0, 0.0, 9.81), DomainError);
}

TEST(Prandtl, Values) {
    EXPECT_DOUBLE_EQ(prandtl(1.0, 1.0, 1.0), 1.0);
    EXPECT_NEAR(prandtl(2940.0, 0.09, 0.40), 661.5, 1e-10);
    EXPECT_EQ(prandtl(2940.0, 0.0, 0.40), 0.0);
    EXPECT_THROW(prandtl(1.0, 1.0, 0.0), DomainError);
}

TEST(Sphere, ConductionLimit) { EXPECT_DOUBLE_EQ(nusselt_sphere_churchill(0.0, 50.0), 2.0); }

TEST(Sphere, Value) { EXPECT_NEAR(nusselt_sphere_churchill(1e6, 10.0), 19.3122236, 1e-6); }

TEST(Sphere, InvalidInput) {
    EXPECT_THROW(nusselt_sphere_churchill(-1.0, 1.0), DomainError);
    EXPECT_THROW(nusselt_sphere_churchill(1.0, 0.0), DomainError);
}

TEST(McAdams, Branches) {
    EXPECT_NEAR(nusselt_vertical_pipe_mcadams(1e8), 59.0, 1e-10);
    EXPECT_NEAR(nusselt_vertical_pipe_mcadams(1e12), 1000.0, 1e-9);
    EXPECT_NEAR(nusselt_vertical_pipe_mcadams(1e9), 0.59 * std::pow(1e9, 0.25), 1e-10);
}

TEST(McAdams, ExtrapolatedOutsideRange) {
    EXPECT_TRUE(mcadams_out_of_range(10.0));
    EXPECT_FALSE(mcadams_out_of_range(1e5));
    EXPECT_TRUE(mcadams_out_of_range(1e14));
    EXPECT_NEAR(nusselt_vertical_pipe_mcadams(100.0), 0.59 * std::sqrt(10.0), 1e-12);
    EXPECT_NEAR(nusselt_vertical_pipe_mcadams(1e15), 1e4, 1e-8);
    EXPECT_DOUBLE_EQ(nusselt_vertical_pipe_mcadams(0.0), 0.59);
}

TEST(Friction, Values) {
    EXPECT_NEAR(friction_factor(1e4), 0.03148, 1e-5);
    EXPECT_NEAR(friction_factor(1e5), 0.01799, 1e-5);
    EXPECT_NEAR(friction_factor(std::exp(2.64 / 0.790)), 1.0, 1e-12);
    EXPECT_THROW(friction_factor(5.0), DomainError);
}

TEST(Graetz, Values) {
    EXPECT_EQ(graetz(0.0218, 0.8, 10.0, 0.0), 0.0);
    EXPECT_NEAR(graetz(0.0218, 0.8, 10.0, 100.0), 54.5, 1e-12);
    EXPECT_NEAR(graetz(0.0218, 0.4, 10.0, 100.0), 109.0, 1e-12);
    EXPECT_THROW(graetz(0.0218, 0.0, 10.0, 100.0), DomainError);
}

TEST(Internal, LaminarLimit) {
    EXPECT_NEAR(nusselt_internal(100.0, 5.0, 1e-6), 3.66, 3.66e-3);
    EXPECT_NEAR(nusselt_baehr(5.0, 1e-6), 3.66, 3.66e-3);
}

TEST(Internal, BranchSwitch) {
    EXPECT_DOUBLE_EQ(nusselt_internal(3000.0, 5.0, 10.0), nusselt_baehr(5.0, 10.0));
    EXPECT_DOUBLE_EQ(nusselt_internal(3000.1, 5.0, 10.0), nusselt_gnielinski(3000.1, 5.0));
}

TEST(Internal, Gnielinski) {
    EXPECT_NEAR(nusselt_internal(1e4, 5.0, 1.0), 69.9124715, 1e-6);
    EXPECT_DOUBLE_EQ(nusselt_internal(1e4, 5.0, 1.0), nusselt_internal(1e4, 5.0, 1e3));
}

TEST(Klimenko, PhiValues) {
    const PipeSpec pipe;
    const double phi = klimenko_phi(1.0, pipe, 0.7775, 0.5549, 1.0, 1291.60, 6.76);
    EXPECT_NEAR(phi, 4259.36, 0.01);
    EXPECT_NEAR(klimenko_phi(0.5, pipe, 0.7775, 0.5549, 1.0, 1291.60, 6.76), 0.5 * phi, 1e-9);
    EXPECT_NEAR(klimenko_phi(1.0, pipe, 0.7775, 0.5549, 1.0, 1000.0, 1000.0), 2.0 * 0.8 / (0.0218 * 0.4451), 1e-9);
    EXPECT_THROW(klimenko_phi(0.0, pipe, 0.7775, 0.5549, 1.0, 1291.6, 6.76), DomainError);
    EXPECT_THROW(klimenko_phi(1.0, pipe, 0.7775, 0.6, 0.6, 1291.6, 6.76), DomainError);
}

TEST(Klimenko, BranchSelection) {
    EXPECT_EQ(klimenko_branch(12000.0), KlimenkoBranch::bubbly);
    EXPECT_EQ(klimenko_branch(15000.0), KlimenkoBranch::maximum);
    EXPECT_EQ(klimenko_branch(20000.0), KlimenkoBranch::maximum);
    EXPECT_EQ(klimenko_branch(20001.0), KlimenkoBranch::convective);
}

TEST(Klimenko, CombinesWithLiquidCoefficient) {
    const PipeSpec pipe;
    const RefrigerantSpec ref;
    const PropertyModel props;
    const FluidProps liquid = props.evaluate(Fluid::refrigerant_sat_liquid, ref.T_sat).props;
    const double Q2 = 0.00918 / 50 * (ref.h_sat_vapour() - 255000.0);
    const KlimenkoResult k = klimenko_two_phase_alpha({0.00918, Q2, 0.3}, pipe, ref, liquid, 45.0, 9.81);
    EXPECT_NEAR(k.alpha, std::cbrt(std::pow(k.alpha_prime, 3) + std::pow(k.alpha_liquid, 3)), 1e-9 * k.alpha);
    EXPECT_GE(k.alpha, k.alpha_prime);
    EXPECT_GE(k.alpha, k.alpha_liquid);
    EXPECT_GT(k.alpha, 78.1 * 0.8);
    EXPECT_LT(k.alpha, 429.4 * 1.2);
    EXPECT_THROW(klimenko_two_phase_alpha({0.0, Q2, 0.3}, pipe, ref, liquid, 45.0, 9.81), DomainError);
}
