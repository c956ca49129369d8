#include "zeno/errors.hpp"
#include "zeno/qft_model.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace zeno;
using namespace zeno::qft;

namespace {

constexpr double kPi = std::numbers::pi;
const QftModel kDemo{1.0, 0.2, 0.3, 3.0};

// Below threshold the radial integrand is regular, so a plain Simpson sum is an oracle.
double re_sigma_below_threshold(const QftModel& m, double x) {
    return oracle::simpson(
               [&](double q) {
                   const double w = std::sqrt(q * q + m.product_mass * m.product_mass);
                   return q * q / (w * (4 * w * w - x * x));
               },
               0.0, m.cutoff, 200000) /
           (2 * kPi * kPi);
}

} // namespace

TEST(LoopSelfEnergy, BelowThresholdIsRealAndMatchesSimpson) {
    for (double x : {0.0, 0.1, 0.3, 0.39}) {
        const auto s = loop_self_energy(kDemo, x);
        EXPECT_EQ(s.im, 0.0);
        EXPECT_NEAR(s.re, re_sigma_below_threshold(kDemo, x), 1e-11) << x;
    }
    EXPECT_NEAR(loop_self_energy(kDemo, 0.3).re, 0.033630481614286167, 1e-12);
}

TEST(LoopSelfEnergy, PrincipalValueAgainstCauchyWeightedQuadrature) {
    // scipy.integrate.quad(weight='cauchy') on q^2 / (4 w (q + q0)) / (2 pi^2)
    EXPECT_NEAR(loop_self_energy(kDemo, 1.0).re, 0.024754280310443626, 1e-11);
    EXPECT_NEAR(loop_self_energy(kDemo, 2.0).re, 0.0139298573757995, 1e-11);
    EXPECT_NEAR(loop_self_energy(kDemo, 7.0).re, -0.0083863177787857485, 1e-11);
    EXPECT_EQ(loop_self_energy(kDemo, 7.0).im, 0.0);
}

TEST(LoopSelfEnergy, MasslessClosedForm) {
    const QftModel m{1.0, 0.0, 0.5, 1.0};
    for (double x : {0.2, 1.0, 1.7}) {
        const auto s = loop_self_energy(m, x);
        EXPECT_NEAR(s.re, std::log(std::abs(4.0 - x * x) / (x * x)) / (16 * kPi * kPi), 1e-11) << x;
        EXPECT_NEAR(s.im, 1.0 / (16 * kPi), 1e-15) << x;
    }
}

TEST(LoopSelfEnergy, ThresholdAndCutoffEdgeRejected) {
    EXPECT_THROW(loop_self_energy(kDemo, 0.4), ThresholdPoint);
    EXPECT_THROW(loop_self_energy(kDemo, kDemo.cutoff_edge()), ThresholdPoint);
    EXPECT_NEAR(kDemo.cutoff_edge(), 2 * std::sqrt(9.04), 1e-15);
}

TEST(LoopSelfEnergyProperty, OpticalTheoremAndSupport) {
    auto g = oracle::rng(31);
    for (int i = 0; i < 300; ++i) {
        const QftModel m{1.0, oracle::uniform(g, 0.0, 1.0), oracle::uniform(g, 0.01, 1.0), oracle::uniform(g, 0.5, 5)};
        const double x = oracle::uniform(g, 0.0, 1.3 * m.cutoff_edge());
        if (std::abs(x - m.threshold()) < 1e-6 || std::abs(x - m.cutoff_edge()) < 1e-6 || x == 0.0) continue;
        const auto pi = polarization(m, x);
        EXPECT_GE(pi.im, 0.0);
        const bool open = x > m.threshold() && x < m.cutoff_edge();
        if (!open) {
            EXPECT_EQ(pi.im, 0.0);
        } else {
            const double rhs = x * tree_level_width(m, x);
            EXPECT_NEAR(pi.im / rhs, 1.0, 1e-6);
        }
    }
}

TEST(TreeWidth, ThresholdAndMasslessForm) {
    EXPECT_EQ(tree_level_width(kDemo, 0.4), 0.0);
    EXPECT_EQ(tree_level_width(kDemo, 0.2), 0.0);
    const QftModel massless{1.0, 0.0, 0.3, 3.0};
    for (double x : {0.5, 1.0, 2.0}) EXPECT_NEAR(tree_level_width(massless, x), 0.09 / (8 * kPi * x), 1e-15);
    EXPECT_THROW(tree_level_width(kDemo, 0.0), DomainError);
}

TEST(RenormalizedMass, DemoValueBelowBareMass) {
    const double m2 = renormalized_mass_sq(kDemo);
    EXPECT_NEAR(m2, 0.99553759039698964, 1e-10);
    EXPECT_LT(std::sqrt(m2), kDemo.bare_mass);
    const double re_pi = polarization(kDemo, std::sqrt(m2)).re;
    EXPECT_GT(re_pi, 0.0);
    EXPECT_NEAR(m2 - 1.0 + re_pi, 0.0, 1e-12);
}

TEST(RenormalizedMass, FreeLimitAndMonotoneInCoupling) {
    QftModel m = kDemo;
    m.coupling = 1e-7;
    EXPECT_NEAR(std::sqrt(renormalized_mass_sq(m)), 1.0, 1e-12);
    const double want[] = {0.99975238570452207, 0.99900868318185787, 0.99776630049174819};
    double prev = 1.0;
    int i = 0;
    for (double g : {0.1, 0.2, 0.3}) {
        m.coupling = g;
        const double mass = std::sqrt(renormalized_mass_sq(m));
        EXPECT_NEAR(mass, want[i++], 1e-10);
        EXPECT_LT(mass, prev);
        prev = mass;
    }
}

TEST(RenormalizedMass, SignOfMassShiftOnGrid) {
    for (double mm : {0.0, 0.1, 0.3, 0.6}) {
        for (double lam : {0.5, 2.0, 5.0}) {
            const QftModel m{1.0, mm, 0.4, lam};
            const double m2 = renormalized_mass_sq(m);
            const double re_pi = polarization(m, std::sqrt(m2)).re;
            EXPECT_EQ(re_pi > 0.0, m2 < 1.0) << mm << " " << lam;
        }
    }
}

TEST(BreitWigner, PeakValues) {
    const Resonance res{1.0, 0.01};
    const auto p = bw_propagators(res, 1.0);
    EXPECT_NEAR(p.relativistic.real(), 0.0, 1e-15);
    EXPECT_NEAR(p.relativistic.imag(), -1.0 / 0.01, 1e-9);
    EXPECT_NEAR(p.nonrelativistic.real(), 0.0, 1e-15);
    EXPECT_NEAR(p.nonrelativistic.imag(), -1.0 / 0.01, 1e-9);
}

TEST(BreitWigner, NarrowResonanceFormsAgree) {
    const Resonance res{1.0, 0.01};
    const auto peak = bw_propagators(res, res.mass);
    for (double x : {res.mass - res.width / 2, res.mass + res.width / 2}) {
        const auto p = bw_propagators(res, x);
        const double rel = std::abs(p.relativistic) / std::abs(peak.relativistic);
        const double nonrel = std::abs(p.nonrelativistic) / std::abs(peak.nonrelativistic);
        EXPECT_NEAR(rel / nonrel, 1.0, 0.02);
    }
}

TEST(Spectral, NonNegativeOnGrid) {
    for (int i = 1; i < 200; ++i) {
        const double x = 0.0305 * i;
        if (std::abs(x - 0.4) < 1e-9) continue;
        EXPECT_GE(spectral_function(kDemo, x), 0.0) << x;
    }
}

TEST(Validation, RejectsBadModels) {
    EXPECT_THROW((QftModel{1.0, -0.1, 0.1, 1.0}.validate()), DomainError);
    EXPECT_THROW((QftModel{1.0, 0.1, 0.0, 1.0}.validate()), DomainError);
    EXPECT_THROW((QftModel{1.0, 0.1, 0.1, 0.0}.validate()), DomainError);
}
