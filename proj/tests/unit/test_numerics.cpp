#include "zeno/errors.hpp"
#include "zeno/numerics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace zeno;
using numerics::Complex;

TEST(Integrate, Constant) {
    const auto r = numerics::integrate([](double) { return Complex{1.0, 0.0}; }, 0.0, 1.0);
    EXPECT_NEAR(r.value.real(), 1.0, 1e-12);
    EXPECT_EQ(r.value.imag(), 0.0);
}

TEST(Integrate, NormalizedLorentzianOverRealLine) {
    const double g = 1.0;
    const auto r = numerics::integrate(
        [&](double k) { return Complex{(g / (2 * std::numbers::pi)) / (k * k + g * g / 4), 0.0}; },
        -HUGE_VAL, HUGE_VAL);
    EXPECT_NEAR(r.value.real(), 1.0, 1e-9);
}

TEST(Integrate, DampedCosineHalfLine) {
    numerics::QuadratureSpec spec;
    const auto plain = numerics::integrate_real([](double x) { return std::exp(-x) * std::cos(10 * x); },
                                                0.0, HUGE_VAL, spec);
    EXPECT_NEAR(plain.value, 1.0 / 101.0, 1e-9);
    spec.oscillatory_hint = 10.0;
    const auto hinted = numerics::integrate_real([](double x) { return std::exp(-x) * std::cos(10 * x); },
                                                 0.0, HUGE_VAL, spec);
    EXPECT_NEAR(hinted.value, 1.0 / 101.0, 1e-9);
}

TEST(Integrate, ErrorEstimateWithinRequest) {
    numerics::QuadratureSpec spec;
    const auto r = numerics::integrate([](double x) { return Complex{std::sin(x), std::cos(3 * x)}; }, 0.0, 7.0, spec);
    EXPECT_LE(r.error, std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value)));
    EXPECT_NEAR(r.value.real(), 1.0 - std::cos(7.0), 1e-10);
    EXPECT_NEAR(r.value.imag(), std::sin(21.0) / 3.0, 1e-10);
}

TEST(Integrate, BreakpointsAgreeWithPlain) {
    const std::vector<double> pts{-1.0, -0.2, 0.0, 0.3, 2.0};
    auto f = [](double x) { return Complex{std::abs(x), 0.0}; };
    EXPECT_NEAR(numerics::integrate(f, pts).value.real(), 0.5 + 2.0, 1e-12);
}

TEST(Integrate, RejectsEmptyOrReversedRange) {
    auto f = [](double) { return Complex{1.0, 0.0}; };
    EXPECT_THROW(numerics::integrate(f, 1.0, 1.0), DomainError);
    EXPECT_THROW(numerics::integrate(f, 2.0, 1.0), DomainError);
}

TEST(Integrate, BudgetExhaustionIsNonConvergence) {
    numerics::QuadratureSpec spec;
    spec.max_subdivisions = 1;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    EXPECT_THROW(numerics::integrate([](double x) { return Complex{std::sin(1.0 / x), 0.0}; }, 1e-4, 1.0, spec),
                 NonConvergence);
}

TEST(Integrate, InvalidSpec) {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 0.0;
    EXPECT_THROW(spec.validate(), DomainError);
    spec = {};
    spec.max_subdivisions = 0;
    EXPECT_THROW(spec.validate(), DomainError);
}

TEST(IntegrateProperty, LinearityOnRandomPolynomials) {
    auto g = oracle::rng(7);
    numerics::QuadratureSpec spec;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p(6), q(6);
        for (auto& c : p) c = oracle::uniform(g, -3, 3);
        for (auto& c : q) c = oracle::uniform(g, -3, 3);
        const double alpha = oracle::uniform(g, -2, 2);
        const double beta = oracle::uniform(g, -2, 2);
        const double a = oracle::uniform(g, -2, 0);
        const double b = a + oracle::uniform(g, 0.1, 3);
        auto poly = [](const std::vector<double>& c, double x) {
            double s = 0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
            return s;
        };
        const double fp = numerics::integrate_real([&](double x) { return poly(p, x); }, a, b, spec).value;
        const double fq = numerics::integrate_real([&](double x) { return poly(q, x); }, a, b, spec).value;
        const double fc =
            numerics::integrate_real([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, a, b, spec)
                .value;
        const double scale = std::max(1.0, std::abs(fc));
        EXPECT_NEAR(fc, alpha * fp + beta * fq, 10 * std::max(spec.abs_tol, spec.rel_tol * scale)) << "trial " << trial;
    }
}

TEST(FindRoot, Examples) {
    EXPECT_NEAR(numerics::find_root([](double x) { return x - 2; }, {0, 5}), 2.0, 1e-12);
    EXPECT_NEAR(numerics::find_root([](double x) { return x * x - 2; }, {1, 2}), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(numerics::find_root([](double x) { return std::cos(x); }, {1, 2}), std::numbers::pi / 2, 1e-12);
}

TEST(FindRoot, Errors) {
    EXPECT_THROW(numerics::find_root([](double x) { return x * x + 1; }, {-1, 1}), NoSignChange);
    EXPECT_THROW(numerics::find_root([](double x) { return x; }, {1, -1}), DomainError);
    EXPECT_THROW(numerics::find_root([](double) { return std::nan(""); }, {0, 1}), DomainError);
    numerics::RootSpec spec{0, 3, 1e-300, 2};
    EXPECT_THROW(numerics::find_root([](double x) { return std::exp(x) - 5; }, spec), NonConvergence);
}

TEST(FindRootProperty, ResidualOnRandomCubics) {
    auto g = oracle::rng(11);
    constexpr double eps = 2.220446049250313e-16;
    for (int trial = 0; trial < 200; ++trial) {
        const double r = oracle::uniform(g, -5, 5);
        const double s = oracle::uniform(g, 0.5, 4);
        auto f = [&](double x) { return s * (x - r) * ((x - r) * (x - r) + 1.0); };
        const double x = numerics::find_root(f, {r - oracle::uniform(g, 0.1, 3), r + oracle::uniform(g, 0.1, 3)});
        const double scale = s * (std::abs(r) + 10.0);
        EXPECT_LE(std::abs(f(x)), 1e3 * eps * scale) << "trial " << trial;
    }
}

TEST(Expm1, SmallArgumentMatchesSeries) {
    const Complex z{1e-9, -2e-9};
    const Complex series = z + z * z / 2.0 + z * z * z / 6.0;
    EXPECT_LT(std::abs(numerics::expm1(z) - series), 1e-24);
    const Complex big{1.5, 0.7};
    EXPECT_LT(std::abs(numerics::expm1(big) - (std::exp(big) - 1.0)), 1e-14);
}
