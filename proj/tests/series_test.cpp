#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mlf/series.hpp"

namespace {

using mlf::MLParams;
using mlf::SeriesConfig;

// E_{1/2}(z) = exp(z^2) erfc(-z), with erfc from libm.
double half_order_oracle(double z) { return std::exp(z * z) * std::erfc(-z); }

TEST(MlE2, ZeroArgumentIsReciprocalGammaOfBeta) {
    // The series at z = 0 leaves 1 / Gamma(beta); for beta = alpha = 1/2 that is 1/sqrt(pi).
    const auto r = mlf::ml_e2(0.5, 0.5, 0.0);
    EXPECT_NEAR(r.value, 1.0 / std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(mlf::ml_e2(0.7, 1.0, 0.0).value, 1.0);
}

TEST(MlE2, ClosedForms) {
    EXPECT_NEAR(mlf::ml_e2(1.0, 2.0, 1.0).value, std::exp(1.0) - 1.0, 1e-14);
    EXPECT_NEAR(mlf::ml_e2(1.0, 1.0, 2.0).value, std::exp(2.0), 7.39 * 1e-14);
    // E_{1/2,1/2}(1) = 1/sqrt(pi) + e erfc(-1); 50-digit value 5.5731696643100397533.
    EXPECT_NEAR(mlf::ml_e2(0.5, 0.5, 1.0).value, 5.5731696643100397533, 1e-13);
    for (double z : {-2.0, -0.5, 0.3, 1.7})
        EXPECT_NEAR(mlf::ml_e2(1.0, 2.0, z).value, std::expm1(z) / z, 1e-14 * std::expm1(z) / z);
}

TEST(MlE, OneParameterCases) {
    EXPECT_NEAR(mlf::ml_e(1.0, 1.0).value, std::numbers::e, 1e-14 * std::numbers::e);
    EXPECT_NEAR(mlf::ml_e(0.5, 1.0).value, 5.0089800807622834663, 5e-14);
    EXPECT_EQ(mlf::ml_e(0.7, 0.0).value, 1.0);
}

TEST(MlE, HalfOrderOracle) {
    for (int i = 0; i <= 60; ++i) {
        const double z = -3.0 + 0.1 * i;
        const auto r = mlf::ml_e(0.5, z);
        ASSERT_TRUE(r.converged) << z;
        EXPECT_NEAR(r.value, half_order_oracle(z), 1e-9 * half_order_oracle(z)) << "z = " << z;
    }
}

TEST(MlE, ExponentialCaseNegativeArgument) {
    for (double z : {-1.0, -10.0, -20.0, -45.0}) {
        const auto r = mlf::ml_e(1.0, z);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.value, std::exp(z), 1e-13 * std::exp(z)) << z;
    }
}

TEST(MlAtTime, Examples) {
    EXPECT_NEAR(mlf::ml_at_time({.alpha = 0.5, .lambda = -1.0}, 1.0).value, 0.42758357615580700441,
                1e-13);
    EXPECT_EQ(mlf::ml_at_time({.alpha = 0.3, .lambda = 0.0}, 3.0).value, 1.0);
    EXPECT_NEAR(mlf::ml_at_time({.alpha = 1.0, .lambda = 2.0}, 1.0).value, std::exp(2.0), 1e-13);
    const auto at_zero = mlf::ml_at_time({.alpha = 0.4, .lambda = -3.0}, 0.0);
    EXPECT_EQ(at_zero.value, 1.0);
    EXPECT_TRUE(at_zero.converged);
}

TEST(MlAtTime, ExponentialRecovery) {
    for (double lambda : {-2.0, -1.0, 0.5, 1.0})
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.1 * i;
            const double ref = std::exp(lambda * t);
            EXPECT_LE(std::abs(mlf::ml_at_time({.alpha = 1.0, .lambda = lambda}, t).value - ref) / ref,
                      1e-10);
        }
}

TEST(MlE2, DomainErrors) {
    EXPECT_THROW(mlf::ml_e2(0.0, 1.0, 1.0), mlf::DomainError);
    EXPECT_THROW(mlf::ml_e2(1.2, 1.0, 1.0), mlf::DomainError);
    EXPECT_THROW(mlf::ml_e2(0.5, 0.0, 1.0), mlf::DomainError);
    EXPECT_THROW(mlf::ml_e2(0.5, 1.0, 50.5), mlf::DomainError);
    EXPECT_THROW(mlf::ml_e2(0.5, 1.0, std::nan("")), mlf::DomainError);
    EXPECT_THROW(mlf::ml_at_time({.alpha = 0.5, .lambda = 1.0}, -1.0), mlf::DomainError);
    EXPECT_THROW(mlf::ml_at_time({.alpha = 0.5, .lambda = 30.0}, 4.0), mlf::DomainError);
    SeriesConfig bad;
    bad.tol = 0.0;
    EXPECT_THROW(mlf::ml_e(0.5, 1.0, bad), mlf::DomainError);
}

TEST(MlE2, OverflowIsReported) {
    // E_{0.3}(50) is about exp(50^(1/0.3)), far beyond double range.
    EXPECT_THROW(mlf::ml_e(0.3, 50.0), mlf::OverflowError);
}

TEST(MlE2, TermCapFlagsNonConvergence) {
    SeriesConfig cfg;
    cfg.max_terms = 5;
    const auto r = mlf::ml_e(0.5, 3.0, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terms_used, 5u);
}

TEST(MlE2, HeavyCancellationIsResolved) {
    // Terms reach ~1e12 (alpha = 0.9) and ~5e13 (alpha = 0.3) against O(1e-2) values.
    // 60-digit references (mpmath).
    const auto a = mlf::ml_e(0.9, -21.0);
    ASSERT_TRUE(a.converged);
    EXPECT_NEAR(a.value, 0.0054503987030660210841, 1e-12 * 0.00545);
    const auto b = mlf::ml_e(0.3, -3.0);
    ASSERT_TRUE(b.converged);
    EXPECT_NEAR(b.value, 0.21180263319643578203, 1e-12 * 0.2118);
    const auto c = mlf::ml_e2(0.3, 0.3, -2.0 * std::pow(4.0, 0.3));
    ASSERT_TRUE(c.converged);
    EXPECT_NEAR(c.value, 0.01695621090524501752, 1e-12 * 0.017);
}

TEST(MlE2, CancellationFlagsNonConvergence) {
    // Terms grow past e^2000 before decaying: no fixed precision here certifies the value.
    const auto r = mlf::ml_e(0.3, -10.0);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(mlf::certified(r, "test"), mlf::ConvergenceError);
}

TEST(MlE2, ResultInvariants) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.3, 1.0), ub(0.1, 3.0), uz(-3.0, 4.0);
    const SeriesConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const auto r = mlf::ml_e2(ua(rng), ub(rng), uz(rng), cfg);
        EXPECT_LE(r.terms_used, cfg.max_terms);
        EXPECT_GE(r.error_estimate, 0.0);
        if (r.converged) {
            EXPECT_LE(r.error_estimate, cfg.tol * std::max(std::abs(r.value), 1.0));
        }
    }
}

TEST(MlE2, ErrorEstimateIsSound) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(0.3, 1.0), ub(0.2, 2.5), uz(-3.0, 4.0);
    SeriesConfig coarse;
    SeriesConfig fine;
    fine.tol = coarse.tol / 100.0;
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const double a = ua(rng), b = ub(rng), z = uz(rng);
        const auto r1 = mlf::ml_e2(a, b, z, coarse);
        const auto r2 = mlf::ml_e2(a, b, z, fine);
        if (!r1.converged) continue;
        ++checked;
        // Truncation bound plus the final rounding of the compensated sum to double.
        const double rounding = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(r1.value);
        EXPECT_LE(std::abs(r2.value - r1.value), r1.error_estimate + rounding)
            << "alpha=" << a << " beta=" << b << " z=" << z;
    }
    EXPECT_GE(checked, 90);
}

TEST(MlE, PositivityAlongTrajectories) {
    int certified = 0, total = 0;
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0})
        for (double lambda = -5.0; lambda <= 5.0; lambda += 1.0)
            for (double t = 0.0; t <= 5.0; t += 0.25) {
                const double z = lambda * std::pow(t, alpha);
                if (std::abs(z) > 50.0) continue;
                for (double beta : {1.0, alpha}) {
                    ++total;
                    mlf::EvalResult r;
                    try {
                        r = mlf::ml_e2(alpha, beta, z);
                    } catch (const mlf::OverflowError&) {
                        continue;
                    }
                    if (!r.converged) continue;  // outside what double can certify
                    ++certified;
                    EXPECT_GT(r.value, 0.0) << alpha << " " << beta << " " << z;
                }
            }
    EXPECT_GT(certified, total * 3 / 4);
}

TEST(MlE, MonotoneInArgument) {
    for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
        double prev = mlf::ml_e(alpha, -3.0).value;
        for (int i = 1; i <= 70; ++i) {
            const double z = -3.0 + 0.1 * i;
            const auto cur = mlf::ml_e(alpha, z);
            ASSERT_TRUE(cur.converged) << "alpha = " << alpha << " z = " << z;
            EXPECT_GT(cur.value, prev) << "alpha = " << alpha << " z = " << z;
            prev = cur.value;
        }
    }
}

}  // namespace
