#include <cmath>

#include <gtest/gtest.h>

#include "mlf/gamma.hpp"

namespace {

// Reference values from a 50-digit evaluation (mpmath), frozen here.
struct Reference {
    double x;
    double value;
};

constexpr Reference kReference[] = {
    {0.1, 9.5135076986687318363},
    {0.25, 3.6256099082219083119},
    {0.5, 1.7724538509055160273},
    {1.5, 0.88622692545275801365},
    {3.7, 4.1706517837966031654},
    {10.5, 1133278.3889487855673},
    {50.25, 1.6144764712412441176e+63},
    {100.5, 9.3209631040827166083e+156},
    {170.5, 5.5620924145599996107e+305},
};

TEST(Gamma, Factorials) {
    EXPECT_DOUBLE_EQ(mlf::gamma(1.0), 1.0);
    EXPECT_NEAR(mlf::gamma(5.0), 24.0, 24.0 * 1e-14);
    double fact = 1.0;
    for (int k = 1; k <= 30; ++k) {
        EXPECT_NEAR(mlf::gamma(k), fact, fact * 1e-13) << "Gamma(" << k << ")";
        fact *= k;
    }
}

TEST(Gamma, HighPrecisionReference) {
    for (const auto& r : kReference)
        EXPECT_NEAR(mlf::gamma(r.x), r.value, std::abs(r.value) * 1e-13) << "x = " << r.x;
}

TEST(Gamma, AgreesWithLibmAcrossRange) {
    double worst = 0.0;
    for (double x = 0.01; x <= 171.0; x += 0.0737) {
        const double ref = std::tgamma(x);
        worst = std::max(worst, std::abs(mlf::gamma(x) - ref) / ref);
    }
    EXPECT_LE(worst, 1e-13);
}

TEST(Gamma, LogGammaMatchesLog) {
    for (const auto& r : kReference)
        EXPECT_NEAR(mlf::log_gamma(r.x), std::log(r.value), 1e-12 * std::max(1.0, std::log(r.value)));
    EXPECT_NEAR(mlf::log_gamma(1000.0), std::lgamma(1000.0), 1e-10);
}

TEST(Gamma, DomainAndOverflow) {
    EXPECT_THROW(mlf::gamma(0.0), mlf::DomainError);
    EXPECT_THROW(mlf::gamma(-1.5), mlf::DomainError);
    EXPECT_THROW(mlf::gamma(std::nan("")), mlf::DomainError);
    EXPECT_THROW(mlf::gamma(171.7), mlf::OverflowError);
    EXPECT_NO_THROW(mlf::gamma(171.6));
    EXPECT_TRUE(std::isfinite(mlf::gamma(171.6)));
    EXPECT_THROW(mlf::log_gamma(0.0), mlf::DomainError);
}

TEST(Gamma, WideEvaluationMatchesDouble) {
    for (double x : {0.3, 2.5, 17.25, 120.0})
        EXPECT_NEAR(static_cast<double>(mlf::lanczos_gamma<long double>(x)), mlf::gamma(x),
                    mlf::gamma(x) * 1e-13);
}

}  // namespace
