#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "smkp/special_functions.hpp"
#include "support/oracles.hpp"

using namespace smkp;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST(Dawson, ZeroAndOddness) {
    EXPECT_EQ(dawson(0.0), 0.0);
    for (double x : {0.05, 0.3, 1.0, 2.7, 6.99, 7.0, 12.5, 40.0})
        EXPECT_EQ(dawson(-x), -dawson(x)) << x;
}

TEST(Dawson, FrozenValueAtOne) {
    // Adaptive quadrature of the defining integral, 40 digits.
    EXPECT_LE(rel(dawson(1.0), 0.538079506912768419), 1e-15);
}

TEST(Dawson, MatchesSeriesOracle) {
    for (double x = -5.0; x <= 5.0; x += 0.0625) {
        if (x == 0.0) continue;
        const double ref = static_cast<double>(oracle::dawson_series(x));
        EXPECT_LE(rel(dawson(x), ref), 1e-12) << "x=" << x;
    }
}

TEST(Dawson, MatchesQuadratureOracleOutTo50) {
    for (double x : {0.01, 0.19, 0.2, 0.21, 0.9, 1.5, 3.3, 6.9, 7.1, 9.0, 15.0, 27.0, 49.9}) {
        const double ref = static_cast<double>(oracle::dawson_quadrature(x));
        EXPECT_LE(rel(dawson(x), ref), 1e-12) << "x=" << x;
    }
}

TEST(Dawson, SatisfiesItsDifferentialEquation) {
    // F'(x) = 1 - 2 x F(x)
    for (double x : {0.1, 0.5, 1.0, 3.0, 8.0, 20.0}) {
        const double h = 1e-4 * std::max(1.0, x);
        const double d = (dawson(x + h) - dawson(x - h)) / (2 * h);
        EXPECT_NEAR(d, 1.0 - 2.0 * x * dawson(x), 1e-7) << x;
    }
}

TEST(Erfi, FrozenValueAtOne) {
    EXPECT_LE(rel(erfi(1.0), 1.650425758797542876), 1e-14);
}

TEST(Erfi, MatchesSeriesOracle) {
    for (double x = 0.125; x <= 5.0; x += 0.125) {
        const double ref = static_cast<double>(oracle::erfi_series(x));
        EXPECT_LE(rel(erfi(x), ref), 1e-12) << x;
        EXPECT_EQ(erfi(-x), -erfi(x));
    }
}

TEST(Erfi, OverflowIsReported) {
    EXPECT_NO_THROW(erfi(26.0));
    EXPECT_THROW(erfi(30.0), OverflowError);
}

TEST(ErfiScaled, FiniteAndAccurateToTenThousand) {
    EXPECT_LE(rel(erfi_scaled(100.0), 0.005642177972594137773), 1e-14);
    for (double x : {1e-3, 0.5, 5.0, 50.0, 300.0, 2500.0, 9999.0, 1e4}) {
        const double v = erfi_scaled(x);
        ASSERT_TRUE(std::isfinite(v)) << x;
        const double ref = 2.0 / std::sqrt(std::numbers::pi) *
                           static_cast<double>(oracle::dawson_quadrature(x));
        EXPECT_LE(rel(v, ref), 1e-12) << x;
        EXPECT_EQ(erfi_scaled(-x), -v);
    }
}

TEST(ErfiScaled, BoundedByDawsonMaximum) {
    const double bound = 2.0 / std::sqrt(std::numbers::pi) * 0.5411;
    for (double x = 0.0; x < 20.0; x += 0.01) EXPECT_LT(std::abs(erfi_scaled(x)), bound);
}

TEST(Hyp2f1, TerminatesAtDegreeZero) {
    EXPECT_EQ(hyp2f1_terminating(0, 3.7, -2.5, 0.9), 1.0);
}

TEST(Hyp2f1, ExactRationalCases) {
    using R = oracle::Rational;
    // n = 2, b = 3, c = 2, s = 1/2.
    EXPECT_NEAR(hyp2f1_terminating(2, 3.0, 2.0, 0.5),
                oracle::to_double(oracle::hyp2f1_rational(2, R(3), R(2), R(1, 2))), 1e-15);
    struct Case {
        int n;
        R b, c, s;
    } cases[] = {{3, R(5, 2), R(7, 3), R(1, 4)},  {5, R(11), R(3, 2), R(2, 3)},
                 {4, R(-7, 2), R(9, 4), R(3, 5)}, {6, R(13, 3), R(5), R(1, 7)},
                 {1, R(2), R(3), R(1)}};
    for (const auto& c : cases) {
        const double ref = oracle::to_double(oracle::hyp2f1_rational(c.n, c.b, c.c, c.s));
        const double got = hyp2f1_terminating(c.n, oracle::to_double(c.b),
                                              oracle::to_double(c.c), oracle::to_double(c.s));
        EXPECT_NEAR(got, ref, 1e-13 * std::max(1.0, std::abs(ref))) << "n=" << c.n;
    }
}

TEST(Hyp2f1, ChuVandermondeAtUnitArgument) {
    // 2F1(-n, b; c; 1) = (c - b)_n / (c)_n
    auto poch = [](double a, int n) {
        double p = 1.0;
        for (int k = 0; k < n; ++k) p *= a + k;
        return p;
    };
    for (int n = 0; n <= 8; ++n) {
        const double b = 2.25, c = 4.5;
        EXPECT_NEAR(hyp2f1_terminating(n, b, c, 1.0), poch(c - b, n) / poch(c, n), 1e-13) << n;
    }
}

TEST(Hyp2f1, ErrorsAtPolesAndNegativeDegree) {
    EXPECT_THROW(hyp2f1_terminating(3, 1.0, -1.0, 0.5), PoleError);
    EXPECT_NO_THROW(hyp2f1_terminating(1, 1.0, -1.0, 0.5));  // only (c)_0 = 1 is used
    EXPECT_THROW(hyp2f1_terminating(-1, 1.0, 1.0, 0.5), DomainError);
}

TEST(CompensatedSum, RecoversLostLowOrderBits) {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1.0);
}
