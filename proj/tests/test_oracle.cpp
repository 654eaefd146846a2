#include <gtest/gtest.h>

#include <cmath>

#include "smkp/oracle.hpp"
#include "support/co.hpp"

using namespace smkp;
using testing_support::co;
using testing_support::fields;
using testing_support::rel;

TEST(Numerov, MatchesClosedFormAtSamplePoints) {
    struct Point {
        double b, xi, alpha;
        int m;
    };
    for (const Point& p : {Point{0, 0, 1, 0}, Point{6, 6, 0.6, -1}, Point{6, 0, 1, 1}}) {
        const auto f = fields(p.b, p.xi, p.alpha);
        const auto states = numerov_states(co(), f, p.m, 4, ShootingConfig{});
        ASSERT_EQ(states.size(), 4u);
        for (int k = 0; k < 4; ++k) {
            const double e = energy_2d(co(), f, k, p.m).energy;
            EXPECT_LE(rel(states[k].energy, e), 1e-7) << "n=" << k << " m=" << p.m;
            EXPECT_EQ(states[k].nodes, k);
        }
    }
}

TEST(Numerov, StatesAreOrdered) {
    const auto s = numerov_eigenvalues(co(), fields(), 0, 6, ShootingConfig{});
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i], s[i - 1]);
}

TEST(Numerov, GridConvergence) {
    ShootingConfig coarse;
    ShootingConfig fine;
    fine.step = coarse.step / 2;
    const double a = numerov_eigenvalues(co(), fields(), 0, 4, coarse)[3];
    const double b = numerov_eigenvalues(co(), fields(), 0, 4, fine)[3];
    EXPECT_LE(std::abs(a - b), 1e-8);
}

TEST(Numerov, ExactCentrifugalModeShiftsGroundState) {
    ShootingConfig cfg;
    cfg.centrifugal_mode = CentrifugalMode::exact;
    const double exact = numerov_eigenvalues(co(), fields(), 0, 1, cfg)[0];
    const double approx = energy_2d(co(), fields(), 0, 0).energy;
    // Gap frozen from a converged shooting run.
    EXPECT_NEAR(exact - approx, 0.0836908549, 1e-6);
}

TEST(Numerov, BracketFailure) {
    ShootingConfig cfg;
    cfg.energy_bracket = std::make_pair(-1.0, 0.0);
    EXPECT_THROW(numerov_states(co(), fields(), 0, 1, cfg), BracketFailure);
    cfg.energy_bracket = std::make_pair(0.5, 1.0);  // ground state at 0.18 lies below
    EXPECT_THROW(numerov_states(co(), fields(), 0, 1, cfg), BracketFailure);
}

TEST(Numerov, ConfigValidation) {
    ShootingConfig cfg;
    cfg.r_min = 0.0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = {};
    cfg.step = -1;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = {};
    cfg.energy_bracket = std::make_pair(1.0, 1.0);
    EXPECT_THROW(cfg.validate(), DomainError);
    EXPECT_THROW(numerov_states(co(), fields(), 0, 0, ShootingConfig{}), DomainError);
}

TEST(Numerov, SignChangeCounter) {
    EXPECT_EQ(detail::count_sign_changes({1, 2, -1, -2, 3}), 2);
    // Values below the relative floor are ignored.
    EXPECT_EQ(detail::count_sign_changes({1, -1e-14, 1}), 0);
}

TEST(NmaxScan, CarbonMonoxide) {
    const auto s = nmax_scan(co(), fields(), 0, 500);
    const auto c = derive_coefficients(co(), fields(), 0);
    EXPECT_EQ(s.n_max, c.n_max);
    EXPECT_EQ(s.n_max, 69);
    EXPECT_EQ(s.argmax, 70);
    EXPECT_FALSE(s.cap_hit);
    EXPECT_FALSE(s.no_interior_max);
}

TEST(NmaxScan, AgreesWithFloorAcrossFields) {
    for (double b : {0.0, 6.0, 20.0})
        for (double xi : {0.0, 6.0})
            for (double alpha : {0.3, 1.0})
                for (int m : {-2, 0, 2}) {
                    const auto f = fields(b, xi, alpha);
                    const auto c = derive_coefficients(co(), f, m);
                    EXPECT_EQ(nmax_scan(co(), f, m, 1000).n_max, c.n_max);
                }
}

TEST(NmaxScan, CapAndNoInteriorMax) {
    const auto capped = nmax_scan(co(), fields(), 0, 10);
    EXPECT_TRUE(capped.cap_hit);
    EXPECT_EQ(capped.n_max, 10);

    auto shallow = co();
    shallow.D_e = 1e-4;
    const auto none = nmax_scan(shallow, fields(), 0, 10);
    EXPECT_TRUE(none.no_interior_max);
    EXPECT_THROW(nmax_scan(co(), fields(), 0, 0), DomainError);
}

TEST(NmaxScan, SensitivityToQ1) {
    auto c = derive_coefficients(co(), fields(), 0);
    const int base = nmax_scan(c, 1000).n_max;
    const double old_root = std::sqrt(c.Q1);
    c.Q1 *= 1.01;
    const int bumped = nmax_scan(c, 1000).n_max;
    EXPECT_GE(bumped, base);
    EXPECT_LE(bumped - base, static_cast<int>(std::ceil(std::sqrt(c.Q1) - old_root)));
}

TEST(FdSelftest, AllCasesPass) {
    const auto rep = fd_selftest();
    EXPECT_GE(rep.cases.size(), 6u);
    for (const auto& c : rep.cases) EXPECT_TRUE(c.pass) << c.name << " " << c.rel_error;
    EXPECT_TRUE(rep.all_pass());
}
