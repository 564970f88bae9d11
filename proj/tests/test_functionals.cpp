#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "interface_lab/functionals.hpp"
#include "interface_lab/stats.hpp"
#include "oracles.hpp"

using namespace interface_lab;

namespace {

SkewPath path_of(std::vector<double> xs, double dt, double alpha = 0.5) {
    SkewPath p;
    p.alpha = alpha;
    p.x0 = xs.front();
    p.dt = dt;
    p.x_values = std::move(xs);
    return p;
}

}  // namespace

TEST(Occupation, HandApportionedExample) {
    const auto m = make_medium(4, 1, 0.8);
    const auto r = occupation_times(path_of({1.0, -1.0, -1.0}, 1.0), m);
    EXPECT_DOUBLE_EQ(r.gamma_plus_leb, 0.5);
    EXPECT_DOUBLE_EQ(r.gamma_minus_leb, 1.5);
    EXPECT_DOUBLE_EQ(r.gamma_plus_qv, 2.0);
    EXPECT_DOUBLE_EQ(r.gamma_minus_qv, 1.5);
    EXPECT_DOUBLE_EQ(r.horizon, 2.0);
}

TEST(Occupation, OneSidedPaths) {
    const auto m = make_medium(4, 1, 0.8);
    auto r = occupation_times(path_of({0.5, 1.0, 2.0, 0.1}, 1.0), m);
    EXPECT_EQ(r.gamma_plus_leb, 3.0);
    EXPECT_EQ(r.gamma_minus_leb, 0.0);
    r = occupation_times(path_of({-0.5, -1.0, -2.0, -0.1}, 1.0), m);
    EXPECT_EQ(r.gamma_plus_leb, 0.0);
    EXPECT_EQ(r.gamma_minus_leb, 3.0);
}

TEST(Occupation, InvariantsOnRandomPaths) {
    const auto m = make_medium(2.5, 0.3, 0.4);
    for (std::uint64_t i = 0; i < 200; ++i) {
        RngStream rng(12, i);
        const auto p = physical_path(m, 0.1, 0.01, 2.0, rng);
        const auto r = occupation_times(p, m);
        EXPECT_NEAR(r.gamma_plus_leb + r.gamma_minus_leb, r.horizon, 1e-12);
        EXPECT_DOUBLE_EQ(r.gamma_plus_qv, m.d_plus() * r.gamma_plus_leb);
        EXPECT_DOUBLE_EQ(r.gamma_minus_qv, m.d_minus() * r.gamma_minus_leb);
        EXPECT_GE(r.gamma_plus_leb, 0.0);
        EXPECT_GE(r.gamma_minus_leb, 0.0);
    }
}

TEST(Occupation, ExpectedPlusTimeIsAlphaStarTimesHorizon) {
    const auto m = make_medium(4, 1, 0.8);
    const std::size_t n = 20000;
    std::vector<double> frac(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(13, i);
        const auto r = occupation_times(physical_path(m, 0.0, 0.01, 3.0, rng), m);
        frac[i] = r.gamma_plus_leb / r.horizon;
    }
    const auto s = summarize(frac);
    EXPECT_NEAR(s.mean, 2.0 / 3.0, 3.0 * s.se);
}

TEST(TestFunctionTest, Examples) {
    auto f = make_test_function(0.8, 1, 0, 0);
    EXPECT_DOUBLE_EQ(f.first_derivative(0.0), 0.2);
    EXPECT_DOUBLE_EQ(f.first_derivative(-1e-300), 0.8);
    EXPECT_DOUBLE_EQ(0.8 * f.first_derivative(0.0), 0.2 * f.first_derivative(-1e-300));

    f = make_test_function(0.5, 0, 0.5, 0.5);
    for (double y : {-2.0, -0.1, 0.0, 0.3, 4.0}) {
        EXPECT_DOUBLE_EQ(f.value(y), y * y / 2);
        EXPECT_DOUBLE_EQ(f.second_derivative(y), 1.0);
    }

    f = make_test_function(0.8, 1, 1, 0);
    EXPECT_DOUBLE_EQ(f.value(2.0), 4.4);
    EXPECT_EQ(f.second_derivative(0.0), 2.0);
    EXPECT_EQ(f.second_derivative(-1.0), 0.0);

    EXPECT_THROW(make_test_function(1.0, 1, 0, 0), DomainError);
    EXPECT_THROW(make_test_function(0.0, 1, 0, 0), DomainError);
}

TEST(TestFunctionTest, InterfaceConditionHoldsForRandomMembers) {
    RngStream rng(14, 0);
    for (int i = 0; i < 200; ++i) {
        const double lam = 0.01 + 0.98 * rng.uniform();
        const auto f = make_test_function(lam, 4 * rng.uniform() - 2, rng.normal(), rng.normal());
        EXPECT_NEAR(lam * f.first_derivative(0.0), (1 - lam) * f.first_derivative(-1e-300), 1e-14);
        EXPECT_EQ(f.value(0.0), 0.0);
    }
}

TEST(Martingale, MismatchedLambdaIsRejected) {
    const auto m = make_medium(4, 1, 0.8);
    const auto f = make_test_function(0.5, 1, 0, 0);
    EXPECT_THROW(martingale_residual(path_of({0.0, 1.0}, 1.0), m, f), MismatchError);
}

TEST(Martingale, HandEvaluatedResidual) {
    const auto m = make_medium(4, 1, 0.8);
    const auto f = make_test_function(0.8, 1, 1, 0.5);
    // X: 0 -> 1 -> -2, so Y: 0 -> 2 -> -2; compensator uses left endpoints 0 and 2.
    const double res = martingale_residual(path_of({0.0, 1.0, -2.0}, 0.5), m, f);
    const double expected = f.value(-2.0) - f.value(0.0) - 0.5 * (4 * 2 * 0.5 + 4 * 2 * 0.5);
    EXPECT_DOUBLE_EQ(res, expected);
}

TEST(Martingale, LinearFunctionHasNoCompensator) {
    const auto m = make_medium(4, 1, 0.8);
    const auto f = make_test_function(0.8, 1, 0, 0);
    RngStream rng(15, 0);
    const auto p = physical_path(m, 0.5, 0.01, 1.0, rng);
    const auto y = p.y_values(m);
    EXPECT_DOUBLE_EQ(martingale_residual(p, m, f), f.value(y.back()) - f.value(y.front()));
}

TEST(Martingale, ClassicalQuadratic) {
    const auto m = make_medium(2, 2, 0.5);
    const auto f = make_test_function(0.5, 0, 0.5, 0.5);
    const std::size_t n = 20000;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(16, i);
        const auto p = physical_path(m, 0.3, 0.05, 1.0, rng);
        r[i] = martingale_residual(p, m, f);
        const double yt = p.y_values(m).back();
        ASSERT_NEAR(r[i], yt * yt / 2 - 0.045 - 2.0 * 1.0 / 2, 1e-12);
    }
    const auto s = summarize(r);
    EXPECT_NEAR(s.mean, 0.0, 3.0 * s.se);
}

TEST(Martingale, BrokenAtWrongAlpha) {
    const auto m = make_medium(4, 1, 0.8);
    const auto f = make_test_function(0.8, 1, 0, 0);
    const std::size_t n = 100000;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(17, i);
        r[i] = martingale_residual(physical_path(m, 0.0, 0.1, 1.0, rng, 0.5), m, f);
    }
    const auto s = summarize(r);
    EXPECT_GT(std::abs(s.mean), 5.0 * s.se);
}

TEST(FirstPassage, SymmetricSurvivalMatchesReflection) {
    const auto m = make_medium(1, 1, 0.5);
    const std::size_t n = 20000;
    std::vector<double> alive(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(18, i);
        const auto s = first_passage(m, 1.0, -1.0, 0.01, 4.0, rng, true);
        alive[i] = s.survives(4.0);
        EXPECT_EQ(s.t_max, 4.0);
        if (s.passage_time) {
            EXPECT_GT(*s.passage_time, 0.0);
            EXPECT_LT(*s.passage_time, 4.0);
        }
    }
    const auto st = summarize(alive);
    EXPECT_NEAR(st.mean, oracle::bm_survival(2.0, 4.0), 3.0 * st.se);
}

TEST(FirstPassage, BridgeCorrectionRemovesCoarseStepBias) {
    // Without the bridge correction a coarse step misses excursions across the level.
    const auto m = make_medium(1, 1, 0.5);
    const std::size_t n = 20000;
    std::vector<double> with(n), without(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream a(19, i), b(19, i);
        with[i] = first_passage(m, 1.0, -1.0, 0.1, 2.0, a, true).survives(2.0);
        without[i] = first_passage(m, 1.0, -1.0, 0.1, 2.0, b, false).survives(2.0);
    }
    const double exact = oracle::bm_survival(2.0, 2.0);
    const auto sw = summarize(with), so = summarize(without);
    EXPECT_NEAR(sw.mean, exact, 3.0 * sw.se);
    EXPECT_GT(so.mean - exact, 5.0 * so.se);
}

TEST(FirstPassage, SurvivalCurveIsMonotoneInUnitInterval) {
    const auto m = make_medium(4, 1, 0.8);
    std::vector<FptSample> samples;
    for (std::size_t i = 0; i < 5000; ++i) {
        RngStream rng(20, i);
        samples.push_back(first_passage(m, -1.0, 1.0, 0.01, 2.0, rng, true));
    }
    double prev = 1.0;
    for (int k = 0; k <= 40; ++k) {
        double alive = 0;
        for (const auto& s : samples) alive += s.survives(0.05 * k);
        alive /= double(samples.size());
        EXPECT_LE(alive, prev);
        EXPECT_GE(alive, 0.0);
        prev = alive;
    }
    EXPECT_EQ(prev < 1.0, true);
}

TEST(FirstPassage, RejectsBadArguments) {
    const auto m = make_medium(4, 1, 0.8);
    RngStream rng(1, 0);
    EXPECT_THROW(first_passage(m, 1.0, 1.0, 0.01, 1.0, rng, true), DomainError);
    EXPECT_THROW(first_passage(m, 1.0, -1.0, -0.01, 1.0, rng, true), DomainError);
}
