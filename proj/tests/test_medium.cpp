#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "interface_lab/medium.hpp"

using namespace interface_lab;

TEST(Medium, AlphaStarExamples) {
    EXPECT_NEAR(make_medium(4, 1, 0.8).alpha_star(), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(make_medium(4, 1, 0.5).alpha_star(), 1.0 / 3.0, 1e-15);
    for (double d : {0.01, 1.0, 7.5, 1e4}) EXPECT_NEAR(make_medium(d, d, 0.5).alpha_star(), 0.5, 1e-15);
}

TEST(Medium, StoredAlphaMatchesRecomputation) {
    for (double lam : {0.05, 0.3, 0.8, 0.97}) {
        const auto m = make_medium(2.5, 0.7, lam);
        EXPECT_EQ(m.alpha_star(), TwoSidedMedium::transmission(2.5, 0.7, lam));
        EXPECT_GT(m.alpha_star(), 0.0);
        EXPECT_LT(m.alpha_star(), 1.0);
    }
}

TEST(Medium, RejectsBadParametersNamingTheField) {
    auto field_of = [](auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(field_of([] { make_medium(0, 1, 0.5); }), "d_plus");
    EXPECT_EQ(field_of([] { make_medium(1, -2, 0.5); }), "d_minus");
    EXPECT_EQ(field_of([] { make_medium(1, 1, 1.0); }), "lambda");
    EXPECT_EQ(field_of([] { make_medium(1, 1, 0.0); }), "lambda");
    EXPECT_EQ(field_of([] { make_medium(NAN, 1, 0.5); }), "d_plus");
    EXPECT_EQ(field_of([] { make_medium(1, INFINITY, 0.5); }), "d_minus");
}

TEST(Medium, FluxContinuityLambda) {
    EXPECT_DOUBLE_EQ(flux_continuity_lambda(4, 1), 0.8);
    EXPECT_DOUBLE_EQ(flux_continuity_lambda(3, 3), 0.5);
    EXPECT_DOUBLE_EQ(flux_continuity_lambda(1, 4), 0.2);
    EXPECT_THROW(flux_continuity_lambda(-1, 4), DomainError);
}

TEST(Medium, FluxLambdaGivesSqrtRatioAlpha) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> logd(-4.0, 4.0);
    for (int i = 0; i < 500; ++i) {
        const double dp = std::exp(logd(gen));
        const double dm = std::exp(logd(gen));
        const auto m = make_medium(dp, dm, flux_continuity_lambda(dp, dm));
        EXPECT_NEAR(m.alpha_star(), std::sqrt(dp) / (std::sqrt(dp) + std::sqrt(dm)), 1e-14);
    }
}

TEST(Medium, AlphaStarIncreasingInLambda) {
    const double dp = 4.0, dm = 1.0;
    double prev = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double a = make_medium(dp, dm, k / 1000.0).alpha_star();
        EXPECT_GT(a, prev);
        prev = a;
    }
}

TEST(Medium, MirrorSymmetry) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> d(0.01, 20.0), l(0.001, 0.999);
    for (int i = 0; i < 500; ++i) {
        const double a = d(gen), b = d(gen), lam = l(gen);
        EXPECT_NEAR(make_medium(a, b, lam).alpha_star(), 1.0 - make_medium(b, a, 1.0 - lam).alpha_star(), 1e-14);
    }
}

TEST(Medium, ScaleExamples) {
    const auto m = make_medium(4, 1, 0.8);
    EXPECT_EQ(scale(m, 1.0), 2.0);
    EXPECT_EQ(scale(m, 0.0), 0.0);
    EXPECT_EQ(scale(m, -2.0), -2.0);
    EXPECT_EQ(unscale(m, 2.0), 1.0);
    EXPECT_EQ(unscale(m, 0.0), 0.0);
    EXPECT_EQ(unscale(m, -2.0), -2.0);
    EXPECT_THROW(scale(m, NAN), DomainError);
    EXPECT_THROW(unscale(m, INFINITY), DomainError);
}

TEST(Medium, ScaleIsIncreasingBijection) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> d(0.01, 50.0), x(-1e3, 1e3);
    for (int i = 0; i < 200; ++i) {
        const auto m = make_medium(d(gen), d(gen), 0.5);
        double prev_x = -1e4, prev_y = scale(m, prev_x);
        for (int k = 0; k < 50; ++k) {
            const double xi = x(gen);
            const double yi = scale(m, xi);
            EXPECT_EQ(std::signbit(yi), std::signbit(xi));
            // Inverse to within 2 ulps (scaling and unscaling each round once).
            const double back = unscale(m, yi);
            EXPECT_LE(std::abs(back - xi), 2.0 * std::abs(std::nextafter(xi, 2 * xi + 1) - xi));
            if (xi > prev_x) {
                EXPECT_GT(yi, prev_y);
            }
            prev_x = xi;
            prev_y = yi;
        }
    }
}

TEST(Medium, DispersionAtConvention) {
    const auto m = make_medium(4, 1, 0.8);
    EXPECT_EQ(dispersion_at(m, 3.2), 4.0);
    EXPECT_EQ(dispersion_at(m, 0.0), 4.0);
    EXPECT_EQ(dispersion_at(m, -0.001), 1.0);
    for (double x : {-3.0, -1e-9, 0.0, 1e-9, 2.0}) EXPECT_EQ(dispersion_at(m, scale(m, x)) == 4.0, x >= 0.0);
}

TEST(Medium, Upwelling) {
    auto m = medium_from_upwelling(1, -1, 2, 0.5);
    EXPECT_DOUBLE_EQ(m.d_plus(), 1.0);
    EXPECT_DOUBLE_EQ(m.d_minus(), 4.0);
    EXPECT_EQ(m.lambda(), 0.5);
    EXPECT_NEAR(m.alpha_star(), 2.0 / 3.0, 1e-15);
    // Continuity of derivatives: alpha* = sqrt(D-)/(sqrt(D+) + sqrt(D-)).
    EXPECT_NEAR(m.alpha_star(), std::sqrt(4.0) / (std::sqrt(1.0) + std::sqrt(4.0)), 1e-15);

    m = medium_from_upwelling(1, -1, 2, 2);
    EXPECT_DOUBLE_EQ(m.d_plus(), 1.0);
    EXPECT_DOUBLE_EQ(m.d_minus(), 1.0);
    EXPECT_DOUBLE_EQ(m.alpha_star(), 0.5);

    m = medium_from_upwelling(2, -1, 1, 1);
    EXPECT_DOUBLE_EQ(m.d_plus(), 4.0);
    EXPECT_DOUBLE_EQ(m.d_minus(), 4.0);

    EXPECT_THROW(medium_from_upwelling(1, 1, 2, 2), DomainError);
    EXPECT_THROW(medium_from_upwelling(1, 0, 2, 2), DomainError);
    EXPECT_THROW(medium_from_upwelling(0, -1, 2, 2), DomainError);
    EXPECT_THROW(medium_from_upwelling(1, -1, -2, 2), DomainError);
    EXPECT_THROW(medium_from_upwelling(1, -1, 2, 0), DomainError);
}
