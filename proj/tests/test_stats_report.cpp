#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "interface_lab/parallel.hpp"
#include "interface_lab/report.hpp"
#include "interface_lab/rng.hpp"
#include "interface_lab/stats.hpp"

using namespace interface_lab;

TEST(Summarize, Examples) {
    auto s = summarize(std::vector<double>{1, 2, 3});
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.sd, 1.0);
    EXPECT_NEAR(s.se, 0.57735026919, 1e-11);
    EXPECT_EQ(s.n, 3u);

    s = summarize(std::vector<double>{0, 1});
    EXPECT_DOUBLE_EQ(s.mean, 0.5);
    EXPECT_NEAR(s.se, 0.5, 1e-15);

    s = summarize(std::vector<double>(10, 2.75));
    EXPECT_DOUBLE_EQ(s.mean, 2.75);
    EXPECT_EQ(s.se, 0.0);
    EXPECT_LE(s.ci95_low, s.mean);
    EXPECT_GE(s.ci95_high, s.mean);

    EXPECT_THROW(summarize(std::vector<double>{1.0}), InsufficientDataError);
    EXPECT_THROW(summarize(std::vector<double>{}), InsufficientDataError);
}

TEST(Summarize, StandardErrorScalesAsInverseRootN) {
    RngStream r(21, 0);
    std::vector<double> small(10000), large(40000);
    for (auto& v : small) v = r.normal();
    for (auto& v : large) v = r.normal();
    const double ratio = summarize(small).se / summarize(large).se;
    EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(Stats, PooledSeAndQuantile) {
    EXPECT_DOUBLE_EQ(pooled_se(3, 4), 5.0);
    EXPECT_DOUBLE_EQ(quantile({5, 1, 3}, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 1.0), 5.0);
}

TEST(Stats, KsDistanceOfKnownSample) {
    // Uniform CDF against {0.5}: sup gap is 0.5.
    EXPECT_DOUBLE_EQ(ks_distance({0.5}, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5);
}

TEST(Report, DoubleFormatting) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(1e-20), "9.9999999999999995e-21");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Report, JsonLayoutAndRoundTrip) {
    ExperimentReport r;
    r.experiment = "demo";
    r.config["x"] = 0.1;
    r.diagnostics.push_back({"d", 1.0, 2.0, Comparison::less, ""});
    r.findings["bad"] = std::nan("");
    r.tables.push_back({"t", {"a", "b"}, {{1.0, 2.5}}});
    const std::string text = dump_json(to_json(r));
    EXPECT_NE(text.find("\"x\": 0.10000000000000001"), std::string::npos);
    EXPECT_NE(text.find("\"bad\": null"), std::string::npos);
    EXPECT_NE(text.find("[1, 2.5]"), std::string::npos);
    const auto back = nlohmann::json::parse(text);
    EXPECT_EQ(back["experiment"], "demo");
    EXPECT_EQ(back["passed"], true);
    EXPECT_EQ(back["diagnostics"][0]["comparison"], "<");
    EXPECT_DOUBLE_EQ(back["config"]["x"].get<double>(), 0.1);
    EXPECT_LT(text.find("\"experiment\""), text.find("\"wall_time_seconds\""));
}

TEST(Report, FailedDiagnosticFailsReport) {
    ExperimentReport r;
    r.diagnostics.push_back({"ok", 1.0, 2.0, Comparison::less, ""});
    r.diagnostics.push_back({"bad", 3.0, 2.0, Comparison::less_equal, ""});
    EXPECT_FALSE(r.passed());
    r.diagnostics.back().measured = NAN;
    EXPECT_FALSE(r.diagnostics.back().passed());
    EXPECT_NE(r.diagnostic("ok"), nullptr);
    EXPECT_EQ(r.diagnostic("missing"), nullptr);
}

TEST(Report, Csv) {
    CurveTable t{"s", {"t", "v"}, {{0.25, 1.0}, {0.5, NAN}}};
    EXPECT_EQ(to_csv(t), "t,v\n0.25,1\n0.5,nan\n");
}

TEST(Parallel, ResultsIndependentOfWorkerCount) {
    auto fn = [](std::size_t i) {
        RngStream r(22, i);
        return r.normal() + double(i);
    };
    const auto one = map_paths<double>(1000, fn, 1);
    const auto four = map_paths<double>(1000, fn, 4);
    const auto many = map_paths<double>(1000, fn, 13);
    EXPECT_EQ(one, four);
    EXPECT_EQ(one, many);
}

TEST(Parallel, PropagatesExceptions) {
    auto fn = [](std::size_t i) -> double {
        if (i == 77) throw std::runtime_error("boom");
        return 0.0;
    };
    EXPECT_THROW(map_paths<double>(100, fn, 3), std::runtime_error);
}
