#include "tsaudit/discovery.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <random>

using namespace tsaudit;

TEST_CASE("granger: strong coupling is found in the right direction") {
    int found = 0, reverse = 0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const auto series = testutil::coupled_pair(1000, 0.5, 600 + static_cast<std::uint64_t>(s));
        const auto graph = var_granger_discover(series, 1, 0.05);
        if (graph.has_edge(0, 1, 1)) ++found;
        if (graph.has_edge(1, 0, 1)) ++reverse;
    }
    CHECK(found >= 48);
    CHECK(reverse <= 5);
}

TEST_CASE("granger: independent noise yields almost no cross edges") {
    double edges = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const auto series = testutil::iid_panel(400, 3, 9200 + static_cast<std::uint64_t>(s));
        const auto graph = var_granger_discover(series, 1, 0.05);
        int cross = 0;
        for (const auto& e : graph.edges())
            if (e.source != e.target) ++cross;
        edges += cross;
    }
    CHECK(edges / seeds <= 0.5);
}

TEST_CASE("granger: diagonal-only dynamics produce no cross edges") {
    int clean = 0;
    const int seeds = 30;
    for (int s = 0; s < seeds; ++s) {
        const auto series =
            testutil::panel({testutil::ar1(600, 0.6, 100 + static_cast<std::uint64_t>(s)),
                             testutil::ar1(600, 0.4, 300 + static_cast<std::uint64_t>(s)),
                             testutil::ar1(600, 0.5, 500 + static_cast<std::uint64_t>(s))});
        const auto graph = var_granger_discover(series, 1, 0.05);
        int cross = 0;
        for (const auto& e : graph.edges())
            if (e.source != e.target) ++cross;
        if (cross == 0) ++clean;
    }
    CHECK(clean >= 27);
}

TEST_CASE("granger is invariant under per-variable affine rescaling") {
    const auto series = testutil::coupled_pair(800, 0.4, 31);
    const auto base = var_granger_discover(series, 2, 0.05);

    Eigen::MatrixXd scaled = series.values();
    scaled.col(0) *= 17.0;
    scaled.col(1) = (scaled.col(1).array() * 0.03 + 5.0).matrix();
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(scaled.rows(), scaled.cols());
    mask.setConstant(false);
    TimeSeriesMatrix rescaled(series.timestamps(), scaled, mask, series.names());
    const auto transformed = var_granger_discover(rescaled, 2, 0.05);
    CHECK(base.edges() == transformed.edges());
}

TEST_CASE("granger preconditions") {
    const auto tiny = testutil::iid_panel(25, 3, 4);
    CHECK_THROWS_AS(var_granger_discover(tiny, 1, 0.05), AuditError);
    CHECK_THROWS_AS(var_granger_discover(tiny, 0, 0.05), AuditError);
}

TEST_CASE("score_graph: hand enumeration and identity") {
    SummaryGraph truth(2, 1);
    truth.add_edge(0, 1, 1);
    SummaryGraph est(2, 1);
    est.add_edge(0, 1, 1);
    est.add_edge(1, 0, 1);

    const auto s = score_graph(est, truth);
    CHECK(s.tp == 1);
    CHECK(s.fp == 1);
    CHECK(s.fn == 0);
    CHECK(s.universe == 2 * 2 * 2 - 2);
    CHECK(s.fpr == doctest::Approx(1.0 / (s.universe - 1)));

    const auto sid = score_graph(truth, truth);
    CHECK(sid.fpr == doctest::Approx(0.0));
    CHECK(sid.fnr == doctest::Approx(0.0));
    CHECK(sid.f1 == doctest::Approx(1.0));

    SummaryGraph empty(2, 1);
    const auto se = score_graph(empty, truth);
    CHECK(se.fnr == doctest::Approx(1.0));
    CHECK(se.fpr == doctest::Approx(0.0));

    SummaryGraph other(3, 1);
    CHECK_THROWS_AS(score_graph(other, truth), AuditError);
}

TEST_CASE("score_graph identity property holds for random graphs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> var(0, 4);
    std::uniform_int_distribution<int> lag(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        SummaryGraph g(5, 2);
        for (int e = 0; e < 8; ++e) {
            const int s = var(rng), t = var(rng), l = lag(rng);
            if (s == t && l == 0) continue;
            g.add_edge(s, t, l);
        }
        const auto score = score_graph(g, g);
        CHECK(score.fpr == doctest::Approx(0.0));
        CHECK(score.fnr == doctest::Approx(0.0));
    }
}

TEST_CASE("failure label thresholds are strict") {
    GraphScore s;
    s.fpr = 0.6;
    s.fnr = 0.1;
    CHECK(failure_label(s));
    s.fpr = 0.2;
    s.fnr = 0.5;
    CHECK_FALSE(failure_label(s));
    s.fpr = 0.5;
    s.fnr = 0.8;
    CHECK_FALSE(failure_label(s));  // boundary is success
}
