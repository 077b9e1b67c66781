#include "tsaudit/evalmetrics.hpp"

#include <doctest.h>

#include <random>

using namespace tsaudit;

TEST_CASE("calibration metrics: perfect predictor") {
    std::vector<double> pred;
    std::vector<int> labels;
    for (int i = 0; i < 30; ++i) {
        pred.push_back(i % 3 == 0 ? 1.0 : 0.0);
        labels.push_back(i % 3 == 0 ? 1 : 0);
    }
    const auto row = calibration_metrics(pred, labels);
    CHECK(row.ece <= 1e-5);
    CHECK(row.brier <= 1e-5);
    CHECK(row.auroc == doctest::Approx(1.0));
}

TEST_CASE("calibration metrics: constant half on balanced labels") {
    std::vector<double> pred(40, 0.5);
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i % 2);
    const auto row = calibration_metrics(pred, labels);
    CHECK(row.ece == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(row.auroc == doctest::Approx(0.5));
}

TEST_CASE("calibration metrics: two-point hand case") {
    std::vector<double> pred = {0.2, 0.8};
    std::vector<int> labels = {0, 1};
    // n >= 20 precondition: tile the same pattern.
    std::vector<double> p;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        p.insert(p.end(), pred.begin(), pred.end());
        y.insert(y.end(), labels.begin(), labels.end());
    }
    const auto row = calibration_metrics(p, y);
    CHECK(row.brier == doctest::Approx(0.04));
    CHECK(row.auroc == doctest::Approx(1.0));
}

TEST_CASE("calibration metrics: bins sum to the sample size and ece bounds") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pred;
    std::vector<int> labels;
    for (int i = 0; i < 250; ++i) {
        const double p = unit(rng);
        pred.push_back(p);
        labels.push_back(unit(rng) < p ? 1 : 0);
    }
    const auto row = calibration_metrics(pred, labels);
    int total = 0;
    for (const auto& b : row.bins) total += b.count;
    CHECK(total == 250);
    CHECK(row.ece >= 0.0);
    CHECK(row.ece <= 1.0);
    CHECK(row.slope == doctest::Approx(1.0).epsilon(0.4));
    // Brier smoke bound.
    double mp = 0, ml = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mp += pred[i];
        ml += labels[i];
    }
    mp /= pred.size();
    ml /= labels.size();
    CHECK(row.brier <= 0.25 + std::abs(mp - ml) + 1e-9);
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> pred;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
        const double p = unit(rng);
        pred.push_back(p);
        labels.push_back(unit(rng) < p * p ? 1 : 0);
    }
    const auto base = calibration_metrics(pred, labels);
    std::vector<double> squashed(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        squashed[i] = 1.0 / (1.0 + std::exp(-4.0 * (pred[i] - 0.3)));
    const auto transformed = calibration_metrics(squashed, labels);
    CHECK(transformed.auroc == doctest::Approx(base.auroc).epsilon(1e-9));
}

TEST_CASE("calibration metrics preconditions") {
    CHECK_THROWS_AS(calibration_metrics({0.5, 0.5}, {0, 1}), AuditError);
    std::vector<double> pred(30, 0.5);
    std::vector<int> ones(30, 1);
    CHECK_THROWS_AS(calibration_metrics(pred, ones), AuditError);
}

TEST_CASE("selective metrics hand counting") {
    SelectiveInputs in;
    in.recommended = {true, true, false, false};
    in.failure = {false, true, true, false};
    const auto s = selective_metrics(in);
    CHECK(s.coverage == doctest::Approx(0.5));
    CHECK(*s.selective_fpr == doctest::Approx(0.5));
    CHECK(*s.abstention_precision == doctest::Approx(0.5));
    CHECK(s.recall_safe == doctest::Approx(0.5));
    CHECK(s.overall_accuracy == doctest::Approx(0.5));
}

TEST_CASE("selective metrics: degenerate extremes") {
    SelectiveInputs all_rec;
    all_rec.recommended = {true, true, true, true};
    all_rec.failure = {false, true, false, true};
    const auto a = selective_metrics(all_rec);
    CHECK(a.coverage == doctest::Approx(1.0));
    CHECK(*a.selective_fpr == doctest::Approx(0.5));  // overall failure rate
    CHECK_FALSE(a.abstention_precision.has_value());

    SelectiveInputs none;
    none.recommended = {false, false, false};
    none.failure = {true, false, true};
    const auto b = selective_metrics(none);
    CHECK(b.coverage == doctest::Approx(0.0));
    CHECK_FALSE(b.selective_fpr.has_value());
    CHECK_FALSE(b.selective_f1.has_value());
    // Coverage plus abstention fraction is one by construction.
    CHECK(1.0 - b.coverage == doctest::Approx(1.0));
}

TEST_CASE("fixture table has the documented shape") {
    const auto& fixtures = decision_fixtures();
    CHECK(fixtures.size() == 21);
    int abstains = 0, warn_rows = 0;
    for (const auto& f : fixtures) {
        if (f.expected == Outcome::Abstain) ++abstains;
        if (f.expects_warnings) ++warn_rows;
    }
    CHECK(abstains == 6);
    CHECK(warn_rows == 4);
}
