#pragma once

#include "tsaudit/atlas.hpp"
#include "tsaudit/decision.hpp"
#include "tsaudit/risk.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tsaudit {

// ---------------------------------------------------------------------------
// Calibration metrics
// ---------------------------------------------------------------------------

struct CalibrationBin {
    double mean_predicted = 0.0;
    double empirical_frequency = 0.0;
    int count = 0;
};

struct CalibrationSummary {
    double slope = 1.0;
    double intercept = 0.0;
    double ece = 0.0;
    double brier = 0.0;
    double auroc = 0.5;
    bool slope_converged = true;
    std::vector<CalibrationBin> bins;
};

// Slope/intercept from logistic recalibration of labels on logit(predicted);
// ECE over 10 quantile bins; Brier; AUROC via rank statistic with ties.
CalibrationSummary calibration_metrics(const std::vector<double>& predicted,
                                       const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Selective metrics
// ---------------------------------------------------------------------------

struct SelectiveSummary {
    double coverage = 0.0;
    std::optional<double> selective_fpr;
    std::optional<double> selective_f1;
    std::optional<double> abstention_precision;
    std::optional<double> precision_discourage;
    double recall_safe = 0.0;
    std::optional<double> good_abstention_rate;
    double overall_accuracy = 0.0;
};

struct SelectiveInputs {
    std::vector<bool> recommended;
    std::vector<bool> failure;            // method failure (Y = 0)
    std::vector<double> graph_f1;         // per-dataset discovery F1 (may be empty)
    std::vector<bool> fpr_failure;        // FPR > 0.5 specifically (may be empty)
    std::vector<bool> severe;             // severe-violation stratum (may be empty)
};

SelectiveSummary selective_metrics(const SelectiveInputs& inputs);

// ---------------------------------------------------------------------------
// Decision fixtures
// ---------------------------------------------------------------------------

struct DecisionFixture {
    std::string name;
    std::array<double, kNumRiskDims> risks;  // nonstat, irreg, persist, confound
    Outcome expected;
    bool expects_warnings = false;
    bool expects_catastrophic = false;
};

// 18 linear/nonlinear/trend/missing categories plus 3 external domains,
// entered as literal risk vectors.
const std::vector<DecisionFixture>& decision_fixtures();

struct FixtureResult {
    std::string name;
    bool passed = false;
    Outcome expected;
    Outcome got;
    std::string detail;
};

std::vector<FixtureResult> run_decision_fixtures(const std::vector<MethodSpec>& catalog,
                                                 const AuditConfig& config);

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

struct StratumRow {
    std::string name;
    int n = 0;
    double always_run_fpr = 0.0;   // failure rate when every dataset runs
    double abstention_rate = 0.0;
    double selective_failure_rate = 0.0;  // failure among recommended
};

struct BenchmarkReport {
    std::array<CalibrationSummary, kNumRiskDims> calibration;
    SelectiveSummary selective;
    SelectiveSummary selective_always_run;
    int fixtures_passed = 0;
    int fixtures_total = 0;
    std::vector<FixtureResult> fixture_results;
    std::vector<StratumRow> strata;
    double always_run_fpr = 0.0;
    double runtime_seconds = 0.0;
    int calibration_n = 0;
    int holdout_n = 0;
    CalibratedModels models;
};

// Stratified 80/20 family split, model calibration on the large split,
// calibration metrics + decisions on the holdout, fixtures, severity strata.
// A pre-fitted calibration may be supplied to skip the refit.
BenchmarkReport run_benchmark(const Atlas& atlas, const AuditConfig& config,
                              std::uint64_t split_seed,
                              const CalibratedModels* fixed_models = nullptr);

// Severity stratum of an entry: clean (F1), severe (top severity tercile
// within F2-F5 and F9), moderate (the rest).
std::vector<std::string> severity_strata(const Atlas& atlas);

// Per-entry feature extraction used by calibration and evaluation (runs the
// feature-relevant Stage I diagnostics, skipping the nonlinearity fit).
std::vector<DiagnosticReport> audit_atlas(const Atlas& atlas, const AuditConfig& config);

}  // namespace tsaudit
