#pragma once

#include "tsaudit/diagnostics.hpp"
#include "tsaudit/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsaudit {

enum class RiskDim : int { Nonstat = 0, Irreg, Persist, Confound };
inline constexpr int kNumRiskDims = 4;
const char* risk_dim_name(RiskDim dim);

// ---------------------------------------------------------------------------
// Logistic risk model
// ---------------------------------------------------------------------------

struct LogisticRiskModel {
    std::string label;
    double intercept = 0.0;
    std::map<FeatureSlot, double> weights;

    double linear_predictor(const FeatureVector& features) const;
};

// R_k = sigmoid(alpha_k + sum_j w_kj x_j).
double logistic_risk(const FeatureVector& features, const LogisticRiskModel& model);

// Deployed defaults for the four risk dimensions.
std::array<LogisticRiskModel, kNumRiskDims> default_risk_models();

// ---------------------------------------------------------------------------
// Isotonic calibration
// ---------------------------------------------------------------------------

class IsotonicMap {
public:
    IsotonicMap() = default;  // identity map
    IsotonicMap(std::vector<double> breakpoints, std::vector<double> values);

    bool identity() const { return breakpoints_.empty(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }

    // Linear interpolation between breakpoints, clamped at the ends.
    double apply(double raw) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

// Pool-adjacent-violators least-squares fit; ties in raw score are pooled
// before fitting. All-identical labels yield a constant (flagged) map.
IsotonicMap fit_isotonic(const std::vector<double>& raw_scores,
                         const std::vector<int>& labels);

double apply_isotonic(const IsotonicMap& map, double raw);

// ---------------------------------------------------------------------------
// Risk profile
// ---------------------------------------------------------------------------

struct LedgerEntry {
    std::string feature;
    double contribution = 0.0;
};

struct DimensionRisk {
    double risk = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<LedgerEntry> ledger;  // sorted by |contribution|, descending
    double intercept = 0.0;
};

struct RiskProfile {
    std::array<DimensionRisk, kNumRiskDims> dims;
    double t_eff_ratio = 1.0;

    const DimensionRisk& operator[](RiskDim d) const {
        return dims[static_cast<std::size_t>(d)];
    }
    DimensionRisk& operator[](RiskDim d) { return dims[static_cast<std::size_t>(d)]; }
    double point(RiskDim d) const { return (*this)[d].risk; }
    double width(RiskDim d) const { return (*this)[d].hi - (*this)[d].lo; }
};

struct BootstrapInterval {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Parametric bootstrap: perturb features with N(0, max(0.1|x|, 0.05)) noise,
// clamp to [0,1], score + calibrate, then inflate the SD by sqrt(T/T_eff).
BootstrapInterval bootstrap_interval(const FeatureVector& features,
                                     const LogisticRiskModel& model,
                                     const IsotonicMap& map, double T, double T_eff,
                                     int B, std::uint64_t seed);

struct CalibratedModels {
    std::array<LogisticRiskModel, kNumRiskDims> models;
    std::array<IsotonicMap, kNumRiskDims> maps;
    // Per-family intercept offsets estimated during fitting (not applied at
    // deployment; kept for inspection/serialization).
    std::array<std::map<std::string, double>, kNumRiskDims> family_offsets;
};

RiskProfile compute_risk_profile(const DiagnosticReport& report,
                                 const CalibratedModels& calibrated,
                                 const AuditConfig& config);

// ---------------------------------------------------------------------------
// Calibration fitting
// ---------------------------------------------------------------------------

struct CalibrationRow {
    FeatureVector features;
    std::array<int, kNumRiskDims> labels{};  // per-dimension binary failure
    std::string family;
};

struct CalibrationPriors {
    double weight_sd = 2.0;     // Gaussian penalty on weights
    double intercept_sd = 5.0;  // Gaussian penalty on intercepts
    double offset_sd = 0.15;    // per-family intercept offsets
};

// Penalized maximum likelihood (MAP with the stated Gaussian priors),
// initialized at the deployed defaults, plus per-family intercept offsets;
// isotonic maps are fitted on the calibration split's raw scores.
CalibratedModels calibrate_models(const std::vector<CalibrationRow>& corpus,
                                  const CalibrationPriors& priors, std::uint64_t seed);

}  // namespace tsaudit
