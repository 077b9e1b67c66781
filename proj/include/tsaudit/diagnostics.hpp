#pragma once

#include "tsaudit/types.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsaudit {

// ---------------------------------------------------------------------------
// Feature vector
// ---------------------------------------------------------------------------

enum class FeatureSlot : int {
    Adf = 0,
    Kpss,
    BreakMag,
    Drift,
    GapCv,
    Missing,
    SeasonalMiss,
    TeffRatio,
    TauInt,
    Chow,
    ResidVar,
    Vif,
};

inline constexpr int kNumFeatures = 12;

const char* feature_name(FeatureSlot slot);
std::optional<FeatureSlot> feature_from_name(const std::string& name);

struct FeatureVector {
    std::array<double, kNumFeatures> values{};

    double operator[](FeatureSlot slot) const {
        return values[static_cast<std::size_t>(slot)];
    }
    double& operator[](FeatureSlot slot) {
        return values[static_cast<std::size_t>(slot)];
    }
};

// ---------------------------------------------------------------------------
// Diagnostic blocks
// ---------------------------------------------------------------------------

struct StationarityBlock {
    std::vector<double> adf_pvalues;
    std::vector<double> kpss_pvalues;
    std::vector<double> adf_pvalues_corrected;
    std::vector<double> kpss_pvalues_corrected;
    std::vector<double> drift_slope_z;
    std::vector<bool> degenerate;
    int break_count = 0;
    double break_magnitude = 0.0;
    std::vector<int> break_locations;
};

struct IrregularityBlock {
    double gap_cv = 0.0;
    double missing_fraction = 0.0;
    double mcar_pvalue = 1.0;
    bool mcar_applicable = false;
    double seasonal_missing_pvalue = 1.0;
    bool seasonal_applicable = false;
};

struct PersistenceBlock {
    std::vector<double> tau_int;
    std::vector<double> ljung_box_pvalues;
    std::vector<bool> degenerate;
    double t_eff = 0.0;
    double t_eff_ratio = 1.0;
    int t = 0;
};

struct NonlinearityBlock {
    std::vector<double> delta_rmse_rel;
    bool flagged = false;
    bool computed = false;
};

struct ConfoundingBlock {
    std::vector<double> vif;
    bool vif_capped = false;
    bool applicable = false;
    double chow_pvalue = 1.0;               // max BY-corrected across equations
    std::vector<double> chow_pvalues_raw;   // per-equation
    double resid_var_instability = 1.0;     // max/min rolling residual variance
};

struct DiagnosticReport {
    StationarityBlock stationarity;
    IrregularityBlock irregularity;
    PersistenceBlock persistence;
    NonlinearityBlock nonlinearity;
    ConfoundingBlock confounding;
    FeatureVector features;
    std::vector<std::string> flags;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// tau_int = 1/2 + sum_{l=1..M} rho(l), M from the self-consistent window rule
// (smallest M with M >= 5 * tau_hat(M)); clamped below at 0.5.
double integrated_autocorr_time(std::span<const double> x);

// Population SD of successive gaps divided by the mean gap.
double gap_coefficient_of_variation(std::span<const double> timestamps);

StationarityBlock audit_stationarity(const TimeSeriesMatrix& series, double alpha);
IrregularityBlock audit_irregularity(const TimeSeriesMatrix& series,
                                     std::optional<double> period_hint);
PersistenceBlock audit_persistence(const TimeSeriesMatrix& series);
NonlinearityBlock audit_nonlinearity(const TimeSeriesMatrix& series, int folds = 3);
ConfoundingBlock audit_confounding(const TimeSeriesMatrix& series);

FeatureVector normalize_features(const DiagnosticReport& report,
                                 const FeatureAnchors& anchors);

// Runs every family and fills the feature vector. Cross-variable blocks that
// cannot be computed (sample starvation, singular designs) degrade to flagged
// zero-features instead of failing the audit. Nonlinearity is optional: it is
// reported but feeds no feature slot.
DiagnosticReport audit_all(const TimeSeriesMatrix& series, const AuditConfig& config,
                           bool include_nonlinearity = true);

}  // namespace tsaudit
