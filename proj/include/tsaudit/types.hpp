#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tsaudit {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
    Parse,
    NonMonotoneTime,
    DegenerateSeries,
    LowSample,
    ConstantColumn,
    ConstantSeries,
    DegenerateTarget,
    SingularDesign,
    TooFewPoints,
    InvalidP,
    MissingFeature,
    DegenerateInput,
    InvalidTeff,
    InsufficientLabels,
    NonConvergence,
    ZeroDenominator,
    EmptyCatalog,
    DegenerateDraw,
    UnstableSimulation,
    UniverseMismatch,
    SingleClass,
    InvalidArgument,
    Io,
};

class AuditError : public std::runtime_error {
public:
    AuditError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw AuditError(kind, msg);
}

// ---------------------------------------------------------------------------
// TimeSeriesMatrix
// ---------------------------------------------------------------------------

// Timestamped T x N panel with a missingness mask. Masked cells carry no
// value semantics; immutable after construction.
class TimeSeriesMatrix {
public:
    TimeSeriesMatrix(std::vector<double> timestamps, Eigen::MatrixXd values,
                     Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask,
                     std::vector<std::string> names);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

    const std::vector<double>& timestamps() const { return timestamps_; }
    const Eigen::MatrixXd& values() const { return values_; }
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask() const { return mask_; }
    const std::vector<std::string>& names() const { return names_; }

    bool missing(Eigen::Index t, Eigen::Index j) const { return mask_(t, j); }
    double missing_fraction() const;

    // Observed (unmasked) entries of one column, in time order.
    std::vector<double> observed_column(Eigen::Index j) const;
    // Row indices where every column is observed.
    std::vector<Eigen::Index> complete_rows() const;

private:
    std::vector<double> timestamps_;
    Eigen::MatrixXd values_;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask_;
    std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// SummaryGraph
// ---------------------------------------------------------------------------

// Lagged directed edge (source, target, lag).
struct LaggedEdge {
    int source = 0;
    int target = 0;
    int lag = 0;
    auto operator<=>(const LaggedEdge&) const = default;
};

class SummaryGraph {
public:
    SummaryGraph(int n_vars, int tau_max);

    int n_vars() const { return n_vars_; }
    int tau_max() const { return tau_max_; }
    const std::set<LaggedEdge>& edges() const { return edges_; }

    void add_edge(int source, int target, int lag);
    bool has_edge(int source, int target, int lag) const;
    std::size_t size() const { return edges_.size(); }

    // Candidate triple universe: N*N*(tau_max+1) minus lag-0 self-pairs.
    std::int64_t universe_size() const;

private:
    int n_vars_;
    int tau_max_;
    std::set<LaggedEdge> edges_;
};

// ---------------------------------------------------------------------------
// AuditConfig
// ---------------------------------------------------------------------------

// Anchors mapping raw diagnostics onto [0,1] feature slots.
struct FeatureAnchors {
    double break_mag_sd = 3.0;     // x_break_mag = min(mag / this, 1)
    double drift_z = 6.0;          // x_drift = min(z / this, 1)
    double missing_denom = 0.5;    // x_missing = min(frac / this, 1)
    double tau_int_cap = 20.0;     // x_tau_int = min(tau / this, 1)
    double vif_log10_cap = 4.0;    // x_vif = min(log10(vif) / this, 1)
    double resid_log10_cap = 1.0;  // x_resid_var = min(log10(ratio) / this, 1)
};

struct MethodSpec;  // decision.hpp

struct AuditConfig {
    // Utility parameters; u_minus >= u_abstain (conservative ordering).
    double u_plus = 1.0;
    double u_minus = 4.0;
    double u_abstain = 0.5;

    int bootstrap_iterations = 100;
    std::uint64_t bootstrap_seed = 7;

    double alpha = 0.05;
    int discovery_tau_max = 1;

    // Seasonal period hint for the seasonal-missingness diagnostic, in the
    // units of the timestamp column. Unset = diagnostic not applicable.
    std::optional<double> period_hint;

    FeatureAnchors anchors;

    // Mandatory-abstention thresholds.
    double min_teff_ratio = 0.30;
    double max_interval_width = 0.50;
    double catastrophic_nonstat = 0.85;
    double compound_nonstat = 0.70;
    double compound_confound = 0.85;
    double catastrophic_composite = 0.90;
    double min_confidence = 0.60;

    void validate() const;
    double abstention_threshold() const;
};

}  // namespace tsaudit
