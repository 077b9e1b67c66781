#include "tsaudit/types.hpp"

#include <cmath>

namespace tsaudit {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
        case ErrorKind::DegenerateSeries: return "DegenerateSeries";
        case ErrorKind::LowSample: return "LowSample";
        case ErrorKind::ConstantColumn: return "ConstantColumn";
        case ErrorKind::ConstantSeries: return "ConstantSeries";
        case ErrorKind::DegenerateTarget: return "DegenerateTarget";
        case ErrorKind::SingularDesign: return "SingularDesign";
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::InvalidP: return "InvalidP";
        case ErrorKind::MissingFeature: return "MissingFeature";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::InvalidTeff: return "InvalidTeff";
        case ErrorKind::InsufficientLabels: return "InsufficientLabels";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::EmptyCatalog: return "EmptyCatalog";
        case ErrorKind::DegenerateDraw: return "DegenerateDraw";
        case ErrorKind::UnstableSimulation: return "UnstableSimulation";
        case ErrorKind::UniverseMismatch: return "UniverseMismatch";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "IoError";
    }
    return "UnknownError";
}

TimeSeriesMatrix::TimeSeriesMatrix(
    std::vector<double> timestamps, Eigen::MatrixXd values,
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask,
    std::vector<std::string> names)
    : timestamps_(std::move(timestamps)),
      values_(std::move(values)),
      mask_(std::move(mask)),
      names_(std::move(names)) {
    const Eigen::Index T = values_.rows();
    const Eigen::Index N = values_.cols();
    if (T < 2) fail(ErrorKind::DegenerateSeries, "need at least 2 observations");
    if (N < 1) fail(ErrorKind::DegenerateSeries, "need at least 1 variable");
    if (static_cast<Eigen::Index>(timestamps_.size()) != T)
        fail(ErrorKind::InvalidArgument, "timestamps/values row mismatch");
    if (mask_.rows() != T || mask_.cols() != N)
        fail(ErrorKind::InvalidArgument, "mask/values shape mismatch");
    if (names_.empty()) {
        for (Eigen::Index j = 0; j < N; ++j)
            names_.push_back("x" + std::to_string(j));
    }
    if (static_cast<Eigen::Index>(names_.size()) != N)
        fail(ErrorKind::InvalidArgument, "names/values column mismatch");
    for (Eigen::Index t = 1; t < T; ++t) {
        if (!(timestamps_[t] > timestamps_[t - 1]))
            fail(ErrorKind::NonMonotoneTime, "timestamps must be strictly increasing");
    }
    for (Eigen::Index j = 0; j < N; ++j) {
        Eigen::Index observed = 0;
        for (Eigen::Index t = 0; t < T; ++t) {
            if (!mask_(t, j)) {
                if (!std::isfinite(values_(t, j)))
                    fail(ErrorKind::Parse, "non-finite observed value in column " +
                                               names_[j]);
                ++observed;
            }
        }
        if (observed < 2)
            fail(ErrorKind::DegenerateSeries,
                 "column " + names_[j] + " has fewer than 2 observed entries");
    }
}

double TimeSeriesMatrix::missing_fraction() const {
    const double total = static_cast<double>(mask_.size());
    double miss = 0;
    for (Eigen::Index j = 0; j < mask_.cols(); ++j)
        for (Eigen::Index t = 0; t < mask_.rows(); ++t)
            if (mask_(t, j)) miss += 1.0;
    return miss / total;
}

std::vector<double> TimeSeriesMatrix::observed_column(Eigen::Index j) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rows()));
    for (Eigen::Index t = 0; t < rows(); ++t)
        if (!mask_(t, j)) out.push_back(values_(t, j));
    return out;
}

std::vector<Eigen::Index> TimeSeriesMatrix::complete_rows() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index t = 0; t < rows(); ++t) {
        bool complete = true;
        for (Eigen::Index j = 0; j < cols(); ++j)
            if (mask_(t, j)) { complete = false; break; }
        if (complete) out.push_back(t);
    }
    return out;
}

SummaryGraph::SummaryGraph(int n_vars, int tau_max)
    : n_vars_(n_vars), tau_max_(tau_max) {
    if (n_vars < 1) fail(ErrorKind::InvalidArgument, "n_vars must be >= 1");
    if (tau_max < 0) fail(ErrorKind::InvalidArgument, "tau_max must be >= 0");
}

void SummaryGraph::add_edge(int source, int target, int lag) {
    if (source < 0 || source >= n_vars_ || target < 0 || target >= n_vars_)
        fail(ErrorKind::InvalidArgument, "edge index out of range");
    if (lag < 0 || lag > tau_max_)
        fail(ErrorKind::InvalidArgument, "edge lag out of range");
    if (source == target && lag == 0)
        fail(ErrorKind::InvalidArgument, "self-edge at lag 0 is not allowed");
    edges_.insert({source, target, lag});
}

bool SummaryGraph::has_edge(int source, int target, int lag) const {
    return edges_.count({source, target, lag}) > 0;
}

std::int64_t SummaryGraph::universe_size() const {
    const std::int64_t n = n_vars_;
    return n * n * (tau_max_ + 1) - n;
}

void AuditConfig::validate() const {
    if (u_plus < 0 || u_minus < 0 || u_abstain < 0)
        fail(ErrorKind::InvalidArgument, "utilities must be non-negative");
    if (u_minus < u_abstain)
        fail(ErrorKind::InvalidArgument, "u_minus must be >= u_abstain");
    if (bootstrap_iterations < 1)
        fail(ErrorKind::InvalidArgument, "bootstrap iterations must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    for (double t : {min_teff_ratio, max_interval_width, catastrophic_nonstat,
                     compound_nonstat, compound_confound, catastrophic_composite,
                     min_confidence}) {
        if (t < 0.0 || t > 1.0)
            fail(ErrorKind::InvalidArgument, "decision thresholds must lie in [0,1]");
    }
}

double AuditConfig::abstention_threshold() const {
    const double denom = u_plus + u_minus;
    if (denom <= 0.0) fail(ErrorKind::ZeroDenominator, "u_plus + u_minus must be > 0");
    const double theta = (u_plus + u_abstain) / denom;
    return std::min(1.0, std::max(0.0, theta));
}

}  // namespace tsaudit
