#include "tsaudit/risk.hpp"

#include "tsaudit/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace tsaudit {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

const char* risk_dim_name(RiskDim dim) {
    switch (dim) {
        case RiskDim::Nonstat: return "nonstat";
        case RiskDim::Irreg: return "irreg";
        case RiskDim::Persist: return "persist";
        case RiskDim::Confound: return "confound";
    }
    return "unknown";
}

double LogisticRiskModel::linear_predictor(const FeatureVector& features) const {
    double z = intercept;
    for (const auto& [slot, w] : weights) z += w * features[slot];
    return z;
}

double logistic_risk(const FeatureVector& features, const LogisticRiskModel& model) {
    if (model.weights.empty())
        fail(ErrorKind::MissingFeature, "risk model has no feature weights");
    return sigmoid(model.linear_predictor(features));
}

std::array<LogisticRiskModel, kNumRiskDims> default_risk_models() {
    std::array<LogisticRiskModel, kNumRiskDims> m;
    m[0] = {"nonstat",
            -2.0,
            {{FeatureSlot::BreakMag, 1.0},
             {FeatureSlot::Drift, 2.0},
             {FeatureSlot::Adf, 0.5},
             {FeatureSlot::Kpss, 0.5}}};
    m[1] = {"irreg",
            -1.5,
            {{FeatureSlot::GapCv, 2.5},
             {FeatureSlot::Missing, 2.0},
             {FeatureSlot::SeasonalMiss, 1.5}}};
    m[2] = {"persist",
            -1.5,
            {{FeatureSlot::TeffRatio, -3.0}, {FeatureSlot::TauInt, 2.0}}};
    m[3] = {"confound",
            -6.5,
            {{FeatureSlot::Chow, 2.0},
             {FeatureSlot::ResidVar, 1.8},
             {FeatureSlot::Vif, 0.5}}};
    return m;
}

// ---------------------------------------------------------------------------
// Isotonic
// ---------------------------------------------------------------------------

IsotonicMap::IsotonicMap(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() != values_.size())
        fail(ErrorKind::InvalidArgument, "isotonic: breakpoint/value size mismatch");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            fail(ErrorKind::InvalidArgument, "isotonic: breakpoints must be strictly increasing");
        if (values_[i] < values_[i - 1] - 1e-12)
            fail(ErrorKind::InvalidArgument, "isotonic: values must be nondecreasing");
    }
}

double IsotonicMap::apply(double raw) const {
    if (breakpoints_.empty()) return std::clamp(raw, 0.0, 1.0);
    if (raw <= breakpoints_.front()) return values_.front();
    if (raw >= breakpoints_.back()) return values_.back();
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), raw);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
    if (breakpoints_[i] == raw) return values_[i];
    const double x0 = breakpoints_[i - 1], x1 = breakpoints_[i];
    const double w = (raw - x0) / (x1 - x0);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

IsotonicMap fit_isotonic(const std::vector<double>& raw_scores,
                         const std::vector<int>& labels) {
    if (raw_scores.size() != labels.size() || raw_scores.size() < 2)
        fail(ErrorKind::InvalidArgument, "isotonic fit: need equal lengths >= 2");
    for (int y : labels)
        if (y != 0 && y != 1)
            fail(ErrorKind::InvalidArgument, "isotonic fit: labels must be 0/1");

    // Pool exact ties in the raw score before fitting.
    std::map<double, std::pair<double, double>> tied;  // score -> (sum, count)
    for (std::size_t i = 0; i < raw_scores.size(); ++i) {
        auto& slot = tied[raw_scores[i]];
        slot.first += labels[i];
        slot.second += 1.0;
    }

    std::vector<double> xs, means, weights;
    for (const auto& [score, agg] : tied) {
        xs.push_back(score);
        means.push_back(agg.first / agg.second);
        weights.push_back(agg.second);
    }

    // Pool-adjacent-violators.
    std::vector<double> v, w;
    std::vector<std::size_t> count;
    for (std::size_t i = 0; i < means.size(); ++i) {
        v.push_back(means[i]);
        w.push_back(weights[i]);
        count.push_back(1);
        while (v.size() >= 2 && v[v.size() - 2] >= v.back()) {
            const double tw = w[w.size() - 2] + w.back();
            v[v.size() - 2] = (v[v.size() - 2] * w[w.size() - 2] + v.back() * w.back()) / tw;
            w[w.size() - 2] = tw;
            count[count.size() - 2] += count.back();
            v.pop_back();
            w.pop_back();
            count.pop_back();
        }
    }

    std::vector<double> fitted;
    fitted.reserve(xs.size());
    for (std::size_t b = 0; b < v.size(); ++b)
        for (std::size_t r = 0; r < count[b]; ++r) fitted.push_back(std::clamp(v[b], 0.0, 1.0));

    return IsotonicMap(std::move(xs), std::move(fitted));
}

double apply_isotonic(const IsotonicMap& map, double raw) { return map.apply(raw); }

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

BootstrapInterval bootstrap_interval(const FeatureVector& features,
                                     const LogisticRiskModel& model,
                                     const IsotonicMap& map, double T, double T_eff,
                                     int B, std::uint64_t seed) {
    if (B < 2) fail(ErrorKind::InvalidArgument, "bootstrap: need B >= 2");
    if (!(T_eff > 0.0) || T_eff > T)
        fail(ErrorKind::InvalidTeff, "bootstrap: T_eff must lie in (0, T]");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> draws(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        FeatureVector perturbed = features;
        for (double& x : perturbed.values) {
            const double sd = std::max(0.1 * std::abs(x), 0.05);
            x = std::clamp(x + sd * gauss(rng), 0.0, 1.0);
        }
        draws[static_cast<std::size_t>(b)] = map.apply(logistic_risk(perturbed, model));
    }

    const double mean = stats::mean(draws);
    double var = 0.0;
    for (double d : draws) var += (d - mean) * (d - mean);
    var /= (B - 1);
    const double sigma_adj = std::sqrt(var) * std::sqrt(T / T_eff);
    return {mean, std::max(0.0, mean - 1.96 * sigma_adj),
            std::min(1.0, mean + 1.96 * sigma_adj)};
}

RiskProfile compute_risk_profile(const DiagnosticReport& report,
                                 const CalibratedModels& calibrated,
                                 const AuditConfig& config) {
    RiskProfile profile;
    profile.t_eff_ratio = report.persistence.t_eff_ratio;
    const double T = static_cast<double>(report.persistence.t);
    const double T_eff = report.persistence.t_eff;

    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto& model = calibrated.models[static_cast<std::size_t>(d)];
        const auto& map = calibrated.maps[static_cast<std::size_t>(d)];
        DimensionRisk& out = profile.dims[static_cast<std::size_t>(d)];

        const double raw = logistic_risk(report.features, model);
        out.risk = map.apply(raw);
        out.intercept = model.intercept;
        for (const auto& [slot, w] : model.weights)
            out.ledger.push_back({feature_name(slot), w * report.features[slot]});
        std::stable_sort(out.ledger.begin(), out.ledger.end(),
                         [](const LedgerEntry& a, const LedgerEntry& b) {
                             return std::abs(a.contribution) > std::abs(b.contribution);
                         });

        const auto ci = bootstrap_interval(
            report.features, model, map, T, T_eff, config.bootstrap_iterations,
            stats::derive_seed(config.bootstrap_seed, static_cast<std::uint64_t>(d)));
        out.lo = std::min(ci.lo, out.risk);
        out.hi = std::max(ci.hi, out.risk);
    }
    return profile;
}

// ---------------------------------------------------------------------------
// MAP calibration
// ---------------------------------------------------------------------------

CalibratedModels calibrate_models(const std::vector<CalibrationRow>& corpus,
                                  const CalibrationPriors& priors, std::uint64_t seed) {
    (void)seed;  // fit is deterministic; seed kept for interface stability
    if (corpus.size() < 50)
        fail(ErrorKind::InsufficientLabels, "calibration corpus must have >= 50 rows");

    CalibratedModels out;
    out.models = default_risk_models();

    std::vector<std::string> families;
    for (const auto& row : corpus)
        if (std::find(families.begin(), families.end(), row.family) == families.end())
            families.push_back(row.family);
    std::sort(families.begin(), families.end());

    for (int d = 0; d < kNumRiskDims; ++d) {
        LogisticRiskModel& model = out.models[static_cast<std::size_t>(d)];

        int positives = 0;
        for (const auto& row : corpus) positives += row.labels[static_cast<std::size_t>(d)];
        if (positives == 0 || positives == static_cast<int>(corpus.size()))
            fail(ErrorKind::InsufficientLabels,
                 std::string("both label classes required for dimension ") + model.label);

        std::vector<FeatureSlot> slots;
        for (const auto& [slot, w] : model.weights) slots.push_back(slot);
        const int nw = static_cast<int>(slots.size());
        const int nfam = static_cast<int>(families.size());
        const int dim = 1 + nw + nfam;  // intercept, weights, family offsets

        Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
        theta(0) = model.intercept;
        for (int i = 0; i < nw; ++i) theta(1 + i) = model.weights[slots[static_cast<std::size_t>(i)]];

        std::vector<int> fam_index(corpus.size());
        for (std::size_t r = 0; r < corpus.size(); ++r)
            fam_index[r] = static_cast<int>(
                std::find(families.begin(), families.end(), corpus[r].family) -
                families.begin());

        const double wp = 1.0 / (priors.weight_sd * priors.weight_sd);
        const double ip = 1.0 / (priors.intercept_sd * priors.intercept_sd);
        const double op = 1.0 / (priors.offset_sd * priors.offset_sd);

        // Damped Newton on the penalized negative log-likelihood.
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
            grad(0) = ip * theta(0);
            hess(0, 0) = ip;
            for (int i = 0; i < nw; ++i) {
                grad(1 + i) = wp * theta(1 + i);
                hess(1 + i, 1 + i) = wp;
            }
            for (int f = 0; f < nfam; ++f) {
                grad(1 + nw + f) = op * theta(1 + nw + f);
                hess(1 + nw + f, 1 + nw + f) = op;
            }

            Eigen::VectorXd xrow = Eigen::VectorXd::Zero(dim);
            for (std::size_t r = 0; r < corpus.size(); ++r) {
                xrow.setZero();
                xrow(0) = 1.0;
                for (int i = 0; i < nw; ++i)
                    xrow(1 + i) = corpus[r].features[slots[static_cast<std::size_t>(i)]];
                xrow(1 + nw + fam_index[r]) = 1.0;

                const double z = xrow.dot(theta);
                const double p = sigmoid(z);
                const double y = corpus[r].labels[static_cast<std::size_t>(d)];
                grad += (p - y) * xrow;
                hess += std::max(p * (1.0 - p), 1e-10) * xrow * xrow.transpose();
            }

            const Eigen::VectorXd step = hess.ldlt().solve(grad);
            double damp = 1.0;
            if (step.norm() > 5.0) damp = 5.0 / step.norm();
            theta -= damp * step;
            if (grad.norm() < 1e-6 * corpus.size()) {
                converged = true;
                break;
            }
        }
        if (!converged)
            fail(ErrorKind::NonConvergence,
                 std::string("calibration did not converge for dimension ") + model.label);

        model.intercept = theta(0);
        for (int i = 0; i < nw; ++i)
            model.weights[slots[static_cast<std::size_t>(i)]] = theta(1 + i);
        for (int f = 0; f < nfam; ++f)
            out.family_offsets[static_cast<std::size_t>(d)][families[static_cast<std::size_t>(f)]] =
                theta(1 + nw + f);

        // The deployed model drops family offsets; isotonic maps are fitted on
        // its raw scores for the calibration corpus. Raw scores are snapped to
        // 10 quantile bins first (each bin becomes one tied group), which
        // keeps the fitted map piecewise-stable instead of tracking label
        // runs point by point.
        std::vector<double> raw(corpus.size());
        std::vector<int> labels(corpus.size());
        for (std::size_t r = 0; r < corpus.size(); ++r) {
            raw[r] = logistic_risk(corpus[r].features, model);
            labels[r] = corpus[r].labels[static_cast<std::size_t>(d)];
        }
        std::vector<std::size_t> order(corpus.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
        const int bins = 10;
        std::vector<double> snapped(corpus.size());
        for (int b = 0; b < bins; ++b) {
            const std::size_t lo = corpus.size() * static_cast<std::size_t>(b) / bins;
            const std::size_t hi = corpus.size() * (static_cast<std::size_t>(b) + 1) / bins;
            if (hi <= lo) continue;
            double centroid = 0.0;
            for (std::size_t k = lo; k < hi; ++k) centroid += raw[order[k]];
            centroid /= static_cast<double>(hi - lo);
            for (std::size_t k = lo; k < hi; ++k) snapped[order[k]] = centroid;
        }
        out.maps[static_cast<std::size_t>(d)] = fit_isotonic(snapped, labels);
    }
    return out;
}

}  // namespace tsaudit
