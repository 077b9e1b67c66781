#include "tsaudit/decision.hpp"

#include <algorithm>
#include <cmath>

namespace tsaudit {

namespace {

constexpr std::size_t idx(RiskDim d) { return static_cast<std::size_t>(d); }

double full_composite(const RiskProfile& profile) {
    double m = 0.0;
    for (int d = 0; d < kNumRiskDims; ++d)
        m = std::max(m, profile.point(static_cast<RiskDim>(d)));
    return m;
}

std::vector<std::string> soft_warnings(const RiskProfile& profile,
                                       const MethodSpec& method) {
    std::vector<std::string> out;
    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto dim = static_cast<RiskDim>(d);
        const auto& c = method.constraint(dim);
        if (!c.hard && profile.point(dim) > c.threshold)
            out.push_back(std::string("soft_constraint_exceeded:") + risk_dim_name(dim));
    }
    return out;
}

}  // namespace

std::vector<MethodSpec> default_method_catalog() {
    auto c = [](double threshold, bool hard) { return DimensionConstraint{threshold, hard}; };
    std::vector<MethodSpec> catalog;
    // Order: nonstat, irreg, persist, confound.
    catalog.push_back({"granger",
                       0.30,
                       {c(0.60, true), c(0.50, true), c(0.75, false), c(0.60, true)},
                       true});
    catalog.push_back({"pcmci+",
                       0.70,
                       {c(0.80, true), c(0.60, false), c(0.85, false), c(0.80, false)},
                       true});
    catalog.push_back({"lpcmci",
                       0.80,
                       {c(0.80, true), c(0.70, false), c(0.85, false), c(0.90, false)},
                       false});
    catalog.push_back({"transfer_entropy",
                       0.90,
                       {c(0.85, false), c(0.80, false), c(0.90, false), c(0.95, false)},
                       false});
    return catalog;
}

double abstention_threshold(double u_plus, double u_minus, double u_abstain) {
    if (u_plus < 0 || u_minus < 0 || u_abstain < 0)
        fail(ErrorKind::InvalidArgument, "utilities must be non-negative");
    const double denom = u_plus + u_minus;
    if (denom <= 0.0) fail(ErrorKind::ZeroDenominator, "u_plus + u_minus must be > 0");
    return std::clamp((u_plus + u_abstain) / denom, 0.0, 1.0);
}

double composite_risk(const RiskProfile& profile, const MethodSpec& method) {
    double m = 0.0;
    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto dim = static_cast<RiskDim>(d);
        if (method.constraint(dim).hard) m = std::max(m, profile.point(dim));
    }
    return m;
}

AdmissibleSet admissible_methods(const RiskProfile& profile,
                                 const std::vector<MethodSpec>& catalog) {
    if (catalog.empty()) fail(ErrorKind::EmptyCatalog, "method catalog is empty");
    AdmissibleSet out;
    for (const auto& method : catalog) {
        if (!method.enabled) continue;
        bool ok = true;
        for (int d = 0; d < kNumRiskDims && ok; ++d) {
            const auto dim = static_cast<RiskDim>(d);
            const auto& c = method.constraint(dim);
            if (c.hard && profile.point(dim) > c.threshold) ok = false;
        }
        if (ok && composite_risk(profile, method) > method.composite_threshold) ok = false;
        if (ok) {
            out.methods.push_back(method.name);
            out.warnings.emplace_back(method.name, soft_warnings(profile, method));
        }
    }
    return out;
}

Decision decide(const RiskProfile& profile, const std::vector<MethodSpec>& catalog,
                const AuditConfig& config) {
    if (catalog.empty()) fail(ErrorKind::EmptyCatalog, "method catalog is empty");

    Decision decision;
    const double r_ns = profile.point(RiskDim::Nonstat);
    const double r_pe = profile.point(RiskDim::Persist);
    const double r_cf = profile.point(RiskDim::Confound);

    // Mandatory abstention conditions, evaluated before method selection.
    if (profile.t_eff_ratio < config.min_teff_ratio)
        decision.reasons.push_back("insufficient_effective_sample");
    for (int d = 0; d < kNumRiskDims; ++d) {
        if (profile.width(static_cast<RiskDim>(d)) > config.max_interval_width) {
            decision.reasons.push_back("high_uncertainty");
            break;
        }
    }
    if (r_ns > config.catastrophic_nonstat) {
        decision.reasons.push_back("catastrophic_nonstationarity");
    } else if (r_ns > config.compound_nonstat && r_cf > config.compound_confound) {
        decision.reasons.push_back("compound_nonstationarity_confounding");
    } else {
        bool all_over = true;
        for (const auto& method : catalog) {
            if (!method.enabled) continue;
            if (composite_risk(profile, method) <= config.catastrophic_composite) {
                all_over = false;
                break;
            }
        }
        if (all_over) decision.reasons.push_back("catastrophic_composite_risk");
    }

    const auto admissible = admissible_methods(profile, catalog);
    bool any_confident = false;
    for (const auto& name : admissible.methods) {
        const auto it = std::find_if(catalog.begin(), catalog.end(),
                                     [&](const MethodSpec& m) { return m.name == name; });
        if (1.0 - composite_risk(profile, *it) > config.min_confidence) any_confident = true;
    }
    if (!any_confident) decision.reasons.push_back("no_confident_method");

    if (!decision.reasons.empty()) {
        decision.outcome = Outcome::Abstain;
        double best = 0.0;
        for (const auto& method : catalog)
            if (method.enabled)
                best = std::max(best, 1.0 - composite_risk(profile, method));
        decision.confidence = best;
        return decision;
    }

    // Selection among admissible methods: PCMCI+ when persistence is high,
    // otherwise the lowest full-profile composite with Granger preferred on
    // ties (catalog order breaks ties).
    std::string chosen;
    if (r_pe > 0.70 &&
        std::find(admissible.methods.begin(), admissible.methods.end(), "pcmci+") !=
            admissible.methods.end()) {
        chosen = "pcmci+";
    } else {
        const double comp = full_composite(profile);
        (void)comp;  // identical across methods; catalog order decides ties
        chosen = admissible.methods.front();
    }

    decision.outcome = Outcome::Recommend;
    decision.method = chosen;
    const auto it = std::find_if(catalog.begin(), catalog.end(),
                                 [&](const MethodSpec& m) { return m.name == chosen; });
    decision.confidence = 1.0 - composite_risk(profile, *it);
    for (const auto& [name, warns] : admissible.warnings)
        if (name == chosen) decision.warnings = warns;

    // A stricter method shut out by its hard or composite constraints while a
    // more tolerant one is recommended is worth surfacing.
    for (const auto& method : catalog) {
        if (!method.enabled || method.name == chosen) break;
        if (std::find(admissible.methods.begin(), admissible.methods.end(), method.name) ==
            admissible.methods.end())
            decision.warnings.push_back("fallback_from:" + method.name);
    }
    return decision;
}

}  // namespace tsaudit
