#pragma once

#include "tsaudit/risk.hpp"
#include "tsaudit/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tsaudit {

// ---------------------------------------------------------------------------
// Method catalog
// ---------------------------------------------------------------------------

struct DimensionConstraint {
    double threshold = 1.0;
    bool hard = false;
};

struct MethodSpec {
    std::string name;
    double composite_threshold = 1.0;  // applies to the hard-dimension composite
    std::array<DimensionConstraint, kNumRiskDims> constraints;
    bool enabled = true;

    const DimensionConstraint& constraint(RiskDim d) const {
        return constraints[static_cast<std::size_t>(d)];
    }
};

// Granger and PCMCI+ enabled; LPCMCI and Transfer Entropy shipped disabled.
std::vector<MethodSpec> default_method_catalog();

// ---------------------------------------------------------------------------
// Decision
// ---------------------------------------------------------------------------

enum class Outcome { Recommend, Abstain };

struct Decision {
    Outcome outcome = Outcome::Abstain;
    std::string method;                 // set when Recommend
    double confidence = 0.0;
    std::vector<std::string> warnings;  // soft exceedances + fallback notes
    std::vector<std::string> reasons;   // machine-readable abstention reasons
};

// theta = (u_plus + u_abstain) / (u_plus + u_minus), clamped to [0,1].
double abstention_threshold(double u_plus, double u_minus, double u_abstain);

// Max point risk over the method's hard dimensions.
double composite_risk(const RiskProfile& profile, const MethodSpec& method);

struct AdmissibleSet {
    std::vector<std::string> methods;
    std::vector<std::pair<std::string, std::vector<std::string>>> warnings;
};

// Hard thresholds hold on point risks and the hard-dimension composite stays
// under the method's composite threshold; soft exceedances become warnings.
AdmissibleSet admissible_methods(const RiskProfile& profile,
                                 const std::vector<MethodSpec>& catalog);

Decision decide(const RiskProfile& profile, const std::vector<MethodSpec>& catalog,
                const AuditConfig& config);

}  // namespace tsaudit
