#include "tsaudit/decision.hpp"
#include "tsaudit/evalmetrics.hpp"

#include <doctest.h>

#include <random>

using namespace tsaudit;

namespace {

RiskProfile profile_of(double ns, double ir, double pe, double cf,
                       double teff_ratio = 1.0, double width = 0.0) {
    RiskProfile p;
    p.t_eff_ratio = teff_ratio;
    const std::array<double, 4> risks = {ns, ir, pe, cf};
    for (int d = 0; d < kNumRiskDims; ++d) {
        auto& dim = p.dims[static_cast<std::size_t>(d)];
        dim.risk = risks[static_cast<std::size_t>(d)];
        dim.lo = std::max(0.0, dim.risk - width / 2);
        dim.hi = std::min(1.0, dim.risk + width / 2);
    }
    return p;
}

}  // namespace

TEST_CASE("abstention threshold") {
    CHECK(abstention_threshold(1.0, 4.0, 0.5) == doctest::Approx(0.3));
    CHECK(abstention_threshold(1.0, 1000.0, 0.0) == doctest::Approx(0.000999).epsilon(1e-2));
    CHECK(abstention_threshold(1.0, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(abstention_threshold(0.0, 0.0, 0.0), AuditError);
}

TEST_CASE("composite risk over hard dimensions") {
    const auto catalog = default_method_catalog();
    const auto& granger = catalog[0];
    const auto& pcmci = catalog[1];

    CHECK(composite_risk(profile_of(0.2, 0.5, 0.1, 0.3), granger) == doctest::Approx(0.5));
    CHECK(composite_risk(profile_of(0.12, 0.18, 0.01, 1.00), pcmci) == doctest::Approx(0.12));
    CHECK(composite_risk(profile_of(0, 0, 0, 0), granger) == doctest::Approx(0.0));
}

TEST_CASE("admissible methods against the documented rows") {
    const auto catalog = default_method_catalog();

    auto adm = admissible_methods(profile_of(0.14, 0.18, 0.01, 0.10), catalog);
    REQUIRE(adm.methods.size() == 2);
    CHECK(adm.methods[0] == "granger");
    CHECK(adm.methods[1] == "pcmci+");
    for (const auto& [name, warns] : adm.warnings) CHECK(warns.empty());

    adm = admissible_methods(profile_of(0.12, 0.18, 0.01, 1.00), catalog);
    REQUIRE(adm.methods.size() == 1);
    CHECK(adm.methods[0] == "pcmci+");
    CHECK(adm.warnings[0].second.size() == 1);  // confound soft exceedance

    adm = admissible_methods(profile_of(1.00, 0.18, 1.00, 1.00), catalog);
    CHECK(adm.methods.empty());
}

TEST_CASE("decide: documented example rows") {
    const auto catalog = default_method_catalog();
    AuditConfig config;

    auto d = decide(profile_of(0.14, 0.18, 0.01, 0.10, 0.9), catalog, config);
    CHECK(d.outcome == Outcome::Recommend);
    CHECK(d.method == "granger");

    d = decide(profile_of(1.00, 0.18, 1.00, 1.00), catalog, config);
    CHECK(d.outcome == Outcome::Abstain);
    REQUIRE(!d.reasons.empty());
    CHECK(d.reasons[0] == "catastrophic_nonstationarity");

    d = decide(profile_of(0.21, 0.38, 1.00, 1.00), catalog, config);
    CHECK(d.outcome == Outcome::Recommend);
    CHECK(d.method == "pcmci+");
    bool persist_warn = false, confound_warn = false;
    for (const auto& w : d.warnings) {
        if (w == "soft_constraint_exceeded:persist") persist_warn = true;
        if (w == "soft_constraint_exceeded:confound") confound_warn = true;
    }
    CHECK(persist_warn);
    CHECK(confound_warn);
}

TEST_CASE("decide: mandatory abstention conditions") {
    const auto catalog = default_method_catalog();
    AuditConfig config;

    // (1) small effective-sample ratio.
    auto d = decide(profile_of(0.1, 0.1, 0.1, 0.1, 0.2), catalog, config);
    CHECK(d.outcome == Outcome::Abstain);
    CHECK(d.reasons[0] == "insufficient_effective_sample");

    // (2) interval width (risks centered so clamping keeps the width).
    d = decide(profile_of(0.5, 0.1, 0.1, 0.1, 1.0, 0.6), catalog, config);
    CHECK(d.outcome == Outcome::Abstain);
    CHECK(d.reasons[0] == "high_uncertainty");

    // (3) compound nonstationarity and confounding.
    d = decide(profile_of(0.75, 0.1, 0.1, 0.9), catalog, config);
    CHECK(d.outcome == Outcome::Abstain);
    CHECK(d.reasons[0] == "compound_nonstationarity_confounding");

    // (4) no admissible confident method.
    d = decide(profile_of(0.78, 0.55, 0.1, 0.65), catalog, config);
    CHECK(d.outcome == Outcome::Abstain);
    REQUIRE(!d.reasons.empty());

    CHECK_THROWS_AS(decide(profile_of(0, 0, 0, 0), {}, config), AuditError);
}

TEST_CASE("decide: persistence preference and abstain reasons are machine readable") {
    const auto catalog = default_method_catalog();
    AuditConfig config;

    const auto d = decide(profile_of(0.1, 0.1, 0.72, 0.1), catalog, config);
    CHECK(d.outcome == Outcome::Recommend);
    CHECK(d.method == "pcmci+");

    const auto abst = decide(profile_of(0.95, 0.1, 0.1, 0.1), catalog, config);
    CHECK(abst.outcome == Outcome::Abstain);
    CHECK(!abst.reasons.empty());
}

TEST_CASE("decide: monotone abstention under risk increases") {
    const auto catalog = default_method_catalog();
    AuditConfig config;
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 200; ++trial) {
        const double ns = unit(rng), ir = unit(rng), pe = unit(rng), cf = unit(rng);
        const auto base = decide(profile_of(ns, ir, pe, cf), catalog, config);
        if (base.outcome == Outcome::Recommend) continue;
        // Raise one coordinate; an abstain must never flip to recommend.
        const int d = static_cast<int>(unit(rng) * 4);
        std::array<double, 4> risks = {ns, ir, pe, cf};
        risks[static_cast<std::size_t>(d)] =
            std::min(1.0, risks[static_cast<std::size_t>(d)] + unit(rng) *
                          (1.0 - risks[static_cast<std::size_t>(d)]));
        const auto raised =
            decide(profile_of(risks[0], risks[1], risks[2], risks[3]), catalog, config);
        CHECK(raised.outcome == Outcome::Abstain);
    }
}

TEST_CASE("decision fixtures reproduce the expected column 21/21") {
    const auto results = run_decision_fixtures(default_method_catalog(), AuditConfig{});
    REQUIRE(results.size() == 21);
    int passed = 0;
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed);
        if (r.passed) ++passed;
    }
    CHECK(passed == 21);
}

TEST_CASE("decide is pure") {
    const auto catalog = default_method_catalog();
    AuditConfig config;
    const auto p = profile_of(0.3, 0.4, 0.2, 0.5);
    const auto a = decide(p, catalog, config);
    const auto b = decide(p, catalog, config);
    CHECK(a.outcome == b.outcome);
    CHECK(a.method == b.method);
    CHECK(a.warnings == b.warnings);
    CHECK(a.reasons == b.reasons);
}
