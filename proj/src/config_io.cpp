#include "tsaudit/config_io.hpp"

#include "tsaudit/series_io.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace tsaudit {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json dim_block(const DimensionRisk& dim) {
    json j;
    j["risk"] = dim.risk;
    j["lo"] = dim.lo;
    j["hi"] = dim.hi;
    j["intercept"] = dim.intercept;
    json ledger = json::array();
    for (const auto& entry : dim.ledger)
        ledger.push_back({{"feature", entry.feature}, {"contribution", entry.contribution}});
    j["ledger"] = std::move(ledger);
    return j;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot write " + tmp);
        out << content;
        if (!out.good()) fail(ErrorKind::Io, "short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Pipeline config (YAML)
// ---------------------------------------------------------------------------

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    PipelineConfig config;
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
        fail(ErrorKind::Parse, "config: " + std::string(e.what()));
    }

    auto& a = config.audit;
    if (const auto u = root["utilities"]) {
        if (u["u_plus"]) a.u_plus = u["u_plus"].as<double>();
        if (u["u_minus"]) a.u_minus = u["u_minus"].as<double>();
        if (u["u_abstain"]) a.u_abstain = u["u_abstain"].as<double>();
    }
    if (const auto b = root["bootstrap"]) {
        if (b["iterations"]) a.bootstrap_iterations = b["iterations"].as<int>();
        if (b["seed"]) a.bootstrap_seed = b["seed"].as<std::uint64_t>();
    }
    if (root["alpha"]) a.alpha = root["alpha"].as<double>();
    if (root["discovery_tau_max"]) a.discovery_tau_max = root["discovery_tau_max"].as<int>();
    if (root["period_hint"]) a.period_hint = root["period_hint"].as<double>();
    if (const auto t = root["abstention"]) {
        if (t["min_teff_ratio"]) a.min_teff_ratio = t["min_teff_ratio"].as<double>();
        if (t["max_interval_width"]) a.max_interval_width = t["max_interval_width"].as<double>();
        if (t["catastrophic_nonstat"])
            a.catastrophic_nonstat = t["catastrophic_nonstat"].as<double>();
        if (t["compound_nonstat"]) a.compound_nonstat = t["compound_nonstat"].as<double>();
        if (t["compound_confound"]) a.compound_confound = t["compound_confound"].as<double>();
        if (t["catastrophic_composite"])
            a.catastrophic_composite = t["catastrophic_composite"].as<double>();
        if (t["min_confidence"]) a.min_confidence = t["min_confidence"].as<double>();
    }
    if (const auto anchors = root["anchors"]) {
        auto& an = a.anchors;
        if (anchors["break_mag_sd"]) an.break_mag_sd = anchors["break_mag_sd"].as<double>();
        if (anchors["drift_z"]) an.drift_z = anchors["drift_z"].as<double>();
        if (anchors["missing_denom"]) an.missing_denom = anchors["missing_denom"].as<double>();
        if (anchors["tau_int_cap"]) an.tau_int_cap = anchors["tau_int_cap"].as<double>();
        if (anchors["vif_log10_cap"]) an.vif_log10_cap = anchors["vif_log10_cap"].as<double>();
        if (anchors["resid_log10_cap"])
            an.resid_log10_cap = anchors["resid_log10_cap"].as<double>();
    }
    if (const auto methods = root["methods"]) {
        config.catalog.clear();
        for (const auto& m : methods) {
            MethodSpec spec;
            spec.name = m["name"].as<std::string>();
            spec.composite_threshold = m["composite"].as<double>();
            spec.enabled = m["enabled"] ? m["enabled"].as<bool>() : true;
            const std::array<const char*, kNumRiskDims> keys = {"nonstat", "irreg", "persist",
                                                                "confound"};
            for (int d = 0; d < kNumRiskDims; ++d) {
                const auto node = m[keys[static_cast<std::size_t>(d)]];
                if (!node) continue;
                spec.constraints[static_cast<std::size_t>(d)].threshold =
                    node["threshold"].as<double>();
                spec.constraints[static_cast<std::size_t>(d)].hard = node["hard"].as<bool>();
            }
            config.catalog.push_back(std::move(spec));
        }
    }
    config.audit.validate();
    return config;
}

void save_pipeline_config(const PipelineConfig& config, const std::filesystem::path& path) {
    YAML::Emitter out;
    const auto& a = config.audit;
    out << YAML::BeginMap;
    out << YAML::Key << "utilities" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "u_plus" << YAML::Value << a.u_plus;
    out << YAML::Key << "u_minus" << YAML::Value << a.u_minus;
    out << YAML::Key << "u_abstain" << YAML::Value << a.u_abstain;
    out << YAML::EndMap;
    out << YAML::Key << "bootstrap" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "iterations" << YAML::Value << a.bootstrap_iterations;
    out << YAML::Key << "seed" << YAML::Value << a.bootstrap_seed;
    out << YAML::EndMap;
    out << YAML::Key << "alpha" << YAML::Value << a.alpha;
    out << YAML::Key << "discovery_tau_max" << YAML::Value << a.discovery_tau_max;
    if (a.period_hint) out << YAML::Key << "period_hint" << YAML::Value << *a.period_hint;
    out << YAML::Key << "abstention" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "min_teff_ratio" << YAML::Value << a.min_teff_ratio;
    out << YAML::Key << "max_interval_width" << YAML::Value << a.max_interval_width;
    out << YAML::Key << "catastrophic_nonstat" << YAML::Value << a.catastrophic_nonstat;
    out << YAML::Key << "compound_nonstat" << YAML::Value << a.compound_nonstat;
    out << YAML::Key << "compound_confound" << YAML::Value << a.compound_confound;
    out << YAML::Key << "catastrophic_composite" << YAML::Value << a.catastrophic_composite;
    out << YAML::Key << "min_confidence" << YAML::Value << a.min_confidence;
    out << YAML::EndMap;
    out << YAML::Key << "methods" << YAML::Value << YAML::BeginSeq;
    const std::array<const char*, kNumRiskDims> keys = {"nonstat", "irreg", "persist",
                                                        "confound"};
    for (const auto& m : config.catalog) {
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << m.name;
        out << YAML::Key << "composite" << YAML::Value << m.composite_threshold;
        out << YAML::Key << "enabled" << YAML::Value << m.enabled;
        for (int d = 0; d < kNumRiskDims; ++d) {
            out << YAML::Key << keys[static_cast<std::size_t>(d)] << YAML::Value
                << YAML::BeginMap;
            out << YAML::Key << "threshold" << YAML::Value
                << m.constraints[static_cast<std::size_t>(d)].threshold;
            out << YAML::Key << "hard" << YAML::Value
                << m.constraints[static_cast<std::size_t>(d)].hard;
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    write_file_atomic(path, std::string(out.c_str()) + "\n");
}

// ---------------------------------------------------------------------------
// Calibration (YAML)
// ---------------------------------------------------------------------------

void save_calibration(const CalibratedModels& models, const std::filesystem::path& path) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "models" << YAML::Value << YAML::BeginSeq;
    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto& model = models.models[static_cast<std::size_t>(d)];
        const auto& map = models.maps[static_cast<std::size_t>(d)];
        out << YAML::BeginMap;
        out << YAML::Key << "dimension" << YAML::Value << model.label;
        out << YAML::Key << "intercept" << YAML::Value << model.intercept;
        out << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
        for (const auto& [slot, w] : model.weights)
            out << YAML::Key << feature_name(slot) << YAML::Value << w;
        out << YAML::EndMap;
        out << YAML::Key << "family_offsets" << YAML::Value << YAML::BeginMap;
        for (const auto& [fam, off] : models.family_offsets[static_cast<std::size_t>(d)])
            out << YAML::Key << fam << YAML::Value << off;
        out << YAML::EndMap;
        out << YAML::Key << "isotonic" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "breakpoints" << YAML::Value << YAML::Flow << map.breakpoints();
        out << YAML::Key << "values" << YAML::Value << YAML::Flow << map.values();
        out << YAML::EndMap;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    write_file_atomic(path, std::string(out.c_str()) + "\n");
}

CalibratedModels load_calibration(const std::filesystem::path& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
        fail(ErrorKind::Parse, "calibration: " + std::string(e.what()));
    }
    CalibratedModels models;
    models.models = default_risk_models();
    for (const auto& node : root["models"]) {
        const std::string label = node["dimension"].as<std::string>();
        int d = -1;
        for (int k = 0; k < kNumRiskDims; ++k)
            if (label == risk_dim_name(static_cast<RiskDim>(k))) d = k;
        if (d < 0) fail(ErrorKind::Parse, "calibration: unknown dimension " + label);
        auto& model = models.models[static_cast<std::size_t>(d)];
        model.intercept = node["intercept"].as<double>();
        model.weights.clear();
        for (const auto& kv : node["weights"]) {
            const auto slot = feature_from_name(kv.first.as<std::string>());
            if (!slot) fail(ErrorKind::Parse, "calibration: unknown feature slot");
            model.weights[*slot] = kv.second.as<double>();
        }
        if (node["family_offsets"])
            for (const auto& kv : node["family_offsets"])
                models.family_offsets[static_cast<std::size_t>(d)][kv.first.as<std::string>()] =
                    kv.second.as<double>();
        if (node["isotonic"] && node["isotonic"]["breakpoints"]) {
            auto bp = node["isotonic"]["breakpoints"].as<std::vector<double>>();
            auto vals = node["isotonic"]["values"].as<std::vector<double>>();
            if (!bp.empty())
                models.maps[static_cast<std::size_t>(d)] =
                    IsotonicMap(std::move(bp), std::move(vals));
        }
    }
    return models;
}

// ---------------------------------------------------------------------------
// JSON artifacts
// ---------------------------------------------------------------------------

std::string audit_evidence_json(const DiagnosticReport& report) {
    json j;
    const auto& st = report.stationarity;
    j["stationarity"] = {{"adf_pvalues", st.adf_pvalues},
                         {"kpss_pvalues", st.kpss_pvalues},
                         {"adf_pvalues_corrected", st.adf_pvalues_corrected},
                         {"kpss_pvalues_corrected", st.kpss_pvalues_corrected},
                         {"drift_slope_z", st.drift_slope_z},
                         {"break_count", st.break_count},
                         {"break_magnitude", st.break_magnitude},
                         {"break_locations", st.break_locations}};
    const auto& ir = report.irregularity;
    j["irregularity"] = {{"gap_cv", ir.gap_cv},
                         {"missing_fraction", ir.missing_fraction},
                         {"mcar_pvalue", ir.mcar_pvalue},
                         {"mcar_applicable", ir.mcar_applicable},
                         {"seasonal_missing_pvalue", ir.seasonal_missing_pvalue},
                         {"seasonal_applicable", ir.seasonal_applicable}};
    const auto& pe = report.persistence;
    j["persistence"] = {{"tau_int", pe.tau_int},
                        {"ljung_box_pvalues", pe.ljung_box_pvalues},
                        {"t_eff", pe.t_eff},
                        {"t_eff_ratio", pe.t_eff_ratio},
                        {"t", pe.t}};
    const auto& nl = report.nonlinearity;
    j["nonlinearity"] = {{"delta_rmse_rel", nl.delta_rmse_rel},
                         {"flagged", nl.flagged},
                         {"computed", nl.computed}};
    const auto& cf = report.confounding;
    j["confounding"] = {{"vif", cf.vif},
                        {"vif_capped", cf.vif_capped},
                        {"applicable", cf.applicable},
                        {"chow_pvalue", cf.chow_pvalue},
                        {"chow_pvalues_raw", cf.chow_pvalues_raw},
                        {"resid_var_instability", cf.resid_var_instability}};
    json features;
    for (int i = 0; i < kNumFeatures; ++i)
        features[feature_name(static_cast<FeatureSlot>(i))] =
            report.features.values[static_cast<std::size_t>(i)];
    j["features"] = std::move(features);
    j["flags"] = report.flags;
    return j.dump(2);
}

std::string risk_profile_json(const RiskProfile& profile) {
    json j;
    for (int d = 0; d < kNumRiskDims; ++d)
        j[risk_dim_name(static_cast<RiskDim>(d))] =
            dim_block(profile.dims[static_cast<std::size_t>(d)]);
    j["t_eff_ratio"] = profile.t_eff_ratio;
    return j.dump(2);
}

RiskProfile risk_profile_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("risk profile: ") + e.what());
    }
    RiskProfile profile;
    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto* name = risk_dim_name(static_cast<RiskDim>(d));
        if (!doc.contains(name))
            fail(ErrorKind::Parse, std::string("risk profile: missing dimension ") + name);
        const auto& block = doc[name];
        auto& dim = profile.dims[static_cast<std::size_t>(d)];
        dim.risk = block.at("risk").get<double>();
        dim.lo = block.value("lo", dim.risk);
        dim.hi = block.value("hi", dim.risk);
        if (block.contains("ledger"))
            for (const auto& e : block["ledger"])
                dim.ledger.push_back({e.at("feature").get<std::string>(),
                                      e.at("contribution").get<double>()});
        if (dim.lo > dim.risk || dim.hi < dim.risk)
            fail(ErrorKind::Parse, "risk profile: interval must contain the point risk");
    }
    profile.t_eff_ratio = doc.value("t_eff_ratio", 1.0);
    return profile;
}

std::string recommendation_policy_json(const Decision& decision,
                                       const PipelineConfig& config) {
    json j;
    j["decision"] = decision.outcome == Outcome::Recommend ? "recommend" : "abstain";
    if (decision.outcome == Outcome::Recommend) j["method"] = decision.method;
    j["confidence"] = decision.confidence;
    j["warnings"] = decision.warnings;
    j["reasons"] = decision.reasons;
    json thresholds;
    thresholds["theta_abstain"] = config.audit.abstention_threshold();
    thresholds["min_teff_ratio"] = config.audit.min_teff_ratio;
    thresholds["max_interval_width"] = config.audit.max_interval_width;
    thresholds["catastrophic_nonstat"] = config.audit.catastrophic_nonstat;
    json methods = json::array();
    const std::array<const char*, kNumRiskDims> keys = {"nonstat", "irreg", "persist",
                                                        "confound"};
    for (const auto& m : config.catalog) {
        json mj;
        mj["name"] = m.name;
        mj["composite"] = m.composite_threshold;
        mj["enabled"] = m.enabled;
        for (int d = 0; d < kNumRiskDims; ++d)
            mj[keys[static_cast<std::size_t>(d)]] = {
                {"threshold", m.constraints[static_cast<std::size_t>(d)].threshold},
                {"hard", m.constraints[static_cast<std::size_t>(d)].hard}};
        methods.push_back(std::move(mj));
    }
    thresholds["methods"] = std::move(methods);
    j["thresholds_used"] = std::move(thresholds);
    return j.dump(2);
}

std::string benchmark_report_json(const BenchmarkReport& report) {
    json j;
    json cal;
    for (int d = 0; d < kNumRiskDims; ++d) {
        const auto& row = report.calibration[static_cast<std::size_t>(d)];
        json bins = json::array();
        for (const auto& bin : row.bins)
            bins.push_back({{"mean_predicted", bin.mean_predicted},
                            {"empirical_frequency", bin.empirical_frequency},
                            {"count", bin.count}});
        cal[risk_dim_name(static_cast<RiskDim>(d))] = {
            {"slope", row.slope},         {"intercept", row.intercept},
            {"ece", row.ece},             {"brier", row.brier},
            {"auroc", row.auroc},         {"slope_converged", row.slope_converged},
            {"bins", std::move(bins)}};
    }
    j["calibration"] = std::move(cal);

    auto selective_json = [](const SelectiveSummary& s) {
        json o;
        o["coverage"] = s.coverage;
        if (s.selective_fpr) o["selective_fpr"] = *s.selective_fpr;
        if (s.selective_f1) o["selective_f1"] = *s.selective_f1;
        if (s.abstention_precision) o["abstention_precision"] = *s.abstention_precision;
        if (s.precision_discourage) o["precision_discourage"] = *s.precision_discourage;
        o["recall_safe"] = s.recall_safe;
        if (s.good_abstention_rate) o["good_abstention_rate"] = *s.good_abstention_rate;
        o["overall_accuracy"] = s.overall_accuracy;
        return o;
    };
    j["selective"] = selective_json(report.selective);
    j["selective_always_run"] = selective_json(report.selective_always_run);

    json fixtures;
    fixtures["passed"] = report.fixtures_passed;
    fixtures["total"] = report.fixtures_total;
    json rows = json::array();
    for (const auto& r : report.fixture_results)
        rows.push_back({{"name", r.name},
                        {"passed", r.passed},
                        {"expected", r.expected == Outcome::Recommend ? "recommend" : "abstain"},
                        {"got", r.got == Outcome::Recommend ? "recommend" : "abstain"},
                        {"detail", r.detail}});
    fixtures["rows"] = std::move(rows);
    j["fixtures"] = std::move(fixtures);

    json strata = json::array();
    for (const auto& s : report.strata)
        strata.push_back({{"name", s.name},
                          {"n", s.n},
                          {"always_run_fpr", s.always_run_fpr},
                          {"abstention_rate", s.abstention_rate},
                          {"selective_failure_rate", s.selective_failure_rate}});
    j["strata"] = std::move(strata);
    j["runtime"] = {{"seconds", report.runtime_seconds},
                    {"calibration_n", report.calibration_n},
                    {"holdout_n", report.holdout_n}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Graph + atlas persistence
// ---------------------------------------------------------------------------

std::string graph_json(const SummaryGraph& graph) {
    json j;
    j["n_vars"] = graph.n_vars();
    j["tau_max"] = graph.tau_max();
    json edges = json::array();
    for (const auto& e : graph.edges()) edges.push_back({e.source, e.target, e.lag});
    j["edges"] = std::move(edges);
    return j.dump(2);
}

SummaryGraph graph_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("graph: ") + e.what());
    }
    SummaryGraph graph(doc.at("n_vars").get<int>(), doc.at("tau_max").get<int>());
    for (const auto& e : doc.at("edges"))
        graph.add_edge(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>());
    return graph;
}

namespace {

json spec_json(const DgpSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["n_vars"] = spec.n_vars;
    j["t_obs"] = spec.t_obs;
    j["seed"] = spec.seed;
    j["rho_target"] = spec.rho_target;
    j["edge_density"] = spec.edge_density;
    j["persistent_diagonal"] = spec.persistent_diagonal;
    json breaks = json::array();
    for (const auto& b : spec.breaks)
        breaks.push_back({{"position_fraction", b.position_fraction},
                          {"magnitude", b.magnitude}});
    j["breaks"] = std::move(breaks);
    j["missing"] = static_cast<int>(spec.missing);
    j["missing_fraction"] = spec.missing_fraction;
    j["row_mask_share"] = spec.row_mask_share;
    j["gap_jitter_cv"] = spec.gap_jitter_cv;
    j["latent_count"] = spec.latent_count;
    j["sigma_conf"] = spec.sigma_conf;
    j["latent_children"] = spec.latent_children;
    j["seasonal_period"] = spec.seasonal_period;
    j["seasonal_amplitude"] = spec.seasonal_amplitude;
    j["seasonal_common_phase"] = spec.seasonal_common_phase;
    j["transform"] = static_cast<int>(spec.transform);
    j["noise"] = static_cast<int>(spec.noise);
    j["student_nu"] = spec.student_nu;
    j["boundary"] = static_cast<int>(spec.boundary);
    return j;
}

DgpSpec spec_from_json(const json& j) {
    DgpSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.n_vars = j.at("n_vars").get<int>();
    spec.t_obs = j.at("t_obs").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.rho_target = j.at("rho_target").get<double>();
    spec.edge_density = j.at("edge_density").get<double>();
    spec.persistent_diagonal = j.value("persistent_diagonal", false);
    for (const auto& b : j.at("breaks"))
        spec.breaks.push_back({b.at("position_fraction").get<double>(),
                               b.at("magnitude").get<double>()});
    spec.missing = static_cast<MissingMechanism>(j.at("missing").get<int>());
    spec.missing_fraction = j.at("missing_fraction").get<double>();
    spec.row_mask_share = j.value("row_mask_share", 0.8);
    spec.gap_jitter_cv = j.at("gap_jitter_cv").get<double>();
    spec.latent_count = j.at("latent_count").get<int>();
    spec.sigma_conf = j.at("sigma_conf").get<double>();
    spec.latent_children = j.at("latent_children").get<int>();
    spec.seasonal_period = j.at("seasonal_period").get<double>();
    spec.seasonal_amplitude = j.at("seasonal_amplitude").get<double>();
    spec.seasonal_common_phase = j.value("seasonal_common_phase", false);
    spec.transform = static_cast<NonlinearTransform>(j.at("transform").get<int>());
    spec.noise = static_cast<NoiseFamily>(j.at("noise").get<int>());
    spec.student_nu = j.at("student_nu").get<double>();
    spec.boundary = static_cast<BoundaryCase>(j.at("boundary").get<int>());
    return spec;
}

json labels_json(const GroundTruthLabels& labels, const DiscoveryOutcome& disc,
                 double realized_rho) {
    json j;
    j["realized_spectral_radius"] = realized_rho;
    j["severity"] = labels.severity;
    j["label"] = labels.label;
    j["analytic_tau_int"] = labels.analytic_tau_int;
    j["analytic_vif_excess"] = labels.analytic_vif_excess;
    j["discovery"] = {{"computed", disc.computed}, {"failure", disc.failure},
                      {"fpr", disc.fpr},           {"fnr", disc.fnr},
                      {"f1", disc.f1},             {"errored", disc.errored}};
    return j;
}

void labels_from_json(const json& j, GroundTruthLabels& labels, DiscoveryOutcome& disc) {
    for (int d = 0; d < kNumRiskDims; ++d) {
        labels.severity[static_cast<std::size_t>(d)] = j.at("severity")[static_cast<std::size_t>(d)];
        labels.label[static_cast<std::size_t>(d)] = j.at("label")[static_cast<std::size_t>(d)];
    }
    labels.analytic_tau_int = j.at("analytic_tau_int").get<double>();
    labels.analytic_vif_excess = j.at("analytic_vif_excess").get<double>();
    const auto& dj = j.at("discovery");
    disc.computed = dj.at("computed").get<bool>();
    disc.failure = dj.at("failure").get<bool>();
    disc.fpr = dj.at("fpr").get<double>();
    disc.fnr = dj.at("fnr").get<double>();
    disc.f1 = dj.at("f1").get<double>();
    disc.errored = dj.at("errored").get<bool>();
}

}  // namespace

void save_atlas(const Atlas& atlas, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["master_seed"] = atlas.manifest.master_seed;
    manifest["per_family"] = atlas.manifest.per_family;
    json entries = json::array();
    for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
        const auto& entry = atlas.entries[i];
        char name[32];
        std::snprintf(name, sizeof(name), "%s_%03zu", family_name(entry.spec.family),
                      i % static_cast<std::size_t>(std::max(1, atlas.manifest.per_family)));
        const auto subdir = dir / name;
        std::filesystem::create_directories(subdir);
        write_file_atomic(subdir / "data.json", to_json_matrix(entry.data) + "\n");
        write_file_atomic(subdir / "truth_graph.json", graph_json(entry.truth) + "\n");
        write_file_atomic(subdir / "spec.json", spec_json(entry.spec).dump(2) + "\n");

        json meta = spec_json(entry.spec);
        meta["dir"] = name;
        meta["labels"] = labels_json(entry.labels, entry.discovery,
                                     entry.realized_spectral_radius);
        entries.push_back(std::move(meta));
    }
    manifest["entries"] = std::move(entries);
    json counts = json::object();
    for (const auto& entry : atlas.entries) {
        const std::string f = family_name(entry.spec.family);
        counts[f] = (counts.contains(f) ? counts[f].get<int>() : 0) + 1;
    }
    manifest["family_counts"] = std::move(counts);
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

Atlas load_atlas(const std::filesystem::path& dir) {
    json manifest;
    try {
        manifest = json::parse(slurp(dir / "manifest.json"));
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("manifest: ") + e.what());
    }
    Atlas atlas;
    atlas.manifest.master_seed = manifest.at("master_seed").get<std::uint64_t>();
    atlas.manifest.per_family = manifest.at("per_family").get<int>();
    for (const auto& meta : manifest.at("entries")) {
        const auto subdir = dir / meta.at("dir").get<std::string>();
        DgpSpec spec = spec_from_json(meta);
        TimeSeriesMatrix data = from_json_matrix(slurp(subdir / "data.json"));
        SummaryGraph truth = graph_from_json(slurp(subdir / "truth_graph.json"));
        GroundTruthLabels labels;
        DiscoveryOutcome disc;
        labels_from_json(meta.at("labels"), labels, disc);
        const double rho = meta.at("labels").value("realized_spectral_radius", 0.0);
        atlas.manifest.specs.push_back(spec);
        atlas.manifest.labels.push_back(labels);
        atlas.manifest.discovery.push_back(disc);
        atlas.entries.push_back(AtlasEntry{std::move(spec), std::move(data),
                                           std::move(truth), labels, disc, rho});
    }
    return atlas;
}

}  // namespace tsaudit
