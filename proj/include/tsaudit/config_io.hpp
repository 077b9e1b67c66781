#pragma once

#include "tsaudit/atlas.hpp"
#include "tsaudit/decision.hpp"
#include "tsaudit/diagnostics.hpp"
#include "tsaudit/evalmetrics.hpp"
#include "tsaudit/risk.hpp"
#include "tsaudit/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tsaudit {

// YAML pipeline configuration (utilities, bootstrap, thresholds, catalog).
struct PipelineConfig {
    AuditConfig audit;
    std::vector<MethodSpec> catalog = default_method_catalog();
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const PipelineConfig& config, const std::filesystem::path& path);

// YAML calibration file: intercepts, weights, family offsets, isotonic maps.
void save_calibration(const CalibratedModels& models, const std::filesystem::path& path);
CalibratedModels load_calibration(const std::filesystem::path& path);

// JSON artifacts.
std::string audit_evidence_json(const DiagnosticReport& report);
std::string risk_profile_json(const RiskProfile& profile);
RiskProfile risk_profile_from_json(const std::string& text);
std::string recommendation_policy_json(const Decision& decision,
                                       const PipelineConfig& config);
std::string benchmark_report_json(const BenchmarkReport& report);

// Atlas on disk: one directory per entry (data.json, truth_graph.json,
// spec.json) plus a top-level manifest.json.
void save_atlas(const Atlas& atlas, const std::filesystem::path& dir);
Atlas load_atlas(const std::filesystem::path& dir);

std::string graph_json(const SummaryGraph& graph);
SummaryGraph graph_from_json(const std::string& text);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tsaudit
