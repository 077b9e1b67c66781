#include "tsaudit/atlas.hpp"
#include "tsaudit/config_io.hpp"
#include "tsaudit/decision.hpp"
#include "tsaudit/diagnostics.hpp"
#include "tsaudit/evalmetrics.hpp"
#include "tsaudit/risk.hpp"
#include "tsaudit/series_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace tsaudit;

namespace {

PipelineConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return {};
    return load_pipeline_config(path);
}

CalibratedModels load_calibration_or_default(const std::string& path) {
    if (path.empty()) {
        CalibratedModels models;
        models.models = default_risk_models();
        return models;
    }
    return load_calibration(path);
}

int run_audit(const std::string& input, const std::string& config_path,
              const std::string& calibration_path, const std::string& out_dir,
              bool verbose) {
    const auto config = load_config_or_default(config_path);
    const auto models = load_calibration_or_default(calibration_path);

    const auto series = load_series(input);
    const auto report = audit_all(series, config.audit, /*include_nonlinearity=*/true);
    const auto profile = compute_risk_profile(report, models, config.audit);
    const auto decision = decide(profile, config.catalog, config.audit);

    // All artifacts are rendered before anything is written, so a failure
    // leaves existing outputs untouched.
    const std::string evidence = audit_evidence_json(report);
    const std::string risk = risk_profile_json(profile);
    const std::string policy = recommendation_policy_json(decision, config);

    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / "audit_evidence.json", evidence + "\n");
    write_file_atomic(fs::path(out_dir) / "risk_profile.json", risk + "\n");
    write_file_atomic(fs::path(out_dir) / "recommendation_policy.json", policy + "\n");

    if (verbose) {
        std::cout << (decision.outcome == Outcome::Recommend
                          ? "recommend " + decision.method
                          : "abstain")
                  << "\n";
        for (const auto& w : decision.warnings) std::cout << "warning: " << w << "\n";
        for (const auto& r : decision.reasons) std::cout << "reason: " << r << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assumption auditing, calibrated risk scoring, and "
                 "recommend-or-abstain decisions for time-series causal discovery"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Print a summary to stdout");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "Audit one series and emit the three JSON artifacts");
    std::string audit_input, audit_config, audit_calibration, audit_out = "audit_out";
    audit_cmd->add_option("series", audit_input, "Input series (.csv or .json)")->required();
    audit_cmd->add_option("--config", audit_config, "Pipeline YAML config");
    audit_cmd->add_option("--calibration", audit_calibration, "Calibration YAML");
    audit_cmd->add_option("--out", audit_out, "Output directory");

    // generate-atlas
    auto* gen_cmd = app.add_subcommand("generate-atlas", "Generate the synthetic benchmark");
    std::uint64_t gen_seed = 20260809;
    int per_family = 50;
    std::string gen_out = "atlas";
    bool no_labels = false;
    gen_cmd->add_option("--seed", gen_seed, "Master seed");
    gen_cmd->add_option("--per-family", per_family, "Datasets per family");
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();
    gen_cmd->add_flag("--no-labels", no_labels, "Skip discovery failure labeling");

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit risk models on an atlas");
    std::string cal_atlas, cal_out = "calibration.yaml";
    std::uint64_t cal_seed = 20260809;
    cal_cmd->add_option("--atlas", cal_atlas, "Atlas directory")->required();
    cal_cmd->add_option("--out", cal_out, "Calibration YAML output");
    cal_cmd->add_option("--seed", cal_seed, "Fit seed");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Run the benchmark harness");
    std::string eval_atlas, eval_calibration, eval_out = "benchmark_report.json";
    std::string eval_config;
    std::uint64_t split_seed = 20260809;
    eval_cmd->add_option("--atlas", eval_atlas, "Atlas directory")->required();
    eval_cmd->add_option("--calibration", eval_calibration,
                         "Optional calibration YAML (skips refitting)");
    eval_cmd->add_option("--config", eval_config, "Pipeline YAML config");
    eval_cmd->add_option("--out", eval_out, "Report path");
    eval_cmd->add_option("--split-seed", split_seed, "Holdout split seed");

    // decide
    auto* dec_cmd = app.add_subcommand("decide", "Decide from a stored risk profile");
    std::string dec_profile, dec_config, dec_out;
    dec_cmd->add_option("--risk-profile", dec_profile, "risk_profile.json path")->required();
    dec_cmd->add_option("--config", dec_config, "Pipeline YAML config");
    dec_cmd->add_option("--out", dec_out, "Write the policy JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*audit_cmd)
            return run_audit(audit_input, audit_config, audit_calibration, audit_out, verbose);

        if (*gen_cmd) {
            const auto atlas = generate_atlas(gen_seed, per_family, !no_labels);
            save_atlas(atlas, gen_out);
            if (verbose)
                std::cout << "wrote " << atlas.entries.size() << " datasets to " << gen_out
                          << "\n";
            return 0;
        }

        if (*cal_cmd) {
            const auto atlas = load_atlas(cal_atlas);
            const auto config = PipelineConfig{};
            const auto reports = audit_atlas(atlas, config.audit);
            std::vector<CalibrationRow> corpus;
            for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
                CalibrationRow row;
                row.features = reports[i].features;
                row.labels = atlas.entries[i].labels.label;
                row.family = family_name(atlas.entries[i].spec.family);
                corpus.push_back(std::move(row));
            }
            const auto models = calibrate_models(corpus, CalibrationPriors{}, cal_seed);
            save_calibration(models, cal_out);
            if (verbose) std::cout << "wrote " << cal_out << "\n";
            return 0;
        }

        if (*eval_cmd) {
            const auto atlas = load_atlas(eval_atlas);
            const auto config = load_config_or_default(eval_config);
            BenchmarkReport report;
            if (!eval_calibration.empty()) {
                const auto fixed = load_calibration(eval_calibration);
                report = run_benchmark(atlas, config.audit, split_seed, &fixed);
            } else {
                report = run_benchmark(atlas, config.audit, split_seed);
            }
            write_file_atomic(eval_out, benchmark_report_json(report) + "\n");
            if (verbose)
                std::cout << "fixtures " << report.fixtures_passed << "/"
                          << report.fixtures_total << ", coverage "
                          << report.selective.coverage << "\n";
            return 0;
        }

        if (*dec_cmd) {
            const auto config = load_config_or_default(dec_config);
            std::ifstream in(dec_profile);
            if (!in) fail(ErrorKind::Io, "cannot open " + dec_profile);
            std::ostringstream ss;
            ss << in.rdbuf();
            const auto profile = risk_profile_from_json(ss.str());
            const auto decision = decide(profile, config.catalog, config.audit);
            const auto policy = recommendation_policy_json(decision, config);
            if (dec_out.empty())
                std::cout << policy << "\n";
            else
                write_file_atomic(dec_out, policy + "\n");
            return 0;
        }
    } catch (const AuditError& e) {
        std::cerr << error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
