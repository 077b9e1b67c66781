#include "tsaudit/atlas.hpp"
#include "tsaudit/config_io.hpp"
#include "tsaudit/stats.hpp"
#include "tsaudit/decision.hpp"
#include "tsaudit/diagnostics.hpp"
#include "tsaudit/discovery.hpp"
#include "tsaudit/evalmetrics.hpp"
#include "tsaudit/risk.hpp"
#include "tsaudit/series_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

namespace py = pybind11;
using namespace tsaudit;

namespace {

TimeSeriesMatrix make_series(std::vector<double> timestamps, Eigen::MatrixXd values,
                             std::optional<Eigen::MatrixXd> mask,
                             std::vector<std::string> names) {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> m(values.rows(), values.cols());
    m.setConstant(false);
    if (mask) {
        for (Eigen::Index t = 0; t < values.rows(); ++t)
            for (Eigen::Index j = 0; j < values.cols(); ++j)
                m(t, j) = (*mask)(t, j) != 0.0;
    }
    return TimeSeriesMatrix(std::move(timestamps), std::move(values), std::move(m),
                            std::move(names));
}

py::dict features_dict(const FeatureVector& features) {
    py::dict out;
    for (int i = 0; i < kNumFeatures; ++i)
        out[feature_name(static_cast<FeatureSlot>(i))] =
            features.values[static_cast<std::size_t>(i)];
    return out;
}

py::object json_as_py(const std::string& text) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Assumption auditing and method recommendation for time-series "
              "causal discovery";

    py::register_exception<AuditError>(m, "AuditError");

    py::class_<TimeSeriesMatrix>(m, "TimeSeriesMatrix")
        .def(py::init(&make_series), py::arg("timestamps"), py::arg("values"),
             py::arg("mask") = std::nullopt, py::arg("names") = std::vector<std::string>{})
        .def_property_readonly("timestamps", &TimeSeriesMatrix::timestamps)
        .def_property_readonly("values", &TimeSeriesMatrix::values)
        .def_property_readonly("names", &TimeSeriesMatrix::names)
        .def_property_readonly("n_rows", &TimeSeriesMatrix::rows)
        .def_property_readonly("n_cols", &TimeSeriesMatrix::cols)
        .def("missing_fraction", &TimeSeriesMatrix::missing_fraction)
        .def("to_json", &to_json_matrix);

    py::class_<SummaryGraph>(m, "SummaryGraph")
        .def(py::init<int, int>(), py::arg("n_vars"), py::arg("tau_max"))
        .def("add_edge", &SummaryGraph::add_edge)
        .def("has_edge", &SummaryGraph::has_edge)
        .def_property_readonly("n_vars", &SummaryGraph::n_vars)
        .def_property_readonly("tau_max", &SummaryGraph::tau_max)
        .def("edges",
             [](const SummaryGraph& g) {
                 std::vector<std::tuple<int, int, int>> out;
                 for (const auto& e : g.edges()) out.emplace_back(e.source, e.target, e.lag);
                 return out;
             })
        .def("universe_size", &SummaryGraph::universe_size);

    m.def("load_series", py::overload_cast<const std::filesystem::path&>(&load_series),
          py::arg("path"));
    m.def("series_from_json", &from_json_matrix);

    m.def(
        "audit",
        [](const TimeSeriesMatrix& series, std::optional<double> period_hint,
           bool include_nonlinearity) {
            AuditConfig config;
            config.period_hint = period_hint;
            const auto report = audit_all(series, config, include_nonlinearity);
            return json_as_py(audit_evidence_json(report));
        },
        py::arg("series"), py::arg("period_hint") = std::nullopt,
        py::arg("include_nonlinearity") = true,
        "Run the Stage I diagnostics and return the evidence document");

    m.def(
        "audit_pipeline",
        [](const TimeSeriesMatrix& series, std::optional<double> period_hint) {
            PipelineConfig config;
            config.audit.period_hint = period_hint;
            CalibratedModels models;
            models.models = default_risk_models();
            const auto report = audit_all(series, config.audit, true);
            const auto profile = compute_risk_profile(report, models, config.audit);
            const auto decision = decide(profile, config.catalog, config.audit);
            py::dict out;
            out["audit_evidence"] = json_as_py(audit_evidence_json(report));
            out["risk_profile"] = json_as_py(risk_profile_json(profile));
            out["recommendation_policy"] =
                json_as_py(recommendation_policy_json(decision, config));
            return out;
        },
        py::arg("series"), py::arg("period_hint") = std::nullopt,
        "Full three-stage pipeline with default calibration");

    m.def("integrated_autocorr_time", [](const std::vector<double>& x) {
        return integrated_autocorr_time(x);
    });
    m.def("gap_coefficient_of_variation", [](const std::vector<double>& t) {
        return gap_coefficient_of_variation(t);
    });
    m.def("benjamini_yekutieli", &stats::benjamini_yekutieli);

    m.def(
        "fit_isotonic",
        [](const std::vector<double>& raw, const std::vector<int>& labels) {
            const auto map = fit_isotonic(raw, labels);
            return py::make_tuple(map.breakpoints(), map.values());
        },
        py::arg("raw_scores"), py::arg("labels"));
    m.def(
        "apply_isotonic",
        [](const std::vector<double>& breakpoints, const std::vector<double>& values,
           double raw) { return IsotonicMap(breakpoints, values).apply(raw); },
        py::arg("breakpoints"), py::arg("values"), py::arg("raw"));

    m.def(
        "logistic_risks",
        [](const py::dict& features) {
            FeatureVector f;
            for (const auto& item : features) {
                const auto slot = feature_from_name(py::cast<std::string>(item.first));
                if (!slot) fail(ErrorKind::MissingFeature, "unknown feature slot");
                f[*slot] = py::cast<double>(item.second);
            }
            py::dict out;
            for (const auto& model : default_risk_models())
                out[model.label.c_str()] = logistic_risk(f, model);
            return out;
        },
        py::arg("features"), "Raw risks under the deployed default models");

    m.def(
        "decide_from_risks",
        [](double nonstat, double irreg, double persist, double confound,
           double t_eff_ratio) {
            RiskProfile profile;
            profile.t_eff_ratio = t_eff_ratio;
            const std::array<double, 4> risks = {nonstat, irreg, persist, confound};
            for (int d = 0; d < kNumRiskDims; ++d) {
                profile.dims[static_cast<std::size_t>(d)].risk = risks[static_cast<std::size_t>(d)];
                profile.dims[static_cast<std::size_t>(d)].lo = risks[static_cast<std::size_t>(d)];
                profile.dims[static_cast<std::size_t>(d)].hi = risks[static_cast<std::size_t>(d)];
            }
            PipelineConfig config;
            const auto decision = decide(profile, config.catalog, config.audit);
            return json_as_py(recommendation_policy_json(decision, config));
        },
        py::arg("nonstat"), py::arg("irreg"), py::arg("persist"), py::arg("confound"),
        py::arg("t_eff_ratio") = 1.0);

    m.def(
        "var_granger_discover",
        [](const TimeSeriesMatrix& series, int tau_max, double alpha) {
            return var_granger_discover(series, tau_max, alpha);
        },
        py::arg("series"), py::arg("tau_max") = 1, py::arg("alpha") = 0.05);

    m.def("score_graph", [](const SummaryGraph& est, const SummaryGraph& truth) {
        const auto s = score_graph(est, truth);
        py::dict out;
        out["tp"] = s.tp;
        out["fp"] = s.fp;
        out["fn"] = s.fn;
        out["tn"] = s.tn;
        out["fpr"] = s.fpr;
        out["fnr"] = s.fnr;
        out["precision"] = s.precision;
        out["recall"] = s.recall;
        out["f1"] = s.f1;
        return out;
    });

    m.def(
        "generate_dataset",
        [](const std::string& family, int index, int per_family, std::uint64_t seed) {
            const auto spec =
                make_family_spec(family_from_name(family), index, per_family, seed);
            auto entry = generate_dataset(spec);
            py::dict out;
            out["data"] = entry.data;
            out["truth"] = entry.truth;
            out["severity"] = entry.labels.severity;
            out["label"] = entry.labels.label;
            return out;
        },
        py::arg("family"), py::arg("index") = 0, py::arg("per_family") = 50,
        py::arg("seed") = 20260809);

    m.def(
        "generate_atlas_to",
        [](const std::filesystem::path& dir, std::uint64_t seed, int per_family,
           bool with_labels) {
            const auto atlas = generate_atlas(seed, per_family, with_labels);
            save_atlas(atlas, dir);
            return atlas.entries.size();
        },
        py::arg("dir"), py::arg("seed") = 20260809, py::arg("per_family") = 50,
        py::arg("with_labels") = true);

    m.attr("feature_names") = [] {
        std::vector<std::string> names;
        for (int i = 0; i < kNumFeatures; ++i)
            names.push_back(feature_name(static_cast<FeatureSlot>(i)));
        return names;
    }();
}
