"""Assumption auditing and method recommendation for time-series causal discovery."""

from tsaudit._core import (
    AuditError,
    SummaryGraph,
    TimeSeriesMatrix,
    apply_isotonic,
    audit,
    audit_pipeline,
    benjamini_yekutieli,
    decide_from_risks,
    feature_names,
    fit_isotonic,
    gap_coefficient_of_variation,
    generate_atlas_to,
    generate_dataset,
    integrated_autocorr_time,
    load_series,
    logistic_risks,
    score_graph,
    series_from_json,
    var_granger_discover,
)

__all__ = [
    "AuditError",
    "SummaryGraph",
    "TimeSeriesMatrix",
    "apply_isotonic",
    "audit",
    "audit_pipeline",
    "benjamini_yekutieli",
    "decide_from_risks",
    "feature_names",
    "fit_isotonic",
    "gap_coefficient_of_variation",
    "generate_atlas_to",
    "generate_dataset",
    "integrated_autocorr_time",
    "load_series",
    "logistic_risks",
    "score_graph",
    "series_from_json",
    "var_granger_discover",
]

__version__ = "0.1.0"
