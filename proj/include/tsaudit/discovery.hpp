#pragma once

#include "tsaudit/types.hpp"

#include <cstdint>

namespace tsaudit {

struct GraphScore {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double fpr = 0.0, fnr = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
    // Lag-insensitive adjacency variant over ordered pairs.
    double adj_fpr = 0.0, adj_fnr = 0.0;
    double adj_precision = 0.0, adj_recall = 0.0, adj_f1 = 0.0;
    std::int64_t universe = 0;
};

// Fit VAR(tau_max) by least squares per target on fully-observed lag windows;
// joint-exclusion F test per ordered pair, BY-corrected across pairs; one edge
// per significant pair at the largest-|coefficient| lag.
SummaryGraph var_granger_discover(const TimeSeriesMatrix& series, int tau_max,
                                  double alpha);

// Exact-triple matching over the candidate universe.
GraphScore score_graph(const SummaryGraph& estimated, const SummaryGraph& truth);

// Failure: FPR > 0.50 or FNR > 0.80 (strict inequalities). Because one edge
// is emitted per significant pair, the exact-triple FPR is bounded well below
// 0.5 by construction; the adjacency-level rates carry the same thresholds.
bool failure_label(const GraphScore& score);

}  // namespace tsaudit
