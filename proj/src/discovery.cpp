#include "tsaudit/discovery.hpp"

#include "tsaudit/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace tsaudit {

SummaryGraph var_granger_discover(const TimeSeriesMatrix& series, int tau_max,
                                  double alpha) {
    if (tau_max < 1) fail(ErrorKind::InvalidArgument, "tau_max must be >= 1");
    const Eigen::Index N = series.cols();
    const Eigen::Index T = series.rows();

    // Rows whose full lag window is observed across all variables.
    std::vector<Eigen::Index> rows;
    for (Eigen::Index t = tau_max; t < T; ++t) {
        bool ok = true;
        for (int l = 0; l <= tau_max && ok; ++l)
            for (Eigen::Index j = 0; j < N; ++j)
                if (series.missing(t - l, j)) { ok = false; break; }
        if (ok) rows.push_back(t);
    }
    const int n = static_cast<int>(rows.size());
    const int k = static_cast<int>(N) * tau_max + 1;
    if (n < 10 * static_cast<int>(N) * tau_max || n <= k + 2)
        fail(ErrorKind::LowSample, "granger: not enough fully-observed lag windows");

    Eigen::MatrixXd X(n, k);
    for (int r = 0; r < n; ++r) {
        X(r, 0) = 1.0;
        for (int l = 1; l <= tau_max; ++l)
            for (Eigen::Index j = 0; j < N; ++j)
                X(r, 1 + (l - 1) * N + j) =
                    series.values()(rows[static_cast<std::size_t>(r)] - l, j);
    }

    struct PairTest {
        int source, target, best_lag;
        double pvalue;
    };
    std::vector<PairTest> tests;
    std::vector<double> pvalues;

    for (Eigen::Index j = 0; j < N; ++j) {
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r)
            y(r) = series.values()(rows[static_cast<std::size_t>(r)], j);
        const auto full = stats::ols(X, y);

        for (Eigen::Index i = 0; i < N; ++i) {
            // Restricted model drops every lag of source i.
            Eigen::MatrixXd Xr(n, k - tau_max);
            Eigen::Index c = 0;
            for (Eigen::Index col = 0; col < k; ++col) {
                const bool is_source_lag =
                    col >= 1 && ((col - 1) % N) == static_cast<Eigen::Index>(i);
                if (!is_source_lag) Xr.col(c++) = X.col(col);
            }
            const auto restricted = stats::ols(Xr, y);
            const double p =
                stats::f_test_pvalue(restricted.ssr, full.ssr, tau_max, n - k);

            int best_lag = 1;
            double best_coef = -1.0;
            for (int l = 1; l <= tau_max; ++l) {
                const double c_abs = std::abs(full.coef(1 + (l - 1) * N + i));
                if (c_abs > best_coef) {
                    best_coef = c_abs;
                    best_lag = l;
                }
            }
            tests.push_back({static_cast<int>(i), static_cast<int>(j), best_lag, p});
            pvalues.push_back(p);
        }
    }

    const auto adjusted = stats::benjamini_yekutieli(pvalues);
    SummaryGraph graph(static_cast<int>(N), tau_max);
    for (std::size_t idx = 0; idx < tests.size(); ++idx)
        if (adjusted[idx] <= alpha)
            graph.add_edge(tests[idx].source, tests[idx].target, tests[idx].best_lag);
    return graph;
}

GraphScore score_graph(const SummaryGraph& estimated, const SummaryGraph& truth) {
    if (estimated.n_vars() != truth.n_vars() || estimated.tau_max() != truth.tau_max())
        fail(ErrorKind::UniverseMismatch, "graphs live in different candidate universes");

    GraphScore s;
    s.universe = truth.universe_size();
    for (const auto& e : estimated.edges())
        truth.edges().count(e) ? ++s.tp : ++s.fp;
    for (const auto& e : truth.edges())
        if (!estimated.edges().count(e)) ++s.fn;
    s.tn = s.universe - s.tp - s.fp - s.fn;

    const auto truth_n = static_cast<std::int64_t>(truth.size());
    const std::int64_t negatives = s.universe - truth_n;
    s.fpr = negatives > 0 ? static_cast<double>(s.fp) / negatives : 0.0;
    s.fnr = truth_n > 0 ? static_cast<double>(s.fn) / truth_n : 0.0;
    s.precision = (s.tp + s.fp) > 0
                      ? static_cast<double>(s.tp) / (s.tp + s.fp)
                      : (truth_n == 0 ? 1.0 : 0.0);
    s.recall = truth_n > 0 ? static_cast<double>(s.tp) / truth_n : 1.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;

    std::set<std::pair<int, int>> est_adj, truth_adj;
    for (const auto& e : estimated.edges()) est_adj.insert({e.source, e.target});
    for (const auto& e : truth.edges()) truth_adj.insert({e.source, e.target});
    std::int64_t atp = 0;
    for (const auto& p : est_adj) atp += truth_adj.count(p);
    const std::int64_t afp = static_cast<std::int64_t>(est_adj.size()) - atp;
    const std::int64_t afn = static_cast<std::int64_t>(truth_adj.size()) - atp;
    const std::int64_t n = truth.n_vars();
    const std::int64_t adj_neg = n * n - static_cast<std::int64_t>(truth_adj.size());
    s.adj_fpr = adj_neg > 0 ? static_cast<double>(afp) / adj_neg : 0.0;
    s.adj_fnr = truth_adj.empty() ? 0.0 : static_cast<double>(afn) / truth_adj.size();
    s.adj_precision = est_adj.empty() ? (truth_adj.empty() ? 1.0 : 0.0)
                                      : static_cast<double>(atp) / est_adj.size();
    s.adj_recall = truth_adj.empty() ? 1.0 : static_cast<double>(atp) / truth_adj.size();
    s.adj_f1 = (s.adj_precision + s.adj_recall) > 0
                   ? 2.0 * s.adj_precision * s.adj_recall / (s.adj_precision + s.adj_recall)
                   : 0.0;
    return s;
}

bool failure_label(const GraphScore& score) {
    return score.fpr > 0.50 || score.fnr > 0.80 || score.adj_fpr > 0.50 ||
           score.adj_fnr > 0.80;
}

}  // namespace tsaudit
