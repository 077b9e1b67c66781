#include "tsaudit/unit_root.hpp"

#include "tsaudit/stats.hpp"
#include "tsaudit/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsaudit {

namespace {

// Rows t = start..n-1 of the ADF regression
//   dy_t = c + gamma*y_{t-1} + sum_{i=1..p} delta_i dy_{t-i} + e_t
// where dy is indexed 1..n-1.
stats::OlsFit adf_fit(std::span<const double> y, int p, int start) {
    const int n = static_cast<int>(y.size());
    const int rows = n - start;
    Eigen::MatrixXd X(rows, p + 2);
    Eigen::VectorXd d(rows);
    for (int t = start; t < n; ++t) {
        const int r = t - start;
        d(r) = y[t] - y[t - 1];
        X(r, 0) = 1.0;
        X(r, 1) = y[t - 1];
        for (int i = 1; i <= p; ++i) X(r, 1 + i) = y[t - i] - y[t - i - 1];
    }
    return stats::ols(X, d);
}

}  // namespace

AdfResult adf_test(std::span<const double> y) {
    const int n = static_cast<int>(y.size());
    if (n < 20) fail(ErrorKind::LowSample, "adf: need at least 20 observations");
    if (stats::variance(y) <= 0.0) fail(ErrorKind::ConstantSeries, "adf: constant series");

    int pmax = static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25)));
    pmax = std::clamp(pmax, 0, n / 2 - 4);

    // Candidate lags compete on the common sample t = pmax+1..n-1.
    const int common_start = pmax + 1;
    const int common_rows = n - common_start;
    int best_p = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= pmax; ++p) {
        stats::OlsFit fit;
        try {
            fit = adf_fit(y, p, common_start);
        } catch (const AuditError&) {
            continue;
        }
        const double aic = common_rows * std::log(std::max(fit.ssr / common_rows, 1e-300)) +
                           2.0 * (p + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }

    const auto fit = adf_fit(y, best_p, best_p + 1);
    const double tau = fit.coef(1) / fit.coef_se(1);
    return {tau, stats::adf_pvalue_from_stat(tau), best_p};
}

KpssResult kpss_test(std::span<const double> y) {
    const int n = static_cast<int>(y.size());
    if (n < 20) fail(ErrorKind::LowSample, "kpss: need at least 20 observations");
    const double m = stats::mean(y);
    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e[i] = y[i] - m;
    if (stats::variance(y) <= 0.0) fail(ErrorKind::ConstantSeries, "kpss: constant series");

    double s = 0.0, eta = 0.0;
    for (double v : e) {
        s += v;
        eta += s * s;
    }
    eta /= static_cast<double>(n) * n;

    const int bw = std::min(n - 1, static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25))));
    double lrv = 0.0;
    for (double v : e) lrv += v * v;
    lrv /= n;
    for (int lag = 1; lag <= bw; ++lag) {
        double g = 0.0;
        for (int t = lag; t < n; ++t) g += e[t] * e[t - lag];
        g /= n;
        lrv += 2.0 * (1.0 - lag / (bw + 1.0)) * g;
    }
    if (lrv <= 0.0) lrv = 1e-12;

    const double stat = eta / lrv;
    return {stat, stats::kpss_pvalue_from_stat(stat), bw};
}

BreakResult detect_breaks(std::span<const double> y, int max_breaks) {
    const int n = static_cast<int>(y.size());
    if (n < 60 || max_breaks < 1) return {};

    const int min_seg = std::max(static_cast<int>(std::ceil(0.15 * n)), 30);
    if (2 * min_seg > n) return {};

    std::vector<double> ps(n + 1, 0.0), pss(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + y[i];
        pss[i + 1] = pss[i] + y[i] * y[i];
    }
    auto seg_cost = [&](int a, int b) {  // SSE of mean model on [a, b)
        const double len = b - a;
        const double s = ps[b] - ps[a];
        return (pss[b] - pss[a]) - s * s / len;
    };
    auto seg_mean = [&](int a, int b) { return (ps[b] - ps[a]) / (b - a); };

    // Candidate boundaries on a decimated grid for long series.
    const int step = std::max(1, n / 256);
    std::vector<int> cand;
    for (int c = min_seg; c + min_seg <= n; c += step) cand.push_back(c);
    if (cand.empty()) return {};
    const int nc = static_cast<int>(cand.size());

    const double inf = std::numeric_limits<double>::infinity();
    // best[k][i]: min SSR of y[0, cand[i]) split into k segments.
    std::vector<std::vector<double>> best(max_breaks + 1, std::vector<double>(nc, inf));
    std::vector<std::vector<int>> arg(max_breaks + 1, std::vector<int>(nc, -1));
    for (int i = 0; i < nc; ++i) best[1][i] = seg_cost(0, cand[i]);
    for (int k = 2; k <= max_breaks; ++k) {
        for (int i = 0; i < nc; ++i) {
            for (int j = 0; j < i; ++j) {
                if (cand[i] - cand[j] < min_seg) break;
                const double c = best[k - 1][j] + seg_cost(cand[j], cand[i]);
                if (c < best[k][i]) {
                    best[k][i] = c;
                    arg[k][i] = j;
                }
            }
        }
    }

    // Total SSR with m breaks plus closing segment [cand[i], n).
    std::vector<double> ssr_m(max_breaks + 1, inf);
    std::vector<int> last(max_breaks + 1, -1);
    ssr_m[0] = seg_cost(0, n);
    for (int m = 1; m <= max_breaks; ++m) {
        for (int i = 0; i < nc; ++i) {
            if (n - cand[i] < min_seg) break;
            if (best[m][i] == inf) continue;
            const double c = best[m][i] + seg_cost(cand[i], n);
            if (c < ssr_m[m]) {
                ssr_m[m] = c;
                last[m] = i;
            }
        }
    }

    int chosen = 0;
    double best_bic = inf;
    for (int m = 0; m <= max_breaks; ++m) {
        if (ssr_m[m] == inf) continue;
        const double bic =
            n * std::log(std::max(ssr_m[m] / n, 1e-300)) + (2.0 * m + 1.0) * std::log(n);
        if (bic < best_bic) {
            best_bic = bic;
            chosen = m;
        }
    }
    if (chosen == 0) return {};

    std::vector<int> bounds;
    int i = last[chosen];
    for (int k = chosen; k >= 1; --k) {
        bounds.push_back(cand[i]);
        i = arg[k][i];
    }
    std::sort(bounds.begin(), bounds.end());

    BreakResult out;
    out.count = chosen;
    out.locations = bounds;
    const double pooled_sd = std::sqrt(std::max(ssr_m[chosen] / n, 1e-300));
    std::vector<int> edges;
    edges.push_back(0);
    for (int b : bounds) edges.push_back(b);
    edges.push_back(n);
    for (std::size_t s = 0; s + 2 < edges.size(); ++s) {
        const double jump = std::abs(seg_mean(edges[s + 1], edges[s + 2]) -
                                     seg_mean(edges[s], edges[s + 1]));
        out.magnitude = std::max(out.magnitude, jump / pooled_sd);
    }
    return out;
}

}  // namespace tsaudit
