#include "tsaudit/diagnostics.hpp"

#include "tsaudit/stats.hpp"
#include "tsaudit/trees.hpp"
#include "tsaudit/unit_root.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tsaudit {

namespace {

constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "x_adf",      "x_kpss",      "x_break_mag",     "x_drift",
    "x_gap_cv",   "x_missing",   "x_seasonal_miss", "x_teff_ratio",
    "x_tau_int",  "x_chow",      "x_resid_var",     "x_vif"};

}  // namespace

const char* feature_name(FeatureSlot slot) {
    return kFeatureNames[static_cast<std::size_t>(slot)];
}

std::optional<FeatureSlot> feature_from_name(const std::string& name) {
    for (int i = 0; i < kNumFeatures; ++i)
        if (name == kFeatureNames[static_cast<std::size_t>(i)])
            return static_cast<FeatureSlot>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Persistence primitives
// ---------------------------------------------------------------------------

double integrated_autocorr_time(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (n < 30) fail(ErrorKind::LowSample, "tau_int: need at least 30 observations");
    const double m = stats::mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= n;
    if (c0 <= 0.0) fail(ErrorKind::ConstantSeries, "tau_int: constant series");

    const int cap = std::max(1, n / 2);
    double tau = 0.5;
    int window = cap;
    for (int lag = 1; lag <= cap; ++lag) {
        double c = 0.0;
        for (int t = lag; t < n; ++t) c += (x[t] - m) * (x[t - lag] - m);
        tau += c / n / c0;
        if (lag >= 5.0 * tau) {
            window = lag;
            break;
        }
    }
    (void)window;
    return std::max(0.5, tau);
}

double gap_coefficient_of_variation(std::span<const double> timestamps) {
    if (timestamps.size() < 3)
        fail(ErrorKind::TooFewPoints, "gap cv: need at least 3 timestamps");
    std::vector<double> gaps(timestamps.size() - 1);
    for (std::size_t i = 0; i + 1 < timestamps.size(); ++i)
        gaps[i] = timestamps[i + 1] - timestamps[i];
    const double m = stats::mean(gaps);
    if (m <= 0.0) fail(ErrorKind::NonMonotoneTime, "gap cv: non-positive mean gap");
    return stats::sd(gaps) / m;
}

// ---------------------------------------------------------------------------
// Stationarity
// ---------------------------------------------------------------------------

StationarityBlock audit_stationarity(const TimeSeriesMatrix& series, double alpha) {
    (void)alpha;  // effect sizes are aggregated downstream, not thresholded here
    const Eigen::Index N = series.cols();
    StationarityBlock block;
    block.adf_pvalues.assign(static_cast<std::size_t>(N), 1.0);
    block.kpss_pvalues.assign(static_cast<std::size_t>(N), 1.0);
    block.drift_slope_z.assign(static_cast<std::size_t>(N), 0.0);
    block.degenerate.assign(static_cast<std::size_t>(N), false);

    double best_magnitude = -1.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        std::vector<double> obs;
        std::vector<double> times;
        for (Eigen::Index t = 0; t < series.rows(); ++t) {
            if (!series.missing(t, j)) {
                obs.push_back(series.values()(t, j));
                times.push_back(series.timestamps()[static_cast<std::size_t>(t)]);
            }
        }
        if (obs.size() < 50)
            fail(ErrorKind::LowSample,
                 "stationarity: column " + series.names()[static_cast<std::size_t>(j)] +
                     " has fewer than 50 observed points");
        if (stats::variance(obs) <= 0.0) {
            block.degenerate[static_cast<std::size_t>(j)] = true;
            continue;
        }

        block.adf_pvalues[static_cast<std::size_t>(j)] = adf_test(obs).pvalue;
        block.kpss_pvalues[static_cast<std::size_t>(j)] = kpss_test(obs).pvalue;

        // Standardized drift slope: OLS of value on time.
        const int n = static_cast<int>(obs.size());
        Eigen::MatrixXd X(n, 2);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = times[static_cast<std::size_t>(i)];
            y(i) = obs[static_cast<std::size_t>(i)];
        }
        const auto fit = stats::ols(X, y);
        block.drift_slope_z[static_cast<std::size_t>(j)] = fit.coef(1) / fit.coef_se(1);

        // Structural breaks: report the variable with the largest jump.
        const auto breaks = detect_breaks(obs);
        block.break_count = std::max(block.break_count, breaks.count);
        if (breaks.magnitude > best_magnitude) {
            best_magnitude = breaks.magnitude;
            block.break_magnitude = breaks.magnitude;
            block.break_locations = breaks.locations;
        }
    }

    std::vector<double> adf_ok, kpss_ok;
    for (Eigen::Index j = 0; j < N; ++j) {
        if (block.degenerate[static_cast<std::size_t>(j)]) continue;
        adf_ok.push_back(block.adf_pvalues[static_cast<std::size_t>(j)]);
        kpss_ok.push_back(block.kpss_pvalues[static_cast<std::size_t>(j)]);
    }
    block.adf_pvalues_corrected = stats::benjamini_yekutieli(adf_ok);
    block.kpss_pvalues_corrected = stats::benjamini_yekutieli(kpss_ok);
    return block;
}

// ---------------------------------------------------------------------------
// Irregularity
// ---------------------------------------------------------------------------

namespace {

// Little-style MCAR chi-square over missingness patterns using
// pairwise-complete moment estimates in place of EM.
std::pair<double, bool> little_mcar_pvalue(const TimeSeriesMatrix& series) {
    const Eigen::Index T = series.rows();
    const Eigen::Index N = series.cols();

    Eigen::VectorXd mu = Eigen::VectorXd::Zero(N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const auto col = series.observed_column(j);
        mu(j) = stats::mean(col);
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index a = 0; a < N; ++a) {
        for (Eigen::Index b = a; b < N; ++b) {
            double acc = 0.0;
            int n = 0;
            for (Eigen::Index t = 0; t < T; ++t) {
                if (!series.missing(t, a) && !series.missing(t, b)) {
                    acc += (series.values()(t, a) - mu(a)) * (series.values()(t, b) - mu(b));
                    ++n;
                }
            }
            const double c = n > 1 ? acc / (n - 1) : 0.0;
            cov(a, b) = c;
            cov(b, a) = c;
        }
    }

    std::map<std::vector<bool>, std::pair<int, Eigen::VectorXd>> patterns;
    for (Eigen::Index t = 0; t < T; ++t) {
        std::vector<bool> key(static_cast<std::size_t>(N));
        for (Eigen::Index j = 0; j < N; ++j) key[static_cast<std::size_t>(j)] = series.missing(t, j);
        auto& slot = patterns[key];
        if (slot.second.size() == 0) slot.second = Eigen::VectorXd::Zero(N);
        slot.first += 1;
        for (Eigen::Index j = 0; j < N; ++j)
            if (!series.missing(t, j)) slot.second(j) += series.values()(t, j);
    }
    if (patterns.size() < 2) return {1.0, false};

    double d2 = 0.0;
    int df = -static_cast<int>(N);
    for (const auto& [key, agg] : patterns) {
        std::vector<Eigen::Index> observed;
        for (Eigen::Index j = 0; j < N; ++j)
            if (!key[static_cast<std::size_t>(j)]) observed.push_back(j);
        if (observed.empty()) continue;
        const int np = agg.first;
        const Eigen::Index p = static_cast<Eigen::Index>(observed.size());
        Eigen::VectorXd diff(p);
        Eigen::MatrixXd sub(p, p);
        for (Eigen::Index a = 0; a < p; ++a) {
            diff(a) = agg.second(observed[static_cast<std::size_t>(a)]) / np -
                      mu(observed[static_cast<std::size_t>(a)]);
            for (Eigen::Index b = 0; b < p; ++b)
                sub(a, b) = cov(observed[static_cast<std::size_t>(a)],
                                observed[static_cast<std::size_t>(b)]);
        }
        // Ridge fallback for nearly singular pairwise-complete covariance.
        sub.diagonal().array() += 1e-8 * std::max(1.0, sub.trace() / p);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
        if (ldlt.info() != Eigen::Success) continue;
        d2 += np * diff.dot(ldlt.solve(diff));
        df += static_cast<int>(p);
    }
    if (df <= 0) return {1.0, false};
    return {stats::chi2_sf(d2, df), true};
}

// Likelihood-ratio test of a logistic model of the per-cell missingness
// indicator on sin/cos terms of the period hint.
std::pair<double, bool> seasonal_missing_pvalue(const TimeSeriesMatrix& series,
                                                double period) {
    const Eigen::Index T = series.rows();
    const Eigen::Index N = series.cols();
    const Eigen::Index n = T * N;

    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    Eigen::Index r = 0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const double phase = 2.0 * M_PI * series.timestamps()[static_cast<std::size_t>(t)] / period;
        for (Eigen::Index j = 0; j < N; ++j, ++r) {
            X(r, 0) = 1.0;
            X(r, 1) = std::sin(phase);
            X(r, 2) = std::cos(phase);
            y(r) = series.missing(t, j) ? 1.0 : 0.0;
        }
    }
    const double miss = y.mean();
    if (miss <= 0.0 || miss >= 1.0) return {1.0, false};

    auto logistic_nll = [&](int ncols) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(ncols);
        beta(0) = std::log(miss / (1.0 - miss));
        for (int it = 0; it < 50; ++it) {
            Eigen::VectorXd eta = X.leftCols(ncols) * beta;
            Eigen::VectorXd p = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
            Eigen::VectorXd w = (p.array() * (1.0 - p.array())).max(1e-10).matrix();
            Eigen::VectorXd grad = X.leftCols(ncols).transpose() * (y - p);
            Eigen::MatrixXd hess =
                X.leftCols(ncols).transpose() * w.asDiagonal() * X.leftCols(ncols);
            Eigen::VectorXd step = hess.ldlt().solve(grad);
            beta += step;
            if (step.norm() < 1e-10) break;
        }
        Eigen::VectorXd eta = X.leftCols(ncols) * beta;
        double nll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double e = eta(i);
            // log(1 + exp(e)) - y*e, numerically stable
            nll += (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e))) - y(i) * e;
        }
        return nll;
    };

    const double nll0 = logistic_nll(1);
    const double nll1 = logistic_nll(3);
    const double lr = std::max(0.0, 2.0 * (nll0 - nll1));
    return {stats::chi2_sf(lr, 2), true};
}

}  // namespace

IrregularityBlock audit_irregularity(const TimeSeriesMatrix& series,
                                     std::optional<double> period_hint) {
    if (series.rows() < 10)
        fail(ErrorKind::LowSample, "irregularity: need at least 10 rows");

    IrregularityBlock block;
    // Gap CV over timestamps of rows with at least one observed cell.
    std::vector<double> obs_times;
    for (Eigen::Index t = 0; t < series.rows(); ++t) {
        bool any = false;
        for (Eigen::Index j = 0; j < series.cols(); ++j)
            if (!series.missing(t, j)) { any = true; break; }
        if (any) obs_times.push_back(series.timestamps()[static_cast<std::size_t>(t)]);
    }
    block.gap_cv = obs_times.size() >= 3 ? gap_coefficient_of_variation(obs_times) : 0.0;
    block.missing_fraction = series.missing_fraction();

    if (block.missing_fraction > 0.0) {
        std::tie(block.mcar_pvalue, block.mcar_applicable) = little_mcar_pvalue(series);
        if (period_hint && *period_hint > 0.0) {
            std::tie(block.seasonal_missing_pvalue, block.seasonal_applicable) =
                seasonal_missing_pvalue(series, *period_hint);
        }
    }
    return block;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

PersistenceBlock audit_persistence(const TimeSeriesMatrix& series) {
    const Eigen::Index N = series.cols();
    PersistenceBlock block;
    block.t = static_cast<int>(series.rows());
    block.tau_int.assign(static_cast<std::size_t>(N), 0.5);
    block.ljung_box_pvalues.assign(static_cast<std::size_t>(N), 1.0);
    block.degenerate.assign(static_cast<std::size_t>(N), false);

    double tau_max = 0.5;
    for (Eigen::Index j = 0; j < N; ++j) {
        const auto obs = series.observed_column(j);
        if (obs.size() < 30)
            fail(ErrorKind::LowSample,
                 "persistence: column " + series.names()[static_cast<std::size_t>(j)] +
                     " has fewer than 30 observed points");
        if (stats::variance(obs) <= 0.0) {
            block.degenerate[static_cast<std::size_t>(j)] = true;
            continue;
        }
        const double tau = integrated_autocorr_time(obs);
        block.tau_int[static_cast<std::size_t>(j)] = tau;
        tau_max = std::max(tau_max, tau);

        const int n = static_cast<int>(obs.size());
        const int h = std::min(10, n / 5);
        const auto rho = stats::autocorrelation(obs, h);
        double q = 0.0;
        for (int lag = 1; lag <= h; ++lag)
            q += rho[static_cast<std::size_t>(lag)] * rho[static_cast<std::size_t>(lag)] /
                 (n - lag);
        q *= static_cast<double>(n) * (n + 2);
        block.ljung_box_pvalues[static_cast<std::size_t>(j)] = stats::chi2_sf(q, h);
    }

    const double T = static_cast<double>(block.t);
    block.t_eff = std::clamp(T / (2.0 * tau_max), 1e-9, T);
    block.t_eff_ratio = block.t_eff / T;
    return block;
}

// ---------------------------------------------------------------------------
// Nonlinearity
// ---------------------------------------------------------------------------

NonlinearityBlock audit_nonlinearity(const TimeSeriesMatrix& series, int folds) {
    const Eigen::Index N = series.cols();
    const Eigen::Index T = series.rows();
    constexpr int kLags = 5;

    NonlinearityBlock block;
    block.computed = true;
    block.delta_rmse_rel.assign(static_cast<std::size_t>(N), 0.0);

    // Rows usable for every target: lag window fully observed.
    std::vector<Eigen::Index> rows;
    for (Eigen::Index t = kLags; t < T; ++t) {
        bool ok = true;
        for (int l = 0; l <= kLags && ok; ++l)
            for (Eigen::Index j = 0; j < N; ++j)
                if (series.missing(t - l, j)) { ok = false; break; }
        if (ok) rows.push_back(t);
    }
    const int n = static_cast<int>(rows.size());
    if (n < 100)
        fail(ErrorKind::LowSample,
             "nonlinearity: fewer than 100 usable rows after lagging");

    const int nf = static_cast<int>(N) * kLags;
    Eigen::MatrixXd X(n, nf);
    for (int r = 0; r < n; ++r)
        for (int l = 1; l <= kLags; ++l)
            for (Eigen::Index j = 0; j < N; ++j)
                X(r, (l - 1) * N + j) = series.values()(rows[static_cast<std::size_t>(r)] - l, j);

    // Forward-chained folds over folds+1 consecutive blocks.
    std::vector<int> bounds;
    for (int b = 0; b <= folds + 1; ++b) bounds.push_back(n * b / (folds + 1));

    for (Eigen::Index target = 0; target < N; ++target) {
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r)
            y(r) = series.values()(rows[static_cast<std::size_t>(r)], target);
        if (stats::variance(std::span<const double>(y.data(), static_cast<std::size_t>(n))) <= 0.0)
            fail(ErrorKind::DegenerateTarget,
                 "nonlinearity: constant target column " +
                     series.names()[static_cast<std::size_t>(target)]);

        double rmse_lin = 0.0, rmse_tree = 0.0;
        for (int f = 1; f <= folds; ++f) {
            const int tr_end = bounds[static_cast<std::size_t>(f)];
            const int te_end = bounds[static_cast<std::size_t>(f) + 1];
            const int nte = te_end - tr_end;
            if (tr_end < 2 * nf || nte < 1) continue;

            Eigen::MatrixXd Xtr = X.topRows(tr_end);
            Eigen::MatrixXd Xdes(tr_end, nf + 1);
            Xdes << Eigen::VectorXd::Ones(tr_end), Xtr;
            Eigen::VectorXd ytr = y.head(tr_end);
            Eigen::VectorXd coef;
            try {
                coef = stats::ols(Xdes, ytr).coef;
            } catch (const AuditError&) {
                coef = Eigen::VectorXd::Zero(nf + 1);
                coef(0) = ytr.mean();
            }
            Eigen::MatrixXd Xte_des(nte, nf + 1);
            Xte_des << Eigen::VectorXd::Ones(nte), X.middleRows(tr_end, nte);
            const Eigen::VectorXd pred_lin = Xte_des * coef;

            RegressionForest forest({}, stats::derive_seed(1299709, static_cast<std::uint64_t>(
                                                                         target * 10 + f)));
            forest.fit(Xtr, ytr);
            const Eigen::VectorXd pred_tree = forest.predict(X.middleRows(tr_end, nte));

            const Eigen::VectorXd yte = y.segment(tr_end, nte);
            rmse_lin += std::sqrt((yte - pred_lin).squaredNorm() / nte);
            rmse_tree += std::sqrt((yte - pred_tree).squaredNorm() / nte);
        }
        rmse_lin /= folds;
        rmse_tree /= folds;
        const double rel = rmse_lin > 0.0 ? (rmse_lin - rmse_tree) / rmse_lin : 0.0;
        block.delta_rmse_rel[static_cast<std::size_t>(target)] = rel;
        if (rel > 0.30) block.flagged = true;
    }
    return block;
}

// ---------------------------------------------------------------------------
// Confounding proxies
// ---------------------------------------------------------------------------

ConfoundingBlock audit_confounding(const TimeSeriesMatrix& series) {
    const Eigen::Index N = series.cols();
    if (N < 2) fail(ErrorKind::LowSample, "confounding: need at least 2 variables");
    const auto complete = series.complete_rows();
    const int n = static_cast<int>(complete.size());
    if (n < 10 * N)
        fail(ErrorKind::LowSample, "confounding: fewer than 10*N complete rows");

    ConfoundingBlock block;
    block.applicable = true;
    block.vif.assign(static_cast<std::size_t>(N), 1.0);

    Eigen::MatrixXd data(n, N);
    for (int r = 0; r < n; ++r)
        for (Eigen::Index j = 0; j < N; ++j)
            data(r, j) = series.values()(complete[static_cast<std::size_t>(r)], j);

    constexpr double kVifCap = 1e8;
    for (Eigen::Index j = 0; j < N; ++j) {
        Eigen::MatrixXd X(n, N);
        X.col(0).setOnes();
        Eigen::Index c = 1;
        for (Eigen::Index k = 0; k < N; ++k)
            if (k != j) X.col(c++) = data.col(k);
        Eigen::VectorXd y = data.col(j);
        const double tss = (y.array() - y.mean()).square().sum();
        if (tss <= 0.0) {
            block.vif[static_cast<std::size_t>(j)] = 1.0;
            continue;
        }
        try {
            const auto fit = stats::ols(X, y);
            const double r2 = std::clamp(1.0 - fit.ssr / tss, 0.0, 1.0);
            double vif = r2 >= 1.0 ? kVifCap : 1.0 / (1.0 - r2);
            if (vif >= kVifCap) {
                vif = kVifCap;
                block.vif_capped = true;
            }
            block.vif[static_cast<std::size_t>(j)] = std::max(1.0, vif);
        } catch (const AuditError&) {
            block.vif[static_cast<std::size_t>(j)] = kVifCap;
            block.vif_capped = true;
        }
    }

    // VAR(1) design over consecutive complete-row pairs.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (std::size_t r = 1; r < complete.size(); ++r)
        if (complete[r] == complete[r - 1] + 1) pairs.emplace_back(complete[r - 1], complete[r]);
    const int np = static_cast<int>(pairs.size());
    const int k = static_cast<int>(N) + 1;
    if (np < 4 * k) return block;  // Chow and stability not applicable

    Eigen::MatrixXd X(np, k);
    Eigen::MatrixXd Y(np, N);
    for (int r = 0; r < np; ++r) {
        X(r, 0) = 1.0;
        for (Eigen::Index j = 0; j < N; ++j) {
            X(r, 1 + j) = series.values()(pairs[static_cast<std::size_t>(r)].first, j);
            Y(r, j) = series.values()(pairs[static_cast<std::size_t>(r)].second, j);
        }
    }

    // Chow test per equation at the midpoint, BY-corrected; the block-level
    // p-value is the maximum corrected value across equations.
    const int half = np / 2;
    std::vector<double> chow_raw;
    Eigen::MatrixXd resid(np, N);
    bool chow_ok = half > k && (np - half) > k;
    for (Eigen::Index j = 0; j < N; ++j) {
        Eigen::VectorXd y = Y.col(j);
        try {
            const auto full = stats::ols(X, y);
            resid.col(j) = full.residuals;
            if (chow_ok) {
                const auto fit1 = stats::ols(X.topRows(half), y.head(half));
                const auto fit2 = stats::ols(X.bottomRows(np - half), y.tail(np - half));
                const double ssr_u = fit1.ssr + fit2.ssr;
                const double f = ((full.ssr - ssr_u) / k) / (ssr_u / (np - 2 * k));
                chow_raw.push_back(f > 0 ? stats::f_sf(f, k, np - 2 * k) : 1.0);
            }
        } catch (const AuditError&) {
            resid.col(j).setZero();
        }
    }
    block.chow_pvalues_raw = chow_raw;
    if (!chow_raw.empty()) {
        const auto adj = stats::benjamini_yekutieli(chow_raw);
        block.chow_pvalue = *std::max_element(adj.begin(), adj.end());
    }

    // Rolling residual variance over 5 consecutive windows, pooled across
    // equations; instability = max/min window variance.
    const int windows = 5;
    if (np >= windows * 4) {
        double vmin = std::numeric_limits<double>::infinity();
        double vmax = 0.0;
        for (int w = 0; w < windows; ++w) {
            const int a = np * w / windows;
            const int b = np * (w + 1) / windows;
            double acc = 0.0;
            for (int r = a; r < b; ++r) acc += resid.row(r).squaredNorm();
            const double v = acc / ((b - a) * static_cast<double>(N));
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        block.resid_var_instability = vmax / std::max(vmin, 1e-12);
    }
    return block;
}

// ---------------------------------------------------------------------------
// Feature normalization
// ---------------------------------------------------------------------------

FeatureVector normalize_features(const DiagnosticReport& report,
                                 const FeatureAnchors& anchors) {
    FeatureVector x;
    const auto& st = report.stationarity;
    const auto& ir = report.irregularity;
    const auto& pe = report.persistence;
    const auto& cf = report.confounding;

    auto maxv = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    };

    x[FeatureSlot::Adf] = maxv(st.adf_pvalues_corrected);
    x[FeatureSlot::Kpss] =
        st.kpss_pvalues_corrected.empty() ? 0.0 : 1.0 - maxv(st.kpss_pvalues_corrected);
    x[FeatureSlot::BreakMag] = std::min(st.break_magnitude / anchors.break_mag_sd, 1.0);

    // Drift enters on a multiplicity-corrected z scale: per-variable two-sided
    // p-values are BY-adjusted and the smallest adjusted value mapped back to
    // a z equivalent, so a clean panel is not flagged by the max-z variable.
    std::vector<double> drift_p;
    for (std::size_t j = 0; j < st.drift_slope_z.size(); ++j) {
        if (j < st.degenerate.size() && st.degenerate[j]) continue;
        drift_p.push_back(2.0 * (1.0 - stats::normal_cdf(std::abs(st.drift_slope_z[j]))));
    }
    if (!drift_p.empty()) {
        const auto adj = stats::benjamini_yekutieli(drift_p);
        const double pmin = *std::min_element(adj.begin(), adj.end());
        const double zeq = pmin >= 1.0 ? 0.0 : stats::normal_quantile(1.0 - pmin / 2.0);
        x[FeatureSlot::Drift] = std::clamp(zeq / anchors.drift_z, 0.0, 1.0);
    }

    x[FeatureSlot::GapCv] = std::min(ir.gap_cv, 1.0);
    x[FeatureSlot::Missing] = std::min(ir.missing_fraction / anchors.missing_denom, 1.0);
    x[FeatureSlot::SeasonalMiss] =
        ir.seasonal_applicable ? 1.0 - ir.seasonal_missing_pvalue : 0.0;

    x[FeatureSlot::TeffRatio] = std::clamp(pe.t_eff_ratio, 1e-9, 1.0);
    const double tau_max = maxv(pe.tau_int);
    x[FeatureSlot::TauInt] = std::min(tau_max / anchors.tau_int_cap, 1.0);

    x[FeatureSlot::Chow] = cf.applicable ? 1.0 - cf.chow_pvalue : 0.0;
    if (cf.applicable && cf.resid_var_instability > 1.0)
        x[FeatureSlot::ResidVar] = std::clamp(
            std::log10(cf.resid_var_instability) / anchors.resid_log10_cap, 0.0, 1.0);
    if (cf.applicable && !cf.vif.empty()) {
        const double vif_max = maxv(cf.vif);
        if (vif_max > 1.0)
            x[FeatureSlot::Vif] =
                std::clamp(std::log10(vif_max) / anchors.vif_log10_cap, 0.0, 1.0);
    }

    for (double& v : x.values) v = std::clamp(v, 0.0, 1.0);
    x[FeatureSlot::TeffRatio] = std::clamp(pe.t_eff_ratio, 1e-9, 1.0);
    return x;
}

// ---------------------------------------------------------------------------
// Full audit
// ---------------------------------------------------------------------------

DiagnosticReport audit_all(const TimeSeriesMatrix& series, const AuditConfig& config,
                           bool include_nonlinearity) {
    DiagnosticReport report;
    report.stationarity = audit_stationarity(series, config.alpha);
    report.irregularity = audit_irregularity(series, config.period_hint);
    report.persistence = audit_persistence(series);

    if (include_nonlinearity) {
        try {
            report.nonlinearity = audit_nonlinearity(series);
        } catch (const AuditError& e) {
            report.flags.push_back(std::string("nonlinearity_skipped:") +
                                   error_kind_name(e.kind()));
        }
    }
    if (series.cols() >= 2) {
        try {
            report.confounding = audit_confounding(series);
        } catch (const AuditError& e) {
            report.flags.push_back(std::string("confounding_skipped:") +
                                   error_kind_name(e.kind()));
        }
    } else {
        report.flags.push_back("confounding_skipped:SingleVariable");
    }
    for (std::size_t j = 0; j < report.stationarity.degenerate.size(); ++j)
        if (report.stationarity.degenerate[j])
            report.flags.push_back("degenerate_column:" + series.names()[j]);
    if (report.confounding.vif_capped) report.flags.push_back("vif_capped");

    report.features = normalize_features(report, config.anchors);
    return report;
}

}  // namespace tsaudit
