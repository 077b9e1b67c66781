#include "tsaudit/evalmetrics.hpp"

#include "tsaudit/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace tsaudit {

namespace {

constexpr double kClip = 1e-6;

double logit(double p) {
    const double q = std::clamp(p, kClip, 1.0 - kClip);
    return std::log(q / (1.0 - q));
}

}  // namespace

CalibrationSummary calibration_metrics(const std::vector<double>& predicted,
                                       const std::vector<int>& labels) {
    const std::size_t n = predicted.size();
    if (n != labels.size() || n < 20)
        fail(ErrorKind::InvalidArgument, "calibration metrics: need n >= 20 aligned inputs");
    int positives = 0;
    for (int y : labels) positives += y;
    if (positives == 0 || positives == static_cast<int>(n))
        fail(ErrorKind::SingleClass, "calibration metrics: both classes required");

    CalibrationSummary out;

    // Brier.
    double brier = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = predicted[i] - labels[i];
        brier += d * d;
    }
    out.brier = brier / static_cast<double>(n);

    // AUROC via average ranks.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predicted[a] < predicted[b];
    });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && predicted[order[j + 1]] == predicted[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (labels[k] == 1) rank_sum_pos += rank[k];
    const double n1 = positives;
    const double n0 = static_cast<double>(n) - n1;
    out.auroc = (rank_sum_pos - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);

    // ECE over 10 quantile bins.
    const int nbins = 10;
    out.bins.clear();
    double ece = 0.0;
    for (int b = 0; b < nbins; ++b) {
        const std::size_t a = n * static_cast<std::size_t>(b) / nbins;
        const std::size_t z = n * (static_cast<std::size_t>(b) + 1) / nbins;
        if (z <= a) continue;
        CalibrationBin bin;
        bin.count = static_cast<int>(z - a);
        for (std::size_t k = a; k < z; ++k) {
            bin.mean_predicted += predicted[order[k]];
            bin.empirical_frequency += labels[order[k]];
        }
        bin.mean_predicted /= bin.count;
        bin.empirical_frequency /= bin.count;
        ece += std::abs(bin.mean_predicted - bin.empirical_frequency) * bin.count /
               static_cast<double>(n);
        out.bins.push_back(bin);
    }
    out.ece = ece;

    // Cox recalibration: damped Newton (step halving on the deviance) for a
    // logistic fit of labels on logit(predicted).
    std::vector<double> zs(n);
    for (std::size_t k = 0; k < n; ++k) zs[k] = logit(predicted[k]);
    auto nll = [&](double a, double b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = a + b * zs[k];
            acc += (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e))) -
                   labels[k] * e;
        }
        return acc;
    };
    double b0 = 0.0, b1 = 1.0;
    double current = nll(b0, b1);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * zs[k])));
            const double w = std::max(p * (1.0 - p), 1e-12);
            const double r = p - labels[k];
            g0 += r;
            g1 += r * zs[k];
            h00 += w;
            h01 += w * zs[k];
            h11 += w * zs[k] * zs[k];
        }
        const double det = h00 * h11 - h01 * h01;
        if (std::abs(det) < 1e-14) break;
        const double s0 = (h11 * g0 - h01 * g1) / det;
        const double s1 = (h00 * g1 - h01 * g0) / det;
        double step = 1.0;
        double next = nll(b0 - s0, b1 - s1);
        while (next > current + 1e-12 && step > 1e-6) {
            step *= 0.5;
            next = nll(b0 - step * s0, b1 - step * s1);
        }
        b0 -= step * s0;
        b1 -= step * s1;
        current = next;
        if (step * (std::abs(s0) + std::abs(s1)) < 1e-10) {
            converged = true;
            break;
        }
        if (!std::isfinite(b1) || std::abs(b1) > 1e4) break;
    }
    out.slope = std::clamp(b1, -100.0, 100.0);
    out.intercept = b0;
    out.slope_converged = converged && std::isfinite(b1) && std::abs(b1) < 50.0;
    return out;
}

SelectiveSummary selective_metrics(const SelectiveInputs& in) {
    const std::size_t n = in.recommended.size();
    if (n == 0 || in.failure.size() != n)
        fail(ErrorKind::InvalidArgument, "selective metrics: misaligned inputs");

    SelectiveSummary out;
    std::size_t rec = 0, abst = 0, rec_fail = 0, abst_fail = 0;
    std::size_t safe = 0, safe_rec = 0, correct = 0;
    std::size_t abst_fpr = 0, abst_discourage_hit = 0;
    double f1_sum = 0.0;
    std::size_t f1_n = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const bool r = in.recommended[i];
        const bool fail_i = in.failure[i];
        if (r) {
            ++rec;
            if (fail_i) ++rec_fail;
            if (!in.graph_f1.empty()) {
                f1_sum += in.graph_f1[i];
                ++f1_n;
            }
        } else {
            ++abst;
            if (fail_i) ++abst_fail;
            if (!in.fpr_failure.empty() && in.fpr_failure[i]) ++abst_fpr;
            const bool severe_i = !in.severe.empty() && in.severe[i];
            if (fail_i || severe_i) ++abst_discourage_hit;
        }
        if (!fail_i) {
            ++safe;
            if (r) ++safe_rec;
        }
        if (r != fail_i) ++correct;  // recommend on success, abstain on failure
    }

    out.coverage = static_cast<double>(rec) / static_cast<double>(n);
    if (rec > 0) {
        out.selective_fpr = static_cast<double>(rec_fail) / static_cast<double>(rec);
        if (f1_n > 0) out.selective_f1 = f1_sum / static_cast<double>(f1_n);
    }
    if (abst > 0) {
        out.abstention_precision = static_cast<double>(abst_fail) / static_cast<double>(abst);
        out.precision_discourage =
            static_cast<double>(abst_discourage_hit) / static_cast<double>(abst);
        if (!in.fpr_failure.empty())
            out.good_abstention_rate = static_cast<double>(abst_fpr) / static_cast<double>(abst);
    }
    out.recall_safe = safe > 0 ? static_cast<double>(safe_rec) / static_cast<double>(safe) : 0.0;
    out.overall_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    return out;
}

// ---------------------------------------------------------------------------
// Decision fixtures
// ---------------------------------------------------------------------------

const std::vector<DecisionFixture>& decision_fixtures() {
    static const std::vector<DecisionFixture> fixtures = {
        // name, (nonstat, irreg, persist, confound), expected, warnings, catastrophic
        {"A1", {0.14, 0.18, 0.01, 0.10}, Outcome::Recommend, false, false},
        {"A1C", {0.07, 0.18, 0.01, 0.12}, Outcome::Recommend, false, false},
        {"A2", {0.14, 0.18, 0.06, 1.00}, Outcome::Recommend, false, false},
        {"A2C", {0.21, 0.38, 1.00, 1.00}, Outcome::Recommend, true, false},
        {"B1", {0.07, 0.18, 0.14, 1.00}, Outcome::Recommend, false, false},
        {"B1C", {0.07, 0.18, 0.16, 1.00}, Outcome::Recommend, false, false},
        {"B2", {0.16, 0.38, 0.01, 0.06}, Outcome::Recommend, true, false},
        {"B2C", {0.13, 0.38, 0.01, 0.08}, Outcome::Recommend, false, false},
        {"C1", {1.00, 0.18, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"C1C", {1.00, 0.18, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"C2", {1.00, 0.38, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"C2C", {1.00, 0.38, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"D1", {0.14, 0.18, 0.02, 0.07}, Outcome::Recommend, false, false},
        {"D1C", {0.09, 0.18, 0.02, 0.61}, Outcome::Recommend, false, false},
        {"D2", {0.24, 0.38, 0.01, 0.29}, Outcome::Recommend, true, false},
        {"D2C", {0.21, 0.38, 0.01, 0.28}, Outcome::Recommend, true, false},
        {"D3", {1.00, 0.38, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"D3C", {1.00, 0.38, 1.00, 1.00}, Outcome::Abstain, false, true},
        {"PM2.5", {0.12, 0.18, 0.01, 1.00}, Outcome::Recommend, false, false},
        {"Traffic", {0.12, 0.18, 0.01, 1.00}, Outcome::Recommend, false, false},
        {"Medical", {0.12, 0.18, 0.01, 1.00}, Outcome::Recommend, false, false},
    };
    return fixtures;
}

std::vector<FixtureResult> run_decision_fixtures(const std::vector<MethodSpec>& catalog,
                                                 const AuditConfig& config) {
    std::vector<FixtureResult> results;
    for (const auto& fixture : decision_fixtures()) {
        RiskProfile profile;
        profile.t_eff_ratio = 1.0;
        for (int d = 0; d < kNumRiskDims; ++d) {
            auto& dim = profile.dims[static_cast<std::size_t>(d)];
            dim.risk = fixture.risks[static_cast<std::size_t>(d)];
            dim.lo = dim.risk;
            dim.hi = dim.risk;
        }
        const auto decision = decide(profile, catalog, config);

        FixtureResult r;
        r.name = fixture.name;
        r.expected = fixture.expected;
        r.got = decision.outcome;
        bool ok = decision.outcome == fixture.expected;
        if (ok && fixture.expects_warnings && decision.warnings.empty()) {
            ok = false;
            r.detail = "expected at least one warning";
        }
        if (ok && fixture.expects_catastrophic) {
            const bool has = std::find(decision.reasons.begin(), decision.reasons.end(),
                                       "catastrophic_nonstationarity") !=
                             decision.reasons.end();
            if (!has) {
                ok = false;
                r.detail = "expected catastrophic_nonstationarity reason";
            }
        }
        r.passed = ok;
        if (r.detail.empty() && !ok) r.detail = "outcome mismatch";
        results.push_back(std::move(r));
    }
    return results;
}

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

std::vector<DiagnosticReport> audit_atlas(const Atlas& atlas, const AuditConfig& config) {
    std::vector<DiagnosticReport> reports;
    reports.reserve(atlas.entries.size());
    for (const auto& entry : atlas.entries) {
        AuditConfig cfg = config;
        if (entry.spec.seasonal_period > 0)
            cfg.period_hint = entry.spec.seasonal_period;
        else
            cfg.period_hint = 12.0;  // atlas masks use a monthly-style period
        reports.push_back(audit_all(entry.data, cfg, /*include_nonlinearity=*/false));
    }
    return reports;
}

std::vector<std::string> severity_strata(const Atlas& atlas) {
    // Severity of an entry = max parameter-derived severity across dimensions.
    std::vector<double> sev(atlas.entries.size(), 0.0);
    std::vector<double> pool;
    for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
        const auto& e = atlas.entries[i];
        double s = 0.0;
        for (int d = 0; d < kNumRiskDims; ++d)
            s = std::max(s, e.labels.severity[static_cast<std::size_t>(d)]);
        sev[i] = s;
        const Family f = e.spec.family;
        if (f == Family::F2 || f == Family::F3 || f == Family::F4 || f == Family::F5 ||
            f == Family::F9)
            pool.push_back(s);
    }
    double cut = 1.0;
    if (!pool.empty()) {
        std::sort(pool.begin(), pool.end());
        cut = pool[pool.size() * 2 / 3];
    }
    std::vector<std::string> out(atlas.entries.size());
    for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
        const Family f = atlas.entries[i].spec.family;
        if (f == Family::F1) {
            out[i] = "clean";
        } else if ((f == Family::F2 || f == Family::F3 || f == Family::F4 ||
                    f == Family::F5 || f == Family::F9) &&
                   sev[i] >= cut) {
            out[i] = "severe";
        } else {
            out[i] = "moderate";
        }
    }
    return out;
}

BenchmarkReport run_benchmark(const Atlas& atlas, const AuditConfig& config,
                              std::uint64_t split_seed,
                              const CalibratedModels* fixed_models) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = atlas.entries.size();
    if (n < 100) fail(ErrorKind::InvalidArgument, "benchmark needs a full atlas");

    BenchmarkReport report;

    // Stratified 80/20 split: within each family, entries are ordered by
    // severity and sampled systematically, so the holdout carries a
    // representative severity sweep of every family.
    std::vector<bool> holdout(n, false);
    {
        std::map<int, std::vector<std::size_t>> by_family;
        for (std::size_t i = 0; i < n; ++i)
            by_family[static_cast<int>(atlas.entries[i].spec.family)].push_back(i);
        for (auto& [fam, idx] : by_family) {
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                double sa = 0.0, sb = 0.0;
                for (int d = 0; d < kNumRiskDims; ++d) {
                    sa = std::max(sa, atlas.entries[a].labels.severity[static_cast<std::size_t>(d)]);
                    sb = std::max(sb, atlas.entries[b].labels.severity[static_cast<std::size_t>(d)]);
                }
                return sa < sb;
            });
            const std::size_t offset = split_seed % 5;
            for (std::size_t k = offset; k < idx.size(); k += 5) holdout[idx[k]] = true;
        }
    }

    const auto reports = audit_atlas(atlas, config);

    // Calibration corpus: per-dimension parameter-derived labels.
    std::vector<CalibrationRow> corpus;
    for (std::size_t i = 0; i < n; ++i) {
        if (holdout[i]) continue;
        CalibrationRow row;
        row.features = reports[i].features;
        row.labels = atlas.entries[i].labels.label;
        row.family = family_name(atlas.entries[i].spec.family);
        corpus.push_back(std::move(row));
    }
    report.calibration_n = static_cast<int>(corpus.size());
    const auto models = fixed_models
                            ? *fixed_models
                            : calibrate_models(corpus, CalibrationPriors{}, split_seed);
    report.models = models;

    // Holdout evaluation.
    std::vector<std::size_t> hold_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (holdout[i]) hold_idx.push_back(i);
    report.holdout_n = static_cast<int>(hold_idx.size());

    std::vector<RiskProfile> profiles(hold_idx.size());
    const auto catalog = default_method_catalog();
    std::vector<bool> recommended(hold_idx.size(), false);

    for (std::size_t k = 0; k < hold_idx.size(); ++k) {
        const std::size_t i = hold_idx[k];
        profiles[k] = compute_risk_profile(reports[i], models, config);
        const auto decision = decide(profiles[k], catalog, config);
        recommended[k] = decision.outcome == Outcome::Recommend;
    }

    for (int d = 0; d < kNumRiskDims; ++d) {
        std::vector<double> pred(hold_idx.size());
        std::vector<int> lab(hold_idx.size());
        for (std::size_t k = 0; k < hold_idx.size(); ++k) {
            pred[k] = profiles[k].point(static_cast<RiskDim>(d));
            lab[k] = atlas.entries[hold_idx[k]].labels.label[static_cast<std::size_t>(d)];
        }
        report.calibration[static_cast<std::size_t>(d)] = calibration_metrics(pred, lab);
    }

    // Selective metrics over the holdout against discovery failure labels.
    const auto strata = severity_strata(atlas);
    SelectiveInputs sel;
    for (std::size_t k = 0; k < hold_idx.size(); ++k) {
        const std::size_t i = hold_idx[k];
        sel.recommended.push_back(recommended[k]);
        sel.failure.push_back(atlas.entries[i].discovery.failure);
        sel.graph_f1.push_back(atlas.entries[i].discovery.f1);
        sel.fpr_failure.push_back(atlas.entries[i].discovery.fpr > 0.5);
        sel.severe.push_back(strata[i] == "severe");
    }
    report.selective = selective_metrics(sel);
    SelectiveInputs always = sel;
    std::fill(always.recommended.begin(), always.recommended.end(), true);
    report.selective_always_run = selective_metrics(always);
    report.always_run_fpr = report.selective_always_run.selective_fpr.value_or(0.0);

    // Severity strata over the full atlas (decisions are deterministic).
    {
        std::map<std::string, StratumRow> rows;
        std::vector<DiagnosticReport> all_reports = reports;
        for (std::size_t i = 0; i < n; ++i) {
            auto& row = rows[strata[i]];
            row.name = strata[i];
            row.n += 1;
            const auto profile = compute_risk_profile(all_reports[i], models, config);
            const auto decision = decide(profile, catalog, config);
            const bool fail_i = atlas.entries[i].discovery.failure;
            if (fail_i) row.always_run_fpr += 1.0;
            if (decision.outcome == Outcome::Abstain) {
                row.abstention_rate += 1.0;
            } else if (fail_i) {
                row.selective_failure_rate += 1.0;
            }
        }
        for (auto& [name, row] : rows) {
            const double rec = row.n - row.abstention_rate;
            row.always_run_fpr /= row.n;
            row.selective_failure_rate = rec > 0 ? row.selective_failure_rate / rec : 0.0;
            row.abstention_rate /= row.n;
            report.strata.push_back(row);
        }
    }

    report.fixture_results = run_decision_fixtures(catalog, config);
    report.fixtures_total = static_cast<int>(report.fixture_results.size());
    for (const auto& r : report.fixture_results)
        if (r.passed) ++report.fixtures_passed;

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace tsaudit
