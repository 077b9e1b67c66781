#include "tsaudit/stats.hpp"

#include "tsaudit/types.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace tsaudit::stats {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

double chi2_sf(double stat, double dof) {
    if (dof <= 0) return 1.0;
    if (stat <= 0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double f_sf(double stat, double dof1, double dof2) {
    if (dof1 <= 0 || dof2 <= 0) return 1.0;
    if (stat <= 0) return 1.0;
    boost::math::fisher_f dist(dof1, dof2);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double t_sf(double stat, double dof) {
    boost::math::students_t dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double normal_cdf(double z) {
    static const boost::math::normal dist;
    return boost::math::cdf(dist, z);
}

double normal_quantile(double p) {
    static const boost::math::normal dist;
    p = std::clamp(p, 1e-15, 1.0 - 1e-15);
    return boost::math::quantile(dist, p);
}

std::vector<double> autocorrelation(std::span<const double> x, int max_lag) {
    const int n = static_cast<int>(x.size());
    const double m = mean(x);
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= n;
    out[0] = 1.0;
    if (c0 <= 0.0) return out;
    for (int lag = 1; lag <= max_lag && lag < n; ++lag) {
        double c = 0.0;
        for (int t = lag; t < n; ++t) c += (x[t] - m) * (x[t - lag] - m);
        out[static_cast<std::size_t>(lag)] = c / n / c0;
    }
    return out;
}

std::vector<double> benjamini_yekutieli(const std::vector<double>& pvalues) {
    const std::size_t m = pvalues.size();
    for (double p : pvalues)
        if (!(p >= 0.0 && p <= 1.0))
            fail(ErrorKind::InvalidP, "p-value outside [0,1]");
    if (m == 0) return {};

    double harmonic = 0.0;
    for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    // Step-up: adjusted_(i) = min_{k >= i} p_(k) * m * c(m) / k, clamped to 1.
    std::vector<double> adjusted_sorted(m);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        const double candidate =
            pvalues[order[i]] * static_cast<double>(m) * harmonic / static_cast<double>(i + 1);
        running = std::min(running, candidate);
        adjusted_sorted[i] = std::min(1.0, running);
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[order[i]] = adjusted_sorted[i];
    return out;
}

double OlsFit::coef_se(Eigen::Index j) const {
    return std::sqrt(sigma2 * xtx_inverse(j, j));
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (n <= k) fail(ErrorKind::LowSample, "ols: need more rows than columns");

    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success)
        fail(ErrorKind::SingularDesign, "ols: X'X not factorizable");
    const double dmax = ldlt.vectorD().maxCoeff();
    const double dmin = ldlt.vectorD().minCoeff();
    if (!(dmax > 0.0) || dmin <= dmax * 1e-12)
        fail(ErrorKind::SingularDesign, "ols: design matrix numerically singular");

    OlsFit fit;
    fit.coef = ldlt.solve(X.transpose() * y);
    fit.residuals = y - X * fit.coef;
    fit.ssr = fit.residuals.squaredNorm();
    fit.n = n;
    fit.k = k;
    fit.sigma2 = fit.ssr / static_cast<double>(n - k);
    fit.xtx_inverse = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    return fit;
}

double f_test_pvalue(double ssr_restricted, double ssr_full, int df_num, int df_den) {
    if (df_num <= 0 || df_den <= 0) return 1.0;
    if (ssr_full <= 0.0) return ssr_restricted > ssr_full ? 0.0 : 1.0;
    const double f = ((ssr_restricted - ssr_full) / df_num) / (ssr_full / df_den);
    if (f <= 0.0) return 1.0;
    return f_sf(f, df_num, df_den);
}

namespace {

// Monte Carlo asymptotic null quantiles (4e5 replications, T = 2000).
// Anchors agree with the published 1/5/10% critical values.
constexpr std::array<double, 18> kTailProbs = {
    0.001, 0.005, 0.01, 0.025, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50,
    0.60, 0.70, 0.80, 0.90, 0.95, 0.975, 0.99, 0.999};

constexpr std::array<double, 18> kAdfQuantiles = {
    -4.0720, -3.6464, -3.4326, -3.1198, -2.8594, -2.5675, -2.2177, -1.9694,
    -1.7611, -1.5669, -1.3672, -1.1438, -0.8631, -0.4396, -0.0741, 0.2430,
    0.6189, 1.3865};

constexpr std::array<double, 18> kKpssQuantiles = {
    1.16906, 0.86864, 0.74278, 0.58240, 0.46216, 0.34794, 0.24145, 0.18463,
    0.14702, 0.11910, 0.09702, 0.07876, 0.06229, 0.04605, 0.03661, 0.03043,
    0.02481, 0.01718};

double interpolate_p(double stat, std::span<const double> quantiles,
                     std::span<const double> probs, bool increasing) {
    const std::size_t n = quantiles.size();
    if (increasing) {
        if (stat <= quantiles[0]) return probs[0];
        if (stat >= quantiles[n - 1]) return probs[n - 1];
        for (std::size_t i = 1; i < n; ++i) {
            if (stat <= quantiles[i]) {
                const double w = (stat - quantiles[i - 1]) / (quantiles[i] - quantiles[i - 1]);
                return probs[i - 1] + w * (probs[i] - probs[i - 1]);
            }
        }
        return probs[n - 1];
    }
    // Quantiles decreasing in the probability index.
    if (stat >= quantiles[0]) return probs[0];
    if (stat <= quantiles[n - 1]) return probs[n - 1];
    for (std::size_t i = 1; i < n; ++i) {
        if (stat >= quantiles[i]) {
            const double w = (stat - quantiles[i - 1]) / (quantiles[i] - quantiles[i - 1]);
            return probs[i - 1] + w * (probs[i] - probs[i - 1]);
        }
    }
    return probs[n - 1];
}

}  // namespace

double adf_pvalue_from_stat(double tau) {
    return interpolate_p(tau, kAdfQuantiles, kTailProbs, /*increasing=*/true);
}

double kpss_pvalue_from_stat(double stat) {
    return interpolate_p(stat, kKpssQuantiles, kTailProbs, /*increasing=*/false);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace tsaudit::stats
