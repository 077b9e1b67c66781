#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tsaudit::stats {

double mean(std::span<const double> x);
// Population variance (divide by n).
double variance(std::span<const double> x);
double sd(std::span<const double> x);

// Upper-tail p-values.
double chi2_sf(double stat, double dof);
double f_sf(double stat, double dof1, double dof2);
double t_sf(double stat, double dof);   // one-sided P(T > stat)
double normal_cdf(double z);
double normal_quantile(double p);

// Biased (divide-by-n) autocorrelation at lags 0..max_lag of a demeaned copy.
std::vector<double> autocorrelation(std::span<const double> x, int max_lag);

// Benjamini-Yekutieli step-up adjusted p-values (order preserved).
std::vector<double> benjamini_yekutieli(const std::vector<double>& pvalues);

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    double ssr = 0.0;
    double sigma2 = 0.0;           // ssr / (n - k)
    Eigen::MatrixXd xtx_inverse;   // (X'X)^{-1}
    Eigen::Index n = 0;
    Eigen::Index k = 0;

    double coef_se(Eigen::Index j) const;
};

// Least squares via column-pivoted QR; throws SingularDesign when X'X is
// numerically rank deficient.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Nested-model F test: restricted SSR vs full fit.
double f_test_pvalue(double ssr_restricted, double ssr_full,
                     int df_num, int df_den);

// Linear-interpolated p-value from tabulated null quantiles of the ADF
// tau_mu statistic (regression with constant). Lower tail.
double adf_pvalue_from_stat(double tau);
// Upper-tail p-value for the KPSS level statistic.
double kpss_pvalue_from_stat(double stat);

// Deterministic child-seed derivation (splitmix64 over a stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace tsaudit::stats
