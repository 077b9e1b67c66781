#include "tsaudit/stats.hpp"
#include "tsaudit/types.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <algorithm>
#include <random>

using namespace tsaudit;

TEST_CASE("benjamini-yekutieli hand cases") {
    // Saturated.
    const auto sat = stats::benjamini_yekutieli({1.0, 1.0});
    CHECK(sat[0] == doctest::Approx(1.0));
    CHECK(sat[1] == doctest::Approx(1.0));

    // m = 1 identity (harmonic constant c(1) = 1).
    const auto single = stats::benjamini_yekutieli({0.04});
    CHECK(single[0] == doctest::Approx(0.04));

    // Step-up chain collapses to the common minimum: c(3) = 11/6.
    const auto chain = stats::benjamini_yekutieli({0.01, 0.02, 0.03});
    for (double v : chain) CHECK(v == doctest::Approx(0.055).epsilon(1e-3));

    CHECK_THROWS_AS(stats::benjamini_yekutieli({-0.1}), AuditError);
    CHECK_THROWS_AS(stats::benjamini_yekutieli({1.1}), AuditError);
}

TEST_CASE("benjamini-yekutieli is permutation-equivariant and dominates raw p") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(7);
    for (auto& v : p) v = unit(rng);

    const auto adj = stats::benjamini_yekutieli(p);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(adj[i] >= p[i]);

    std::vector<std::size_t> perm = {3, 0, 6, 1, 5, 2, 4};
    std::vector<double> shuffled(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) shuffled[i] = p[perm[i]];
    const auto adj_shuffled = stats::benjamini_yekutieli(shuffled);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(adj_shuffled[i] == doctest::Approx(adj[perm[i]]));
}

TEST_CASE("tabulated null quantiles match the published anchors") {
    // ADF tau_mu (constant case): 1% / 5% / 10% critical values.
    CHECK(stats::adf_pvalue_from_stat(-3.43) == doctest::Approx(0.01).epsilon(0.15));
    CHECK(stats::adf_pvalue_from_stat(-2.86) == doctest::Approx(0.05).epsilon(0.10));
    CHECK(stats::adf_pvalue_from_stat(-2.57) == doctest::Approx(0.10).epsilon(0.10));
    CHECK(stats::adf_pvalue_from_stat(-10.0) == doctest::Approx(0.001));
    // KPSS level-stationarity: 10% / 5% / 1% critical values.
    CHECK(stats::kpss_pvalue_from_stat(0.347) == doctest::Approx(0.10).epsilon(0.10));
    CHECK(stats::kpss_pvalue_from_stat(0.463) == doctest::Approx(0.05).epsilon(0.10));
    CHECK(stats::kpss_pvalue_from_stat(0.743) == doctest::Approx(0.01).epsilon(0.15));
}

TEST_CASE("ols recovers coefficients and flags singular designs") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 200;
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = gauss(rng);
        X(i, 2) = gauss(rng);
        y(i) = 2.0 + 0.5 * X(i, 1) - 1.5 * X(i, 2) + 0.1 * gauss(rng);
    }
    const auto fit = stats::ols(X, y);
    CHECK(fit.coef(0) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(fit.coef(1) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(fit.coef(2) == doctest::Approx(-1.5).epsilon(0.05));

    Eigen::MatrixXd Xs(n, 3);
    Xs.col(0) = X.col(0);
    Xs.col(1) = X.col(1);
    Xs.col(2) = 2.0 * X.col(1);  // exact collinearity
    CHECK_THROWS_AS(stats::ols(Xs, y), AuditError);
}

TEST_CASE("distribution tails behave") {
    CHECK(stats::chi2_sf(0.0, 2) == doctest::Approx(1.0));
    CHECK(stats::chi2_sf(5.991, 2) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(stats::f_sf(4.0, 2, 100) < 0.05);
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-4));
}

TEST_CASE("derived seeds differ across indices and match across calls") {
    CHECK(stats::derive_seed(1, 0) != stats::derive_seed(1, 1));
    CHECK(stats::derive_seed(1, 0) == stats::derive_seed(1, 0));
    CHECK(stats::derive_seed(1, 5) != stats::derive_seed(2, 5));
}
