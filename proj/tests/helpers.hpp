#pragma once

#include "tsaudit/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace testutil {

// Test-side simulators, independent of the library's generators.

inline std::vector<double> iid_gaussian(int n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sd);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = gauss(rng);
    return out;
}

inline std::vector<double> ar1(int n, double phi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(n));
    double x = 0.0;
    for (int t = -200; t < n; ++t) {
        x = phi * x + gauss(rng);
        if (t >= 0) out[static_cast<std::size_t>(t)] = x;
    }
    return out;
}

inline tsaudit::TimeSeriesMatrix panel(const std::vector<std::vector<double>>& columns) {
    const Eigen::Index T = static_cast<Eigen::Index>(columns.front().size());
    const Eigen::Index N = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd values(T, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index t = 0; t < T; ++t)
            values(t, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(T, N);
    mask.setConstant(false);
    std::vector<double> timestamps(static_cast<std::size_t>(T));
    for (Eigen::Index t = 0; t < T; ++t) timestamps[static_cast<std::size_t>(t)] = t;
    return tsaudit::TimeSeriesMatrix(std::move(timestamps), std::move(values),
                                     std::move(mask), {});
}

inline tsaudit::TimeSeriesMatrix iid_panel(int t_obs, int n_vars, std::uint64_t seed) {
    std::vector<std::vector<double>> cols;
    for (int j = 0; j < n_vars; ++j)
        cols.push_back(iid_gaussian(t_obs, seed * 1000 + static_cast<std::uint64_t>(j)));
    return panel(cols);
}

// Bivariate VAR(1): x2 depends on x1's first lag with the given coupling.
inline tsaudit::TimeSeriesMatrix coupled_pair(int t_obs, double coupling,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x1(static_cast<std::size_t>(t_obs)),
        x2(static_cast<std::size_t>(t_obs));
    double a = 0.0, b = 0.0;
    for (int t = -200; t < t_obs; ++t) {
        const double na = 0.5 * a + gauss(rng);
        const double nb = 0.5 * b + coupling * a + gauss(rng);
        a = na;
        b = nb;
        if (t >= 0) {
            x1[static_cast<std::size_t>(t)] = a;
            x2[static_cast<std::size_t>(t)] = b;
        }
    }
    return panel({x1, x2});
}

}  // namespace testutil
