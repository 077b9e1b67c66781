#pragma once

#include <span>
#include <vector>

namespace tsaudit {

struct AdfResult {
    double statistic = 0.0;
    double pvalue = 1.0;
    int lag = 0;
};

struct KpssResult {
    double statistic = 0.0;
    double pvalue = 1.0;
    int bandwidth = 0;
};

// Augmented Dickey-Fuller test, regression with constant. Lag order chosen
// by AIC over 0..floor(12*(T/100)^(1/4)); p-value from tabulated null
// quantiles with linear interpolation.
AdfResult adf_test(std::span<const double> y);

// KPSS level-stationarity test with Bartlett/Newey-West long-run variance,
// bandwidth floor(4*(T/100)^(1/4)).
KpssResult kpss_test(std::span<const double> y);

struct BreakResult {
    int count = 0;
    // Boundary rows (index of the first observation of the new segment).
    std::vector<int> locations;
    // Largest adjacent segment-mean jump in pooled within-segment SD units.
    double magnitude = 0.0;
};

// Mean-shift multiple-break detection: dynamic programming over segment SSRs
// with up to `max_breaks` breaks, minimum segment length max(0.15*T, 30),
// break count selected by BIC.
BreakResult detect_breaks(std::span<const double> y, int max_breaks = 3);

}  // namespace tsaudit
