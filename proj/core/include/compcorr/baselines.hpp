#pragma once

#include "compcorr/comp_corr.hpp"
#include "compcorr/time_series.hpp"

#include <span>
#include <vector>

namespace compcorr {

/// Product-moment correlation; Undefined when either series is constant.
CorrValue pearson(const TimeSeries& a, const TimeSeries& b);

/// Pearson correlation of the average ranks (ties share the mean of the
/// ranks they span).
CorrValue spearman(const TimeSeries& a, const TimeSeries& b);

/// Distance correlation from double-centred |x_i - x_j| matrices, biased
/// (V-statistic) estimator. Zero when either distance variance is zero.
double distance_correlation(const TimeSeries& a, const TimeSeries& b);

/// Average ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

struct BaselineReport {
    CorrValue pearson;
    CorrValue spearman;
    double distance_correlation = 0.0;
};

BaselineReport compare_baselines(const TimeSeries& a, const TimeSeries& b);

} // namespace compcorr
