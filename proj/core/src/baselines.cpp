#include "compcorr/baselines.hpp"

#include "compcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace compcorr {

namespace {

void check_lengths(const TimeSeries& a, const TimeSeries& b)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("series '" + a.id() + "' has " + std::to_string(a.size()) + " observations but '" +
                             b.id() + "' has " + std::to_string(b.size()));
    }
}

CorrValue pearson_of(std::span<const double> x, std::span<const double> y)
{
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) {
        return CorrValue::undefined();
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    return detail::ratio_to_corr(sxx, syy, sxy);
}

// Mean of each row (and of the whole) of the |x_i - x_j| matrix, used for
// double centering without materialising the centred matrix.
struct DistanceMoments {
    std::vector<double> row_mean;
    double grand_mean = 0.0;
};

DistanceMoments distance_moments(std::span<const double> x)
{
    const std::size_t n = x.size();
    DistanceMoments d;
    d.row_mean.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += std::abs(x[i] - x[j]);
        }
        d.row_mean[i] = s / static_cast<double>(n);
        d.grand_mean += d.row_mean[i];
    }
    d.grand_mean /= static_cast<double>(n);
    return d;
}

} // namespace

CorrValue pearson(const TimeSeries& a, const TimeSeries& b)
{
    check_lengths(a, b);
    return pearson_of(a.values(), b.values());
}

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // Positions i..j-1 hold ranks i+1..j; ties share their mean.
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j;
    }
    return ranks;
}

CorrValue spearman(const TimeSeries& a, const TimeSeries& b)
{
    check_lengths(a, b);
    const auto ra = average_ranks(a.values());
    const auto rb = average_ranks(b.values());
    return pearson_of(ra, rb);
}

double distance_correlation(const TimeSeries& a, const TimeSeries& b)
{
    check_lengths(a, b);
    const auto x = a.values();
    const auto y = b.values();
    const std::size_t n = x.size();
    const auto dx = distance_moments(x);
    const auto dy = distance_moments(y);

    double dcov = 0.0;
    double dvar_x = 0.0;
    double dvar_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ax = std::abs(x[i] - x[j]) - dx.row_mean[i] - dx.row_mean[j] + dx.grand_mean;
            const double ay = std::abs(y[i] - y[j]) - dy.row_mean[i] - dy.row_mean[j] + dy.grand_mean;
            dcov += ax * ay;
            dvar_x += ax * ax;
            dvar_y += ay * ay;
        }
    }
    if (dvar_x <= 0.0 || dvar_y <= 0.0) {
        return 0.0;
    }
    // The common 1/n^2 factors cancel in the ratio.
    const double r2 = dcov / std::sqrt(dvar_x * dvar_y);
    return std::sqrt(std::clamp(r2, 0.0, 1.0));
}

BaselineReport compare_baselines(const TimeSeries& a, const TimeSeries& b)
{
    return {pearson(a, b), spearman(a, b), distance_correlation(a, b)};
}

} // namespace compcorr
