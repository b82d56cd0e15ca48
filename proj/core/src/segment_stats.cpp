#include "compcorr/segment_stats.hpp"

#include "compcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace compcorr {

TimeSeries::TimeSeries(std::string id, std::vector<double> values) : id_(std::move(id)), values_(std::move(values))
{
    if (values_.size() < 2) {
        throw InvalidArgument("series '" + id_ + "' has " + std::to_string(values_.size()) +
                              " observations; at least 2 are required");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("series '" + id_ + "' has a non-finite value at position " + std::to_string(i));
        }
    }
}

namespace detail {

double clamp_css(double css, double scale)
{
    if (css >= 0.0) {
        return css;
    }
    if (css >= -1e-9 * scale) {
        return 0.0;
    }
    throw InternalError("negative centered sum of squares " + std::to_string(css) + " beyond rounding floor");
}

} // namespace detail

SeriesProfile::SeriesProfile(std::span<const double> values, std::size_t min_part)
    : n_(values.size()), min_part_(min_part)
{
    if (min_part < 1 || n_ < min_part) {
        throw InvalidArgument("series of length " + std::to_string(n_) + " cannot hold a part of length " +
                              std::to_string(min_part));
    }

    // Pre-centre on the global mean; segment deviations are translation
    // invariant and the running means stay small.
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n_);

    centered_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        centered_[i] = values[i] - mean;
    }

    const std::size_t stride = n_ + 1;
    css_.assign(stride * stride, 0.0);
    constant_.assign(stride * stride, 0);
    // Running mean and sum of squared deviations per start (Welford). Prefix
    // differences lose relative accuracy on short, nearly flat segments.
    for (std::size_t s = 0; s < n_; ++s) {
        double lo = values[s];
        double hi = values[s];
        double max_sq = 0.0;
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t e = s + 1; e <= n_; ++e) {
            const double x = centered_[e - 1];
            const std::size_t len = e - s;
            const double dx = x - mean;
            mean += dx / static_cast<double>(len);
            m2 += dx * (x - mean);
            lo = std::min(lo, values[e - 1]);
            hi = std::max(hi, values[e - 1]);
            max_sq = std::max(max_sq, x * x);
            if (len < min_part) {
                continue;
            }
            const std::size_t k = s * stride + e;
            if (lo == hi) {
                constant_[k] = 1;
                continue;
            }
            css_[k] = detail::clamp_css(m2, max_sq);
        }
    }
}

SegmentTable SegmentTable::build(const TimeSeries& a, const TimeSeries& b, std::size_t min_part)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("series '" + a.id() + "' has " + std::to_string(a.size()) + " observations but '" +
                             b.id() + "' has " + std::to_string(b.size()));
    }
    SegmentTable table;
    table.owned_a_ = std::make_unique<const SeriesProfile>(a, min_part);
    table.owned_b_ = &a == &b ? nullptr : std::make_unique<const SeriesProfile>(b, min_part);
    table.reset(*table.owned_a_, table.owned_b_ ? *table.owned_b_ : *table.owned_a_);
    return table;
}

SegmentTable::SegmentTable(const SeriesProfile& a, const SeriesProfile& b)
{
    reset(a, b);
}

void SegmentTable::reset(const SeriesProfile& a, const SeriesProfile& b)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("series profiles have lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
    if (a.min_part() != b.min_part()) {
        throw InvalidArgument("series profiles were built for different minimum part lengths");
    }
    a_ = &a;
    b_ = &b;
    n_ = a.size();
    min_part_ = a.min_part();

    const std::size_t stride = n_ + 1;
    css_ab_.assign(stride * stride, 0.0);

    const auto ca = a.centered();
    const auto cb = b.centered();
    // Running co-moment per start. The update is averaged over both orders
    // so that swapping a and b gives bit-identical values.
    for (std::size_t s = 0; s + min_part_ <= n_; ++s) {
        double mean_a = 0.0;
        double mean_b = 0.0;
        double co = 0.0;
        for (std::size_t e = s + 1; e <= n_; ++e) {
            const std::size_t len = e - s;
            const double x = ca[e - 1];
            const double y = cb[e - 1];
            const double dx = x - mean_a;
            const double dy = y - mean_b;
            mean_a += dx / static_cast<double>(len);
            mean_b += dy / static_cast<double>(len);
            co += 0.5 * (dx * (y - mean_b) + dy * (x - mean_a));
            if (len < min_part_ || a.is_constant(s, len) || b.is_constant(s, len)) {
                continue;
            }
            css_ab_[s * stride + e] = co;
        }
    }
}

SegmentSums SegmentTable::segment(std::size_t start, std::size_t length) const
{
    if (length < min_part_ || start > n_ || length > n_ - start) {
        throw InvalidArgument("segment (start " + std::to_string(start) + ", length " + std::to_string(length) +
                              ") is outside a table of length " + std::to_string(n_) + " with minimum part " +
                              std::to_string(min_part_));
    }
    return (*this)(start, length);
}

} // namespace compcorr
