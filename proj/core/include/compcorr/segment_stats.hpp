#pragma once

#include "compcorr/time_series.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace compcorr {

/// Centered sums of one contiguous segment of a series pair:
/// css_a = sum (a_j - mean_a)^2, css_b likewise, css_ab = sum (a_j - mean_a)(b_j - mean_b),
/// with the means taken over the segment itself.
struct SegmentSums {
    double css_a = 0.0;
    double css_b = 0.0;
    double css_ab = 0.0;
};

/// Per-series precomputation shared by every pair the series takes part in:
/// the globally centered values and the centered sum of squares of every
/// segment of length >= min_part.
///
/// A segment whose raw values are all equal has css exactly 0 (no rounding
/// residue), so zero compositional variance is detected exactly.
class SeriesProfile {
public:
    SeriesProfile(std::span<const double> values, std::size_t min_part);
    explicit SeriesProfile(const TimeSeries& series, std::size_t min_part)
        : SeriesProfile(series.values(), min_part) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t min_part() const noexcept { return min_part_; }

    std::span<const double> centered() const noexcept { return centered_; }

    double css(std::size_t start, std::size_t length) const noexcept
    {
        return css_[start * (n_ + 1) + start + length];
    }
    bool is_constant(std::size_t start, std::size_t length) const noexcept
    {
        return constant_[start * (n_ + 1) + start + length] != 0;
    }

private:
    std::size_t n_;
    std::size_t min_part_;
    std::vector<double> centered_;
    std::vector<double> css_;  // indexed by start * (n + 1) + end
    std::vector<unsigned char> constant_;
};

/// Centered sums for every segment (start, length >= m) of a series pair,
/// answering segment queries in O(1).
///
/// The per-series terms live in the two SeriesProfile objects; the table
/// itself only tabulates the cross term, O(n^2) per pair. A table built from
/// profiles refers to them and must not outlive them; `build` owns its
/// profiles. `reset` refills the cross term in place so a worker can reuse
/// one table across many pairs without reallocating.
class SegmentTable {
public:
    /// Builds from two series. Throws LengthMismatch naming both ids when
    /// lengths differ and InvalidArgument when n < min_part.
    static SegmentTable build(const TimeSeries& a, const TimeSeries& b, std::size_t min_part);

    /// Empty table; call reset before querying.
    SegmentTable() = default;
    SegmentTable(const SeriesProfile& a, const SeriesProfile& b);

    void reset(const SeriesProfile& a, const SeriesProfile& b);

    std::size_t size() const noexcept { return n_; }
    std::size_t min_part() const noexcept { return min_part_; }

    /// Checked query; throws InvalidArgument for an out-of-range segment or
    /// one shorter than min_part.
    SegmentSums segment(std::size_t start, std::size_t length) const;

    /// Unchecked query for hot loops.
    SegmentSums operator()(std::size_t start, std::size_t length) const noexcept
    {
        return {a_->css(start, length), b_->css(start, length), css_ab_[start * (n_ + 1) + start + length]};
    }

private:
    std::unique_ptr<const SeriesProfile> owned_a_;
    std::unique_ptr<const SeriesProfile> owned_b_;
    const SeriesProfile* a_ = nullptr;
    const SeriesProfile* b_ = nullptr;
    std::size_t n_ = 0;
    std::size_t min_part_ = 0;
    std::vector<double> css_ab_;
};

namespace detail {

// Resolves a computed centered sum of squares against the rounding floor:
// negatives no smaller than -1e-9 * scale become 0, anything lower throws
// InternalError.
double clamp_css(double css, double scale);

} // namespace detail

} // namespace compcorr
