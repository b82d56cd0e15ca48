#pragma once

#include "compcorr/composition.hpp"
#include "compcorr/segment_stats.hpp"
#include "compcorr/time_series.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace compcorr {

/// A correlation in [-1, 1], or Undefined when either series has zero
/// (compositional) variance.
class CorrValue {
public:
    CorrValue() = default;
    explicit CorrValue(double v) : value_(v) {}
    static CorrValue undefined() { return {}; }

    bool defined() const noexcept { return value_.has_value(); }
    explicit operator bool() const noexcept { return defined(); }
    double value() const { return value_.value(); }
    double operator*() const { return *value_; }

    friend bool operator==(const CorrValue&, const CorrValue&) = default;

private:
    std::optional<double> value_;
};

/// Compositional variance: (1/n) sum_i sum_j (A_ij - mean(A_i))^2.
/// Throws LengthMismatch when the composition does not sum to a.size().
double comp_variance(const TimeSeries& a, const Composition& c);

/// Square root of comp_variance.
double comp_std_dev(const TimeSeries& a, const Composition& c);

/// Compositional covariance: (1/n) sum_i sum_j (A_ij - mean(A_i))(B_ij - mean(B_i)).
double comp_covariance(const TimeSeries& a, const TimeSeries& b, const Composition& c);

/// Cov_c / sqrt(Var_c(A) Var_c(B)); Undefined when either variance is zero.
/// With c = [n] this is Pearson's r.
CorrValue comp_correlation(const TimeSeries& a, const TimeSeries& b, const Composition& c);

namespace detail {

// r = sab / sqrt(sa * sb) with the Undefined and clamping rules applied.
// Excess beyond 1 + 1e-12 throws InternalError.
CorrValue ratio_to_corr(double sa, double sb, double sab);

} // namespace detail

struct ScanOptions {
    bool keep_distribution = false;
    bool keep_clouds = false;
};

/// One point of the variance/covariance clouds; variances and covariance are
/// normalised by n as in comp_variance.
struct CloudPoint {
    CorrValue r;
    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
};

struct ScanResult {
    CorrValue hcc;
    CorrValue lcc;
    Composition bcc;  // empty when hcc is Undefined
    Composition wcc;
    CorrValue pearson;
    std::uint64_t n_evaluated = 0;
    std::uint64_t n_undefined = 0;
    std::vector<std::pair<Composition, CorrValue>> distribution;
    std::vector<CloudPoint> clouds;
};

/// Totals of the segment sums over the parts of one composition.
struct CompositionTotals {
    double css_a = 0.0;
    double css_b = 0.0;
    double css_ab = 0.0;
};

/// Calls `visit(parts, totals)` for every composition of `spec` in canonical
/// (ascending lexicographic) order. Partial sums along shared prefixes are
/// reused, so the cost is one table lookup per node of the prefix tree rather
/// than k per composition. Per-composition totals are still accumulated left
/// to right over the parts.
template <class Visitor>
void visit_compositions(const SegmentTable& table, const CompositionSpec& spec, Visitor&& visit);

/// Values closer than this are treated as tied when tracking HCC/LCC.
/// Mirror-symmetric data produces mathematically equal correlations that
/// differ in the last few bits depending on summation order.
inline constexpr double tie_tolerance = 1e-12;

/// Evaluates every composition of `spec` and reports the extremes. Ties
/// (within tie_tolerance) go to the earliest composition in canonical order.
ScanResult scan(const SegmentTable& table, const CompositionSpec& spec, const ScanOptions& options = {});

/// Convenience overload building the SegmentTable. Throws LengthMismatch when
/// either series length differs from spec.n().
ScanResult scan(const TimeSeries& a, const TimeSeries& b, const CompositionSpec& spec,
                const ScanOptions& options = {});

// ---------------------------------------------------------------------------

namespace detail {

template <class Visitor>
struct CompositionWalker {
    const SegmentTable& table;
    std::size_t n;
    std::size_t m;
    std::vector<std::size_t> path;
    Visitor& visit;

    void walk(std::size_t start, double sa, double sb, double sab)
    {
        const std::size_t remaining = n - start;
        // Parts that leave room for at least one more part.
        for (std::size_t p = m; p + m <= remaining; ++p) {
            const SegmentSums s = table(start, p);
            path.push_back(p);
            walk(start + p, sa + s.css_a, sb + s.css_b, sab + s.css_ab);
            path.pop_back();
        }
        // The closing part takes everything that is left.
        const SegmentSums s = table(start, remaining);
        path.push_back(remaining);
        visit(std::span<const std::size_t>(path),
              CompositionTotals{sa + s.css_a, sb + s.css_b, sab + s.css_ab});
        path.pop_back();
    }
};

} // namespace detail

template <class Visitor>
void visit_compositions(const SegmentTable& table, const CompositionSpec& spec, Visitor&& visit)
{
    detail::CompositionWalker<std::remove_reference_t<Visitor>> walker{
        table, spec.n(), spec.m(), {}, visit};
    walker.path.reserve(spec.n() / spec.m() + 1);
    walker.walk(0, 0.0, 0.0, 0.0);
}

} // namespace compcorr
