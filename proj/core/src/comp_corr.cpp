#include "compcorr/comp_corr.hpp"

#include "compcorr/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace compcorr {

namespace {

void check_composition(const TimeSeries& a, const Composition& c)
{
    if (c.empty() || c.total() != a.size()) {
        throw LengthMismatch("composition " + c.to_string() + " does not cover series '" + a.id() + "' of length " +
                             std::to_string(a.size()));
    }
    for (std::size_t p : c.parts()) {
        if (p == 0) {
            throw InvalidArgument("composition " + c.to_string() + " has an empty part");
        }
    }
}

void check_lengths(const TimeSeries& a, const TimeSeries& b)
{
    if (a.size() != b.size()) {
        throw LengthMismatch("series '" + a.id() + "' has " + std::to_string(a.size()) + " observations but '" +
                             b.id() + "' has " + std::to_string(b.size()));
    }
}

bool is_constant(std::span<const double> v)
{
    for (double x : v) {
        if (x != v.front()) {
            return false;
        }
    }
    return true;
}

// Sum over parts of the within-part centered cross products. Constant parts
// contribute exactly zero.
double within_part_sum(std::span<const double> a, std::span<const double> b, const Composition& c)
{
    double total = 0.0;
    std::size_t start = 0;
    for (std::size_t len : c.parts()) {
        auto pa = a.subspan(start, len);
        auto pb = b.subspan(start, len);
        start += len;
        if (is_constant(pa) || is_constant(pb)) {
            continue;
        }
        double mean_a = 0.0;
        double mean_b = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            mean_a += pa[j];
            mean_b += pb[j];
        }
        mean_a /= static_cast<double>(len);
        mean_b /= static_cast<double>(len);
        double part = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            part += (pa[j] - mean_a) * (pb[j] - mean_b);
        }
        total += part;
    }
    return total;
}

} // namespace

double comp_variance(const TimeSeries& a, const Composition& c)
{
    check_composition(a, c);
    return within_part_sum(a.values(), a.values(), c) / static_cast<double>(a.size());
}

double comp_std_dev(const TimeSeries& a, const Composition& c)
{
    return std::sqrt(comp_variance(a, c));
}

double comp_covariance(const TimeSeries& a, const TimeSeries& b, const Composition& c)
{
    check_lengths(a, b);
    check_composition(a, c);
    return within_part_sum(a.values(), b.values(), c) / static_cast<double>(a.size());
}

CorrValue comp_correlation(const TimeSeries& a, const TimeSeries& b, const Composition& c)
{
    check_lengths(a, b);
    check_composition(a, c);
    const double sa = within_part_sum(a.values(), a.values(), c);
    const double sb = within_part_sum(b.values(), b.values(), c);
    const double sab = within_part_sum(a.values(), b.values(), c);
    return detail::ratio_to_corr(sa, sb, sab);
}

namespace detail {

CorrValue ratio_to_corr(double sa, double sb, double sab)
{
    if (sa <= 0.0 || sb <= 0.0) {
        return CorrValue::undefined();
    }
    const double r = sab / std::sqrt(sa * sb);
    if (r > 1.0 || r < -1.0) {
        if (std::abs(r) - 1.0 > 1e-12) {
            throw InternalError("compositional correlation " + std::to_string(r) + " outside [-1, 1]");
        }
        return CorrValue(r > 0.0 ? 1.0 : -1.0);
    }
    return CorrValue(r);
}

} // namespace detail

ScanResult scan(const SegmentTable& table, const CompositionSpec& spec, const ScanOptions& options)
{
    if (table.size() != spec.n() || table.min_part() > spec.m()) {
        throw InvalidArgument("segment table (n=" + std::to_string(table.size()) + ", m=" +
                              std::to_string(table.min_part()) + ") does not serve compositions with n=" +
                              std::to_string(spec.n()) + ", m=" + std::to_string(spec.m()));
    }

    ScanResult result;
    const double inv_n = 1.0 / static_cast<double>(spec.n());
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();

    visit_compositions(table, spec, [&](std::span<const std::size_t> parts, const CompositionTotals& t) {
        const CorrValue r = detail::ratio_to_corr(t.css_a, t.css_b, t.css_ab);
        if (r) {
            ++result.n_evaluated;
            const double v = *r;
            if (v > best + tie_tolerance) {
                best = v;
                result.bcc = Composition({parts.begin(), parts.end()});
            }
            if (v < worst - tie_tolerance) {
                worst = v;
                result.wcc = Composition({parts.begin(), parts.end()});
            }
        } else {
            ++result.n_undefined;
        }
        if (parts.size() == 1) {
            result.pearson = r;
        }
        if (options.keep_distribution) {
            result.distribution.emplace_back(Composition({parts.begin(), parts.end()}), r);
        }
        if (options.keep_clouds) {
            result.clouds.push_back({r, t.css_a * inv_n, t.css_b * inv_n, t.css_ab * inv_n});
        }
    });

    if (result.n_evaluated > 0) {
        result.hcc = CorrValue(best);
        result.lcc = CorrValue(worst);
    }
    return result;
}

ScanResult scan(const TimeSeries& a, const TimeSeries& b, const CompositionSpec& spec, const ScanOptions& options)
{
    check_lengths(a, b);
    if (a.size() != spec.n()) {
        throw LengthMismatch("series '" + a.id() + "' has " + std::to_string(a.size()) +
                             " observations but the composition spec expects " + std::to_string(spec.n()));
    }
    const SegmentTable table = SegmentTable::build(a, b, spec.m());
    return scan(table, spec, options);
}

} // namespace compcorr
