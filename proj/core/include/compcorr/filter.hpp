#pragma once

#include "compcorr/comp_corr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace compcorr {

enum class FilterField { hcc, lcc, pearson, abs_pearson };
enum class FilterOp { less, less_equal, greater, greater_equal };

struct Comparison {
    FilterField field;
    FilterOp op;
    double threshold;
};

/// Conjunction of threshold comparisons on a pair's hcc, lcc and pearson.
/// An Undefined operand fails its comparison. The empty filter accepts
/// everything.
class RecordFilter {
public:
    RecordFilter() = default;
    explicit RecordFilter(std::vector<Comparison> terms);

    /// Grammar: term ("AND" term)*, term := field op number,
    /// field := hcc | lcc | pearson | abs(pearson), op := < | <= | > | >=.
    /// Keywords are case-insensitive. Throws ParseError.
    static RecordFilter parse(std::string_view expression);

    bool empty() const noexcept { return terms_.empty(); }
    bool accepts(const CorrValue& hcc, const CorrValue& pearson, const CorrValue& lcc) const;

    const std::vector<Comparison>& terms() const noexcept { return terms_; }
    std::string to_string() const;

private:
    std::vector<Comparison> terms_;
};

} // namespace compcorr
