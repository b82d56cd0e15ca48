#pragma once

#include "compcorr/comp_corr.hpp"
#include "compcorr/pairs_engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace compcorr {

inline constexpr int default_precision = 6;

/// Fixed-point with `precision` decimals; Undefined renders as `NA`.
std::string format_value(const CorrValue& v, int precision = default_precision);
std::string format_real(double v, int precision = default_precision);

/// Tab-separated record file: header `id_a id_b hcc pearson lcc bcc wcc`.
class RecordWriter {
public:
    explicit RecordWriter(std::ostream& out, int precision = default_precision);
    void write(const PairRecord& record);
    std::uint64_t written() const noexcept { return written_; }

private:
    std::ostream& out_;
    int precision_;
    std::uint64_t written_ = 0;
};

/// Full distribution file: header `composition r_c`, one line per composition.
class DistributionWriter {
public:
    explicit DistributionWriter(std::ostream& out, int precision = default_precision);
    void write(std::span<const std::size_t> parts, const CorrValue& r);

private:
    std::ostream& out_;
    int precision_;
};

/// Cloud file: header `r_c var_a var_b cov`, one line per composition.
class CloudWriter {
public:
    explicit CloudWriter(std::ostream& out, int precision = default_precision);
    void write(const CloudPoint& point);

private:
    std::ostream& out_;
    int precision_;
};

/// `Output.<dataset>.<idA>.<idB>.n<N>.m<M>.txt`
std::string distribution_file_name(std::string_view dataset, std::string_view id_a, std::string_view id_b,
                                   std::size_t n, std::size_t m);

/// Reads a record file back (used by tests and downstream tooling).
std::vector<PairRecord> read_records(std::istream& in);

} // namespace compcorr
