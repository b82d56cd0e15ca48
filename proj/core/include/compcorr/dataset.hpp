#pragma once

#include "compcorr/time_series.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace compcorr {

/// A set of equal-length series with unique ids, plus optional numeric time
/// labels for the columns.
class Dataset {
public:
    Dataset(std::vector<TimeSeries> series, std::optional<std::vector<double>> time_labels = std::nullopt,
            std::string name = {});

    std::size_t size() const noexcept { return series_.size(); }
    std::size_t length() const noexcept { return n_; }
    const std::string& name() const noexcept { return name_; }

    const TimeSeries& operator[](std::size_t i) const { return series_[i]; }
    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    const std::optional<std::vector<double>>& time_labels() const noexcept { return time_labels_; }

    /// Throws LookupError naming the id.
    std::size_t index_of(std::string_view id) const;
    const TimeSeries& find(std::string_view id) const { return series_[index_of(id)]; }

private:
    std::vector<TimeSeries> series_;
    std::optional<std::vector<double>> time_labels_;
    std::string name_;
    std::size_t n_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
    /// 0 selects auto-detection among tab, comma and semicolon.
    char delimiter = 0;
    /// Dataset name; defaults to the file stem.
    std::string name;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::vector<std::string> excluded_ids;
    std::size_t n = 0;
    char delimiter = '\t';
    bool header = false;
};

/// Loads a delimited text matrix: one series per row, id in the first
/// column. A header row is recognised by a non-numeric second field. Rows
/// with empty or non-numeric cells are excluded and listed in the report.
/// Throws ParseError for ragged rows (with line number), duplicate ids, or
/// when no valid row remains.
Dataset load_dataset(std::istream& in, const LoadOptions& options = {}, LoadReport* report = nullptr);
Dataset load_dataset(const std::filesystem::path& path, LoadOptions options = {}, LoadReport* report = nullptr);

/// Prints the load report (rows, exclusions, n, delimiter) as diagnostics.
void print_load_report(std::ostream& out, const LoadReport& report);

/// Writes a dataset in the format load_dataset reads: tab-separated, with a
/// `id t<label>...` header row only when the dataset has time labels.
/// `precision` is the number of significant digits.
void write_dataset(std::ostream& out, const Dataset& dataset, int precision = 17);

enum class SynthFunction {
    square,          // x^2
    cubic_minus_x,   // x^3 - x
    quartic,         // x^4 - 10x^2 + 9
    monotone_cubic,  // x^3 + x^2 + 2x + 4
};

std::string_view to_string(SynthFunction f);
/// Throws InvalidArgument for an unknown name.
SynthFunction parse_synth_function(std::string_view name);

double evaluate(SynthFunction f, double x);

/// Default sampling range per function. These were recovered by searching
/// for the range whose 31-point scan reproduces the reference extremes:
/// square [-1, 1] (any symmetric range gives the same scan),
/// cubic_minus_x [-1.4, 1.4], quartic [-3.5, 3.5], monotone_cubic [-3, 2].
std::pair<double, double> default_range(SynthFunction f);

struct SynthSpec {
    SynthFunction function = SynthFunction::square;
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t pieces = 30;

    /// Throws InvalidArgument unless x_min < x_max and pieces >= 2.
    void validate() const;
};

/// Samples f on pieces + 1 equally spaced points. Returns (x, y) with ids
/// "x" and "y". The grid is computed as ((pieces - i) x_min + i x_max) / pieces,
/// which is exactly mirror-symmetric when x_min = -x_max.
std::pair<TimeSeries, TimeSeries> generate(const SynthSpec& spec);

/// Two-row dataset {x, y} named after the function.
Dataset synth_dataset(const SynthSpec& spec);

} // namespace compcorr
