#include "compcorr/dataset.hpp"

#include "compcorr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace compcorr {

Dataset::Dataset(std::vector<TimeSeries> series, std::optional<std::vector<double>> time_labels, std::string name)
    : series_(std::move(series)), time_labels_(std::move(time_labels)), name_(std::move(name))
{
    if (series_.empty()) {
        throw InvalidArgument("dataset has no series");
    }
    n_ = series_.front().size();
    std::vector<std::string> duplicates;
    for (std::size_t i = 0; i < series_.size(); ++i) {
        const auto& s = series_[i];
        if (s.size() != n_) {
            throw LengthMismatch("series '" + s.id() + "' has " + std::to_string(s.size()) + " observations but '" +
                                 series_.front().id() + "' has " + std::to_string(n_));
        }
        if (!index_.emplace(s.id(), i).second) {
            duplicates.push_back(s.id());
        }
    }
    if (!duplicates.empty()) {
        std::string list;
        for (const auto& d : duplicates) {
            list += (list.empty() ? "" : ", ") + d;
        }
        throw ParseError("duplicate series ids: " + list);
    }
    if (time_labels_ && time_labels_->size() != n_) {
        throw LengthMismatch("dataset has " + std::to_string(time_labels_->size()) + " time labels for series of length " +
                             std::to_string(n_));
    }
}

std::size_t Dataset::index_of(std::string_view id) const
{
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        throw LookupError("series '" + std::string(id) + "' not found in dataset" +
                          (name_.empty() ? std::string() : " '" + name_ + "'"));
    }
    return it->second;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return fields;
}

std::optional<double> parse_number(std::string_view s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

// Trailing numeric token of a header cell: "cdc15_40" -> 40, "t130" -> 130.
std::optional<double> trailing_number(std::string_view s)
{
    std::size_t i = s.size();
    while (i > 0 && (std::isdigit(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '.')) {
        --i;
    }
    if (i == s.size()) {
        return std::nullopt;
    }
    if (i > 0 && s[i - 1] == '-' && (i == 1 || !std::isalnum(static_cast<unsigned char>(s[i - 2])))) {
        --i;
    }
    return parse_number(s.substr(i));
}

char detect_delimiter(std::string_view line)
{
    if (line.find('\t') != std::string_view::npos) {
        return '\t';
    }
    if (line.find(',') != std::string_view::npos) {
        return ',';
    }
    if (line.find(';') != std::string_view::npos) {
        return ';';
    }
    throw ParseError("cannot detect a delimiter (tab, comma or semicolon) in the first line");
}

std::string delimiter_name(char d)
{
    switch (d) {
    case '\t':
        return "tab";
    case ',':
        return "comma";
    case ';':
        return "semicolon";
    default:
        return std::string("'") + d + "'";
    }
}

} // namespace

Dataset load_dataset(std::istream& in, const LoadOptions& options, LoadReport* report)
{
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep = LoadReport{};

    std::vector<TimeSeries> series;
    std::optional<std::vector<double>> labels;
    std::size_t expected_fields = 0;
    char delimiter = options.delimiter;

    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (trim(view).empty()) {
            continue;
        }
        if (first) {
            if (delimiter == 0) {
                delimiter = detect_delimiter(view);
            }
        }
        auto fields = split(view, delimiter);
        if (first) {
            first = false;
            if (fields.size() < 3) {
                throw ParseError("line " + std::to_string(line_no) + ": expected an id and at least two values");
            }
            expected_fields = fields.size();
            if (!parse_number(fields[1])) {
                rep.header = true;
                std::vector<double> parsed;
                for (std::size_t i = 1; i < fields.size(); ++i) {
                    if (auto t = trailing_number(fields[i])) {
                        parsed.push_back(*t);
                    }
                }
                if (parsed.size() == fields.size() - 1) {
                    labels = std::move(parsed);
                }
                continue;
            }
        }
        if (fields.size() != expected_fields) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected_fields) +
                             " fields but found " + std::to_string(fields.size()));
        }
        ++rep.rows_read;
        std::vector<double> values;
        values.reserve(fields.size() - 1);
        bool valid = true;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto v = parse_number(fields[i]);
            if (!v) {
                valid = false;
                break;
            }
            values.push_back(*v);
        }
        std::string id(fields[0]);
        if (!valid) {
            rep.excluded_ids.push_back(id.empty() ? "<line " + std::to_string(line_no) + ">" : id);
            continue;
        }
        if (id.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty series id");
        }
        series.emplace_back(std::move(id), std::move(values));
    }

    if (series.empty()) {
        throw ParseError("no valid series rows" +
                         (rep.excluded_ids.empty() ? std::string() : " (" + std::to_string(rep.excluded_ids.size()) +
                                                                         " rows excluded for missing values)"));
    }
    rep.delimiter = delimiter;
    rep.n = series.front().size();
    return Dataset(std::move(series), std::move(labels), options.name);
}

Dataset load_dataset(const std::filesystem::path& path, LoadOptions options, LoadReport* report)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open dataset file '" + path.string() + "'");
    }
    if (options.name.empty()) {
        options.name = path.stem().string();
    }
    return load_dataset(in, options, report);
}

void print_load_report(std::ostream& out, const LoadReport& report)
{
    out << "loaded " << (report.rows_read - report.excluded_ids.size()) << " of " << report.rows_read
        << " rows (n=" << report.n << ", delimiter=" << delimiter_name(report.delimiter)
        << (report.header ? ", header" : ", no header") << ")\n";
    for (const auto& id : report.excluded_ids) {
        out << "warning: excluded '" << id << "' (missing or non-numeric value)\n";
    }
    if (!report.excluded_ids.empty()) {
        out << "warning: " << report.excluded_ids.size() << " rows excluded\n";
    }
}

void write_dataset(std::ostream& out, const Dataset& dataset, int precision)
{
    std::ostringstream buf;
    buf.precision(precision);
    if (const auto& labels = dataset.time_labels()) {
        buf << "id";
        for (double t : *labels) {
            buf << "\tt" << t;
        }
        buf << '\n';
    }
    for (const auto& s : dataset.series()) {
        buf << s.id();
        for (double v : s.values()) {
            buf << '\t' << v;
        }
        buf << '\n';
    }
    out << buf.str();
}

std::string_view to_string(SynthFunction f)
{
    switch (f) {
    case SynthFunction::square:
        return "square";
    case SynthFunction::cubic_minus_x:
        return "cubic_minus_x";
    case SynthFunction::quartic:
        return "quartic";
    case SynthFunction::monotone_cubic:
        return "monotone_cubic";
    }
    return "unknown";
}

SynthFunction parse_synth_function(std::string_view name)
{
    for (auto f : {SynthFunction::square, SynthFunction::cubic_minus_x, SynthFunction::quartic,
                   SynthFunction::monotone_cubic}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw InvalidArgument("unknown function '" + std::string(name) +
                          "' (expected square, cubic_minus_x, quartic or monotone_cubic)");
}

double evaluate(SynthFunction f, double x)
{
    switch (f) {
    case SynthFunction::square:
        return x * x;
    case SynthFunction::cubic_minus_x:
        return x * x * x - x;
    case SynthFunction::quartic: {
        const double x2 = x * x;
        return x2 * x2 - 10.0 * x2 + 9.0;
    }
    case SynthFunction::monotone_cubic:
        return x * x * x + x * x + 2.0 * x + 4.0;
    }
    return 0.0;
}

std::pair<double, double> default_range(SynthFunction f)
{
    switch (f) {
    case SynthFunction::square:
        return {-1.0, 1.0};
    case SynthFunction::cubic_minus_x:
        return {-1.4, 1.4};
    case SynthFunction::quartic:
        return {-3.5, 3.5};
    case SynthFunction::monotone_cubic:
        return {-3.0, 2.0};
    }
    return {-1.0, 1.0};
}

void SynthSpec::validate() const
{
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw InvalidArgument("synthetic range requires finite x_min < x_max");
    }
    if (pieces < 2) {
        throw InvalidArgument("synthetic grid needs at least 2 pieces");
    }
}

std::pair<TimeSeries, TimeSeries> generate(const SynthSpec& spec)
{
    spec.validate();
    const std::size_t points = spec.pieces + 1;
    const double p = static_cast<double>(spec.pieces);
    std::vector<double> x(points);
    std::vector<double> y(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = static_cast<double>(i);
        x[i] = ((p - w) * spec.x_min + w * spec.x_max) / p;
        y[i] = evaluate(spec.function, x[i]);
    }
    return {TimeSeries("x", std::move(x)), TimeSeries("y", std::move(y))};
}

Dataset synth_dataset(const SynthSpec& spec)
{
    auto [x, y] = generate(spec);
    std::vector<TimeSeries> series;
    series.push_back(std::move(x));
    series.push_back(std::move(y));
    return Dataset(std::move(series), std::nullopt, std::string(to_string(spec.function)));
}

} // namespace compcorr
