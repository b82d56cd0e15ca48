#include "compcorr/record_io.hpp"

#include "compcorr/error.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

namespace compcorr {

std::string format_real(double v, int precision)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
    if (ec != std::errc{}) {
        throw InvalidArgument("cannot format value with precision " + std::to_string(precision));
    }
    std::string out(buf.data(), ptr);
    // Values that round to zero print without a sign.
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1);
    }
    return out;
}

std::string format_value(const CorrValue& v, int precision)
{
    return v ? format_real(*v, precision) : std::string("NA");
}

RecordWriter::RecordWriter(std::ostream& out, int precision) : out_(out), precision_(precision)
{
    out_ << "id_a\tid_b\thcc\tpearson\tlcc\tbcc\twcc\n";
}

void RecordWriter::write(const PairRecord& r)
{
    out_ << r.id_a << '\t' << r.id_b << '\t' << format_value(r.hcc, precision_) << '\t'
         << format_value(r.pearson, precision_) << '\t' << format_value(r.lcc, precision_) << '\t'
         << (r.bcc.empty() ? "NA" : r.bcc.to_string()) << '\t' << (r.wcc.empty() ? "NA" : r.wcc.to_string())
         << '\n';
    if (!out_) {
        throw Error("failed to write record for " + r.id_a + "/" + r.id_b);
    }
    ++written_;
}

DistributionWriter::DistributionWriter(std::ostream& out, int precision) : out_(out), precision_(precision)
{
    out_ << "composition\tr_c\n";
}

void DistributionWriter::write(std::span<const std::size_t> parts, const CorrValue& r)
{
    out_ << '[';
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out_ << ',';
        }
        out_ << parts[i];
    }
    out_ << "]\t" << format_value(r, precision_) << '\n';
}

CloudWriter::CloudWriter(std::ostream& out, int precision) : out_(out), precision_(precision)
{
    out_ << "r_c\tvar_a\tvar_b\tcov\n";
}

void CloudWriter::write(const CloudPoint& p)
{
    out_ << format_value(p.r, precision_) << '\t' << format_real(p.var_a, precision_) << '\t'
         << format_real(p.var_b, precision_) << '\t' << format_real(p.cov, precision_) << '\n';
}

std::string distribution_file_name(std::string_view dataset, std::string_view id_a, std::string_view id_b,
                                   std::size_t n, std::size_t m)
{
    std::string name = "Output.";
    name += dataset;
    name += '.';
    name += id_a;
    name += '.';
    name += id_b;
    name += ".n" + std::to_string(n) + ".m" + std::to_string(m) + ".txt";
    return name;
}

namespace {

CorrValue parse_corr(std::string_view s, std::size_t line_no)
{
    if (s == "NA") {
        return CorrValue::undefined();
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("record line " + std::to_string(line_no) + ": bad value '" + std::string(s) + "'");
    }
    return CorrValue(v);
}

} // namespace

std::vector<PairRecord> read_records(std::istream& in)
{
    std::vector<PairRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view view = line;
        std::size_t start = 0;
        while (true) {
            const auto pos = view.find('\t', start);
            f.push_back(view.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos) {
                break;
            }
            start = pos + 1;
        }
        if (f.size() != 7) {
            throw ParseError("record line " + std::to_string(line_no) + ": expected 7 fields");
        }
        PairRecord r;
        r.id_a = f[0];
        r.id_b = f[1];
        r.hcc = parse_corr(f[2], line_no);
        r.pearson = parse_corr(f[3], line_no);
        r.lcc = parse_corr(f[4], line_no);
        if (f[5] != "NA") {
            r.bcc = Composition::parse(f[5]);
        }
        if (f[6] != "NA") {
            r.wcc = Composition::parse(f[6]);
        }
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace compcorr
