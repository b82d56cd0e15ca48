// compcorr: compositional correlation scans from the command line.
//
//   compcorr count N M
//   compcorr pair ID_A ID_B --input data.tsv [--min-part 4]
//   compcorr all-pairs --input data.tsv [--filter "hcc>0.9 AND abs(pearson)<0.1"]
//   compcorr time-corr --input data.tsv
//   compcorr synth --function square --range=-1:1 --pieces 30
//   compcorr clouds y x --function square

#include "compcorr/baselines.hpp"
#include "compcorr/comp_corr.hpp"
#include "compcorr/composition.hpp"
#include "compcorr/dataset.hpp"
#include "compcorr/error.hpp"
#include "compcorr/filter.hpp"
#include "compcorr/pairs_engine.hpp"
#include "compcorr/record_io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace compcorr;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int)
{
    g_interrupted.store(true);
}

std::size_t default_threads()
{
    if (const char* env = std::getenv("COMP_CORR_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid COMP_CORR_THREADS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Output file written under `<path>.partial` and renamed into place only when
// the computation completes.
class PartialFile {
public:
    explicit PartialFile(fs::path path) : path_(std::move(path)), partial_(path_.string() + ".partial")
    {
        if (path_.has_parent_path()) {
            fs::create_directories(path_.parent_path());
        }
        out_.open(partial_);
        if (!out_) {
            throw Error("cannot open output file '" + partial_.string() + "'");
        }
    }

    std::ostream& stream() { return out_; }

    void commit()
    {
        out_.flush();
        if (!out_) {
            throw Error("failed writing '" + partial_.string() + "'");
        }
        out_.close();
        fs::rename(partial_, path_);
    }

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    fs::path partial_;
    std::ofstream out_;
};

struct SourceOptions {
    std::string input;
    char delimiter = 0;
    std::string function;
    std::string range;
    std::size_t pieces = 30;

    bool synthetic() const { return !function.empty(); }
};

void add_source_options(CLI::App* cmd, SourceOptions& src, bool allow_synth, bool allow_input = true)
{
    if (allow_input) {
        cmd->add_option("--input,-i", src.input, "Delimited text dataset (one series per row, id first)");
        cmd->add_option("--delimiter", src.delimiter, "Field delimiter (default: auto-detect tab, comma, semicolon)");
    }
    if (allow_synth) {
        cmd->add_option("--function", src.function,
                        "Synthetic source instead of --input: square, cubic_minus_x, quartic, monotone_cubic");
        cmd->add_option("--range", src.range, "Synthetic x range LO:HI (use --range=LO:HI for negative LO)");
        cmd->add_option("--pieces", src.pieces, "Synthetic grid intervals (points = pieces + 1)")
            ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    }
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ParseError("range '" + text + "' must look like LO:HI");
    }
    try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        const std::string lo_text = text.substr(0, colon);
        const std::string hi_text = text.substr(colon + 1);
        const double lo = std::stod(lo_text, &used_lo);
        const double hi = std::stod(hi_text, &used_hi);
        if (used_lo != lo_text.size() || used_hi != hi_text.size()) {
            throw ParseError("range '" + text + "' must look like LO:HI");
        }
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ParseError("range '" + text + "' must look like LO:HI");
    }
}

SynthSpec synth_spec(const SourceOptions& src)
{
    SynthSpec spec;
    spec.function = parse_synth_function(src.function);
    std::tie(spec.x_min, spec.x_max) = src.range.empty() ? default_range(spec.function) : parse_range(src.range);
    spec.pieces = src.pieces;
    spec.validate();
    return spec;
}

Dataset load_source(const SourceOptions& src)
{
    if (src.synthetic()) {
        if (!src.input.empty()) {
            throw InvalidArgument("--input and --function are mutually exclusive");
        }
        return synth_dataset(synth_spec(src));
    }
    if (src.input.empty()) {
        throw InvalidArgument("an input dataset is required (--input PATH)");
    }
    LoadOptions options;
    options.delimiter = src.delimiter;
    LoadReport report;
    Dataset dataset = load_dataset(fs::path(src.input), options, &report);
    print_load_report(std::cerr, report);
    return dataset;
}

std::size_t resolve_min_part(const std::optional<std::size_t>& flag, std::size_t fallback, const Dataset& dataset)
{
    const std::size_t m = flag.value_or(fallback);
    if (m < 2) {
        throw InvalidArgument("--min-part must be at least 2");
    }
    if (m > dataset.length()) {
        throw InvalidArgument("--min-part " + std::to_string(m) + " exceeds the series length " +
                              std::to_string(dataset.length()));
    }
    return m;
}

std::string part_correlations(const TimeSeries& a, const TimeSeries& b, const Composition& c, int precision)
{
    std::ostringstream out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t len = c[i];
        std::vector<double> pa(a.values().begin() + start, a.values().begin() + start + len);
        std::vector<double> pb(b.values().begin() + start, b.values().begin() + start + len);
        const CorrValue r = pearson(TimeSeries(a.id(), std::move(pa)), TimeSeries(b.id(), std::move(pb)));
        out << (i ? "  " : "") << "[" << start + 1 << "-" << start + len << "] " << format_value(r, precision);
        start += len;
    }
    return out.str();
}

void print_scan_summary(std::ostream& out, const TimeSeries& a, const TimeSeries& b, const ScanResult& r,
                        std::size_t m, int precision)
{
    out << a.id() << " vs " << b.id() << " (n=" << a.size() << ", m=" << m << ")\n";
    out << "  compositions: " << r.n_evaluated + r.n_undefined << " (" << r.n_undefined << " undefined)\n";
    out << "  HCC " << format_value(r.hcc, precision) << "  BCC " << (r.bcc.empty() ? "NA" : r.bcc.to_string())
        << "\n";
    out << "  r   " << format_value(r.pearson, precision) << "\n";
    out << "  LCC " << format_value(r.lcc, precision) << "  WCC " << (r.wcc.empty() ? "NA" : r.wcc.to_string())
        << "\n";
    if (!r.bcc.empty()) {
        out << "  BCC part correlations: " << part_correlations(a, b, r.bcc, 2) << "\n";
    }
    if (!r.wcc.empty()) {
        out << "  WCC part correlations: " << part_correlations(a, b, r.wcc, 2) << "\n";
    }
}

// Progress lines go to stderr so piped record output stays clean.
std::function<void(const Progress&)> progress_printer(bool quiet)
{
    if (quiet) {
        return {};
    }
    return [](const Progress& p) {
        std::cerr << "progress: " << p.done << "/" << p.total << " pairs, " << static_cast<long long>(p.pairs_per_second)
                  << " pairs/s, eta " << static_cast<long long>(p.eta.count()) << " s\n";
    };
}

void print_run_summary(std::ostream& out, const RunSummary& s, const fs::path& path)
{
    out << "pairs scanned: " << s.pairs_scanned << "\n"
        << "records written: " << s.records_emitted << "\n"
        << "all-undefined pairs: " << s.undefined_pairs << "\n"
        << "wall time: " << format_real(s.wall_time.count(), 3) << " s\n"
        << "throughput: " << format_real(s.pairs_per_second, 0) << " pairs/s\n"
        << "output: " << path.string() << "\n";
}

std::vector<std::pair<std::string, std::string>> read_pair_list(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open pair list '" + path.string() + "'");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string a;
        std::string b;
        if (!(fields >> a >> b)) {
            throw ParseError("pair list line " + std::to_string(line_no) + ": expected two ids");
        }
        pairs.emplace_back(std::move(a), std::move(b));
    }
    return pairs;
}

void write_distribution(const fs::path& path, const SegmentTable& table, const CompositionSpec& spec, int precision)
{
    PartialFile file(path);
    DistributionWriter writer(file.stream(), precision);
    visit_compositions(table, spec, [&](std::span<const std::size_t> parts, const CompositionTotals& t) {
        writer.write(parts, detail::ratio_to_corr(t.css_a, t.css_b, t.css_ab));
    });
    file.commit();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compositional correlation between time series"};
    app.require_subcommand(1);
    app.fallthrough();

    int precision = default_precision;
    app.add_option("--precision", precision, "Decimal places in output files")
        ->check(CLI::Range(0, 17));

    // count
    std::size_t count_n = 0;
    std::size_t count_m = 0;
    auto* count_cmd = app.add_subcommand("count", "Number of compositions of N with parts >= M");
    count_cmd->add_option("n", count_n, "Series length")->required();
    count_cmd->add_option("m", count_m, "Minimum part length")->required();

    // pair
    SourceOptions pair_src;
    std::string pair_a;
    std::string pair_b;
    std::optional<std::size_t> pair_m;
    std::string pair_out;
    auto* pair_cmd = app.add_subcommand("pair", "Scan one pair and write its full distribution");
    pair_cmd->add_option("id_a", pair_a, "First series id")->required();
    pair_cmd->add_option("id_b", pair_b, "Second series id")->required();
    add_source_options(pair_cmd, pair_src, true);
    pair_cmd->add_option("--min-part,-m", pair_m, "Minimum part length (default 4; 2 for --function)");
    pair_cmd->add_option("--output,-o", pair_out, "Distribution file (default Output.<dataset>.<a>.<b>.n<N>.m<M>.txt)");

    // all-pairs
    SourceOptions all_src;
    std::optional<std::size_t> all_m;
    std::string all_out;
    std::string all_filter;
    std::string all_pairs_file;
    std::string all_dist_dir;
    std::size_t all_threads = default_threads();
    bool all_quiet = false;
    auto* all_cmd = app.add_subcommand("all-pairs", "Scan every unordered pair (or a pair list)");
    add_source_options(all_cmd, all_src, false);
    all_cmd->add_option("--min-part,-m", all_m, "Minimum part length (default 4)");
    all_cmd->add_option("--output,-o", all_out, "Record file (default Compositional.Correlations.<dataset>.m<M>.txt)");
    all_cmd->add_option("--filter", all_filter, "e.g. \"hcc>0.9 AND abs(pearson)<0.1\"");
    all_cmd->add_option("--pairs", all_pairs_file, "Scan only the id pairs listed in this file (two ids per line)");
    all_cmd->add_option("--emit-distribution", all_dist_dir,
                        "Also write the full distribution of every written record into this directory");
    all_cmd->add_option("--threads,-t", all_threads, "Worker threads (default: COMP_CORR_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    all_cmd->add_flag("--quiet,-q", all_quiet, "No progress lines");

    // time-corr
    SourceOptions time_src;
    std::optional<std::size_t> time_m;
    std::string time_out;
    std::string time_filter;
    std::size_t time_threads = default_threads();
    bool time_labels = false;
    bool time_quiet = false;
    auto* time_cmd = app.add_subcommand("time-corr", "Scan every series against time");
    add_source_options(time_cmd, time_src, false);
    time_cmd->add_option("--min-part,-m", time_m, "Minimum part length (default 2)");
    time_cmd->add_option("--output,-o", time_out, "Record file (default Time.Correlations.<dataset>.m<M>.txt)");
    time_cmd->add_option("--filter", time_filter, "Record filter, as for all-pairs");
    time_cmd->add_option("--threads,-t", time_threads, "Worker threads")->check(CLI::PositiveNumber);
    time_cmd->add_flag("--use-time-labels", time_labels, "Use the header's numeric time labels instead of indices");
    time_cmd->add_flag("--quiet,-q", time_quiet, "No progress lines");

    // synth
    SourceOptions synth_src;
    std::optional<std::size_t> synth_m;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a polynomial test dataset and scan y against x");
    add_source_options(synth_cmd, synth_src, true, false);
    synth_cmd->get_option("--function")->required();
    synth_cmd->add_option("--min-part,-m", synth_m, "Minimum part length (default 2)");
    synth_cmd->add_option("--output,-o", synth_out, "Write the x/y dataset to this file");

    // clouds
    SourceOptions cloud_src;
    std::string cloud_a = "y";
    std::string cloud_b = "x";
    std::optional<std::size_t> cloud_m;
    std::string cloud_out;
    auto* cloud_cmd = app.add_subcommand("clouds", "Write per-composition (r_c, var_a, var_b, cov) points");
    cloud_cmd->add_option("id_a", cloud_a, "First series id (default y)");
    cloud_cmd->add_option("id_b", cloud_b, "Second series id (default x)");
    add_source_options(cloud_cmd, cloud_src, true);
    cloud_cmd->add_option("--min-part,-m", cloud_m, "Minimum part length (default 4; 2 for --function)");
    cloud_cmd->add_option("--output,-o", cloud_out, "Cloud file (default Clouds.<dataset>.<a>.<b>.n<N>.m<M>.txt)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count_cmd) {
            std::cout << count_compositions(CompositionSpec(count_n, count_m)) << "\n";
            return 0;
        }

        if (*pair_cmd) {
            const Dataset dataset = load_source(pair_src);
            const std::size_t m =
                resolve_min_part(pair_m, pair_src.synthetic() ? default_time_min_part : default_pair_min_part, dataset);
            const TimeSeries& a = dataset.find(pair_a);
            const TimeSeries& b = dataset.find(pair_b);
            const CompositionSpec spec(dataset.length(), m);
            const SegmentTable table = SegmentTable::build(a, b, m);
            const fs::path out = pair_out.empty()
                                     ? fs::path(distribution_file_name(dataset.name(), a.id(), b.id(), spec.n(), m))
                                     : fs::path(pair_out);
            write_distribution(out, table, spec, precision);
            print_scan_summary(std::cout, a, b, scan(table, spec), m, 4);
            std::cout << "  distribution: " << out.string() << "\n";
            return 0;
        }

        if (*all_cmd) {
            const Dataset dataset = load_source(all_src);
            JobConfig config;
            config.min_part = resolve_min_part(all_m, default_pair_min_part, dataset);
            config.filter = RecordFilter::parse(all_filter);
            config.worker_count = all_threads;
            config.progress = progress_printer(all_quiet);
            config.cancel = &g_interrupted;
            std::signal(SIGINT, on_interrupt);

            const fs::path out =
                all_out.empty() ? fs::path("Compositional.Correlations." + dataset.name() + ".m" +
                                           std::to_string(config.min_part) + ".txt")
                                : fs::path(all_out);
            PartialFile file(out);
            RecordWriter writer(file.stream(), precision);
            const CompositionSpec spec(dataset.length(), config.min_part);
            auto sink = [&](const PairRecord& r) {
                writer.write(r);
                if (!all_dist_dir.empty()) {
                    const TimeSeries& a = dataset.find(r.id_a);
                    const TimeSeries& b = dataset.find(r.id_b);
                    write_distribution(fs::path(all_dist_dir) / distribution_file_name(dataset.name(), a.id(), b.id(),
                                                                                     spec.n(), spec.m()),
                                       SegmentTable::build(a, b, spec.m()), spec, precision);
                }
            };
            const RunSummary summary =
                all_pairs_file.empty() ? run_all_pairs(dataset, config, sink)
                                       : run_pair_list(dataset, read_pair_list(all_pairs_file), config, sink);
            if (summary.cancelled) {
                std::cerr << "interrupted; partial output left in " << out.string() << ".partial\n";
                return 130;
            }
            file.commit();
            print_run_summary(std::cout, summary, out);
            return 0;
        }

        if (*time_cmd) {
            const Dataset dataset = load_source(time_src);
            JobConfig config;
            config.min_part = resolve_min_part(time_m, default_time_min_part, dataset);
            config.filter = RecordFilter::parse(time_filter);
            config.worker_count = time_threads;
            config.progress = progress_printer(time_quiet);
            config.cancel = &g_interrupted;
            config.time_source = time_labels ? TimeSource::labels : TimeSource::index;
            if (time_labels && dataset.time_labels() && !is_affinely_spaced(*dataset.time_labels())) {
                std::cerr << "warning: time labels are not evenly spaced; results differ from an index scan\n";
            }
            std::signal(SIGINT, on_interrupt);

            const fs::path out = time_out.empty() ? fs::path("Time.Correlations." + dataset.name() + ".m" +
                                                             std::to_string(config.min_part) + ".txt")
                                                  : fs::path(time_out);
            PartialFile file(out);
            RecordWriter writer(file.stream(), precision);
            const RunSummary summary = run_versus_time(dataset, config, [&](const PairRecord& r) { writer.write(r); });
            if (summary.cancelled) {
                std::cerr << "interrupted; partial output left in " << out.string() << ".partial\n";
                return 130;
            }
            file.commit();
            print_run_summary(std::cout, summary, out);
            return 0;
        }

        if (*synth_cmd) {
            const SynthSpec spec = synth_spec(synth_src);
            const Dataset dataset = synth_dataset(spec);
            const std::size_t m = resolve_min_part(synth_m, default_time_min_part, dataset);
            if (!synth_out.empty()) {
                PartialFile file(synth_out);
                write_dataset(file.stream(), dataset);
                file.commit();
            }
            std::cout << to_string(spec.function) << " on [" << spec.x_min << ", " << spec.x_max << "], "
                      << spec.pieces << " pieces\n";
            print_scan_summary(std::cout, dataset.find("y"), dataset.find("x"),
                               run_pair(dataset, "y", "x", m), m, 4);
            return 0;
        }

        if (*cloud_cmd) {
            const Dataset dataset = load_source(cloud_src);
            const std::size_t m = resolve_min_part(
                cloud_m, cloud_src.synthetic() ? default_time_min_part : default_pair_min_part, dataset);
            const TimeSeries& a = dataset.find(cloud_a);
            const TimeSeries& b = dataset.find(cloud_b);
            const CompositionSpec spec(dataset.length(), m);
            const SegmentTable table = SegmentTable::build(a, b, m);
            const fs::path out =
                cloud_out.empty() ? fs::path("Clouds." + dataset.name() + "." + a.id() + "." + b.id() + ".n" +
                                             std::to_string(spec.n()) + ".m" + std::to_string(m) + ".txt")
                                  : fs::path(cloud_out);
            PartialFile file(out);
            CloudWriter writer(file.stream(), precision);
            const double inv_n = 1.0 / static_cast<double>(spec.n());
            std::uint64_t rows = 0;
            visit_compositions(table, spec, [&](std::span<const std::size_t>, const CompositionTotals& t) {
                writer.write({detail::ratio_to_corr(t.css_a, t.css_b, t.css_ab), t.css_a * inv_n, t.css_b * inv_n,
                              t.css_ab * inv_n});
                ++rows;
            });
            file.commit();
            std::cout << rows << " cloud points written to " << out.string() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
