#include "compcorr/pairs_engine.hpp"

#include "compcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace compcorr {

PairRecord make_record(std::string id_a, std::string id_b, ScanResult&& result)
{
    return PairRecord{std::move(id_a),       std::move(id_b),         result.hcc, result.pearson, result.lcc,
                      std::move(result.bcc), std::move(result.wcc)};
}

void JobConfig::validate() const
{
    if (worker_count == 0) {
        throw InvalidArgument("worker count must be at least 1");
    }
    if (chunk_size == 0) {
        throw InvalidArgument("chunk size must be at least 1");
    }
    if (min_part < 2) {
        throw InvalidArgument("minimum part length must be at least 2 (got " + std::to_string(min_part) + ")");
    }
    if (progress && progress_interval == 0) {
        throw InvalidArgument("progress interval must be at least 1");
    }
}

std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t index, std::size_t series_count)
{
    const std::uint64_t s = series_count;
    // Pairs preceding row i: i * (2s - i - 1) / 2.
    auto before = [s](std::uint64_t i) { return i * (2 * s - i - 1) / 2; };
    if (s < 2 || index >= before(s - 1)) {
        throw InvalidArgument("pair index " + std::to_string(index) + " out of range for " +
                              std::to_string(series_count) + " series");
    }
    std::uint64_t lo = 0;
    std::uint64_t hi = s - 1;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (before(mid) <= index) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const std::uint64_t j = lo + 1 + (index - before(lo));
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(j)};
}

bool is_affinely_spaced(std::span<const double> labels, double rel_tol)
{
    if (labels.size() < 2) {
        return false;
    }
    const double step = (labels.back() - labels.front()) / static_cast<double>(labels.size() - 1);
    if (!(step > 0.0)) {
        return false;
    }
    const double scale = std::max(std::abs(labels.front()), std::abs(labels.back()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double expected = labels.front() + step * static_cast<double>(i);
        if (std::abs(labels[i] - expected) > rel_tol * std::max(scale, step)) {
            return false;
        }
    }
    return true;
}

namespace {

// One unit of scanned work: which series the record is about, and its scan.
struct ScannedPair {
    std::size_t a;
    std::size_t b;
    ScanResult result;
};

struct ChunkOutput {
    std::vector<ScannedPair> kept;
    std::uint64_t pairs = 0;
    std::uint64_t undefined = 0;
};

std::vector<SeriesProfile> build_profiles(const Dataset& dataset, std::size_t min_part)
{
    std::vector<SeriesProfile> profiles;
    profiles.reserve(dataset.size());
    for (const auto& s : dataset.series()) {
        profiles.emplace_back(s, min_part);
    }
    return profiles;
}

// Runs `total` indexed scans on worker threads and hands the kept ones to
// `emit` in index order on the calling thread.
//
// Work is claimed in contiguous chunks through an atomic counter. Finished
// chunks park in a map until every earlier chunk has been written; workers
// stall when they get too far ahead of the writer so memory stays bounded.
template <class ScanFn, class EmitFn>
RunSummary run_indexed(std::uint64_t total, const JobConfig& config, ScanFn&& scan_one, EmitFn&& emit)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    const std::uint64_t chunk = config.chunk_size;
    const std::uint64_t chunk_count = (total + chunk - 1) / chunk;
    const std::size_t workers = static_cast<std::size_t>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.worker_count, std::max<std::uint64_t>(chunk_count, 1))));
    const std::uint64_t max_ahead = 4 * static_cast<std::uint64_t>(workers);

    std::mutex mutex;
    std::condition_variable ready;    // writer waits for chunks
    std::condition_variable drained;  // workers wait for the writer
    std::map<std::uint64_t, ChunkOutput> finished;
    std::uint64_t next_claim = 0;
    std::uint64_t next_write = 0;
    bool stop = false;
    std::exception_ptr worker_error;

    RunSummary summary;
    summary.pairs_per_worker.assign(workers, 0);

    auto cancelled = [&] { return config.cancel && config.cancel->load(std::memory_order_relaxed); };

    auto worker = [&](std::size_t w) {
        SegmentTable scratch;
        try {
            while (true) {
                std::uint64_t id;
                {
                    std::unique_lock lock(mutex);
                    drained.wait(lock, [&] { return stop || next_claim < next_write + max_ahead; });
                    if (stop || next_claim >= chunk_count || cancelled()) {
                        return;
                    }
                    id = next_claim++;
                }
                ChunkOutput out;
                const std::uint64_t first = id * chunk;
                const std::uint64_t last = std::min(total, first + chunk);
                for (std::uint64_t i = first; i < last; ++i) {
                    std::optional<ScannedPair> scanned = scan_one(i, i == first, scratch, out.undefined);
                    ++out.pairs;
                    if (scanned) {
                        out.kept.push_back(std::move(*scanned));
                    }
                }
                {
                    std::lock_guard lock(mutex);
                    summary.pairs_per_worker[w] += out.pairs;
                    finished.emplace(id, std::move(out));
                }
                ready.notify_one();
            }
        } catch (...) {
            {
                std::lock_guard lock(mutex);
                if (!worker_error) {
                    worker_error = std::current_exception();
                }
                stop = true;
            }
            ready.notify_all();
            drained.notify_all();
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back(worker, w);
    }

    auto shutdown = [&] {
        {
            std::lock_guard lock(mutex);
            stop = true;
        }
        drained.notify_all();
        for (auto& t : threads) {
            t.join();
        }
    };

    std::uint64_t last_report = 0;
    try {
        while (next_write < chunk_count) {
            ChunkOutput out;
            {
                std::unique_lock lock(mutex);
                ready.wait_for(lock, std::chrono::milliseconds(50), [&] {
                    return stop || finished.count(next_write) != 0;
                });
                if (worker_error) {
                    break;
                }
                auto it = finished.find(next_write);
                if (it == finished.end()) {
                    if (cancelled() && next_claim <= next_write) {
                        summary.cancelled = true;
                        break;
                    }
                    continue;
                }
                out = std::move(it->second);
                finished.erase(it);
                ++next_write;
            }
            drained.notify_all();

            summary.pairs_scanned += out.pairs;
            summary.undefined_pairs += out.undefined;
            for (auto& scanned : out.kept) {
                emit(scanned);
                ++summary.records_emitted;
            }

            if (config.progress && summary.pairs_scanned - last_report >= config.progress_interval) {
                last_report = summary.pairs_scanned;
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
                Progress p;
                p.done = summary.pairs_scanned;
                p.total = total;
                p.pairs_per_second = elapsed > 0.0 ? static_cast<double>(p.done) / elapsed : 0.0;
                p.eta = std::chrono::duration<double>(
                    p.pairs_per_second > 0.0 ? static_cast<double>(total - p.done) / p.pairs_per_second : 0.0);
                config.progress(p);
            }
        }
    } catch (...) {
        shutdown();
        throw;
    }
    shutdown();
    if (worker_error) {
        std::rethrow_exception(worker_error);
    }
    if (summary.pairs_scanned < total) {
        summary.cancelled = true;
    }

    summary.wall_time = std::chrono::steady_clock::now() - started;
    const double secs = summary.wall_time.count();
    summary.pairs_per_second = secs > 0.0 ? static_cast<double>(summary.pairs_scanned) / secs : 0.0;
    return summary;
}

void check_min_part(const Dataset& dataset, const JobConfig& config)
{
    config.validate();
    if (dataset.length() < config.min_part) {
        throw InvalidArgument("series length " + std::to_string(dataset.length()) +
                              " is shorter than the minimum part length " + std::to_string(config.min_part));
    }
}

} // namespace

RunSummary run_all_pairs(const Dataset& dataset, const JobConfig& config, const RecordSink& sink)
{
    check_min_part(dataset, config);
    const CompositionSpec spec(dataset.length(), config.min_part);
    const auto profiles = build_profiles(dataset, config.min_part);
    const std::uint64_t s = dataset.size();
    const std::uint64_t total = s * (s - 1) / 2;

    // Per-thread (i, j) cursor; advanced within a chunk, re-seeded at each
    // chunk start.
    struct Cursor {
        std::size_t i = 0;
        std::size_t j = 0;
    };

    return run_indexed(
        total, config,
        [&](std::uint64_t index, bool chunk_start, SegmentTable& table,
            std::uint64_t& undefined) -> std::optional<ScannedPair> {
            thread_local Cursor cursor;
            if (chunk_start) {
                std::tie(cursor.i, cursor.j) = pair_from_index(index, dataset.size());
            } else if (cursor.j + 1 < dataset.size()) {
                ++cursor.j;
            } else {
                ++cursor.i;
                cursor.j = cursor.i + 1;
            }

            table.reset(profiles[cursor.i], profiles[cursor.j]);
            ScanResult r = scan(table, spec);
            if (!r.hcc) {
                ++undefined;
            }
            if (!config.filter.accepts(r.hcc, r.pearson, r.lcc)) {
                return std::nullopt;
            }
            return ScannedPair{cursor.i, cursor.j, std::move(r)};
        },
        [&](ScannedPair& p) {
            sink(make_record(dataset[p.a].id(), dataset[p.b].id(), std::move(p.result)));
        });
}

RunSummary run_pair_list(const Dataset& dataset, const std::vector<std::pair<std::string, std::string>>& pairs,
                         const JobConfig& config, const RecordSink& sink)
{
    check_min_part(dataset, config);
    std::vector<std::pair<std::size_t, std::size_t>> resolved;
    resolved.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        resolved.emplace_back(dataset.index_of(a), dataset.index_of(b));
    }
    const CompositionSpec spec(dataset.length(), config.min_part);
    const auto profiles = build_profiles(dataset, config.min_part);

    return run_indexed(
        resolved.size(), config,
        [&](std::uint64_t index, bool, SegmentTable& table, std::uint64_t& undefined) -> std::optional<ScannedPair> {
            const auto [i, j] = resolved[index];
            table.reset(profiles[i], profiles[j]);
            ScanResult r = scan(table, spec);
            if (!r.hcc) {
                ++undefined;
            }
            if (!config.filter.accepts(r.hcc, r.pearson, r.lcc)) {
                return std::nullopt;
            }
            return ScannedPair{i, j, std::move(r)};
        },
        [&](ScannedPair& p) {
            sink(make_record(dataset[p.a].id(), dataset[p.b].id(), std::move(p.result)));
        });
}

RunSummary run_versus_time(const Dataset& dataset, const JobConfig& config, const RecordSink& sink)
{
    check_min_part(dataset, config);
    const std::size_t n = dataset.length();
    std::vector<double> time(n);
    if (config.time_source == TimeSource::labels) {
        if (!dataset.time_labels()) {
            throw InvalidArgument("dataset has no time labels");
        }
        time = *dataset.time_labels();
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            time[i] = static_cast<double>(i);
        }
    }
    const CompositionSpec spec(n, config.min_part);
    const auto profiles = build_profiles(dataset, config.min_part);
    const SeriesProfile time_profile(time, config.min_part);

    return run_indexed(
        dataset.size(), config,
        [&](std::uint64_t index, bool, SegmentTable& table, std::uint64_t& undefined) -> std::optional<ScannedPair> {
            table.reset(profiles[index], time_profile);
            ScanResult r = scan(table, spec);
            if (!r.hcc) {
                ++undefined;
            }
            if (!config.filter.accepts(r.hcc, r.pearson, r.lcc)) {
                return std::nullopt;
            }
            return ScannedPair{static_cast<std::size_t>(index), 0, std::move(r)};
        },
        [&](ScannedPair& p) { sink(make_record(dataset[p.a].id(), "time", std::move(p.result))); });
}

std::vector<PairRecord> run_versus_time(const Dataset& dataset, const JobConfig& config)
{
    std::vector<PairRecord> records;
    run_versus_time(dataset, config, [&](const PairRecord& r) { records.push_back(r); });
    return records;
}

ScanResult run_pair(const Dataset& dataset, std::string_view id_a, std::string_view id_b, std::size_t min_part,
                    const ScanOptions& options)
{
    const TimeSeries& a = dataset.find(id_a);
    const TimeSeries& b = dataset.find(id_b);
    const CompositionSpec spec(dataset.length(), min_part);
    return scan(a, b, spec, options);
}

} // namespace compcorr
