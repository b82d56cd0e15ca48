#pragma once

#include "compcorr/comp_corr.hpp"
#include "compcorr/dataset.hpp"
#include "compcorr/filter.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace compcorr {

/// Default minimum part length for pair scans.
inline constexpr std::size_t default_pair_min_part = 4;
/// Default minimum part length for scans against time.
inline constexpr std::size_t default_time_min_part = 2;

/// Summary row for one scanned pair.
struct PairRecord {
    std::string id_a;
    std::string id_b;
    CorrValue hcc;
    CorrValue pearson;
    CorrValue lcc;
    Composition bcc;
    Composition wcc;
};

PairRecord make_record(std::string id_a, std::string id_b, ScanResult&& result);

struct Progress {
    std::uint64_t done = 0;
    std::uint64_t total = 0;
    double pairs_per_second = 0.0;
    std::chrono::duration<double> eta{0.0};
};

enum class TimeSource {
    index,   // 0, 1, ..., n-1
    labels,  // the dataset's time labels
};

struct JobConfig {
    std::size_t min_part = default_pair_min_part;
    RecordFilter filter;
    std::size_t worker_count = 1;
    /// Pairs handed to a worker at a time.
    std::size_t chunk_size = 2048;
    /// Called from the calling thread every `progress_interval` pairs.
    std::function<void(const Progress&)> progress;
    std::uint64_t progress_interval = 10'000;
    /// Checked between chunks; set to request cancellation.
    const std::atomic<bool>* cancel = nullptr;
    TimeSource time_source = TimeSource::index;

    /// Throws InvalidArgument for worker_count == 0, chunk_size == 0 or
    /// min_part < 2.
    void validate() const;
};

struct RunSummary {
    std::uint64_t pairs_scanned = 0;
    std::uint64_t records_emitted = 0;
    /// Pairs whose every compositional correlation was Undefined.
    std::uint64_t undefined_pairs = 0;
    std::chrono::duration<double> wall_time{0.0};
    double pairs_per_second = 0.0;
    std::vector<std::uint64_t> pairs_per_worker;
    bool cancelled = false;
};

/// Receives records in pair-index order on the calling thread. An exception
/// thrown by the sink aborts the run and propagates after workers stop.
using RecordSink = std::function<void(const PairRecord&)>;

/// Scans all S(S-1)/2 unordered pairs (i < j) of the dataset. Records that
/// pass the filter reach the sink ordered by (i, j) whatever the number of
/// workers.
RunSummary run_all_pairs(const Dataset& dataset, const JobConfig& config, const RecordSink& sink);

/// Scans an explicit list of (id_a, id_b) pairs; records in list order.
/// Unknown ids throw LookupError before any work.
RunSummary run_pair_list(const Dataset& dataset, const std::vector<std::pair<std::string, std::string>>& pairs,
                         const JobConfig& config, const RecordSink& sink);

/// Scans every series against time (index 0..n-1, or the dataset's time
/// labels when config.time_source is labels). One record per series with
/// id_b = "time", in dataset order, filter applied.
RunSummary run_versus_time(const Dataset& dataset, const JobConfig& config, const RecordSink& sink);
std::vector<PairRecord> run_versus_time(const Dataset& dataset, const JobConfig& config);

/// Full scan of one pair looked up by id. Self-pairs are allowed.
ScanResult run_pair(const Dataset& dataset, std::string_view id_a, std::string_view id_b, std::size_t min_part,
                    const ScanOptions& options = {});

/// Maps a linear index over pairs (0, 1), (0, 2), ..., (1, 2), ... to (i, j).
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t index, std::size_t series_count);

/// True when labels are positive-affine in their index (t_i = t_0 + i*d,
/// d > 0) within a relative tolerance.
bool is_affinely_spaced(std::span<const double> labels, double rel_tol = 1e-9);

} // namespace compcorr
