#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "qpv/factorizer.hpp"
#include "qpv/interval.hpp"
#include "qpv/prime_class.hpp"
#include "qpv/prime_engine.hpp"

namespace qpv {

/// Aggregates over the primes of [range_begin, processed_limit).
///
/// The Q-prime fields feed the product and theta bounds of the squarefree
/// lower-bound pipeline; the all-prime fields are kept for cross-checks.
struct AccumulatorSnapshot {
    std::uint64_t range_begin = 0;
    std::uint64_t processed_limit = 0;
    std::uint64_t q_count = 0;
    std::uint64_t prime_count = 0;
    Interval log_product_ratio;  // sum over Q of log((p^2+p+1)/p^2)
    Interval theta_q;            // sum over Q of log p
    Interval theta_all;          // sum over all primes of log p
    std::string config_hash;

    /// Identity element for merge: covers no range.
    static AccumulatorSnapshot empty() { return {}; }
    bool is_empty() const { return range_begin == processed_limit; }
    /// Rigorous enclosure of prod (p^2+p+1)/p^2 = exp(log_product_ratio).
    Interval product_ratio() const { return exp(log_product_ratio); }

    friend bool operator==(const AccumulatorSnapshot& a, const AccumulatorSnapshot& b);
};

/// Incremental accumulation over an ascending record stream.
class Accumulator {
public:
    Accumulator(std::uint64_t range_begin, std::string config_hash);

    /// Throws Integrity on a record that is not strictly ascending or lies
    /// below the range start.
    void add(const PrimeClassRecord& record);
    void merge(const Accumulator& later);
    /// Snapshot covering [range_begin, upto); every added prime must be < upto.
    AccumulatorSnapshot finish(std::uint64_t upto) const;

private:
    std::uint64_t range_begin_;
    std::string config_hash_;
    std::optional<std::uint64_t> last_;
    std::uint64_t q_count_ = 0;
    std::uint64_t prime_count_ = 0;
    CompensatedSum ratio_;
    CompensatedSum theta_q_;
    CompensatedSum theta_all_;
};

/// Accumulates a complete record stream for [begin, upto). The stream is
/// checked against the engine's sieve: a missing or extra prime raises an
/// Integrity error.
AccumulatorSnapshot accumulate(const PrimeEngine& engine, std::span<const PrimeClassRecord> records,
                               std::uint64_t begin, std::uint64_t upto, const std::string& config_hash);

/// Joins snapshots of adjacent ranges. In deterministic mode `b` must follow
/// `a`; otherwise either adjacency order is accepted.
AccumulatorSnapshot merge(const AccumulatorSnapshot& a, const AccumulatorSnapshot& b, bool deterministic = true);

/// Granularity of checkpoint records along the prime range.
inline constexpr std::uint64_t kCheckpointChunk = std::uint64_t{1} << 24;

/// Hash identifying the configuration that determines accumulated endpoints
/// (segment layout and checkpoint granularity; not the limit, so shorter runs
/// can be extended).
std::string accumulation_config_hash(std::uint64_t segment_size, std::uint64_t chunk = kCheckpointChunk);

void save_checkpoint(const AccumulatorSnapshot& snapshot, const std::string& path);
/// Loads the last complete record group. Throws Parse (with line number) on a
/// malformed file and Integrity if `expected_hash` is given and differs.
AccumulatorSnapshot load_checkpoint(const std::string& path,
                                    const std::optional<std::string>& expected_hash = std::nullopt);

struct AccumulationOptions {
    ClassifyMode mode = ClassifyMode::EarlyExit;
    std::optional<std::string> checkpoint_path;
    bool resume = false;
    /// Stop after this many new chunks (simulates an interrupted run).
    std::optional<std::uint64_t> max_chunks;
    std::function<void(const AccumulatorSnapshot&)> on_chunk;
};

/// Classifies and accumulates every prime below `limit`, chunk by chunk,
/// appending a checkpoint record group after each chunk when a path is set.
AccumulatorSnapshot run_accumulation(const PrimeEngine& engine, std::uint64_t limit,
                                     const AccumulationOptions& options = {});

}  // namespace qpv
