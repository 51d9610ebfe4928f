#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qpv/factorizer.hpp"
#include "qpv/prime_class.hpp"
#include "qpv/prime_engine.hpp"

namespace qpv {

/// Counts over the primes of a half-open range [lo, hi).
///
/// pi_plus + pi_minus + excluded + not_candidate equals the number of primes
/// in the range; for lo <= 2 that is pi(hi - 1), with 2 counted as
/// NotCandidate.
struct ClassificationSummary {
    std::uint64_t lo = 0;
    std::uint64_t limit = 0;
    std::uint64_t pi_plus = 0;
    std::uint64_t pi_minus = 0;
    std::uint64_t excluded = 0;
    std::uint64_t not_candidate = 0;

    std::uint64_t total() const { return pi_plus + pi_minus + excluded + not_candidate; }
    std::uint64_t q_total() const { return pi_plus + pi_minus; }
    void add(const PrimeClassRecord& r);
    void merge(const ClassificationSummary& other);
    friend bool operator==(const ClassificationSummary&, const ClassificationSummary&) = default;
};

enum class QSign { Plus, Minus, Both };

struct ClassifyOptions {
    ClassifyMode mode = ClassifyMode::EarlyExit;
    /// Called with each segment's records, in ascending order. Optional.
    std::function<void(std::span<const PrimeClassRecord>)> on_records;
};

/// Classifies every prime in [lo, hi) using the engine's worker budget.
ClassificationSummary classify_range(const PrimeEngine& engine, std::uint64_t lo, std::uint64_t hi,
                                     const ClassifyOptions& options = {});

/// Classifies the primes of one segment (already sieved).
std::vector<PrimeClassRecord> classify_primes(std::span<const std::uint64_t> primes, ClassifyMode mode);

/// Number of Q-primes p <= x of the requested sign.
std::uint64_t q_pi(const PrimeEngine& engine, std::uint64_t x, QSign sign,
                   ClassifyMode mode = ClassifyMode::EarlyExit);

/// CSV header and row for the record schema p,residue8,residue24,q_class,witness.
const char* record_csv_header();
std::string record_csv_row(const PrimeClassRecord& r);

}  // namespace qpv
