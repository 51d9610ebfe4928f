#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpv/accumulators.hpp"
#include "qpv/bound_report.hpp"
#include "qpv/interval.hpp"

namespace qpv {

inline constexpr std::uint64_t kQLimit = std::uint64_t{1} << 29;

/// Lower bound on the largest prime factor and on the size of N, assembled
/// from the accumulated Q-prime aggregates below 2^29.
struct Theorem3Result {
    std::optional<std::uint64_t> P0;  // empty when the product already reaches 2 at 2^29
    Interval log_m_lower;
    Interval log_N_lower;
    std::uint64_t omega_lower = 1;
    std::vector<BoundReport> component_reports;

    nlohmann::ordered_json to_json() const;
};

/// (log P/(29 log 2))(1 + 1/(121945 log^3 2))(1 + 1/(5 log^3 P)), the upper
/// bound for prod_{2^29 < p <= P} p/(p-1). Domain error for P <= 2^29.
Interval dusart_ratio_bound(std::uint64_t P);

/// Smallest integer X > 2^29 with q * dusart_ratio_bound(X) >= 2.
/// Empty when q >= 2 or the bound is already met at 2^29 + 1.
/// Domain error for q <= 1.
std::optional<std::uint64_t> product_crossing(double q_product_upper);

/// Smallest prime not below product_crossing(q).
std::optional<std::uint64_t> find_P0(double q_product_upper);

/// P0 - P0/(100 log^2 P0) - 536842885.9.
Interval theta_gap_lower(std::uint64_t P0);

/// Integrity error unless the snapshot covers exactly the primes below 2^29.
/// `pi_2_29` is the exact prime count below 2^29.
Theorem3Result assemble(const AccumulatorSnapshot& snapshot, std::uint64_t pi_2_29);

}  // namespace qpv
