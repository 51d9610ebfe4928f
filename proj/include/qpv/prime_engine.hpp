#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qpv/detail/parallel.hpp"
#include "qpv/interval.hpp"
#include "qpv/residues.hpp"

namespace qpv {

struct SieveConfig {
    std::uint64_t limit = std::uint64_t{1} << 30;  // exclusive
    std::uint64_t segment_size = std::uint64_t{1} << 20;
    unsigned workers = 1;
    bool deterministic = true;
};

inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 40;

/// A Chebyshev-type sum restricted to one residue class mod 24.
struct ChebyshevValue {
    std::uint64_t z = 0;
    std::uint32_t modulus = kModulus;
    unsigned residue = 0;
    Interval value;
};

/// Per-residue aggregates over the primes p <= z, gathered in one pass.
struct ClassStatistics {
    struct PerClass {
        std::uint64_t count = 0;
        CompensatedSum theta;         // sum log p
        CompensatedSum prime_powers;  // sum log p over p^k <= z, k >= 2, p^k in the class
        CompensatedSum log_over_p;    // sum (log p) / p
        CompensatedSum reciprocal;    // sum 1/p
        CompensatedSum euler_log;     // sum -log(1 - 1/p)
    };
    std::uint64_t z = 0;
    std::array<PerClass, kModulus> by_class;

    std::uint64_t count(ResidueSet classes) const;
    Interval theta(ResidueSet classes) const;
    /// psi over the classes: prime terms plus prime-power terms.
    Interval psi(ResidueSet classes) const;
    Interval log_over_p(ResidueSet classes) const;
    Interval reciprocal(ResidueSet classes) const;
    Interval euler_log(ResidueSet classes) const;
};

/// Segmented odd-only sieve of Eratosthenes with residue-class Chebyshev and
/// Mertens aggregates.
class PrimeEngine {
public:
    explicit PrimeEngine(SieveConfig config);

    const SieveConfig& config() const { return config_; }

    /// Primes in [lo, hi), ascending.
    std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) const;
    /// Number of primes <= x.
    std::uint64_t pi(std::uint64_t x) const;

    ChebyshevValue psi_mod(std::uint64_t z, unsigned l) const;
    ChebyshevValue theta_mod(std::uint64_t z, unsigned l) const;
    /// Unrestricted theta(z).
    Interval theta(std::uint64_t z) const;
    Interval sum_logp_over_p_mod(std::uint64_t z, ResidueSet classes) const;
    Interval sum_recip_mod(std::uint64_t z, ResidueSet classes) const;
    /// sum_{p <= z, p = l (24)} 1/p - (1/8) log log z.
    Interval mertens_residual(std::uint64_t z, unsigned l) const;
    /// prod_{p <= z, p mod 24 in classes} (1 - 1/p)^-1.
    Interval euler_product_classes(std::uint64_t z, ResidueSet classes) const;

    ClassStatistics class_statistics(std::uint64_t z) const;

    /// Number of segments covering [lo, hi) and the bounds of segment i.
    std::size_t segment_count(std::uint64_t lo, std::uint64_t hi) const;
    std::pair<std::uint64_t, std::uint64_t> segment_bounds(std::uint64_t lo, std::uint64_t hi, std::size_t i) const;

    /// Sieves the primes of one segment [lo, hi) into `out` (cleared first).
    void sieve_segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) const;

    /// Maps every segment of [lo, hi) through visit(seg_lo, seg_hi, primes)
    /// on the configured workers and folds the results in ascending segment
    /// order with consume(result).
    template <class Visit, class Consume>
    void for_each_segment(std::uint64_t lo, std::uint64_t hi, Visit&& visit, Consume&& consume) const {
        check_traversal(lo, hi);
        const std::size_t n = segment_count(lo, hi);
        detail::ordered_map_consume(
            n, config_.workers,
            [&](std::size_t i) {
                const auto [a, b] = segment_bounds(lo, hi, i);
                std::vector<std::uint64_t> primes;
                sieve_segment(a, b, primes);
                return visit(a, b, std::span<const std::uint64_t>(primes));
            },
            [&](std::size_t, auto&& result) { consume(std::move(result)); });
    }

    /// Throws Capacity unless 0 <= lo <= hi <= limit.
    void check_range(std::uint64_t lo, std::uint64_t hi) const;

private:
    // Traversals may reach limit + 1 so that inclusive queries at z = limit work.
    void check_traversal(std::uint64_t lo, std::uint64_t hi) const;

    SieveConfig config_;
    std::vector<std::uint32_t> base_primes_;
};

/// Plain single-array sieve of Eratosthenes up to `limit` (exclusive); the
/// independent second implementation used for cross-checks.
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit);

}  // namespace qpv
