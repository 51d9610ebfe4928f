#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qpv/prime_class.hpp"
#include "qpv/residues.hpp"

namespace qpv {

struct FactorList {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;  // ascending primes

    friend bool operator==(const FactorList&, const FactorList&) = default;
};

struct ClassWitness {
    bool found = false;
    std::optional<std::uint64_t> witness_prime;
    std::optional<unsigned> witness_class;
};

/// Deterministic for all 64-bit n.
bool is_prime(std::uint64_t n);

/// Complete factorization of 1 <= n < 2^63: trial division by primes below
/// 10^4, then Pollard-Brent rho on composite cofactors.
FactorList factor(std::uint64_t n);

/// Nontrivial divisor of an odd composite n (Pollard-Brent). Throws Internal
/// after the retry cap.
std::uint64_t rho_split(std::uint64_t n);

/// Trial divisor over the primes of a residue-class set up to a threshold,
/// using multiply-by-inverse divisibility tests.
class ClassTrialDivider {
public:
    ClassTrialDivider(ResidueSet classes, std::uint64_t threshold);

    /// Smallest listed prime dividing n, if any.
    std::optional<std::uint64_t> smallest_divisor(std::uint64_t n) const;

    ResidueSet classes() const { return classes_; }
    std::uint64_t threshold() const { return threshold_; }
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        std::uint64_t prime;
        std::uint64_t inverse;  // prime^-1 mod 2^64
        std::uint64_t limit;    // floor((2^64 - 1) / prime)
    };
    ResidueSet classes_;
    std::uint64_t threshold_;
    std::vector<Entry> entries_;
};

inline constexpr std::uint64_t kDefaultClassThreshold = 100000;

/// Shared divider for the forbidden classes {7, 13} with T = 10^5.
const ClassTrialDivider& default_forbidden_divider();

/// Smallest prime factor of n lying in `classes`: trial division over the
/// class primes up to the divider's threshold, then full factorization.
ClassWitness has_factor_in_classes(std::uint64_t n, const ClassTrialDivider& divider);
ClassWitness has_factor_in_classes(std::uint64_t n, ResidueSet classes);

enum class ClassifyMode {
    EarlyExit,    // class trial division first, factor only the survivors
    FullFactor,   // always factor p^2+p+1 completely
};

/// Classifies a prime by p mod 8 and the forbidden-class factors of p^2+p+1.
PrimeClassRecord classify_prime(std::uint64_t p, ClassifyMode mode = ClassifyMode::EarlyExit);
PrimeClassRecord classify_prime(std::uint64_t p, ClassifyMode mode, const ClassTrialDivider& divider);

}  // namespace qpv
