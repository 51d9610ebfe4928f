#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"
#include "qpv/factorizer.hpp"

namespace qpv {

/// N = p_1^(2 a_1) ... p_t^(2 a_t).
struct CandidateShape {
    std::vector<std::uint64_t> primes;
    std::vector<std::uint64_t> a;

    static CandidateShape uniform(std::vector<std::uint64_t> primes, std::uint64_t a);
    /// Domain error unless the primes are distinct odd primes, each a >= 1,
    /// and the lists have equal nonzero length.
    void validate() const;
};

struct FailedCondition {
    std::string id;
    std::string paper_anchor;
    nlohmann::ordered_json witness;
};

struct FilterVerdict {
    std::vector<FailedCondition> failed_conditions;

    bool passed() const { return failed_conditions.empty(); }
    bool failed(std::string_view id) const;
    nlohmann::ordered_json to_json() const;
};

/// Product over the factors of (p^(e+1) - 1)/(p - 1).
mpz_class sigma(const FactorList& f);
/// sigma(n) == 2n + 1; n must be below 2^63.
bool is_quasiperfect(std::uint64_t n);

inline constexpr std::uint64_t kMaxSearchM = 10000000;

/// Every N = m^2 with odd m <= m_limit (squarefree m only if requested) and
/// sigma(N) = 2N + 1. Capacity error above 10^7.
std::vector<std::uint64_t> search_quasiperfect(std::uint64_t m_limit, bool squarefree_only = false);

/// Every prime factor of sigma(N) must be 1 or 3 (mod 8).
FilterVerdict cattaneo_filter(const FactorList& sigma_factors);
/// Some p_j = 1 (mod 4) whose 2a_j + 1 has no divisor = 5 (mod 8).
FilterVerdict thm1_general_filter(const CandidateShape& shape);
/// All exponents equal to 2a: primes 1 or 7 (mod 8), 2a + 1 = 3 (mod 8) with
/// prime factors 1 or 3 (mod 8), 3 | 2a + 1, and a in {1, 3, 5, 9, 11} (mod 12).
FilterVerdict thm1_equal_exponent_filter(const std::vector<std::uint64_t>& primes, std::uint64_t a);
/// Every prime must classify as QPlus or QMinus.
FilterVerdict q_membership_filter(const std::vector<std::uint64_t>& primes);

inline constexpr std::uint64_t kMaxExponentA = 1000000000;

/// Divisors of n (n < 2^63), ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

}  // namespace qpv
