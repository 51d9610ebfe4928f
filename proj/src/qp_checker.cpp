#include "qpv/qp_checker.hpp"

#include <algorithm>
#include <set>

#include "qpv/error.hpp"

namespace qpv {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kCattaneoAnchor = "any divisor of sigma(N) is 1 or 3 (mod 8)";
constexpr const char* kGeneralAnchor = "some p_j = 1 (mod 4) with no divisor of 2a_j+1 = 5 (mod 8)";
constexpr const char* kPrimesAnchor = "p_i = 1 or 7 (mod 8)";
constexpr const char* kExpMod8Anchor = "2a+1 = 3 (mod 8)";
constexpr const char* kExpFactorsAnchor = "prime factors of 2a+1 are 1 or 3 (mod 8)";
constexpr const char* kExpThreeAnchor = "3 | 2a+1";
constexpr const char* kCohenAnchor = "a = 1, 3, 5, 9 or 11 (mod 12)";
constexpr const char* kQAnchor = "every prime factor of N lies in Q+ or Q-";

void check_a(std::uint64_t a) {
    if (a < 1 || a > kMaxExponentA) fail(ErrorCode::Domain, "exponent parameter a must be in [1, 10^9]");
}

}  // namespace

CandidateShape CandidateShape::uniform(std::vector<std::uint64_t> primes, std::uint64_t a) {
    CandidateShape s;
    s.a.assign(primes.size(), a);
    s.primes = std::move(primes);
    return s;
}

void CandidateShape::validate() const {
    if (primes.empty() || primes.size() != a.size()) fail(ErrorCode::Domain, "shape needs one exponent per prime");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] % 2 == 0 || !is_prime(primes[i])) {
            fail(ErrorCode::Domain, std::to_string(primes[i]) + " is not an odd prime");
        }
        if (!seen.insert(primes[i]).second) fail(ErrorCode::Domain, "primes must be distinct");
        check_a(a[i]);
    }
}

bool FilterVerdict::failed(std::string_view id) const {
    return std::any_of(failed_conditions.begin(), failed_conditions.end(),
                       [&](const FailedCondition& c) { return c.id == id; });
}

json FilterVerdict::to_json() const {
    json conditions = json::array();
    for (const auto& c : failed_conditions) {
        conditions.push_back({{"id", c.id}, {"paper_anchor", c.paper_anchor}, {"witness", c.witness}});
    }
    return {{"passed", passed()}, {"failed_conditions", std::move(conditions)}};
}

mpz_class sigma(const FactorList& f) {
    mpz_class result = 1;
    for (const auto& [p, e] : f.factors) {
        mpz_class pp;
        mpz_ui_pow_ui(pp.get_mpz_t(), p, e + 1);
        result *= (pp - 1) / (p - 1);
    }
    return result;
}

bool is_quasiperfect(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::Domain, "n must be positive");
    mpz_class target = n;
    target = 2 * target + 1;
    return sigma(factor(n)) == target;
}

std::vector<std::uint64_t> search_quasiperfect(std::uint64_t m_limit, bool squarefree_only) {
    if (m_limit > kMaxSearchM) fail(ErrorCode::Capacity, "search_quasiperfect supports m <= 10^7");
    std::vector<std::uint32_t> spf(m_limit + 1, 0);
    for (std::uint64_t i = 2; i <= m_limit; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t j = i; j <= m_limit; j += i) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    std::vector<std::uint64_t> hits;
    for (std::uint64_t m = 1; m <= m_limit; m += 2) {
        unsigned __int128 s = 1;
        bool squarefree = true;
        for (std::uint64_t r = m; r > 1;) {
            const std::uint64_t p = spf[r];
            unsigned e = 0;
            while (r % p == 0) {
                r /= p;
                ++e;
            }
            if (e > 1) squarefree = false;
            unsigned __int128 term = 1, pk = 1;
            for (unsigned k = 0; k < 2 * e; ++k) {
                pk *= p;
                term += pk;
            }
            s *= term;
        }
        if (squarefree_only && !squarefree) continue;
        const unsigned __int128 n = static_cast<unsigned __int128>(m) * m;
        if (s == 2 * n + 1) hits.push_back(static_cast<std::uint64_t>(n));
    }
    return hits;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::Domain, "divisors of 0");
    std::vector<std::uint64_t> out{1};
    for (const auto& [p, e] : factor(n).factors) {
        const std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

FilterVerdict cattaneo_filter(const FactorList& f) {
    FilterVerdict v;
    for (const auto& [p, e] : f.factors) {
        if (p % 8 != 1 && p % 8 != 3) v.failed_conditions.push_back({"cattaneo-divisor-mod-8", kCattaneoAnchor, p});
    }
    return v;
}

FilterVerdict thm1_general_filter(const CandidateShape& shape) {
    shape.validate();
    FilterVerdict v;
    json rejected = json::array();
    for (std::size_t i = 0; i < shape.primes.size(); ++i) {
        const std::uint64_t p = shape.primes[i];
        if (p % 4 != 1) continue;
        const std::uint64_t odd = 2 * shape.a[i] + 1;
        const auto ds = divisors(odd);
        const auto bad = std::find_if(ds.begin(), ds.end(), [](std::uint64_t d) { return d % 8 == 5; });
        if (bad == ds.end()) return v;
        rejected.push_back({{"p", p}, {"2a+1", odd}, {"divisor", *bad}});
    }
    v.failed_conditions.push_back({"general-admissible-index", kGeneralAnchor,
                                   rejected.empty() ? json("no prime = 1 (mod 4)") : rejected});
    return v;
}

FilterVerdict thm1_equal_exponent_filter(const std::vector<std::uint64_t>& primes, std::uint64_t a) {
    CandidateShape::uniform(primes, a).validate();
    FilterVerdict v;
    for (std::uint64_t p : primes) {
        if (p % 8 != 1 && p % 8 != 7) v.failed_conditions.push_back({"equal-exponent-primes-mod-8", kPrimesAnchor, p});
    }
    const std::uint64_t odd = 2 * a + 1;
    if (odd % 8 != 3) v.failed_conditions.push_back({"equal-exponent-2a+1-mod-8", kExpMod8Anchor, odd});
    for (const auto& [q, e] : factor(odd).factors) {
        if (q % 8 != 1 && q % 8 != 3) {
            v.failed_conditions.push_back({"equal-exponent-2a+1-factors-mod-8", kExpFactorsAnchor, q});
        }
    }
    if (odd % 3 != 0) v.failed_conditions.push_back({"equal-exponent-2a+1-divisible-by-3", kExpThreeAnchor, odd});
    const std::uint64_t r = a % 12;
    if (r != 1 && r != 3 && r != 5 && r != 9 && r != 11) {
        v.failed_conditions.push_back({"cohen-a-mod-12", kCohenAnchor, a});
    }
    return v;
}

FilterVerdict q_membership_filter(const std::vector<std::uint64_t>& primes) {
    FilterVerdict v;
    for (std::uint64_t p : primes) {
        const PrimeClassRecord r = classify_prime(p);
        if (r.is_q()) continue;
        json w{{"p", p}, {"q_class", std::string(to_string(r.q_class))}};
        if (r.witness) w["witness"] = *r.witness;
        v.failed_conditions.push_back({"q-membership", kQAnchor, std::move(w)});
    }
    return v;
}

}  // namespace qpv
