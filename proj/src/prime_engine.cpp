#include "qpv/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpv/error.hpp"

namespace qpv {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void merge_class(ClassStatistics::PerClass& a, const ClassStatistics::PerClass& b) {
    a.count += b.count;
    a.theta.merge(b.theta);
    a.prime_powers.merge(b.prime_powers);
    a.log_over_p.merge(b.log_over_p);
    a.reciprocal.merge(b.reciprocal);
    a.euler_log.merge(b.euler_log);
}

template <class Field>
Interval sum_over(const ClassStatistics& s, ResidueSet classes, Field field) {
    CompensatedSum total;
    for (unsigned r : classes.members()) total.merge(s.by_class[r].*field);
    return total.to_interval();
}

}  // namespace

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit <= 2) return out;
    std::vector<bool> composite(limit, false);
    for (std::uint64_t i = 2; i < limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j < limit; j += i) composite[j] = true;
    }
    return out;
}

PrimeEngine::PrimeEngine(SieveConfig config) : config_(config) {
    if (config_.limit < 2) fail(ErrorCode::InvalidArgument, "sieve limit must be >= 2");
    if (config_.limit > kMaxSieveLimit) fail(ErrorCode::Capacity, "sieve limit exceeds 2^40");
    if (config_.segment_size < 64) fail(ErrorCode::InvalidArgument, "segment size must be >= 64");
    if (config_.workers < 1) fail(ErrorCode::InvalidArgument, "workers must be >= 1");
    for (std::uint64_t p : simple_sieve(isqrt(config_.limit + 1) + 2)) base_primes_.push_back(static_cast<std::uint32_t>(p));
}

void PrimeEngine::check_range(std::uint64_t lo, std::uint64_t hi) const {
    if (lo > hi) fail(ErrorCode::InvalidArgument, "range lower bound exceeds upper bound");
    if (hi > config_.limit) {
        fail(ErrorCode::Capacity,
             "range end " + std::to_string(hi) + " exceeds the sieve limit " + std::to_string(config_.limit));
    }
}

void PrimeEngine::check_traversal(std::uint64_t lo, std::uint64_t hi) const {
    if (lo > hi) fail(ErrorCode::InvalidArgument, "range lower bound exceeds upper bound");
    if (hi > config_.limit + 1) {
        fail(ErrorCode::Capacity,
             "value " + std::to_string(hi - 1) + " exceeds the sieve limit " + std::to_string(config_.limit));
    }
}

std::size_t PrimeEngine::segment_count(std::uint64_t lo, std::uint64_t hi) const {
    if (lo >= hi) return 0;
    const std::uint64_t s = config_.segment_size;
    return static_cast<std::size_t>((hi - 1) / s - lo / s + 1);
}

std::pair<std::uint64_t, std::uint64_t> PrimeEngine::segment_bounds(std::uint64_t lo, std::uint64_t hi,
                                                                    std::size_t i) const {
    const std::uint64_t s = config_.segment_size;
    const std::uint64_t first = lo / s;
    const std::uint64_t a = std::max(lo, (first + i) * s);
    const std::uint64_t b = std::min(hi, (first + i + 1) * s);
    return {a, b};
}

void PrimeEngine::sieve_segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) const {
    out.clear();
    if (lo >= hi) return;
    if (lo <= 2 && 2 < hi) out.push_back(2);
    const std::uint64_t first_odd = lo | 1;
    if (first_odd >= hi) return;
    const std::uint64_t count = (hi - first_odd + 1) / 2;
    std::vector<std::uint8_t> flags(count, 1);
    for (std::uint32_t bp : base_primes_) {
        const std::uint64_t p = bp;
        if (p == 2) continue;
        if (p * p >= hi) break;
        std::uint64_t start = std::max(p * p, (first_odd + p - 1) / p * p);
        if ((start & 1) == 0) start += p;
        for (std::uint64_t j = (start - first_odd) / 2; j < count; j += p) flags[j] = 0;
    }
    if (first_odd == 1) flags[0] = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (flags[i]) out.push_back(first_odd + 2 * i);
    }
}

std::vector<std::uint64_t> PrimeEngine::primes_in_range(std::uint64_t lo, std::uint64_t hi) const {
    check_range(lo, hi);
    std::vector<std::uint64_t> out;
    for_each_segment(
        lo, hi,
        [](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> primes) {
            return std::vector<std::uint64_t>(primes.begin(), primes.end());
        },
        [&](std::vector<std::uint64_t>&& part) { out.insert(out.end(), part.begin(), part.end()); });
    return out;
}

std::uint64_t PrimeEngine::pi(std::uint64_t x) const {
    if (x > config_.limit) fail(ErrorCode::Capacity, "pi argument exceeds the sieve limit");
    std::uint64_t total = 0;
    for_each_segment(
        0, x + 1, [](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> primes) { return primes.size(); },
        [&](std::size_t n) { total += n; });
    return total;
}

ClassStatistics PrimeEngine::class_statistics(std::uint64_t z) const {
    if (z > config_.limit) fail(ErrorCode::Capacity, "argument exceeds the sieve limit");
    ClassStatistics stats;
    stats.z = z;
    for_each_segment(
        0, z + 1,
        [](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> primes) {
            std::array<ClassStatistics::PerClass, kModulus> part{};
            for (std::uint64_t p : primes) {
                auto& c = part[p % kModulus];
                const double dp = static_cast<double>(p);
                const double lp = std::log(dp);
                ++c.count;
                c.theta.add(lp);
                c.log_over_p.add(lp / dp);
                c.reciprocal.add(1.0 / dp);
                c.euler_log.add(-std::log1p(-1.0 / dp));
            }
            return part;
        },
        [&](std::array<ClassStatistics::PerClass, kModulus>&& part) {
            for (unsigned r = 0; r < kModulus; ++r) merge_class(stats.by_class[r], part[r]);
        });
    for (std::uint32_t bp : base_primes_) {
        const std::uint64_t p = bp;
        if (p * p > z) break;
        const double lp = std::log(static_cast<double>(p));
        for (std::uint64_t q = p * p; q <= z; q *= p) {
            stats.by_class[q % kModulus].prime_powers.add(lp);
            if (q > z / p) break;
        }
    }
    return stats;
}

namespace {

void require_unit(unsigned l) {
    if (std::gcd(l % kModulus, kModulus) != 1) {
        fail(ErrorCode::Domain, "residue " + std::to_string(l) + " is not coprime to 24");
    }
}

}  // namespace

ChebyshevValue PrimeEngine::psi_mod(std::uint64_t z, unsigned l) const {
    require_unit(l);
    const ClassStatistics s = class_statistics(z);
    return {z, kModulus, l % kModulus, s.psi(ResidueSet{l})};
}

ChebyshevValue PrimeEngine::theta_mod(std::uint64_t z, unsigned l) const {
    require_unit(l);
    const ClassStatistics s = class_statistics(z);
    return {z, kModulus, l % kModulus, s.theta(ResidueSet{l})};
}

Interval PrimeEngine::theta(std::uint64_t z) const {
    return class_statistics(z).theta(ResidueSet::from_mask((1u << kModulus) - 1));
}

Interval PrimeEngine::sum_logp_over_p_mod(std::uint64_t z, ResidueSet classes) const {
    return class_statistics(z).log_over_p(classes);
}

Interval PrimeEngine::sum_recip_mod(std::uint64_t z, ResidueSet classes) const {
    return class_statistics(z).reciprocal(classes);
}

Interval PrimeEngine::mertens_residual(std::uint64_t z, unsigned l) const {
    if (z < 1000) fail(ErrorCode::Domain, "mertens_residual requires z >= 1000");
    const Interval recip = sum_recip_mod(z, ResidueSet{l});
    return recip - log(log(Interval::from_unsigned(z))) / Interval::exact(8.0);
}

Interval PrimeEngine::euler_product_classes(std::uint64_t z, ResidueSet classes) const {
    return exp(class_statistics(z).euler_log(classes));
}

std::uint64_t ClassStatistics::count(ResidueSet classes) const {
    std::uint64_t n = 0;
    for (unsigned r : classes.members()) n += by_class[r].count;
    return n;
}

Interval ClassStatistics::theta(ResidueSet classes) const { return sum_over(*this, classes, &PerClass::theta); }

Interval ClassStatistics::psi(ResidueSet classes) const {
    CompensatedSum total;
    for (unsigned r : classes.members()) {
        total.merge(by_class[r].theta);
        total.merge(by_class[r].prime_powers);
    }
    return total.to_interval();
}

Interval ClassStatistics::log_over_p(ResidueSet classes) const {
    return sum_over(*this, classes, &PerClass::log_over_p);
}

Interval ClassStatistics::reciprocal(ResidueSet classes) const {
    return sum_over(*this, classes, &PerClass::reciprocal);
}

Interval ClassStatistics::euler_log(ResidueSet classes) const { return sum_over(*this, classes, &PerClass::euler_log); }

}  // namespace qpv
