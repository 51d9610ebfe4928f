#include <cmath>

#include "doctest.h"
#include "mpfr_oracle.hpp"
#include "qpv/error.hpp"
#include "qpv/explicit_bounds.hpp"
#include "qpv/prime_engine.hpp"

using namespace qpv;

namespace {

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

PrimeEngine engine_to(std::uint64_t limit, unsigned workers = 1, std::uint64_t segment = 1 << 20) {
    SieveConfig c;
    c.limit = limit;
    c.workers = workers;
    c.segment_size = segment;
    return PrimeEngine(c);
}

Big log_of(std::uint64_t n) { return log(Big::from_u64(n)); }

// Sum over prime powers q = p^k <= z, q = l (mod 24), of log p.
Big psi_oracle(std::uint64_t z, unsigned l, bool primes_only) {
    Big s;
    for (std::uint64_t p = 2; p <= z; ++p) {
        if (!trial_prime(p)) continue;
        for (std::uint64_t q = p; q <= z; q *= p) {
            if (q % 24 == l) s += log_of(p);
            if (primes_only) break;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("primes_in_range examples") {
    const PrimeEngine e = engine_to(2000000);
    CHECK(e.primes_in_range(1, 10) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(e.primes_in_range(0, 10000).size() == 1229);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 1000000; n < 1000020; ++n) {
        if (trial_prime(n)) expected.push_back(n);
    }
    CHECK(e.primes_in_range(1000000, 1000020) == expected);
    CHECK(e.primes_in_range(5, 5).empty());
    CHECK_THROWS_AS(e.primes_in_range(0, 2000001), Error);
    CHECK_THROWS_AS(e.primes_in_range(10, 5), Error);
}

TEST_CASE("primes_in_range agrees with trial division below 10^6") {
    const PrimeEngine e = engine_to(1000000, 1, 1 << 12);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 0; n < 1000000; ++n) {
        if (trial_prime(n)) expected.push_back(n);
    }
    CHECK(e.primes_in_range(0, 1000000) == expected);
}

TEST_CASE("pi examples and agreement with the second sieve") {
    const PrimeEngine e = engine_to(3000000, 2, 1 << 14);
    CHECK(e.pi(2) == 1);
    CHECK(e.pi(1) == 0);
    CHECK(e.pi(10000) == 1229);
    const auto primes = simple_sieve(3000001);
    for (std::uint64_t x : {100ULL, 65535ULL, 1000000ULL, 2999999ULL, 3000000ULL}) {
        const auto count = std::upper_bound(primes.begin(), primes.end(), x) - primes.begin();
        CHECK(e.pi(x) == static_cast<std::uint64_t>(count));
    }
}

TEST_CASE("psi and theta examples") {
    const PrimeEngine e = engine_to(1000);
    const Interval psi100 = e.psi_mod(100, 7).value;
    CHECK(encloses(psi100, log_of(7) + log_of(31) + log_of(79)));
    CHECK(std::fabs(psi100.mid() - 9.749) < 1e-3);
    CHECK(encloses(e.theta_mod(10, 7).value, log_of(7)));
    CHECK(encloses(e.theta_mod(100, 1).value, log_of(73) + log_of(97)));
    CHECK(e.psi_mod(100, 7).modulus == 24);
    CHECK(e.psi_mod(100, 7).residue == 7);
    CHECK_THROWS_AS(e.psi_mod(100, 6), Error);
    CHECK_THROWS_AS(e.theta_mod(100, 3), Error);
}

TEST_CASE("psi and theta enclose the high-precision oracle for every unit class") {
    const PrimeEngine e = engine_to(200000);
    for (unsigned l : ResidueSet::units().members()) {
        CHECK(encloses(e.psi_mod(50000, l).value, psi_oracle(50000, l, false)));
        CHECK(encloses(e.theta_mod(50000, l).value, psi_oracle(50000, l, true)));
    }
    // 25 = 1 (mod 24) is a prime power counted by psi only.
    CHECK(e.psi_mod(30, 1).value.lo > e.theta_mod(30, 1).value.hi);
}

TEST_CASE("restricted theta values add up to the unrestricted one") {
    const PrimeEngine e = engine_to(10000001, 2);
    for (std::uint64_t z : {1000ULL, 100000ULL, 10000000ULL}) {
        const ClassStatistics s = e.class_statistics(z);
        Interval total = s.theta(ResidueSet{2, 3});
        for (unsigned l : ResidueSet::units().members()) {
            total += e.theta_mod(z, l).value;
            CHECK(e.psi_mod(z, l).value.lo >= e.theta_mod(z, l).value.lo);
        }
        CHECK(total.overlaps(e.theta(z)));
    }
}

TEST_CASE("sums of log p/p and 1/p") {
    const PrimeEngine e = engine_to(100000);
    CHECK(encloses(e.sum_logp_over_p_mod(10, ResidueSet{7}), log_of(7) / Big(7.0)));
    CHECK(std::fabs(e.sum_logp_over_p_mod(10, ResidueSet{7}).mid() - 0.27799) < 1e-5);
    CHECK(encloses(e.sum_recip_mod(10, ResidueSet{7}), Big(1.0) / Big(7.0)));
    Big recip;
    for (std::uint64_t p = 2; p <= 50000; ++p) {
        if (trial_prime(p) && (p % 24 == 7 || p % 24 == 13)) recip += Big(1.0) / Big::from_u64(p);
    }
    CHECK(encloses(e.sum_recip_mod(50000, kForbiddenClasses), recip));
    CHECK_THROWS_AS(e.mertens_residual(999, 7), Error);
}

TEST_CASE("Euler products over the forbidden classes") {
    const PrimeEngine e = engine_to(1000);
    const Interval empty = e.euler_product_classes(6, kForbiddenClasses);
    CHECK(empty.contains(1.0));
    CHECK(empty.width() < 1e-14);
    const Big exact = Big(7.0) / Big(6.0) * (Big(13.0) / Big(12.0)) * (Big(31.0) / Big(30.0));
    CHECK(encloses(e.euler_product_classes(31, kForbiddenClasses), exact));
}

TEST_CASE("worker count and segment size do not change results") {
    const PrimeEngine one = engine_to(5000001, 1, 1 << 20);
    const PrimeEngine many = engine_to(5000001, 4, 1 << 20);
    const PrimeEngine small = engine_to(5000001, 3, 1 << 13);
    const ClassStatistics a = one.class_statistics(5000000);
    const ClassStatistics b = many.class_statistics(5000000);
    const ClassStatistics c = small.class_statistics(5000000);
    for (unsigned r = 0; r < kModulus; ++r) {
        const ResidueSet s{r};
        CHECK(a.count(s) == b.count(s));
        CHECK(a.count(s) == c.count(s));
        CHECK(a.theta(s).lo == b.theta(s).lo);
        CHECK(a.theta(s).hi == b.theta(s).hi);
        CHECK(a.log_over_p(s).lo == b.log_over_p(s).lo);
        CHECK(a.euler_log(s).hi == b.euler_log(s).hi);
        CHECK(a.theta(s).overlaps(c.theta(s)));
    }
    CHECK(one.pi(5000000) == small.pi(5000000));
}

TEST_CASE("desk PNT-AP check: |psi(z;24,l) - z/8| < 1.745 sqrt z at 10^7 and 10^8") {
    const PrimeEngine e = engine_to(100000001);
    for (std::uint64_t z : {10000000ULL, 100000000ULL}) {
        const ClassStatistics s = e.class_statistics(z);
        for (unsigned l : ResidueSet::units().members()) {
            CHECK(pnt_ap_sqrt_error(s, l).verdict == Verdict::Holds);
            CHECK(pnt_ap_sqrt_error(s, l, true).verdict == Verdict::Holds);
        }
    }
}

TEST_CASE("values at 10^8") {
    const PrimeEngine e = engine_to(100000001);
    CHECK(e.psi_mod(100000000, 7).value.lo > 12499496);
    CHECK(e.psi_mod(100000000, 13).value.lo > 12499441);
    const Interval theta7 = e.theta_mod(100000000, 7).value;
    CHECK(std::isfinite(theta7.hi));
    CHECK(std::fabs(theta7.mid() - 12500000.0) < 17450.0);
    const double log10 = std::log(10.0);
    CHECK(e.sum_logp_over_p_mod(100000000, ResidueSet{7}).hi < log10 - 0.101846);
    CHECK(e.sum_logp_over_p_mod(100000000, ResidueSet{13}).hi < log10 - 0.202137);
    CHECK(std::fabs(e.mertens_residual(100000000, 7).mid() - 0.003897) < 0.002);
    CHECK(std::fabs(e.mertens_residual(100000000, 13).mid() + 0.0681541) < 0.002);
    const Interval ep = e.euler_product_classes(100000000, kForbiddenClasses);
    CHECK(std::isfinite(ep.hi));
    CHECK(ep.lo > 1.0);
    CHECK(e.theta(100000000).width() < 1e-3);
}

TEST_CASE("engine configuration is validated") {
    SieveConfig c;
    c.limit = 1;
    CHECK_THROWS_AS(PrimeEngine{c}, Error);
    c.limit = 1000;
    c.segment_size = 8;
    CHECK_THROWS_AS(PrimeEngine{c}, Error);
    c.segment_size = 64;
    c.workers = 0;
    CHECK_THROWS_AS(PrimeEngine{c}, Error);
    c.workers = 1;
    c.limit = kMaxSieveLimit + 1;
    CHECK_THROWS_AS(PrimeEngine{c}, Error);
}
