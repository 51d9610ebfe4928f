#include <cmath>

#include "doctest.h"
#include "mpfr_oracle.hpp"
#include "qpv/error.hpp"
#include "qpv/explicit_bounds.hpp"

using namespace qpv;

namespace {

PrimeEngine engine_to(std::uint64_t limit) {
    SieveConfig c;
    c.limit = limit;
    c.workers = 1;
    c.segment_size = 1 << 16;
    return PrimeEngine(c);
}

// n in [1, x] with 8n + s (s = +-1) avoiding the forbidden residues of every prime p <= y.
std::uint64_t sifted_oracle(std::uint64_t x, std::uint64_t y, int s) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 3; p <= y; ++p) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
        if (prime) primes.push_back(p);
    }
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const std::int64_t m = 8 * static_cast<std::int64_t>(n) + s;
        bool keep = true;
        for (std::uint64_t p : primes) {
            const std::uint64_t r = static_cast<std::uint64_t>(m) % p;
            const bool special = p % 24 == 7 || p % 24 == 13;
            if (r == 0 || (special && (r * r + r + 1) % p == 0)) {
                keep = false;
                break;
            }
        }
        count += keep;
    }
    return count;
}

Big simpson(auto f, double a, double b, int n) {
    const double h = (b - a) / n;
    Big s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += Big(i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * Big(h / 3.0);
}

const BoundReport& find(const std::vector<BoundReport>& v, const std::string& name) {
    for (const auto& r : v) {
        if (r.name == name) return r;
    }
    FAIL("missing report " << name);
    return v.front();
}

}  // namespace

TEST_CASE("rho counts forbidden residues") {
    CHECK(SieveProblem::rho(2) == 0);
    CHECK(SieveProblem::rho(3) == 1);
    CHECK(SieveProblem::rho(7) == 3);
    CHECK(SieveProblem::rho(13) == 3);
    CHECK(SieveProblem::rho(31) == 3);
    CHECK(SieveProblem::rho(37) == 3);
    CHECK(SieveProblem::rho(11) == 1);
    for (std::uint64_t p : simple_sieve(2000)) CHECK(SieveProblem::rho(p) < p);
}

TEST_CASE("psi1 examples") {
    for (double K : {0.5, 1.5, 7.0}) CHECK(psi1(K, K) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(psi1(2.0, 1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(psi1(1.5, 7.58 / 2.0174) > 0.0);
    const Interval v = psi1(Interval::exact(2.0), Interval::exact(1.0));
    CHECK(encloses(v, Big(1.0) - log(Big(2.0))));
    const Big t = Big(7.58) / Big(2.0174);
    const Big K(1.5);
    const Interval w = psi1(Interval::exact(1.5), Interval::exact(7.58) / Interval::exact(2.0174));
    CHECK(encloses(w, t * log(t / K) - t + K));
    CHECK_THROWS_AS(psi1(0.0, 1.0), Error);
    CHECK_THROWS_AS(psi1(1.0, -1.0), Error);
}

TEST_CASE("psi1 is never negative") {
    for (double K = 0.25; K < 6.0; K += 0.37) {
        for (double t = 0.1; t < 9.0; t += 0.29) CHECK(psi1(K, t) >= 0.0);
    }
}

TEST_CASE("psi0 examples") {
    CHECK(psi0(3.0, 3.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(psi0(7.58, 2.0174, 1.5) == doctest::Approx(1.0 - std::exp(-psi1(1.5, 7.58 / 2.0174))).epsilon(1e-14));
    CHECK(psi0(2.0, 2.0, 1.5) == doctest::Approx(1.0 - std::exp(-psi1(1.5, 1.0))).epsilon(1e-14));
    const double p = psi0(7.58, 2.0174, 1.5);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK_THROWS_AS(psi0(2.0, 3.0, 1.5), Error);
    CHECK_THROWS_AS(psi0(3.0, 1.5, 1.5), Error);
    CHECK_THROWS_AS(psi0(3.0, 2.0, 0.0), Error);
}

TEST_CASE("B and V at small z") {
    const PrimeEngine e = engine_to(100000);
    CHECK(encloses(V_exact(e, 10), Big(32.0) / Big(105.0)));
    const Big b = (log(Big(3.0)) / Big(3.0) + log(Big(5.0)) / Big(5.0) + Big(3.0) * log(Big(7.0)) / Big(7.0)) /
                  log(Big(10.0));
    CHECK(encloses(B_exact(e, 10), b));
    // Direct products and sums over p <= 1000.
    Big v(1.0), s;
    for (std::uint64_t p : simple_sieve(1001)) {
        const unsigned r = SieveProblem::rho(p);
        v = v * (Big(1.0) - Big(static_cast<double>(r)) / Big::from_u64(p));
        s += Big(static_cast<double>(r)) * log(Big::from_u64(p)) / Big::from_u64(p);
    }
    CHECK(encloses(V_exact(e, 1000), v));
    CHECK(encloses(B_exact(e, 1000), s / log(Big(1000.0))));
    CHECK(B_exact(e, 100000).hi < 1.5);
}

TEST_CASE("V_bound and B_cap") {
    const Interval v = V_bound(41.0);
    CHECK(encloses(v, Big(std::string("1.23274")) / pow(Big(41.0), Big(1.5))));
    CHECK_THROWS_AS(V_bound(40.0), Error);
    CHECK(B_cap() == 1.5);
}

TEST_CASE("enumerate_sifted examples") {
    CHECK(enumerate_sifted(20, 3, QSign::Plus) == 13);
    CHECK(enumerate_sifted(20, 2, QSign::Plus) == 20);
    CHECK(enumerate_sifted(10000, 50, QSign::Minus) == sifted_oracle(10000, 50, -1));
    CHECK(enumerate_sifted(30000, 100, QSign::Plus) == sifted_oracle(30000, 100, 1));
    CHECK_THROWS_AS(enumerate_sifted(100000001, 10, QSign::Plus), Error);
    CHECK_THROWS_AS(enumerate_sifted(1000, 10001, QSign::Plus), Error);
    CHECK_THROWS_AS(enumerate_sifted(1000, 10, QSign::Both), Error);
}

TEST_CASE("sifted-set bound at x = 10^6, u = 3, v = 6") {
    const PrimeEngine e = engine_to(1000);
    const auto rhs = lemma21_rhs(1e6, 3.0, 6.0, V_exact(e, 100), B_exact(e, 10));
    REQUIRE(rhs.has_value());
    CHECK(std::isfinite(rhs->hi));
    for (QSign s : {QSign::Plus, QSign::Minus}) CHECK(static_cast<double>(enumerate_sifted(1000000, 100, s)) <= rhs->lo);
    // u = v and B = 1 make psi0 vanish; the bound is vacuous.
    CHECK_FALSE(lemma21_rhs(1e6, 3.0, 3.0, V_exact(e, 100), Interval::exact(1.0)).has_value());
}

TEST_CASE("sifted-set bound on a small grid") {
    const PrimeEngine e = engine_to(1000);
    for (double x : {1e4, 1e5}) {
        for (double u : {2.5, 3.0, 4.0}) {
            for (double v : {u, 2 * u}) {
                const auto y = static_cast<std::uint64_t>(std::floor(std::pow(x, 1.0 / u)));
                const auto z = static_cast<std::uint64_t>(std::floor(std::pow(x, 1.0 / v)));
                const auto rhs = lemma21_rhs(x, u, v, V_exact(e, y), B_exact(e, z));
                if (!rhs) continue;
                for (QSign s : {QSign::Plus, QSign::Minus}) {
                    CHECK(static_cast<double>(enumerate_sifted(static_cast<std::uint64_t>(x), y, s)) <= rhs->lo);
                }
            }
        }
    }
}

TEST_CASE("PNT-AP reports") {
    const PrimeEngine e = engine_to(100000);
    const BoundReport small = pnt_ap_error(e, 1000, 7);
    CHECK(small.verdict == Verdict::Indeterminate);
    CHECK(small.name == "pnt-ap-7");
    CHECK(pnt_ap_sqrt_error(e, 100000, 13).verdict == Verdict::Holds);
    CHECK_THROWS_AS(pnt_ap_error(e, 1000, 9), Error);
}

TEST_CASE("error budget values") {
    const auto b = lemma32_error_budget();
    const BoundReport& tiers = find(b, "error-budget-tiers");
    CHECK(tiers.verdict == Verdict::Holds);
    CHECK(tiers.computed.mid() == doctest::Approx(6.42e-3).epsilon(1e-3));
    const Big c1(std::string("6.27961e-4")), c2(std::string("1.94638e-5")), c3(std::string("2.4432e-7"));
    const Big R(std::string("9.645908801"));
    const Big exact = (Big(30.0) - Big(10.0) * log(Big(10.0))) * c1 + Big(30.0) * c2 + (Big(625.0) * R - Big(60.0)) * c3;
    CHECK(encloses(tiers.computed, exact));
    const BoundReport& sq = find(b, "error-budget-sqrt");
    CHECK(sq.verdict == Verdict::Holds);
    CHECK(encloses(sq.computed, Big(std::string("3.49")) / Big(1e4) - Big(std::string("3.49")) / Big(1e5)));
    for (const auto& r : b) CHECK_MESSAGE(r.verdict == Verdict::Holds, r.name);
}

TEST_CASE("error integrals match an independent quadrature") {
    const Big c3(std::string("2.4432e-7"));
    for (double L : {60.0, 100.0, 500.0, 1000.0, 5000.0}) {
        // The mid closed form integrates c3 (1 + s)/s^2 over s in [L, 625R]; substitute s = e^w.
        const double m = 625.0 * 9.645908801;
        const Big q = simpson([&](double w) { return c3 * (Big(1.0) + exp(Big(w))) / exp(Big(w)); }, std::log(L),
                              std::log(m), 20000);
        const Interval closed = error_integral_mid(L);
        CHECK(std::fabs(closed.mid() / mpfr_get_d(q.get(), MPFR_RNDN) - 1.0) < 1e-10);
        CHECK(std::fabs(error_integral_mid_quadrature(L) / closed.mid() - 1.0) < 1e-10);
    }
    for (double L : {6100.0, 7000.0, 1e4, 1e5, 1e6}) {
        const Interval closed = error_integral_tail(L);
        CHECK(std::fabs(error_integral_tail_quadrature(L) / closed.mid() - 1.0) < 1e-10);
        CHECK(encloses(closed, Big(std::string("3.6e-7")) * (Big(1.0) / Big(L) + Big(0.5) / (Big(L) * Big(L)))));
    }
    CHECK_THROWS_AS(error_integral_mid(59.0), Error);
    CHECK_THROWS_AS(error_integral_tail(100.0), Error);
}

TEST_CASE("tail check") {
    CHECK(tail_check(716.7944).verdict == Verdict::Holds);
    CHECK(tail_check(716.7944).computed.hi < 2.0);
    const BoundReport at400 = tail_check(400.0);
    CHECK(at400.verdict == Verdict::Fails);
    CHECK(encloses(at400.computed, exp(Big(2.0) / exp(Big(400.0)) + Big(std::string("18.55764")) / Big(20.0))));
    double prev = INFINITY;
    for (double c = 300.0; c < 2000.0; c += 37.0) {
        const double v = tail_check(c).computed.mid();
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("theorem 2 chain") {
    const auto chain = theorem2_chain();
    std::vector<std::string> names;
    for (const auto& r : chain) names.push_back(r.name);
    CHECK(names == std::vector<std::string>{"v-bound", "rs-log-sum", "b-cap", "sifted-set-constant", "q-count-constant",
                                            "q-count-constant-recomputed", "tail-integrand", "tail-constant",
                                            "tail-check", "tail-check-published-chain", "tail-check-recomputed"});
    CHECK(find(chain, "v-bound").verdict == Verdict::Holds);
    CHECK(find(chain, "b-cap").verdict == Verdict::Holds);
    CHECK(find(chain, "sifted-set-constant").computed.mid() == doctest::Approx(5.08).epsilon(1e-2));
    CHECK(find(chain, "q-count-constant").verdict == Verdict::Fails);
    CHECK(find(chain, "tail-check").verdict == Verdict::Holds);
    CHECK(find(chain, "tail-check-published-chain").verdict == Verdict::Fails);
    CHECK(find(chain, "tail-check-recomputed").verdict == Verdict::Holds);
}

TEST_CASE("report selection") {
    const auto chain = theorem2_chain();
    CHECK(select_reports(chain, "").size() == chain.size());
    CHECK(select_reports(chain, "tail-check").size() == 3);
    CHECK(select_reports(chain, "v-bound").size() == 1);
    CHECK_THROWS_AS(select_reports(chain, "nope"), Error);
}

TEST_CASE("judge and report JSON") {
    CHECK(judge(Interval{1.0, 2.0}, Direction::Less, Interval::exact(3.0)) == Verdict::Holds);
    CHECK(judge(Interval{1.0, 4.0}, Direction::Less, Interval::exact(3.0)) == Verdict::Indeterminate);
    CHECK(judge(Interval{4.0, 5.0}, Direction::Less, Interval::exact(3.0)) == Verdict::Fails);
    CHECK(judge(Interval{3.0, 3.0}, Direction::LessEq, Interval::exact(3.0)) == Verdict::Holds);
    CHECK(judge(Interval{3.0, 3.0}, Direction::Less, Interval::exact(3.0)) == Verdict::Fails);
    CHECK(judge(Interval{3.0, 3.0}, Direction::Equal, Interval::exact(3.0)) == Verdict::Holds);
    CHECK(judge(Interval{3.0, 3.0}, Direction::Equal, Interval::exact(4.0)) == Verdict::Fails);
    CHECK(judge(Interval{1.0, 1.0}, Direction::Equal, Interval::exact(1.0 + 1e-13), 1e-12) == Verdict::Holds);
    CHECK(judge(Interval{5.0, 6.0}, Direction::Greater, Interval::exact(3.0)) == Verdict::Holds);
    CHECK(overall({}) == Verdict::Holds);

    for (const auto& r : theorem2_chain()) {
        const auto j = r.to_json();
        for (const char* key : {"name", "paper_anchor", "inputs", "computed_lo", "computed_hi", "claimed", "direction",
                                "verdict"}) {
            CHECK(j.contains(key));
        }
        const BoundReport back = BoundReport::from_json(j);
        CHECK(back.name == r.name);
        CHECK(back.verdict == r.verdict);
        CHECK(back.direction == r.direction);
        CHECK(back.computed.lo <= r.computed.lo);
        CHECK(back.computed.hi >= r.computed.hi);
    }
}
