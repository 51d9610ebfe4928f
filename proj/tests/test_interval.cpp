#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "mpfr_oracle.hpp"
#include "qpv/error.hpp"
#include "qpv/interval.hpp"

using qpv::Interval;

TEST_CASE("basic operations enclose the exact result") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double a = dist(rng), b = dist(rng);
        const Interval A = Interval::exact(a), B = Interval::exact(b);
        CHECK(encloses(A + B, Big(a) + Big(b)));
        CHECK(encloses(A - B, Big(a) - Big(b)));
        CHECK(encloses(A * B, Big(a) * Big(b)));
        if (b != 0.0) CHECK(encloses(A / B, Big(a) / Big(b)));
    }
}

TEST_CASE("elementary functions enclose the MPFR value") {
    for (double x : {1e-300, 1e-10, 0.5, 1.0, 2.0, 10.0, 716.7944, 1e8, 1e300}) {
        const Interval X = Interval::exact(x);
        CHECK(encloses(qpv::log(X), log(Big(x))));
        CHECK(encloses(qpv::sqrt(X), sqrt(Big(x))));
    }
    for (double x : {-745.0, -716.7944, -1.0, 0.0, 1e-9, 0.69, 40.0, 700.0}) {
        CHECK(encloses(qpv::exp(Interval::exact(x)), exp(Big(x))));
    }
    for (double x : {-0.75, -1e-12, 1e-17, 0.3, 5.0}) {
        CHECK(encloses(qpv::log1p(Interval::exact(x)), log1p(Big(x))));
    }
    CHECK(encloses(qpv::pow(Interval::exact(41.0), Interval::exact(1.5)), pow(Big(41.0), Big(1.5))));
}

TEST_CASE("decimal constants are enclosed") {
    for (const char* s : {"0.1", "9.645908801", "6.27961e-4", "-0.0681541", "1.75014319434", "37.00754"}) {
        const Interval v = Interval::from_decimal(s);
        CHECK(v.valid());
        CHECK(encloses(v, Big(std::string(s))));
        CHECK(v.width() > 0.0);
    }
    CHECK_THROWS_AS(Interval::from_decimal("abc"), qpv::Error);
    CHECK_THROWS_AS(Interval::from_decimal(""), qpv::Error);
}

TEST_CASE("integers convert exactly or enclose") {
    CHECK(Interval::from_unsigned(9457308739ULL).width() == 0.0);
    const unsigned long long big = (1ULL << 62) + 1;
    CHECK(encloses(Interval::from_unsigned(big), Big::from_u64(big)));
    CHECK(Interval::from_integer(-7).lo == -7.0);
}

TEST_CASE("directed decimal formatting round-trips") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const double x = std::pow(10.0, dist(rng)) * (i % 2 ? -1.0 : 1.0);
        const std::string lo = qpv::format_lower(x), hi = qpv::format_upper(x);
        CHECK(std::strtod(lo.c_str(), nullptr) == x);
        CHECK(std::strtod(hi.c_str(), nullptr) == x);
        CHECK(mpfr_cmp_d(Big(lo).get(), x) <= 0);
        CHECK(mpfr_cmp_d(Big(hi).get(), x) >= 0);
    }
}

TEST_CASE("compensated sum encloses a long sum of logarithms") {
    qpv::CompensatedSum s;
    Big ref;
    for (unsigned k = 2; k < 200000; ++k) {
        s.add(std::log(static_cast<double>(k)));
        ref += log(Big(static_cast<double>(k)));
    }
    const Interval v = s.to_interval();
    CHECK(encloses(v, ref));
    CHECK(v.width() < 1e-6);
    CHECK(s.terms() == 199998.0);
}

TEST_CASE("compensated sum merge is an enclosure of the joint sum") {
    qpv::CompensatedSum a, b, all;
    Big ref;
    for (unsigned k = 1; k < 5000; ++k) {
        const double t = 1.0 / k;
        (k < 2500 ? a : b).add(t, 1);
        all.add(t, 1);
        ref += Big(1.0) / Big(static_cast<double>(k));
    }
    a.merge(b);
    CHECK(encloses(a.to_interval(), ref));
    CHECK(a.to_interval().overlaps(all.to_interval()));
}

TEST_CASE("comparisons and helpers") {
    const Interval a{1.0, 2.0}, b{3.0, 4.0};
    CHECK(qpv::certainly_less(a, b));
    CHECK(qpv::certainly_greater(b, a));
    CHECK_FALSE(qpv::certainly_less(a, Interval{1.5, 5.0}));
    CHECK(qpv::hull(a, b).lo == 1.0);
    CHECK(qpv::hull(a, b).hi == 4.0);
    CHECK(qpv::abs(Interval{-3.0, 1.0}).lo == 0.0);
    CHECK(qpv::abs(Interval{-3.0, 1.0}).hi == 3.0);
    CHECK(qpv::exp(Interval::exact(-2000.0)).lo == 0.0);
}
