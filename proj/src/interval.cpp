#include "qpv/interval.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "qpv/error.hpp"

namespace qpv {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Capacity: return "capacity";
        case ErrorCode::Integrity: return "integrity";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::Io: return "io";
        case ErrorCode::Internal: return "internal";
        case ErrorCode::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

double down_ulps(double x, int n) {
    for (int i = 0; i < n; ++i) x = next_down(x);
    return x;
}

double up_ulps(double x, int n) {
    for (int i = 0; i < n; ++i) x = next_up(x);
    return x;
}

double ulp(double x) {
    x = std::fabs(x);
    if (!std::isfinite(x)) return x;
    return next_up(x) - x;
}

Interval Interval::from_integer(long long n) {
    const double d = static_cast<double>(n);
    constexpr long long kExact = 1LL << 53;
    if (n > -kExact && n < kExact) return exact(d);
    return {next_down(d), next_up(d)};
}

Interval Interval::from_unsigned(unsigned long long n) {
    const double d = static_cast<double>(n);
    if (n < (1ULL << 53)) return exact(d);
    return {next_down(d), next_up(d)};
}

Interval Interval::from_decimal(std::string_view text) {
    std::string buf(text);
    char* end = nullptr;
    const double d = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0') fail(ErrorCode::Parse, "not a decimal number: " + buf);
    return {next_down(d), next_up(d)};
}

namespace {

// Directed results of one operation: the rounded value r and the sign of the
// exact residual (true result minus r), found with error-free transformations.
// Steps one ulp only when the residual points outward or cannot be trusted.
constexpr double kTiny = 0x1p-960;

double dir_down(double r, int residual_sign) { return residual_sign < 0 ? next_down(r) : r; }
double dir_up(double r, int residual_sign) { return residual_sign > 0 ? next_up(r) : r; }

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Directed {
    double lo, hi;
};

Directed sum(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return {next_down(s), next_up(s)};
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {dir_down(s, sign_of(e)), dir_up(s, sign_of(e))};
}

Directed product(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p) || (std::fabs(p) < kTiny && a != 0.0 && b != 0.0)) return {next_down(p), next_up(p)};
    const int e = sign_of(std::fma(a, b, -p));
    return {dir_down(p, e), dir_up(p, e)};
}

Directed quotient(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q) || (std::fabs(q) < kTiny && a != 0.0)) return {next_down(q), next_up(q)};
    const int e = sign_of(std::fma(-q, b, a)) * sign_of(b);
    return {dir_down(q, e), dir_up(q, e)};
}

Interval hull4(const Directed (&d)[4]) {
    Interval r{d[0].lo, d[0].hi};
    for (int i = 1; i < 4; ++i) {
        r.lo = std::min(r.lo, d[i].lo);
        r.hi = std::max(r.hi, d[i].hi);
    }
    return r;
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) { return {sum(a.lo, b.lo).lo, sum(a.hi, b.hi).hi}; }

Interval operator-(const Interval& a, const Interval& b) { return {sum(a.lo, -b.hi).lo, sum(a.hi, -b.lo).hi}; }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
    const Directed p[4] = {product(a.lo, b.lo), product(a.lo, b.hi), product(a.hi, b.lo), product(a.hi, b.hi)};
    return hull4(p);
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) fail(ErrorCode::Domain, "interval division by an interval containing zero");
    const Directed q[4] = {quotient(a.lo, b.lo), quotient(a.lo, b.hi), quotient(a.hi, b.lo), quotient(a.hi, b.hi)};
    return hull4(q);
}

Interval& operator+=(Interval& a, const Interval& b) {
    a = a + b;
    return a;
}

Interval widen_ulps(const Interval& x, int n) { return {down_ulps(x.lo, n), up_ulps(x.hi, n)}; }

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval log(const Interval& x) {
    if (!(x.lo > 0.0)) fail(ErrorCode::Domain, "log of a non-positive interval");
    return {down_ulps(std::log(x.lo), Interval::kLibmUlps), up_ulps(std::log(x.hi), Interval::kLibmUlps)};
}

Interval log1p(const Interval& x) {
    if (!(x.lo > -1.0)) fail(ErrorCode::Domain, "log1p argument <= -1");
    return {down_ulps(std::log1p(x.lo), Interval::kLibmUlps), up_ulps(std::log1p(x.hi), Interval::kLibmUlps)};
}

Interval exp(const Interval& x) {
    const double lo = std::max(0.0, down_ulps(std::exp(x.lo), Interval::kLibmUlps));
    return {lo, up_ulps(std::exp(x.hi), Interval::kLibmUlps)};
}

Interval sqrt(const Interval& x) {
    if (x.lo < 0.0) fail(ErrorCode::Domain, "sqrt of a negative interval");
    return {std::max(0.0, next_down(std::sqrt(x.lo))), next_up(std::sqrt(x.hi))};
}

Interval pow(const Interval& x, const Interval& p) { return exp(p * log(x)); }

Interval abs(const Interval& x) {
    if (x.lo >= 0.0) return x;
    if (x.hi <= 0.0) return -x;
    return {0.0, std::max(-x.lo, x.hi)};
}

Interval max(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

bool certainly_less(const Interval& a, const Interval& b) { return a.hi < b.lo; }
bool certainly_greater(const Interval& a, const Interval& b) { return a.lo > b.hi; }

namespace {

std::string format_directed(double x, int mode) {
    const int saved = std::fegetround();
    std::fesetround(mode);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.29e", x);
    std::fesetround(saved);
    return buf;
}

}  // namespace

std::string format_lower(double x) { return format_directed(x, FE_DOWNWARD); }
std::string format_upper(double x) { return format_directed(x, FE_UPWARD); }

void CompensatedSum::add_center(double t) {
    const double s = sum_ + t;
    const double bp = s - sum_;
    const double e = (sum_ - (s - bp)) + (t - bp);
    sum_ = s;
    comp_ += e;
    // the compensation add is the only inexact step: error <= |comp| * 2^-53
    radius_ = add_up(radius_, mul_up(std::fabs(comp_), 0x1p-53));
}

void CompensatedSum::add(double t, int ulps) {
    add_center(t);
    radius_ = add_up(radius_, ulps * ulp(t));
    terms_ += 1.0;
}

void CompensatedSum::add_exact(double t) {
    add_center(t);
    terms_ += 1.0;
}

void CompensatedSum::merge(const CompensatedSum& other) {
    add_center(other.sum_);
    comp_ += other.comp_;
    radius_ = add_up(radius_, mul_up(std::fabs(comp_), 0x1p-53));
    radius_ = add_up(radius_, other.radius_);
    terms_ += other.terms_;
}

Interval CompensatedSum::to_interval() const {
    return Interval::exact(sum_) + Interval::exact(comp_) + Interval{-radius_, radius_};
}

}  // namespace qpv
