#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace qpv {

/// Closed interval [lo, hi] of doubles guaranteed to enclose a real value.
///
/// Each arithmetic endpoint is the round-to-nearest result, stepped one ulp
/// outward unless an error-free transformation (TwoSum, FMA residual) shows
/// the rounding went outward already or was exact. The elementary functions (log, exp, log1p, sqrt, pow) are taken from libm and
/// widened by `kLibmUlps` ulps on each side.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static constexpr int kLibmUlps = 4;

    constexpr Interval() = default;
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    /// Degenerate interval around a double that is known to be exact.
    static constexpr Interval exact(double x) { return {x, x}; }
    /// Enclosure of an integer (exact when |n| < 2^53, otherwise widened).
    static Interval from_integer(long long n);
    static Interval from_unsigned(unsigned long long n);
    /// Enclosure of a decimal literal such as "6.27961e-4".
    static Interval from_decimal(std::string_view text);

    double mid() const { return lo + 0.5 * (hi - lo); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool valid() const { return lo <= hi; }
};

inline double next_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double next_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
double down_ulps(double x, int n);
double up_ulps(double x, int n);

/// Upward-rounded a + b, a * b for nonnegative bookkeeping quantities.
inline double add_up(double a, double b) { return next_up(a + b); }
inline double mul_up(double a, double b) { return next_up(a * b); }

/// Unit in the last place of |x|.
double ulp(double x);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval& operator+=(Interval& a, const Interval& b);

Interval widen_ulps(const Interval& x, int n);
Interval hull(const Interval& a, const Interval& b);

Interval log(const Interval& x);
Interval log1p(const Interval& x);
Interval exp(const Interval& x);
Interval sqrt(const Interval& x);
/// x^p for x > 0 via exp(p log x).
Interval pow(const Interval& x, const Interval& p);
Interval abs(const Interval& x);
Interval max(const Interval& a, const Interval& b);

bool certainly_less(const Interval& a, const Interval& b);
bool certainly_greater(const Interval& a, const Interval& b);

/// Shortest-ish decimal form of an endpoint with 30 significant digits,
/// rounded toward -inf (lo) or +inf (hi).
std::string format_lower(double x);
std::string format_upper(double x);

/// Running sum of many nonnegative-error terms.
///
/// The centre is carried in compensated form (TwoSum error-free updates); the
/// rounding error of the compensation channel and each term's own ulp budget
/// are tracked as an upward-rounded radius and folded in by `to_interval`.
class CompensatedSum {
public:
    /// Adds a term whose computed value `t` is within `ulps` units in the last
    /// place of the true value.
    void add(double t, int ulps = Interval::kLibmUlps);
    /// Adds an exact term (integer-valued, etc).
    void add_exact(double t);
    void merge(const CompensatedSum& other);
    Interval to_interval() const;
    double terms() const { return terms_; }

private:
    void add_center(double t);

    double sum_ = 0.0;
    double comp_ = 0.0;
    double radius_ = 0.0;
    double terms_ = 0.0;
};

}  // namespace qpv
