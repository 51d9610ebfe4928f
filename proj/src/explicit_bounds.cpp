#include "qpv/explicit_bounds.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "qpv/constants.hpp"
#include "qpv/error.hpp"

namespace qpv {

namespace {

using json = nlohmann::ordered_json;

Interval K(std::string_view id) { return constant(id).value(); }
std::string anchor(std::string_view id) { return std::string(constant(id).anchor); }
Interval X(double v) { return Interval::exact(v); }

constexpr ResidueSet kAllClasses = ResidueSet::from_mask((1u << kModulus) - 1);

}  // namespace

unsigned SieveProblem::rho(std::uint64_t p) {
    if (p == 2) return 0;
    return kForbiddenClasses.contains(p) ? 3 : 1;
}

double psi1(double k, double t) {
    if (!(k > 0.0) || !(t > 0.0)) fail(ErrorCode::Domain, "psi1 requires K > 0 and t > 0");
    return std::max(0.0, t * std::log(t / k) - t + k);
}

Interval psi1(const Interval& k, const Interval& t) {
    if (!(k.lo > 0.0) || !(t.lo > 0.0)) fail(ErrorCode::Domain, "psi1 requires K > 0 and t > 0");
    return max(t * log(t / k) - t + k, X(0.0));
}

double psi0(double v, double u, double b) {
    if (!(u >= 2.0) || !(v >= u) || !(b > 0.0)) fail(ErrorCode::Domain, "psi0 requires v >= u >= 2 and B > 0");
    return 1.0 - std::exp(-psi1(b, v / u));
}

Interval psi0(const Interval& v, const Interval& u, const Interval& b) {
    if (!(u.hi >= 2.0) || v.hi < u.lo || !(b.lo > 0.0)) fail(ErrorCode::Domain, "psi0 requires v >= u >= 2 and B > 0");
    return X(1.0) - exp(-psi1(b, v / u));
}

Interval B_exact(const PrimeEngine& engine, std::uint64_t z, const SieveProblem&) {
    if (z < 2) fail(ErrorCode::Domain, "B(z) requires z >= 2");
    const ClassStatistics s = engine.class_statistics(z);
    const auto odd = ResidueSet::from_mask(kAllClasses.mask() & ~(1u << 2));
    const Interval sum = s.log_over_p(odd) + X(2.0) * s.log_over_p(kForbiddenClasses);
    return sum / log(Interval::from_unsigned(z));
}

Interval V_exact(const PrimeEngine& engine, std::uint64_t z, const SieveProblem&) {
    CompensatedSum total;
    engine.for_each_segment(
        0, z + 1,
        [](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> primes) {
            CompensatedSum part;
            for (std::uint64_t p : primes) {
                const unsigned r = SieveProblem::rho(p);
                if (r != 0) part.add(std::log1p(-static_cast<double>(r) / static_cast<double>(p)), 6);
            }
            return part;
        },
        [&](CompensatedSum part) { total.merge(part); });
    return exp(total.to_interval());
}

Interval V_bound(double log_z) {
    if (!(log_z > K(k::V_floor).hi)) fail(ErrorCode::Domain, "V bound requires log z > 40");
    return K(k::V_const) / pow(X(log_z), X(1.5));
}

double B_cap() { return K(k::B_cap).mid(); }

std::optional<Interval> lemma21_rhs(double x, double u, double v, const Interval& V, const Interval& B) {
    if (!(x >= 1.0)) fail(ErrorCode::Domain, "lemma21_rhs requires x >= 1");
    const Interval p0 = psi0(X(v), X(u), B);
    if (!(p0.lo > 0.0)) return std::nullopt;
    const Interval xx = X(x);
    return (xx + pow(xx, X(2.0) / X(u))) * V / p0;
}

std::uint64_t enumerate_sifted(std::uint64_t x, std::uint64_t y, QSign sign) {
    if (x > 100000000) fail(ErrorCode::Capacity, "enumerate_sifted supports x <= 10^8");
    if (y > 10000) fail(ErrorCode::Capacity, "enumerate_sifted supports y <= 10^4");
    if (sign == QSign::Both) fail(ErrorCode::InvalidArgument, "enumerate_sifted needs a single sign");
    std::vector<std::uint8_t> alive(x + 1, 1);
    alive[0] = 0;
    for (std::uint64_t p : simple_sieve(y + 1)) {
        if (p == 2) continue;
        const bool triple = kForbiddenClasses.contains(p);
        for (std::uint64_t r = 0; r < p; ++r) {
            const std::uint64_t m = sign == QSign::Plus ? (8 * r + 1) % p : (8 * r + p - 1) % p;
            const bool forbidden = triple ? (m * ((m * m + m + 1) % p)) % p == 0 : m == 0;
            if (!forbidden) continue;
            for (std::uint64_t n = r == 0 ? p : r; n <= x; n += p) alive[n] = 0;
        }
    }
    std::uint64_t count = 0;
    for (std::uint8_t a : alive) count += a;
    return count;
}

BoundReport pnt_ap_error(const ClassStatistics& s, unsigned l) {
    if (!ResidueSet::units().contains(l) || l >= kModulus) fail(ErrorCode::Domain, "residue must be a unit mod 24");
    const double z = static_cast<double>(s.z);
    const Interval zi = Interval::from_unsigned(s.z);
    const Interval psi = s.psi(ResidueSet{l});
    const Interval err = abs(psi - zi / X(8.0)) / zi;
    const double lz = std::log(z);
    std::string_view tier = k::c1;
    if (lz >= 60.0) tier = k::c3;
    else if (lz >= 30.0) tier = k::c2;
    const bool outside = s.z < 10000000000ULL;
    json in{{"z", s.z}, {"l", l}, {"tier", std::string(tier)}, {"psi", interval_json(psi)}};
    return make_report("pnt-ap-" + std::to_string(l), anchor(tier), err, Direction::Less, K(tier), std::move(in), outside);
}

BoundReport pnt_ap_sqrt_error(const ClassStatistics& s, unsigned l, bool use_theta) {
    if (!ResidueSet::units().contains(l) || l >= kModulus) fail(ErrorCode::Domain, "residue must be a unit mod 24");
    const Interval zi = Interval::from_unsigned(s.z);
    const Interval f = use_theta ? s.theta(ResidueSet{l}) : s.psi(ResidueSet{l});
    const Interval err = abs(f - zi / X(8.0)) / sqrt(zi);
    json in{{"z", s.z}, {"l", l}, {"function", use_theta ? "theta" : "psi"}, {"value", interval_json(f)}};
    return make_report("pnt-sqrt-" + std::to_string(l), "|psi(z;24,l)-z/8| < 1.745 sqrt z", err, Direction::Less,
                       K(k::c_sqrt), std::move(in));
}

BoundReport pnt_ap_error(const PrimeEngine& engine, std::uint64_t z, unsigned l) {
    return pnt_ap_error(engine.class_statistics(z), l);
}

BoundReport pnt_ap_sqrt_error(const PrimeEngine& engine, std::uint64_t z, unsigned l, bool use_theta) {
    return pnt_ap_sqrt_error(engine.class_statistics(z), l, use_theta);
}

namespace {

Interval upper_log() { return X(625.0) * K(k::R); }

}  // namespace

Interval error_integral_mid(double log_z) {
    const Interval m = upper_log();
    if (!(log_z >= 60.0) || !(log_z < m.lo)) fail(ErrorCode::Domain, "mid-range integral requires 60 <= log z < 625R");
    const Interval L = X(log_z);
    return K(k::c3) * (X(1.0) / L - X(1.0) / m + log(m) - log(L));
}

Interval error_integral_tail(double log_z) {
    if (!(log_z >= upper_log().lo)) fail(ErrorCode::Domain, "tail integral requires log z >= 625R");
    const Interval L = X(log_z);
    return K(k::c_log) * (X(1.0) / L + X(1.0) / (X(2.0) * L * L));
}

double error_integral_mid_quadrature(double log_z) {
    const double c3 = K(k::c3).mid();
    const double m = upper_log().mid();
    auto f = [c3](double s) { return c3 * (1.0 + s) / (s * s); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, log_z, m, 15, 1e-14);
}

double error_integral_tail_quadrature(double log_z) {
    const double c = K(k::c_log).mid();
    auto f = [c](double s) { return c * (1.0 + s) / (s * s * s); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, log_z, std::numeric_limits<double>::infinity(), 15, 1e-14);
}

std::vector<BoundReport> lemma32_error_budget() {
    std::vector<BoundReport> out;
    const Interval R = K(k::R);
    const Interval tiers = (X(30.0) - X(10.0) * log(X(10.0))) * K(k::c1) + X(30.0) * K(k::c2) +
                           (X(625.0) * R - X(60.0)) * K(k::c3);
    out.push_back(make_report("error-budget-tiers", anchor(k::budget_upper), tiers, Direction::Less,
                              K(k::budget_upper)));

    const Interval integral = K(k::c_sqrt) * X(2.0) * (X(1.0) / X(1e4) - X(1.0) / X(1e5));
    const Interval printed = K(k::sqrt_integral) / X(1e4) - K(k::sqrt_integral) / X(1e5);
    out.push_back(make_report("error-budget-sqrt-integral", anchor(k::sqrt_integral), integral, Direction::Equal,
                              printed, {}, false, 1e-12));
    out.push_back(make_report("error-budget-sqrt", anchor(k::budget_sqrt), printed, Direction::Less,
                              K(k::budget_sqrt)));

    // Worst case over log z >= log 10^8 is the smallest log z.
    const Interval partial = -K(k::lp7_offset) + K(k::partial_sum_c) / log(X(1e8)) + K(k::budget_sqrt_used) +
                             K(k::budget_upper);
    out.push_back(make_report("partial-summation-constant", anchor(k::partial_sum_c), partial, Direction::Less,
                              X(0.0), {{"log_z_min", "log 10^8"}}));

    for (double L : {60.0, 100.0, 500.0, 1000.0, 5000.0}) {
        const Interval closed = error_integral_mid(L);
        const double quad = error_integral_mid_quadrature(L);
        out.push_back(make_report("error-integral-mid-" + std::to_string(static_cast<int>(L)),
                                  "c_3(1/log z-1/(625R)+log(625R)-log log z)", closed, Direction::Equal, X(quad),
                                  {{"log_z", L}, {"quadrature", quad}}, false, 1e-10));
    }
    for (double L : {6100.0, 7000.0, 10000.0, 100000.0, 1000000.0}) {
        const Interval closed = error_integral_tail(L);
        const double quad = error_integral_tail_quadrature(L);
        out.push_back(make_report("error-integral-tail-" + std::to_string(static_cast<int>(L)),
                                  "3.6*10^-7(1/log z+1/(2 log^2 z))", closed, Direction::Equal, X(quad),
                                  {{"log_z", L}, {"quadrature", quad}}, false, 1e-10));
    }

    const Interval tail = error_integral_mid(60.0) + error_integral_tail(upper_log().hi);
    out.push_back(make_report("mertens-error-integral", anchor(k::mertens_tail_1), tail, Direction::Less,
                              K(k::mertens_tail_1), {{"log_z", 60}}));

    const Interval msum = K(k::M24_7) + K(k::M24_13) - X(2.0) * K(k::mertens_tail_1) -
                          X(2.0) * K(k::mertens_tail_2) / X(60.0);
    out.push_back(make_report("mertens-class-sum", anchor(k::mertens_sum), msum, Direction::Greater,
                              K(k::mertens_sum), {{"log_z_min", 60}}));
    return out;
}

std::vector<BoundReport> lemma32_desk_checks(const PrimeEngine& engine, std::uint64_t z) {
    if (z < 1000) fail(ErrorCode::Domain, "desk checks require z >= 1000");
    const ClassStatistics s = engine.class_statistics(z);
    const Interval lz = log(Interval::from_unsigned(z));
    const json at{{"z", z}};
    const bool at_1e8 = z == 100000000;
    std::vector<BoundReport> out;

    // The published values are stated at z = 10^8 only.
    out.push_back(make_report("psi-24-7-lower", anchor(k::psi7_lower), s.psi(ResidueSet{7}), Direction::Greater,
                              K(k::psi7_lower), at, !at_1e8));
    out.push_back(make_report("psi-24-13-lower", anchor(k::psi13_lower), s.psi(ResidueSet{13}), Direction::Greater,
                              K(k::psi13_lower), at, !at_1e8));
    out.push_back(make_report("sum-logp-over-p-7", anchor(k::lp7_offset), s.log_over_p(ResidueSet{7}),
                              Direction::Less, lz / X(8.0) - K(k::lp7_offset), at));
    out.push_back(make_report("sum-logp-over-p-13", anchor(k::lp13_offset), s.log_over_p(ResidueSet{13}),
                              Direction::Less, lz / X(8.0) - K(k::lp13_offset), at));

    const Interval llz = log(lz) / X(8.0);
    const Interval r7 = s.reciprocal(ResidueSet{7}) - llz;
    const Interval r13 = s.reciprocal(ResidueSet{13}) - llz;
    json in7 = at, in13 = at;
    in7["residual"] = interval_json(r7);
    in13["residual"] = interval_json(r13);
    out.push_back(make_report("mertens-residual-7", anchor(k::M24_7), abs(r7 - K(k::M24_7)), Direction::Less, X(0.002),
                              std::move(in7)));
    out.push_back(make_report("mertens-residual-13", anchor(k::M24_13), abs(r13 - K(k::M24_13)), Direction::Less,
                              X(0.002), std::move(in13)));

    const Interval higher = s.euler_log(kForbiddenClasses) - s.reciprocal(kForbiddenClasses);
    out.push_back(make_report("higher-order-terms", anchor(k::higher_order), higher, Direction::Greater,
                              K(k::higher_order), at));

    const Interval product = exp(s.euler_log(kForbiddenClasses));
    out.push_back(make_report("euler-product-trend", anchor(k::EP_const), product / pow(lz, X(0.25)),
                              Direction::Greater, K(k::EP_const), at, true));

    const auto odd = ResidueSet::from_mask(kAllClasses.mask() & ~(1u << 2));
    const Interval b = (s.log_over_p(odd) + X(2.0) * s.log_over_p(kForbiddenClasses)) / lz;
    out.push_back(make_report("b-exact-trend", anchor(k::B_cap), b, Direction::Less, K(k::B_cap), at, true));

    for (unsigned l : ResidueSet::units().members()) out.push_back(pnt_ap_sqrt_error(s, l));
    return out;
}

namespace {

BoundReport tail_check_with(std::string name, double log_C, const Interval& tail) {
    if (!(log_C > 0.0)) fail(ErrorCode::Domain, "tail check requires log C > 0");
    const Interval L = X(log_C);
    const Interval e = exp(X(2.0) * exp(-L) + tail / sqrt(L));
    return make_report(std::move(name), anchor(k::tail_const), e, Direction::Less, X(2.0),
                       {{"log_C", log_C}, {"tail_constant", interval_json(tail)}});
}

// Per-sign constant for pi^+-(X) <= c X / log^(3/2) X at log X = L, from
// |S(x)| <= s x / log^(3/2) x with x = (X +- 1)/8 plus the y = x^(1/u) primes
// below the sieve level. The (1 + 1/X) factor is far below one ulp.
Interval q_count_constant(const Interval& s, const Interval& L, const Interval& u) {
    const Interval lx = L - log(X(8.0));
    const Interval main = s / X(8.0) * pow(L / lx, X(1.5));
    const Interval y = exp(lx / u + X(1.5) * log(L) - L);
    return main + y;
}

}  // namespace

BoundReport tail_check(double log_C) { return tail_check_with("tail-check", log_C, K(k::tail_const)); }

std::vector<BoundReport> theorem2_chain() {
    std::vector<BoundReport> out;
    const Interval gamma = K(k::euler_gamma);
    const Interval ep = K(k::EP_const);
    const Interval floor = K(k::V_floor);
    const Interval v_cubic = X(2.0) * exp(-gamma) / (ep * ep) * (X(1.0) + X(1.0) / (K(k::dusart_mertens) * floor * floor * floor));
    const Interval v_square = X(2.0) * exp(-gamma) / (ep * ep) * (X(1.0) + X(1.0) / (K(k::dusart_mertens) * floor * floor));
    out.push_back(make_report("v-bound", anchor(k::V_const), v_cubic, Direction::Less, K(k::V_const),
                              {{"log_z", 40},
                               {"mertens_factor", "1+1/(5 log^3 z)"},
                               {"value_with_1/(5 log^2 z)", interval_json(v_square)}}));

    const Interval rs = -K(k::RS_const) + X(1.0) / (X(2.0) * log(K(k::RS_floor)));
    out.push_back(make_report("rs-log-sum", anchor(k::RS_const), rs, Direction::Less, X(0.0)));
    const Interval b = X(1.0) + X(2.0) / X(4.0);
    out.push_back(make_report("b-cap", anchor(k::B_cap), b, Direction::LessEq, X(1.5),
                              {{"odd_primes", "sum log p/p < log z"}, {"classes_7_13", "each < log z/8"}}));

    const Interval u = K(k::u), v = K(k::v), B = K(k::B_cap);
    const Interval p0 = psi0(v, u, B);
    const Interval lx = K(k::S_floor);
    const Interval sifted = (X(1.0) + exp((X(2.0) / u - X(1.0)) * lx)) * K(k::V_const) * pow(u, X(1.5)) / p0;
    out.push_back(make_report("sifted-set-constant", anchor(k::S_const), sifted, Direction::LessEq, K(k::S_const),
                              {{"B", "1.5"}, {"u", "2.0174"}, {"v", "7.58"}, {"psi0", interval_json(p0)}}));

    const Interval L = K(k::X_floor);
    const Interval published = q_count_constant(K(k::S_const), L, u);
    out.push_back(make_report("q-count-constant", anchor(k::pi_const), published, Direction::LessEq, K(k::pi_const),
                              {{"sifted_constant", "37.00754"}, {"log_X", "716.5"}}));
    const Interval recomputed = q_count_constant(sifted, L, u);
    out.push_back(make_report("q-count-constant-recomputed", anchor(k::pi_const), recomputed, Direction::LessEq,
                              K(k::pi_const), {{"sifted_constant", interval_json(sifted)}, {"log_X", "716.5"}}));

    out.push_back(make_report("tail-integrand", anchor(k::tail_integrand), X(2.0) * K(k::pi_const), Direction::Equal,
                              K(k::tail_integrand), {}, false, 1e-12));
    out.push_back(make_report("tail-constant", anchor(k::tail_const), X(2.0) * K(k::tail_integrand), Direction::Equal,
                              K(k::tail_const), {}, false, 1e-12));

    const double log_C = K(k::C_exponent).mid();
    out.push_back(tail_check(log_C));
    out.push_back(tail_check_with("tail-check-published-chain", log_C, X(4.0) * published));
    out.push_back(tail_check_with("tail-check-recomputed", log_C, X(4.0) * recomputed));
    return out;
}

std::vector<BoundReport> select_reports(const std::vector<BoundReport>& reports, std::string_view name) {
    if (name.empty()) return reports;
    std::vector<BoundReport> out;
    for (const auto& r : reports) {
        const std::string_view n = r.name;
        if (n == name || (n.size() > name.size() && n.substr(0, name.size()) == name && n[name.size()] == '-')) {
            out.push_back(r);
        }
    }
    if (out.empty()) fail(ErrorCode::InvalidArgument, "no report named '" + std::string(name) + "'");
    return out;
}

}  // namespace qpv
