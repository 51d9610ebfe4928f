#include "qpv/theorem3_pipeline.hpp"

#include <cmath>
#include <string>

#include "qpv/constants.hpp"
#include "qpv/error.hpp"
#include "qpv/factorizer.hpp"

namespace qpv {

namespace {

using json = nlohmann::ordered_json;

Interval K(std::string_view id) { return constant(id).value(); }
std::string anchor(std::string_view id) { return std::string(constant(id).anchor); }
Interval X(double v) { return Interval::exact(v); }
Interval U(std::uint64_t n) { return Interval::from_unsigned(n); }

bool below_two(const Interval& q, std::uint64_t P) { return (q * dusart_ratio_bound(P)).hi < 2.0; }

}  // namespace

Interval dusart_ratio_bound(std::uint64_t P) {
    if (P <= kQLimit) fail(ErrorCode::Domain, "dusart_ratio_bound requires P > 2^29");
    const Interval lp = log(U(P));
    const Interval l2 = log(X(2.0));
    const Interval first = X(1.0) + X(1.0) / (K(k::dusart_121945) * l2 * l2 * l2);
    const Interval second = X(1.0) + X(1.0) / (X(5.0) * lp * lp * lp);
    return lp / (X(29.0) * l2) * first * second;
}

std::optional<std::uint64_t> product_crossing(double q_product_upper) {
    if (!(q_product_upper > 1.0)) fail(ErrorCode::Domain, "find_P0 requires a product bound above 1");
    if (q_product_upper >= 2.0) return std::nullopt;
    const Interval q = X(q_product_upper);
    std::uint64_t lo = kQLimit + 1;
    if (!below_two(q, lo)) return std::nullopt;
    std::uint64_t hi = lo;
    while (below_two(q, hi)) {
        lo = hi;
        if (hi > (std::uint64_t{1} << 62)) fail(ErrorCode::Capacity, "product crossing beyond 2^63");
        hi *= 2;
    }
    // Invariant: below_two(lo) and !below_two(hi).
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (below_two(q, mid) ? lo : hi) = mid;
    }
    return hi;
}

std::optional<std::uint64_t> find_P0(double q_product_upper) {
    auto p = product_crossing(q_product_upper);
    if (!p) return p;
    while (!is_prime(*p)) ++*p;
    return p;
}

Interval theta_gap_lower(std::uint64_t P0) {
    if (P0 <= kQLimit) fail(ErrorCode::Domain, "theta_gap_lower requires P0 > 2^29");
    const Interval p = U(P0);
    const Interval lp = log(p);
    return p - p / (K(k::dusart_100) * lp * lp) - K(k::theta_2_29_upper);
}

Theorem3Result assemble(const AccumulatorSnapshot& s, std::uint64_t pi_2_29) {
    if (s.range_begin > 2 || s.processed_limit != kQLimit) {
        fail(ErrorCode::Integrity, "snapshot must cover every prime below 2^29, got [" + std::to_string(s.range_begin) +
                                       ", " + std::to_string(s.processed_limit) + ")");
    }
    Theorem3Result r;
    auto& out = r.component_reports;
    const Interval ratio = s.product_ratio();
    const json range{{"range", "p < 2^29"}};

    out.push_back(make_report("q-product-ratio", anchor(k::ratio_41), ratio, Direction::Less, K(k::ratio_41),
                              {{"range", "p < 2^29"}, {"width", ratio.width()}}));
    out.push_back(make_report("q-product-ratio-width", "interval width", X(ratio.width()), Direction::Less, X(1e-8),
                              range));
    out.push_back(make_report("q-theta", anchor(k::theta_42), s.theta_q, Direction::Greater, K(k::theta_42), range));
    out.push_back(make_report("q-count", anchor(k::q_count_43), U(s.q_count), Direction::Equal, K(k::q_count_43),
                              range));
    out.push_back(make_report("theta-2-29", anchor(k::theta_2_29_upper), s.theta_all, Direction::LessEq,
                              K(k::theta_2_29_upper), {{"prime_count", s.prime_count}, {"pi_2_29", pi_2_29}}));

    r.P0 = find_P0(ratio.hi);
    if (!r.P0) {
        r.log_m_lower = X(s.theta_q.lo);
        r.log_N_lower = X(2.0) * r.log_m_lower;
        r.omega_lower = 1;
        out.push_back(make_report("p0", anchor(k::P0), ratio, Direction::Less, X(2.0),
                                  {{"degenerate", "product bound already reaches 2 at 2^29"}}));
        return r;
    }
    const std::uint64_t P0 = *r.P0;
    const std::uint64_t cross = *product_crossing(ratio.hi);
    const Interval q = X(ratio.hi);
    out.push_back(make_report("p0-crossing-below", anchor(k::dusart_121945), q * dusart_ratio_bound(cross - 1),
                              Direction::Less, X(2.0), {{"P", cross - 1}, {"q_product_upper", ratio.hi}}));
    out.push_back(make_report("p0-crossing-at", anchor(k::dusart_121945), q * dusart_ratio_bound(cross),
                              Direction::GreaterEq, X(2.0), {{"P", cross}, {"q_product_upper", ratio.hi}}));
    json p0_in{{"prime", is_prime(P0)}, {"crossing", cross}};
    if (const auto printed = find_P0(K(k::ratio_41).hi)) p0_in["from_printed_ratio"] = *printed;
    out.push_back(make_report("p0", anchor(k::P0), U(P0), Direction::Equal, K(k::P0), std::move(p0_in)));

    const Interval gap = theta_gap_lower(P0);
    r.log_m_lower = X(s.theta_q.lo) + X(gap.lo);
    r.log_N_lower = X(2.0) * r.log_m_lower;
    json m_in{{"theta_q_lo", format_lower(s.theta_q.lo)},
              {"theta_gap_lower", interval_json(gap)},
              {"recomputed", interval_json(r.log_m_lower)}};
    const double published = K(k::log_m_lower).mid();
    if (std::fabs(r.log_m_lower.mid() - published) > 1.0) {
        m_in["discrepancy"] = std::fabs(gap.mid() - published) < 1.0
                                  ? "published value equals the theta gap term alone, without the Q-prime theta term"
                                  : "published value differs from the recomputed sum";
        m_in["difference"] = r.log_m_lower.mid() - published;
    }
    out.push_back(make_report("log-m-lower", anchor(k::log_m_lower), r.log_m_lower, Direction::GreaterEq,
                              K(k::log_m_lower), std::move(m_in)));
    out.push_back(make_report("log-n-lower", anchor(k::log_N_lower), r.log_N_lower, Direction::GreaterEq,
                              K(k::log_N_lower), {{"log_m_lower", interval_json(r.log_m_lower)}}));

    const Interval p = U(P0);
    const Interval lp = log(p);
    const Interval pi_lower =
        p / lp * (X(1.0) + X(1.0) / lp + X(2.0) / (lp * lp) + K(k::dusart_7_32) / (lp * lp * lp));
    const Interval omega = pi_lower - U(pi_2_29) + U(s.q_count);
    out.push_back(make_report("omega-expression", anchor(k::omega_expr), omega, Direction::Greater,
                              K(k::omega_expr),
                              {{"pi_P0_lower", interval_json(pi_lower)}, {"pi_2_29", pi_2_29}, {"q_count", s.q_count}}));
    r.omega_lower = static_cast<std::uint64_t>(std::floor(omega.lo)) + 1;
    out.push_back(make_report("omega-lower", anchor(k::omega_lower), U(r.omega_lower), Direction::Equal,
                              K(k::omega_lower)));
    return r;
}

json Theorem3Result::to_json() const {
    json j;
    j["P0"] = P0 ? json(*P0) : json(nullptr);
    j["log_m_lower"] = interval_json(log_m_lower);
    j["log_N_lower"] = interval_json(log_N_lower);
    j["omega_lower"] = omega_lower;
    json reports = json::array();
    for (const auto& rep : component_reports) reports.push_back(rep.to_json());
    j["component_reports"] = std::move(reports);
    return j;
}

}  // namespace qpv
