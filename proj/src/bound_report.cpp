#include "qpv/bound_report.hpp"

#include <algorithm>
#include <cmath>

#include "qpv/error.hpp"

namespace qpv {

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Less: return "<";
        case Direction::LessEq: return "<=";
        case Direction::Greater: return ">";
        case Direction::GreaterEq: return ">=";
        case Direction::Equal: return "=";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

namespace {

Direction parse_direction(const std::string& s) {
    for (Direction d : {Direction::Less, Direction::LessEq, Direction::Greater, Direction::GreaterEq, Direction::Equal}) {
        if (to_string(d) == s) return d;
    }
    fail(ErrorCode::Parse, "unknown direction '" + s + "'");
}

Verdict parse_verdict(const std::string& s) {
    for (Verdict v : {Verdict::Holds, Verdict::Fails, Verdict::Indeterminate}) {
        if (to_string(v) == s) return v;
    }
    fail(ErrorCode::Parse, "unknown verdict '" + s + "'");
}

}  // namespace

Verdict judge(const Interval& c, Direction direction, const Interval& k, double relative_tolerance) {
    switch (direction) {
        case Direction::Less:
            if (c.hi < k.lo) return Verdict::Holds;
            if (c.lo >= k.hi) return Verdict::Fails;
            return Verdict::Indeterminate;
        case Direction::LessEq:
            if (c.hi <= k.lo) return Verdict::Holds;
            if (c.lo > k.hi) return Verdict::Fails;
            return Verdict::Indeterminate;
        case Direction::Greater:
            if (c.lo > k.hi) return Verdict::Holds;
            if (c.hi <= k.lo) return Verdict::Fails;
            return Verdict::Indeterminate;
        case Direction::GreaterEq:
            if (c.lo >= k.hi) return Verdict::Holds;
            if (c.hi < k.lo) return Verdict::Fails;
            return Verdict::Indeterminate;
        case Direction::Equal: {
            const double slack = relative_tolerance * std::max(std::fabs(k.lo), std::fabs(k.hi));
            const Interval widened{next_down(k.lo - slack), next_up(k.hi + slack)};
            return widened.overlaps(c) ? Verdict::Holds : Verdict::Fails;
        }
    }
    return Verdict::Indeterminate;
}

BoundReport make_report(std::string name, std::string anchor, const Interval& computed, Direction direction,
                        const Interval& claimed, nlohmann::ordered_json inputs, bool policy_indeterminate,
                        double relative_tolerance) {
    BoundReport r;
    r.name = std::move(name);
    r.paper_anchor = std::move(anchor);
    r.inputs = std::move(inputs);
    r.computed = computed;
    r.claimed = claimed.mid();
    r.direction = direction;
    if (relative_tolerance > 0.0) r.inputs["relative_tolerance"] = relative_tolerance;
    if (policy_indeterminate) {
        r.inputs["policy"] = "claim applies outside the desk-reachable regime; reported as trend";
        r.verdict = Verdict::Indeterminate;
    } else {
        r.verdict = judge(computed, direction, claimed, relative_tolerance);
    }
    return r;
}

Verdict overall(const std::vector<BoundReport>& reports) {
    bool indeterminate = false;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::Fails) return Verdict::Fails;
        if (r.verdict == Verdict::Indeterminate) indeterminate = true;
    }
    return indeterminate ? Verdict::Indeterminate : Verdict::Holds;
}

nlohmann::ordered_json interval_json(const Interval& v) {
    return {{"lo", format_lower(v.lo)}, {"hi", format_upper(v.hi)}};
}

nlohmann::ordered_json BoundReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["paper_anchor"] = paper_anchor;
    j["inputs"] = inputs;
    j["computed_lo"] = computed.lo;
    j["computed_hi"] = computed.hi;
    j["claimed"] = claimed;
    j["direction"] = std::string(to_string(direction));
    j["verdict"] = std::string(to_string(verdict));
    return j;
}

BoundReport BoundReport::from_json(const nlohmann::ordered_json& j) {
    try {
        BoundReport r;
        r.name = j.at("name").get<std::string>();
        r.paper_anchor = j.at("paper_anchor").get<std::string>();
        r.inputs = j.at("inputs");
        r.computed = {j.at("computed_lo").get<double>(), j.at("computed_hi").get<double>()};
        r.claimed = j.at("claimed").get<double>();
        r.direction = parse_direction(j.at("direction").get<std::string>());
        r.verdict = parse_verdict(j.at("verdict").get<std::string>());
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed bound report: ") + e.what());
    }
}

}  // namespace qpv
