#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpv/interval.hpp"

namespace qpv {

enum class Direction { Less, LessEq, Greater, GreaterEq, Equal };
enum class Verdict { Holds, Fails, Indeterminate };

std::string_view to_string(Direction d);
std::string_view to_string(Verdict v);

/// One checked inequality: a rigorous enclosure of the computed side against
/// a published (or derived) value.
struct BoundReport {
    std::string name;
    std::string paper_anchor;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    Interval computed;
    double claimed = 0.0;
    Direction direction = Direction::Less;
    Verdict verdict = Verdict::Indeterminate;

    nlohmann::ordered_json to_json() const;
    static BoundReport from_json(const nlohmann::ordered_json& j);
};

/// Verdict of `computed <direction> claimed`, where claimed is itself an
/// enclosure. For Equal, the enclosures widened by `relative_tolerance` must
/// overlap.
Verdict judge(const Interval& computed, Direction direction, const Interval& claimed, double relative_tolerance = 0.0);

/// Builds a report and judges it. `policy_indeterminate` forces Indeterminate
/// (claim outside the regime reachable at this scale).
BoundReport make_report(std::string name, std::string anchor, const Interval& computed, Direction direction,
                        const Interval& claimed, nlohmann::ordered_json inputs = nlohmann::ordered_json::object(),
                        bool policy_indeterminate = false, double relative_tolerance = 0.0);

/// Holds if every report holds; Fails if any fails; otherwise Indeterminate.
Verdict overall(const std::vector<BoundReport>& reports);

/// JSON encoding of an interval with decimal endpoints.
nlohmann::ordered_json interval_json(const Interval& v);

}  // namespace qpv
