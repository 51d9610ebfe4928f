#pragma once

#include <span>
#include <string_view>

#include "qpv/interval.hpp"

namespace qpv {

struct Constant {
    std::string_view name;
    std::string_view decimal;
    std::string_view anchor;

    Interval value() const { return Interval::from_decimal(decimal); }
    double approx() const { return value().mid(); }
};

/// Every published constant the verification relies on, in source order.
std::span<const Constant> constant_table();

/// Looks up a constant by identifier; throws InvalidArgument if unknown.
const Constant& constant(std::string_view name);

namespace k {
#define QPV_CONSTANT(id, dec, anchor) inline constexpr std::string_view id = #id;
#include "qpv/constants.def"
#undef QPV_CONSTANT
}  // namespace k

}  // namespace qpv
