#include "qpv/constants.hpp"

#include <string>

#include "qpv/error.hpp"

namespace qpv {

namespace {

constexpr Constant kTable[] = {
#define QPV_CONSTANT(id, dec, anchor) Constant{#id, dec, anchor},
#include "qpv/constants.def"
#undef QPV_CONSTANT
};

}  // namespace

std::span<const Constant> constant_table() { return kTable; }

const Constant& constant(std::string_view name) {
    for (const Constant& c : kTable) {
        if (c.name == name) return c;
    }
    fail(ErrorCode::InvalidArgument, "unknown constant '" + std::string(name) + "'");
}

}  // namespace qpv
