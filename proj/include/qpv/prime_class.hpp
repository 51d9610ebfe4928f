#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace qpv {

enum class QClass { QPlus, QMinus, Excluded, NotCandidate };

std::string_view to_string(QClass c);
std::optional<QClass> parse_qclass(std::string_view s);

/// Classification of one prime p according to p mod 8 and the prime
/// factors of p^2 + p + 1.
struct PrimeClassRecord {
    std::uint64_t p = 0;
    unsigned residue8 = 0;
    unsigned residue24 = 0;
    QClass q_class = QClass::NotCandidate;
    std::optional<std::uint64_t> witness;

    bool is_q() const { return q_class == QClass::QPlus || q_class == QClass::QMinus; }
    friend bool operator==(const PrimeClassRecord&, const PrimeClassRecord&) = default;
};

}  // namespace qpv
