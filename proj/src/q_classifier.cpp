#include "qpv/q_classifier.hpp"

#include <string>

#include "qpv/error.hpp"

namespace qpv {

void ClassificationSummary::add(const PrimeClassRecord& r) {
    switch (r.q_class) {
        case QClass::QPlus: ++pi_plus; break;
        case QClass::QMinus: ++pi_minus; break;
        case QClass::Excluded: ++excluded; break;
        case QClass::NotCandidate: ++not_candidate; break;
    }
}

void ClassificationSummary::merge(const ClassificationSummary& other) {
    pi_plus += other.pi_plus;
    pi_minus += other.pi_minus;
    excluded += other.excluded;
    not_candidate += other.not_candidate;
}

std::vector<PrimeClassRecord> classify_primes(std::span<const std::uint64_t> primes, ClassifyMode mode) {
    std::vector<PrimeClassRecord> out;
    out.reserve(primes.size());
    const ClassTrialDivider& divider = default_forbidden_divider();
    for (std::uint64_t p : primes) out.push_back(classify_prime(p, mode, divider));
    return out;
}

ClassificationSummary classify_range(const PrimeEngine& engine, std::uint64_t lo, std::uint64_t hi,
                                     const ClassifyOptions& options) {
    engine.check_range(lo, hi);
    ClassificationSummary summary;
    summary.lo = lo;
    summary.limit = hi;
    const bool want_records = static_cast<bool>(options.on_records);
    struct Part {
        ClassificationSummary counts;
        std::vector<PrimeClassRecord> records;
    };
    engine.for_each_segment(
        lo, hi,
        [&](std::uint64_t, std::uint64_t, std::span<const std::uint64_t> primes) {
            Part part;
            part.records = classify_primes(primes, options.mode);
            for (const auto& r : part.records) part.counts.add(r);
            if (!want_records) part.records.clear();
            return part;
        },
        [&](Part&& part) {
            summary.merge(part.counts);
            if (want_records) options.on_records(part.records);
        });
    return summary;
}

std::uint64_t q_pi(const PrimeEngine& engine, std::uint64_t x, QSign sign, ClassifyMode mode) {
    if (x > engine.config().limit) fail(ErrorCode::Capacity, "q_pi argument exceeds the sieve limit");
    // classify_range checks hi <= limit; x == limit is handled by the extra prime test.
    const std::uint64_t hi = std::min(x + 1, engine.config().limit);
    ClassificationSummary s = classify_range(engine, 0, hi, {mode, {}});
    if (hi == x && is_prime(x)) s.add(classify_prime(x, mode));
    switch (sign) {
        case QSign::Plus: return s.pi_plus;
        case QSign::Minus: return s.pi_minus;
        case QSign::Both: return s.q_total();
    }
    return 0;
}

const char* record_csv_header() { return "p,residue8,residue24,q_class,witness"; }

std::string record_csv_row(const PrimeClassRecord& r) {
    std::string row = std::to_string(r.p) + "," + std::to_string(r.residue8) + "," + std::to_string(r.residue24) + ",";
    row += to_string(r.q_class);
    row += ",";
    if (r.witness) row += std::to_string(*r.witness);
    return row;
}

}  // namespace qpv
