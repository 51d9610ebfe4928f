#include "qpv/accumulators.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "qpv/error.hpp"
#include "qpv/q_classifier.hpp"

namespace qpv {

namespace {

constexpr const char* kMagic = "# qpv-checkpoint v1";
constexpr const char* kRatioName = "q_log_product_ratio";
constexpr const char* kThetaQName = "q_theta";
constexpr const char* kThetaAllName = "all_theta";

bool same(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// log((p^2+p+1)/p^2) = log1p((p+1)/p^2); the quotient is formed in extended
// precision where p^2 is exact, so the term stays within the 4-ulp budget.
double log_ratio_term(std::uint64_t p) {
    const long double lp = static_cast<long double>(p);
    const long double x = (lp + 1.0L) / (lp * lp);
    return std::log1p(static_cast<double>(x));
}

class CheckpointWriter {
public:
    CheckpointWriter(const std::string& path, const AccumulatorSnapshot& base, bool append) {
        const bool fresh = !append || !std::filesystem::exists(path);
        out_.open(path, fresh ? std::ios::trunc : std::ios::app);
        if (!out_) fail(ErrorCode::Io, "cannot open checkpoint file " + path);
        if (fresh) write_header(base);
    }

    void write_header(const AccumulatorSnapshot& s) {
        out_ << kMagic << "\n";
        out_ << "# config_hash=" << s.config_hash << " range_begin=" << s.range_begin << "\n";
        out_ << "# columns=segment_index,processed_limit,prime_count,accumulator,lo,hi\n";
        out_.flush();
    }

    void write_group(std::uint64_t index, const AccumulatorSnapshot& s) {
        auto line = [&](std::uint64_t count, const char* name, const Interval& v) {
            out_ << index << ' ' << s.processed_limit << ' ' << count << ' ' << name << ' ' << format_lower(v.lo) << ' '
                 << format_upper(v.hi) << '\n';
        };
        line(s.q_count, kRatioName, s.log_product_ratio);
        line(s.q_count, kThetaQName, s.theta_q);
        line(s.prime_count, kThetaAllName, s.theta_all);
        out_.flush();
        if (!out_) fail(ErrorCode::Io, "failed writing checkpoint");
    }

private:
    std::ofstream out_;
};

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0 || s[0] == '-') {
        fail(ErrorCode::Parse, "checkpoint line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
        fail(ErrorCode::Parse, "checkpoint line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

bool operator==(const AccumulatorSnapshot& a, const AccumulatorSnapshot& b) {
    return a.range_begin == b.range_begin && a.processed_limit == b.processed_limit && a.q_count == b.q_count &&
           a.prime_count == b.prime_count && same(a.log_product_ratio, b.log_product_ratio) &&
           same(a.theta_q, b.theta_q) && same(a.theta_all, b.theta_all) && a.config_hash == b.config_hash;
}

Accumulator::Accumulator(std::uint64_t range_begin, std::string config_hash)
    : range_begin_(range_begin), config_hash_(std::move(config_hash)) {}

void Accumulator::add(const PrimeClassRecord& r) {
    if (r.p < range_begin_ || (last_ && r.p <= *last_)) {
        fail(ErrorCode::Integrity, "record stream out of order at p=" + std::to_string(r.p));
    }
    last_ = r.p;
    ++prime_count_;
    const double lp = std::log(static_cast<double>(r.p));
    theta_all_.add(lp);
    if (!r.is_q()) return;
    ++q_count_;
    theta_q_.add(lp);
    ratio_.add(log_ratio_term(r.p));
}

void Accumulator::merge(const Accumulator& later) {
    if (last_ && later.last_ && *later.last_ <= *last_) {
        fail(ErrorCode::Integrity, "accumulator merge out of order");
    }
    if (later.last_) last_ = later.last_;
    q_count_ += later.q_count_;
    prime_count_ += later.prime_count_;
    ratio_.merge(later.ratio_);
    theta_q_.merge(later.theta_q_);
    theta_all_.merge(later.theta_all_);
}

AccumulatorSnapshot Accumulator::finish(std::uint64_t upto) const {
    if (last_ && *last_ >= upto) fail(ErrorCode::Integrity, "record beyond the snapshot limit");
    if (upto < range_begin_) fail(ErrorCode::Integrity, "snapshot limit below range start");
    AccumulatorSnapshot s;
    s.range_begin = range_begin_;
    s.processed_limit = upto;
    s.q_count = q_count_;
    s.prime_count = prime_count_;
    s.log_product_ratio = ratio_.to_interval();
    s.theta_q = theta_q_.to_interval();
    s.theta_all = theta_all_.to_interval();
    s.config_hash = config_hash_;
    return s;
}

AccumulatorSnapshot accumulate(const PrimeEngine& engine, std::span<const PrimeClassRecord> records,
                               std::uint64_t begin, std::uint64_t upto, const std::string& config_hash) {
    const std::vector<std::uint64_t> expected = engine.primes_in_range(begin, upto);
    Accumulator acc(begin, config_hash);
    std::size_t i = 0;
    for (const PrimeClassRecord& r : records) {
        acc.add(r);
        if (i >= expected.size() || expected[i] != r.p) {
            fail(ErrorCode::Integrity, "record stream has a gap or extra prime near p=" + std::to_string(r.p));
        }
        ++i;
    }
    if (i != expected.size()) {
        fail(ErrorCode::Integrity, "record stream ends before " + std::to_string(upto) + " (missing p=" +
                                       std::to_string(expected[i]) + ")");
    }
    return acc.finish(upto);
}

AccumulatorSnapshot merge(const AccumulatorSnapshot& a, const AccumulatorSnapshot& b, bool deterministic) {
    if (b.is_empty()) return a;
    if (a.is_empty()) return b;
    if (a.config_hash != b.config_hash) fail(ErrorCode::Integrity, "snapshot config hash mismatch");
    AccumulatorSnapshot out;
    if (a.processed_limit == b.range_begin) {
        out.range_begin = a.range_begin;
        out.processed_limit = b.processed_limit;
    } else if (b.processed_limit == a.range_begin) {
        if (deterministic) fail(ErrorCode::Integrity, "snapshots must be merged in ascending order");
        out.range_begin = b.range_begin;
        out.processed_limit = a.processed_limit;
    } else {
        fail(ErrorCode::Integrity, "snapshot ranges are not adjacent");
    }
    out.q_count = a.q_count + b.q_count;
    out.prime_count = a.prime_count + b.prime_count;
    out.log_product_ratio = a.log_product_ratio + b.log_product_ratio;
    out.theta_q = a.theta_q + b.theta_q;
    out.theta_all = a.theta_all + b.theta_all;
    out.config_hash = a.config_hash;
    return out;
}

std::string accumulation_config_hash(std::uint64_t segment_size, std::uint64_t chunk) {
    return fnv1a_hex("qpv-accumulate-v1;segment_size=" + std::to_string(segment_size) +
                     ";chunk=" + std::to_string(chunk) + ";classes={7,13}");
}

void save_checkpoint(const AccumulatorSnapshot& snapshot, const std::string& path) {
    CheckpointWriter w(path, snapshot, false);
    w.write_group(0, snapshot);
}

AccumulatorSnapshot load_checkpoint(const std::string& path, const std::optional<std::string>& expected_hash) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open checkpoint file " + path);
    std::string line;
    std::size_t line_no = 0;
    std::string hash;
    std::optional<std::uint64_t> range_begin;

    struct Group {
        std::uint64_t processed_limit = 0;
        std::map<std::string, std::pair<std::uint64_t, Interval>> values;
    };
    std::optional<std::uint64_t> current_index;
    Group current;
    std::optional<AccumulatorSnapshot> last_complete;

    auto complete = [&](const Group& g) -> std::optional<AccumulatorSnapshot> {
        if (g.values.size() != 3) return std::nullopt;
        const auto& ratio = g.values.at(kRatioName);
        const auto& tq = g.values.at(kThetaQName);
        const auto& ta = g.values.at(kThetaAllName);
        AccumulatorSnapshot s;
        s.range_begin = *range_begin;
        s.processed_limit = g.processed_limit;
        s.q_count = ratio.first;
        s.prime_count = ta.first;
        s.log_product_ratio = ratio.second;
        s.theta_q = tq.second;
        s.theta_all = ta.second;
        s.config_hash = hash;
        return s;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = "checkpoint line " + std::to_string(line_no) + ": ";
        if (line_no == 1) {
            if (line != kMagic) fail(ErrorCode::Parse, where + "missing checkpoint header");
            continue;
        }
        if (line.empty()) continue;
        std::istringstream fields(line);
        if (line[0] == '#') {
            std::string token;
            fields >> token;
            while (fields >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                if (key == "config_hash") hash = value;
                if (key == "range_begin") range_begin = parse_u64(value, line_no);
            }
            continue;
        }
        if (hash.empty() || !range_begin) fail(ErrorCode::Parse, where + "record before config header");
        std::vector<std::string> f;
        for (std::string tok; fields >> tok;) f.push_back(tok);
        if (f.size() != 6) fail(ErrorCode::Parse, where + "expected 6 fields, found " + std::to_string(f.size()));
        const std::uint64_t index = parse_u64(f[0], line_no);
        const std::uint64_t limit = parse_u64(f[1], line_no);
        const std::uint64_t count = parse_u64(f[2], line_no);
        const std::string& name = f[3];
        if (name != kRatioName && name != kThetaQName && name != kThetaAllName) {
            fail(ErrorCode::Parse, where + "unknown accumulator '" + name + "'");
        }
        const Interval v{parse_double(f[4], line_no), parse_double(f[5], line_no)};
        if (!v.valid()) fail(ErrorCode::Parse, where + "interval endpoints out of order");
        if (current_index != index) {
            if (current_index && *current_index > index) fail(ErrorCode::Parse, where + "segment index decreases");
            if (auto s = complete(current)) last_complete = s;
            current_index = index;
            current = Group{};
            current.processed_limit = limit;
        }
        if (limit != current.processed_limit) fail(ErrorCode::Parse, where + "inconsistent processed_limit");
        if (!current.values.emplace(name, std::make_pair(count, v)).second) {
            fail(ErrorCode::Parse, where + "duplicate accumulator '" + name + "'");
        }
    }
    if (line_no == 0) fail(ErrorCode::Parse, "checkpoint line 1: empty file");
    if (current_index) {
        if (auto s = complete(current)) last_complete = s;
    }
    if (expected_hash && hash != *expected_hash) {
        fail(ErrorCode::Integrity, "checkpoint config hash " + hash + " does not match " + *expected_hash);
    }
    if (!last_complete) {
        AccumulatorSnapshot s;
        s.range_begin = s.processed_limit = range_begin.value_or(0);
        s.config_hash = hash;
        return s;
    }
    return *last_complete;
}

AccumulatorSnapshot run_accumulation(const PrimeEngine& engine, std::uint64_t limit, const AccumulationOptions& options) {
    engine.check_range(0, limit);
    const std::string hash = accumulation_config_hash(engine.config().segment_size);
    AccumulatorSnapshot snap;
    snap.config_hash = hash;
    const bool resuming =
        options.resume && options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path);
    if (resuming) {
        snap = load_checkpoint(*options.checkpoint_path, hash);
        if (snap.range_begin != 0) fail(ErrorCode::Integrity, "checkpoint does not start at 0");
        if (snap.processed_limit > limit) fail(ErrorCode::Integrity, "checkpoint extends past the requested limit");
    }
    std::optional<CheckpointWriter> writer;
    if (options.checkpoint_path) writer.emplace(*options.checkpoint_path, snap, resuming);

    std::uint64_t chunks_done = 0;
    for (std::uint64_t a = snap.processed_limit; a < limit;) {
        if (options.max_chunks && chunks_done >= *options.max_chunks) break;
        const std::uint64_t b = std::min(limit, (a / kCheckpointChunk + 1) * kCheckpointChunk);
        Accumulator chunk(a, hash);
        engine.for_each_segment(
            a, b,
            [&](std::uint64_t lo, std::uint64_t, std::span<const std::uint64_t> primes) {
                Accumulator part(lo, hash);
                for (const auto& r : classify_primes(primes, options.mode)) part.add(r);
                return part;
            },
            [&](Accumulator&& part) { chunk.merge(part); });
        snap = merge(snap, chunk.finish(b));
        if (writer) writer->write_group((b - 1) / kCheckpointChunk, snap);
        if (options.on_chunk) options.on_chunk(snap);
        a = b;
        ++chunks_done;
    }
    return snap;
}

}  // namespace qpv
