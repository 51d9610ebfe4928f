#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpv/qpv.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitUsage = 64;
constexpr std::uint64_t kTheorem3Limit = std::uint64_t{1} << 29;

struct Failure : std::runtime_error {
    qpv_status status;
    Failure(qpv_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(qpv_status s) {
    if (s != QPV_OK) throw Failure(s, std::string(qpv_status_string(s)) + ": " + qpv_last_error());
}

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json take_json(char* s) {
    json j = json::parse(s);
    qpv_string_free(s);
    return j;
}

std::uint64_t parse_limit(const std::string& text) {
    const auto caret = text.find('^');
    try {
        std::size_t used = 0;
        if (caret == std::string::npos) {
            const std::uint64_t v = std::stoull(text, &used);
            if (used != text.size()) throw Usage("bad limit '" + text + "'");
            return v;
        }
        const std::uint64_t base = std::stoull(text.substr(0, caret), &used);
        if (used != caret) throw Usage("bad limit '" + text + "'");
        const std::string e = text.substr(caret + 1);
        const unsigned exp = std::stoul(e, &used);
        if (used != e.size() || exp > 63) throw Usage("bad limit '" + text + "'");
        std::uint64_t v = 1;
        for (unsigned i = 0; i < exp; ++i) {
            if (v > UINT64_MAX / (base == 0 ? 1 : base)) throw Usage("limit overflows: '" + text + "'");
            v *= base;
        }
        return v;
    } catch (const std::logic_error&) {
        throw Usage("bad limit '" + text + "'");
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Options {
    std::string limit;
    std::uint64_t segment_size = std::uint64_t{1} << 20;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string checkpoint;
    bool resume = false;
    std::string format = "json";
    bool deterministic = false;
    std::string only;
    std::string mode = "early-exit";
    std::uint64_t max_chunks = 0;
    bool progress = false;
    std::uint64_t z = 100000000;
    std::optional<double> log_c;
    std::vector<std::uint64_t> primes;
    std::vector<std::uint64_t> a;
    std::uint64_t m_limit = 1000000;
    bool squarefree = false;
};

class Run {
public:
    Run(std::string subcommand, const Options& o, std::uint64_t limit)
        : subcommand_(std::move(subcommand)), o_(o), limit_(limit) {
        if (!o.deterministic) started_ = utc_now();
    }

    void report(const json& r) {
        const std::string v = r.at("verdict").get<std::string>();
        if (v == "Fails") fails_ = true;
        if (v == "Indeterminate") indeterminate_ = true;
        std::cout << r.dump() << '\n';
    }
    void reports(const json& array) {
        for (const auto& r : array) report(r);
    }
    void fail_verdict() { fails_ = true; }
    void indeterminate() { indeterminate_ = true; }
    json& result() { return result_; }

    int finish() {
        const char* overall = fails_ ? "Fails" : indeterminate_ ? "Indeterminate" : "Holds";
        json config{{"limit", limit_},
                    {"segment_size", o_.segment_size},
                    {"workers", o_.workers},
                    {"deterministic", o_.deterministic}};
        config["checkpoint"] = o_.checkpoint.empty() ? json(nullptr) : json(o_.checkpoint);
        json m{{"subcommand", subcommand_}, {"config", std::move(config)}};
        if (!o_.deterministic) {
            m["started_at"] = started_;
            m["finished_at"] = utc_now();
        }
        m["overall"] = overall;
        if (!result_.is_null()) m["result"] = result_;
        std::cout << json{{"manifest", std::move(m)}}.dump() << '\n';
        std::cout.flush();
        return fails_ ? 1 : indeterminate_ ? 2 : 0;
    }

private:
    std::string subcommand_;
    const Options& o_;
    std::uint64_t limit_;
    std::string started_;
    bool fails_ = false;
    bool indeterminate_ = false;
    json result_;
};

class Engine {
public:
    Engine(const Options& o, std::uint64_t limit) {
        qpv_sieve_config c;
        qpv_sieve_config_default(&c);
        c.limit = limit;
        c.segment_size = o.segment_size;
        c.workers = o.workers;
        c.deterministic = o.deterministic;
        check(qpv_engine_create(&c, &e_));
    }
    ~Engine() { qpv_engine_destroy(e_); }
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;
    const qpv_engine* get() const { return e_; }

private:
    qpv_engine* e_ = nullptr;
};

const char* q_class_name(qpv_q_class c) {
    switch (c) {
        case QPV_QPLUS: return "QPlus";
        case QPV_QMINUS: return "QMinus";
        case QPV_EXCLUDED: return "Excluded";
        case QPV_NOT_CANDIDATE: return "NotCandidate";
    }
    return "?";
}

json summary_json(const qpv_classification_summary& s) {
    return {{"lo", s.lo},
            {"limit", s.limit},
            {"pi_plus", s.pi_plus},
            {"pi_minus", s.pi_minus},
            {"excluded", s.excluded},
            {"not_candidate", s.not_candidate},
            {"q_total", s.pi_plus + s.pi_minus},
            {"total", s.pi_plus + s.pi_minus + s.excluded + s.not_candidate}};
}

void write_csv(const qpv_prime_record* records, size_t n, void*) {
    for (size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        std::printf("%llu,%u,%u,%s,", static_cast<unsigned long long>(r.p), r.residue8, r.residue24,
                    q_class_name(r.q_class));
        if (r.has_witness) std::printf("%llu", static_cast<unsigned long long>(r.witness));
        std::putchar('\n');
    }
}

int cmd_classify(const Options& o) {
    const std::uint64_t limit = o.limit.empty() ? std::uint64_t{1} << 24 : parse_limit(o.limit);
    if (o.mode != "early-exit" && o.mode != "full-factor" && o.mode != "both") throw Usage("unknown --mode " + o.mode);
    const bool csv = o.format == "csv";
    Run run("classify", o, limit);
    Engine engine(o, limit);
    if (csv) {
        std::cout.flush();
        std::printf("p,residue8,residue24,q_class,witness\n");
    }
    qpv_classification_summary first{};
    const qpv_classify_mode primary = o.mode == "full-factor" ? QPV_FULL_FACTOR : QPV_EARLY_EXIT;
    check(qpv_classify_range(engine.get(), 0, limit, primary, csv ? write_csv : nullptr, nullptr, &first));
    std::fflush(stdout);
    run.result()["summary"] = summary_json(first);
    run.result()["mode"] = o.mode;
    if (o.mode == "both") {
        qpv_classification_summary second{};
        check(qpv_classify_range(engine.get(), 0, limit, QPV_FULL_FACTOR, nullptr, nullptr, &second));
        const bool agree = std::memcmp(&first, &second, sizeof first) == 0;
        run.result()["full_factor_summary"] = summary_json(second);
        run.result()["oracles_agree"] = agree;
        if (!agree) run.fail_verdict();
    }
    return run.finish();
}

qpv_classify_mode parse_mode(const std::string& m) {
    if (m == "early-exit") return QPV_EARLY_EXIT;
    if (m == "full-factor") return QPV_FULL_FACTOR;
    throw Usage("unknown --mode " + m);
}

void progress_line(const qpv_snapshot* s, void*) {
    std::fprintf(stderr, "processed %llu primes below %llu\n", static_cast<unsigned long long>(s->prime_count),
                 static_cast<unsigned long long>(s->processed_limit));
}

json snapshot_json(const qpv_snapshot& s) {
    char* out = nullptr;
    check(qpv_snapshot_json(&s, &out));
    return take_json(out);
}

qpv_snapshot accumulate(const Options& o, const Engine& engine, std::uint64_t limit) {
    qpv_accumulate_options opts{};
    opts.mode = parse_mode(o.mode);
    opts.checkpoint_path = o.checkpoint.empty() ? nullptr : o.checkpoint.c_str();
    opts.resume = o.resume;
    opts.max_chunks = o.max_chunks;
    opts.on_chunk = o.progress ? progress_line : nullptr;
    qpv_snapshot snap{};
    check(qpv_accumulate(engine.get(), limit, &opts, &snap));
    return snap;
}

int cmd_accumulate(const Options& o) {
    const std::uint64_t limit = o.limit.empty() ? kTheorem3Limit : parse_limit(o.limit);
    if (o.resume && o.checkpoint.empty()) throw Usage("--resume needs --checkpoint");
    Run run("accumulate", o, limit);
    Engine engine(o, limit);
    const qpv_snapshot snap = accumulate(o, engine, limit);
    run.result()["snapshot"] = snapshot_json(snap);
    run.result()["complete"] = snap.processed_limit == limit;
    if (snap.processed_limit != limit) run.indeterminate();
    return run.finish();
}

json bounds_reports(const Options& o) {
    char* out = nullptr;
    if (o.log_c) {
        check(qpv_tail_check_json(*o.log_c, &out));
        return take_json(out);
    }
    // Formula-only selections never touch the sieve.
    const char* only = o.only.empty() ? nullptr : o.only.c_str();
    if (only && qpv_bounds_json(nullptr, o.z, only, &out) == QPV_OK) return take_json(out);
    Engine engine(o, o.z + 1);
    check(qpv_bounds_json(engine.get(), o.z, only, &out));
    return take_json(out);
}

int cmd_bounds(const Options& o) {
    Run run("bounds", o, o.z + 1);
    run.reports(bounds_reports(o));
    return run.finish();
}

int cmd_theorem2(const Options& o) {
    Run run("theorem2", o, 0);
    char* out = nullptr;
    check(qpv_theorem2_json(o.only.empty() ? nullptr : o.only.c_str(), &out));
    run.reports(take_json(out));
    return run.finish();
}

json theorem1_shape(const std::vector<std::uint64_t>& primes, const json& a) {
    char* out = nullptr;
    check(qpv_theorem1_json(json{{"primes", primes}, {"a", a}}.dump().c_str(), &out));
    return take_json(out);
}

bool all_passed(const json& r) {
    for (const char* k : {"general", "equal_exponent", "q_membership"}) {
        if (r.contains(k) && !r[k].at("passed").get<bool>()) return false;
    }
    return true;
}

// Reference shapes: (primes, a, expected verdict of the equal-exponent and
// Q-membership filters together).
struct Vector {
    std::vector<std::uint64_t> primes;
    std::uint64_t a;
    bool expected;
};
const std::vector<Vector> kReferenceShapes = {{{7, 17}, 1, true}, {{7, 17}, 2, false}, {{3}, 1, false}, {{23}, 1, false}};

json run_theorem1_vectors(Run& run) {
    json lines = json::array();
    for (const auto& v : kReferenceShapes) {
        json r = theorem1_shape(v.primes, v.a);
        const bool got = r["equal_exponent"]["passed"].get<bool>() && r["q_membership"]["passed"].get<bool>();
        r["expected_pass"] = v.expected;
        r["matches"] = got == v.expected;
        if (got != v.expected) run.fail_verdict();
        lines.push_back(std::move(r));
    }
    return lines;
}

int cmd_theorem1(const Options& o) {
    Run run("theorem1", o, 0);
    if (o.primes.empty()) {
        for (const auto& line : run_theorem1_vectors(run)) std::cout << line.dump() << '\n';
        return run.finish();
    }
    if (o.a.empty()) throw Usage("--primes needs --a");
    const json a = o.a.size() == 1 ? json(o.a[0]) : json(o.a);
    const json r = theorem1_shape(o.primes, a);
    std::cout << r.dump() << '\n';
    if (!all_passed(r)) run.fail_verdict();
    return run.finish();
}

json theorem3_result(const Options& o, Run& run) {
    const std::uint64_t limit = o.limit.empty() ? kTheorem3Limit : parse_limit(o.limit);
    if (o.resume && o.checkpoint.empty()) throw Usage("--resume needs --checkpoint");
    Engine engine(o, limit + 1);
    const qpv_snapshot snap = accumulate(o, engine, limit);
    std::uint64_t pi = 0;
    check(qpv_pi(engine.get(), kTheorem3Limit, &pi));
    char* out = nullptr;
    check(qpv_theorem3_json(&snap, pi, &out));
    json r = take_json(out);
    run.reports(r["component_reports"]);
    r.erase("component_reports");
    r["pi_2_29"] = pi;
    r["snapshot"] = snapshot_json(snap);
    return r;
}

int cmd_theorem3(const Options& o) {
    Run run("theorem3", o, o.limit.empty() ? kTheorem3Limit : parse_limit(o.limit));
    run.result() = theorem3_result(o, run);
    return run.finish();
}

int cmd_qp_search(const Options& o) {
    Run run("qp-search", o, o.m_limit);
    char* out = nullptr;
    check(qpv_qp_search_json(o.m_limit, o.squarefree, &out));
    run.result() = take_json(out);
    if (!run.result()["hits"].empty()) run.fail_verdict();
    return run.finish();
}

int cmd_report(const Options& o) {
    Run run("report", o, o.z + 1);
    char* out = nullptr;
    check(qpv_theorem2_json(nullptr, &out));
    run.reports(take_json(out));
    Options bo = o;
    bo.only.clear();
    bo.log_c.reset();
    run.reports(bounds_reports(bo));
    run.result()["theorem1"] = run_theorem1_vectors(run);
    check(qpv_qp_search_json(1000, 0, &out));
    run.result()["qp_search"] = take_json(out);
    if (!o.checkpoint.empty() && std::filesystem::exists(o.checkpoint)) {
        Options to = o;
        to.resume = true;
        to.limit.clear();
        run.result()["theorem3"] = theorem3_result(to, run);
    }
    return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for quasiperfect-number bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--limit", o.limit, "Exclusive prime limit, decimal or b^k");
    app.add_option("--segment-size", o.segment_size, "Sieve segment length")->check(CLI::Range(64ULL, 1ULL << 32));
    app.add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--checkpoint", o.checkpoint, "Checkpoint file");
    app.add_flag("--resume", o.resume, "Resume from the checkpoint");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--deterministic", o.deterministic, "Omit timestamps; byte-identical output");
    app.add_option("--only", o.only, "Report name to select");

    auto* classify = app.add_subcommand("classify", "Classify the primes below --limit into Q+, Q-");
    classify->add_option("--mode", o.mode, "early-exit, full-factor or both");
    auto* acc = app.add_subcommand("accumulate", "Accumulate Q-prime aggregates with checkpoints");
    acc->add_option("--mode", o.mode, "early-exit or full-factor");
    acc->add_option("--max-chunks", o.max_chunks, "Stop after this many new chunks");
    acc->add_flag("--progress", o.progress, "Chunk progress on stderr");
    auto* bounds = app.add_subcommand("bounds", "Error budget, tail check and desk-scale sums");
    bounds->add_option("--z", o.z, "Desk-scale sum limit")->check(CLI::Range(1000ULL, 1ULL << 34));
    bounds->add_option("--log-c", o.log_c, "Evaluate only the tail check at this log C");
    auto* t1 = app.add_subcommand("theorem1", "Congruence filters for a candidate shape");
    t1->add_option("--primes", o.primes, "Distinct odd primes")->delimiter(',');
    t1->add_option("--a", o.a, "Exponent parameter(s): N = prod p_i^(2 a_i)")->delimiter(',');
    app.add_subcommand("theorem2", "Sieve-bound constant chain and tail check");
    auto* t3 = app.add_subcommand("theorem3", "Largest prime factor, log N and omega bounds");
    t3->add_option("--mode", o.mode, "early-exit or full-factor");
    t3->add_option("--max-chunks", o.max_chunks, "Stop after this many new chunks");
    t3->add_flag("--progress", o.progress, "Chunk progress on stderr");
    auto* qp = app.add_subcommand("qp-search", "Brute-force search for quasiperfect m^2");
    qp->add_option("--m-limit", o.m_limit, "Largest m")->check(CLI::Range(1ULL, 10000000ULL));
    qp->add_flag("--squarefree", o.squarefree, "Squarefree m only");
    auto* report = app.add_subcommand("report", "Every formula and desk-scale check in one stream");
    report->add_option("--z", o.z, "Desk-scale sum limit")->check(CLI::Range(1000ULL, 1ULL << 34));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (o.format == "csv" && !classify->parsed()) throw Usage("--format csv applies to classify only");
        if (classify->parsed()) return cmd_classify(o);
        if (acc->parsed()) return cmd_accumulate(o);
        if (bounds->parsed()) return cmd_bounds(o);
        if (t1->parsed()) return cmd_theorem1(o);
        if (t3->parsed()) return cmd_theorem3(o);
        if (qp->parsed()) return cmd_qp_search(o);
        if (report->parsed()) return cmd_report(o);
        return cmd_theorem2(o);
    } catch (const Usage& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2 + static_cast<int>(e.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2 + QPV_ERR_INTERNAL;
    }
}
