#include "qpv/qpv.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "qpv/accumulators.hpp"
#include "qpv/constants.hpp"
#include "qpv/error.hpp"
#include "qpv/explicit_bounds.hpp"
#include "qpv/factorizer.hpp"
#include "qpv/prime_engine.hpp"
#include "qpv/q_classifier.hpp"
#include "qpv/qp_checker.hpp"
#include "qpv/theorem3_pipeline.hpp"

struct qpv_engine {
    qpv::PrimeEngine engine;
};

namespace {

using json = nlohmann::ordered_json;

thread_local std::string last_error;

template <class F>
qpv_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return QPV_OK;
    } catch (const qpv::Error& e) {
        last_error = e.what();
        return static_cast<qpv_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return QPV_ERR_CAPACITY;
    } catch (const std::exception& e) {
        last_error = e.what();
        return QPV_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) qpv::fail(qpv::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qpv::ClassifyMode to_mode(qpv_classify_mode m) {
    switch (m) {
        case QPV_EARLY_EXIT: return qpv::ClassifyMode::EarlyExit;
        case QPV_FULL_FACTOR: return qpv::ClassifyMode::FullFactor;
    }
    qpv::fail(qpv::ErrorCode::InvalidArgument, "unknown classify mode");
}

qpv_prime_record to_c(const qpv::PrimeClassRecord& r) {
    return {r.p, r.residue8, r.residue24, static_cast<qpv_q_class>(static_cast<int>(r.q_class)),
            r.witness.has_value(), r.witness.value_or(0)};
}

qpv_snapshot to_c(const qpv::AccumulatorSnapshot& s) {
    qpv_snapshot c{};
    c.range_begin = s.range_begin;
    c.processed_limit = s.processed_limit;
    c.q_count = s.q_count;
    c.prime_count = s.prime_count;
    c.log_product_ratio = {s.log_product_ratio.lo, s.log_product_ratio.hi};
    c.theta_q = {s.theta_q.lo, s.theta_q.hi};
    c.theta_all = {s.theta_all.lo, s.theta_all.hi};
    std::snprintf(c.config_hash, sizeof c.config_hash, "%s", s.config_hash.c_str());
    return c;
}

qpv::AccumulatorSnapshot from_c(const qpv_snapshot& c) {
    qpv::AccumulatorSnapshot s;
    s.range_begin = c.range_begin;
    s.processed_limit = c.processed_limit;
    s.q_count = c.q_count;
    s.prime_count = c.prime_count;
    s.log_product_ratio = {c.log_product_ratio.lo, c.log_product_ratio.hi};
    s.theta_q = {c.theta_q.lo, c.theta_q.hi};
    s.theta_all = {c.theta_all.lo, c.theta_all.hi};
    s.config_hash = std::string(c.config_hash, strnlen(c.config_hash, sizeof c.config_hash));
    for (const auto* iv : {&s.log_product_ratio, &s.theta_q, &s.theta_all}) {
        if (!iv->valid()) qpv::fail(qpv::ErrorCode::InvalidArgument, "snapshot holds an invalid interval");
    }
    return s;
}

json reports_json(const std::vector<qpv::BoundReport>& reports) {
    json a = json::array();
    for (const auto& r : reports) a.push_back(r.to_json());
    return a;
}

std::string_view only_of(const char* only) { return only ? std::string_view(only) : std::string_view(); }

}  // namespace

extern "C" {

const char* qpv_last_error(void) { return last_error.c_str(); }

const char* qpv_status_string(qpv_status status) {
    if (status == QPV_OK) return "ok";
    const int c = static_cast<int>(status);
    if (c < 1 || c > static_cast<int>(qpv::ErrorCode::InvalidArgument)) return "unknown";
    return qpv::to_string(static_cast<qpv::ErrorCode>(c));
}

void qpv_string_free(char* s) { std::free(s); }

void qpv_sieve_config_default(qpv_sieve_config* config) {
    if (config == nullptr) return;
    const qpv::SieveConfig d;
    *config = {d.limit, d.segment_size, d.workers, d.deterministic};
}

qpv_status qpv_engine_create(const qpv_sieve_config* config, qpv_engine** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        qpv::SieveConfig c;
        c.limit = config->limit;
        c.segment_size = config->segment_size;
        c.workers = config->workers;
        c.deterministic = config->deterministic != 0;
        *out = new qpv_engine{qpv::PrimeEngine(c)};
    });
}

void qpv_engine_destroy(qpv_engine* engine) { delete engine; }

qpv_status qpv_pi(const qpv_engine* engine, uint64_t x, uint64_t* out) {
    return guarded([&] {
        require(engine, "engine");
        require(out, "out");
        *out = engine->engine.pi(x);
    });
}

qpv_status qpv_is_prime(uint64_t n, int* out) {
    return guarded([&] {
        require(out, "out");
        *out = qpv::is_prime(n);
    });
}

qpv_status qpv_factor(uint64_t n, uint64_t* primes, unsigned* exponents, size_t capacity, size_t* count) {
    return guarded([&] {
        require(count, "count");
        if (capacity > 0) {
            require(primes, "primes");
            require(exponents, "exponents");
        }
        const qpv::FactorList f = qpv::factor(n);
        *count = f.factors.size();
        for (size_t i = 0; i < f.factors.size() && i < capacity; ++i) {
            primes[i] = f.factors[i].first;
            exponents[i] = f.factors[i].second;
        }
    });
}

qpv_status qpv_classify_prime(uint64_t p, qpv_classify_mode mode, qpv_prime_record* out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(qpv::classify_prime(p, to_mode(mode)));
    });
}

qpv_status qpv_classify_range(const qpv_engine* engine, uint64_t lo, uint64_t hi, qpv_classify_mode mode,
                              qpv_record_callback callback, void* user, qpv_classification_summary* out) {
    return guarded([&] {
        require(engine, "engine");
        require(out, "out");
        qpv::ClassifyOptions opts;
        opts.mode = to_mode(mode);
        if (callback) {
            opts.on_records = [&](std::span<const qpv::PrimeClassRecord> records) {
                std::vector<qpv_prime_record> buf;
                buf.reserve(records.size());
                for (const auto& r : records) buf.push_back(to_c(r));
                callback(buf.data(), buf.size(), user);
            };
        }
        const auto s = qpv::classify_range(engine->engine, lo, hi, opts);
        *out = {s.lo, s.limit, s.pi_plus, s.pi_minus, s.excluded, s.not_candidate};
    });
}

qpv_status qpv_q_pi(const qpv_engine* engine, uint64_t x, qpv_sign sign, uint64_t* out) {
    return guarded([&] {
        require(engine, "engine");
        require(out, "out");
        if (sign < QPV_SIGN_PLUS || sign > QPV_SIGN_BOTH) qpv::fail(qpv::ErrorCode::InvalidArgument, "unknown sign");
        *out = qpv::q_pi(engine->engine, x, static_cast<qpv::QSign>(static_cast<int>(sign)));
    });
}

qpv_status qpv_accumulate(const qpv_engine* engine, uint64_t limit, const qpv_accumulate_options* options,
                          qpv_snapshot* out) {
    return guarded([&] {
        require(engine, "engine");
        require(out, "out");
        qpv::AccumulationOptions opts;
        if (options) {
            opts.mode = to_mode(options->mode);
            if (options->checkpoint_path) opts.checkpoint_path = options->checkpoint_path;
            opts.resume = options->resume != 0;
            if (options->max_chunks) opts.max_chunks = options->max_chunks;
            if (options->on_chunk) {
                const auto cb = options->on_chunk;
                void* user = options->user;
                opts.on_chunk = [cb, user](const qpv::AccumulatorSnapshot& s) {
                    const qpv_snapshot c = to_c(s);
                    cb(&c, user);
                };
            }
        }
        *out = to_c(qpv::run_accumulation(engine->engine, limit, opts));
    });
}

qpv_status qpv_load_checkpoint(const char* path, qpv_snapshot* out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = to_c(qpv::load_checkpoint(path));
    });
}

qpv_status qpv_snapshot_json(const qpv_snapshot* snapshot, char** out) {
    return guarded([&] {
        require(snapshot, "snapshot");
        require(out, "out");
        const auto s = from_c(*snapshot);
        json j{{"range_begin", s.range_begin},
               {"processed_limit", s.processed_limit},
               {"q_count", s.q_count},
               {"prime_count", s.prime_count},
               {"log_product_ratio", qpv::interval_json(s.log_product_ratio)},
               {"product_ratio", qpv::interval_json(s.product_ratio())},
               {"theta_q", qpv::interval_json(s.theta_q)},
               {"theta_all", qpv::interval_json(s.theta_all)},
               {"config_hash", s.config_hash}};
        *out = dup(j.dump());
    });
}

qpv_status qpv_theorem2_json(const char* only, char** out) {
    return guarded([&] {
        require(out, "out");
        *out = dup(reports_json(qpv::select_reports(qpv::theorem2_chain(), only_of(only))).dump());
    });
}

qpv_status qpv_tail_check_json(double log_C, char** out) {
    return guarded([&] {
        require(out, "out");
        *out = dup(reports_json({qpv::tail_check(log_C)}).dump());
    });
}

qpv_status qpv_bounds_json(const qpv_engine* engine, uint64_t z, const char* only, char** out) {
    return guarded([&] {
        require(out, "out");
        auto reports = qpv::lemma32_error_budget();
        reports.push_back(qpv::tail_check(qpv::constant(qpv::k::C_exponent).approx()));
        const std::string_view name = only_of(only);
        if (!name.empty()) {
            try {
                *out = dup(reports_json(qpv::select_reports(reports, name)).dump());
                return;
            } catch (const qpv::Error& e) {
                if (e.code() != qpv::ErrorCode::InvalidArgument) throw;
            }
        }
        require(engine, "engine");
        const auto desk = qpv::lemma32_desk_checks(engine->engine, z);
        reports.insert(reports.end(), desk.begin(), desk.end());
        *out = dup(reports_json(qpv::select_reports(reports, name)).dump());
    });
}

qpv_status qpv_theorem3_json(const qpv_snapshot* snapshot, uint64_t pi_2_29, char** out) {
    return guarded([&] {
        require(snapshot, "snapshot");
        require(out, "out");
        *out = dup(qpv::assemble(from_c(*snapshot), pi_2_29).to_json().dump());
    });
}

qpv_status qpv_theorem1_json(const char* shape_json, char** out) {
    return guarded([&] {
        require(shape_json, "shape_json");
        require(out, "out");
        json in;
        try {
            in = json::parse(shape_json);
        } catch (const json::exception& e) {
            qpv::fail(qpv::ErrorCode::Parse, std::string("shape: ") + e.what());
        }
        qpv::CandidateShape shape;
        try {
            shape.primes = in.at("primes").get<std::vector<std::uint64_t>>();
            const auto& a = in.at("a");
            if (a.is_array()) shape.a = a.get<std::vector<std::uint64_t>>();
            else shape.a.assign(shape.primes.size(), a.get<std::uint64_t>());
        } catch (const json::exception& e) {
            qpv::fail(qpv::ErrorCode::Parse, std::string("shape: ") + e.what());
        }
        shape.validate();
        json result;
        result["shape"] = {{"primes", shape.primes}, {"a", shape.a}};
        result["general"] = qpv::thm1_general_filter(shape).to_json();
        const bool uniform = std::all_of(shape.a.begin(), shape.a.end(), [&](auto x) { return x == shape.a[0]; });
        if (uniform) result["equal_exponent"] = qpv::thm1_equal_exponent_filter(shape.primes, shape.a[0]).to_json();
        result["q_membership"] = qpv::q_membership_filter(shape.primes).to_json();
        *out = dup(result.dump());
    });
}

qpv_status qpv_is_quasiperfect(uint64_t n, int* out) {
    return guarded([&] {
        require(out, "out");
        *out = qpv::is_quasiperfect(n);
    });
}

qpv_status qpv_sigma(uint64_t n, char** out) {
    return guarded([&] {
        require(out, "out");
        if (n == 0) qpv::fail(qpv::ErrorCode::Domain, "sigma(0) is undefined");
        *out = dup(qpv::sigma(qpv::factor(n)).get_str());
    });
}

qpv_status qpv_qp_search_json(uint64_t m_limit, int squarefree_only, char** out) {
    return guarded([&] {
        require(out, "out");
        const auto hits = qpv::search_quasiperfect(m_limit, squarefree_only != 0);
        json j{{"m_limit", m_limit}, {"squarefree_only", squarefree_only != 0}, {"hits", hits}};
        *out = dup(j.dump());
    });
}

}  // extern "C"
