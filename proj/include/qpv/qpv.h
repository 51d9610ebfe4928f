#ifndef QPV_QPV_H
#define QPV_QPV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QPV_API __declspec(dllexport)
#else
#define QPV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpv_status {
    QPV_OK = 0,
    QPV_ERR_DOMAIN = 1,
    QPV_ERR_CAPACITY = 2,
    QPV_ERR_INTEGRITY = 3,
    QPV_ERR_PARSE = 4,
    QPV_ERR_IO = 5,
    QPV_ERR_INTERNAL = 6,
    QPV_ERR_INVALID_ARGUMENT = 7
} qpv_status;

typedef enum qpv_q_class { QPV_QPLUS = 0, QPV_QMINUS = 1, QPV_EXCLUDED = 2, QPV_NOT_CANDIDATE = 3 } qpv_q_class;
typedef enum qpv_classify_mode { QPV_EARLY_EXIT = 0, QPV_FULL_FACTOR = 1 } qpv_classify_mode;
typedef enum qpv_sign { QPV_SIGN_PLUS = 0, QPV_SIGN_MINUS = 1, QPV_SIGN_BOTH = 2 } qpv_sign;

/* Message of the last failed call on this thread. */
QPV_API const char* qpv_last_error(void);
QPV_API const char* qpv_status_string(qpv_status status);

/* Strings returned through char** are owned by the caller. */
QPV_API void qpv_string_free(char* s);

typedef struct qpv_engine qpv_engine;

typedef struct qpv_sieve_config {
    uint64_t limit; /* exclusive */
    uint64_t segment_size;
    unsigned workers;
    int deterministic;
} qpv_sieve_config;

QPV_API void qpv_sieve_config_default(qpv_sieve_config* config);
QPV_API qpv_status qpv_engine_create(const qpv_sieve_config* config, qpv_engine** out);
QPV_API void qpv_engine_destroy(qpv_engine* engine);

/* Number of primes <= x. */
QPV_API qpv_status qpv_pi(const qpv_engine* engine, uint64_t x, uint64_t* out);

QPV_API qpv_status qpv_is_prime(uint64_t n, int* out);
/* Writes up to `capacity` (prime, exponent) pairs; `count` receives the full count. */
QPV_API qpv_status qpv_factor(uint64_t n, uint64_t* primes, unsigned* exponents, size_t capacity, size_t* count);

typedef struct qpv_prime_record {
    uint64_t p;
    unsigned residue8;
    unsigned residue24;
    qpv_q_class q_class;
    int has_witness;
    uint64_t witness;
} qpv_prime_record;

QPV_API qpv_status qpv_classify_prime(uint64_t p, qpv_classify_mode mode, qpv_prime_record* out);

typedef struct qpv_classification_summary {
    uint64_t lo;
    uint64_t limit;
    uint64_t pi_plus;
    uint64_t pi_minus;
    uint64_t excluded;
    uint64_t not_candidate;
} qpv_classification_summary;

/* Called with each segment's records in ascending order. */
typedef void (*qpv_record_callback)(const qpv_prime_record* records, size_t count, void* user);

QPV_API qpv_status qpv_classify_range(const qpv_engine* engine, uint64_t lo, uint64_t hi, qpv_classify_mode mode,
                                      qpv_record_callback callback, void* user, qpv_classification_summary* out);
QPV_API qpv_status qpv_q_pi(const qpv_engine* engine, uint64_t x, qpv_sign sign, uint64_t* out);

typedef struct qpv_interval {
    double lo;
    double hi;
} qpv_interval;

typedef struct qpv_snapshot {
    uint64_t range_begin;
    uint64_t processed_limit;
    uint64_t q_count;
    uint64_t prime_count;
    qpv_interval log_product_ratio;
    qpv_interval theta_q;
    qpv_interval theta_all;
    char config_hash[32];
} qpv_snapshot;

typedef void (*qpv_snapshot_callback)(const qpv_snapshot* snapshot, void* user);

typedef struct qpv_accumulate_options {
    qpv_classify_mode mode;
    const char* checkpoint_path; /* NULL: no checkpoint */
    int resume;
    uint64_t max_chunks; /* 0: unlimited */
    qpv_snapshot_callback on_chunk;
    void* user;
} qpv_accumulate_options;

QPV_API qpv_status qpv_accumulate(const qpv_engine* engine, uint64_t limit, const qpv_accumulate_options* options,
                                  qpv_snapshot* out);
/* Last complete record group of a checkpoint file. */
QPV_API qpv_status qpv_load_checkpoint(const char* path, qpv_snapshot* out);
QPV_API qpv_status qpv_snapshot_json(const qpv_snapshot* snapshot, char** out);

/* JSON arrays of bound reports. `only` (may be NULL) selects reports by name. */
QPV_API qpv_status qpv_theorem2_json(const char* only, char** out);
QPV_API qpv_status qpv_tail_check_json(double log_C, char** out);
/* Error budget, tail check and, unless `only` selects among those, the
   desk-scale sums at z (engine limit must exceed z). */
QPV_API qpv_status qpv_bounds_json(const qpv_engine* engine, uint64_t z, const char* only, char** out);
/* Theorem-3 result object; the snapshot must cover every prime below 2^29. */
QPV_API qpv_status qpv_theorem3_json(const qpv_snapshot* snapshot, uint64_t pi_2_29, char** out);

/* Filter verdicts for a candidate shape given as {"primes": [...], "a": n or [...]}. */
QPV_API qpv_status qpv_theorem1_json(const char* shape_json, char** out);
QPV_API qpv_status qpv_is_quasiperfect(uint64_t n, int* out);
/* Decimal sigma(n). */
QPV_API qpv_status qpv_sigma(uint64_t n, char** out);
QPV_API qpv_status qpv_qp_search_json(uint64_t m_limit, int squarefree_only, char** out);

#ifdef __cplusplus
}
#endif

#endif
