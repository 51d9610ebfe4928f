#include "qpv/factorizer.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>

#include "montgomery.hpp"
#include "qpv/error.hpp"

namespace qpv {

namespace {

using detail::Montgomery;
using detail::u128;
using detail::u64;

constexpr u64 kTrialBound = 10000;
constexpr int kRhoRetryCap = 64;
constexpr u64 kRhoBatch = 128;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = [] {
        std::vector<bool> composite(kTrialBound, false);
        std::vector<u64> out;
        for (u64 i = 2; i < kTrialBound; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = i * i; j < kTrialBound; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

bool miller_rabin(u64 n) {
    // Jim Sinclair's base set, deterministic for every n < 2^64.
    static constexpr u64 kBases[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    const Montgomery mont(n);
    const int s = std::countr_zero(n - 1);
    const u64 d = (n - 1) >> s;
    const u64 one = mont.one();
    const u64 minus_one = mont.sub(0, one);
    for (u64 a : kBases) {
        a %= n;
        if (a == 0) continue;
        u64 x = mont.pow(mont.to(a), d);
        if (x == one || x == minus_one) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mont.mul(x, x);
            if (x == minus_one) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

void factor_cofactor(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = rho_split(n);
    factor_cofactor(d, out);
    factor_cofactor(n / d, out);
}

struct WitnessSearch {
    ClassWitness witness;
    std::optional<FactorList> factors;
};

ClassWitness witness_from_factors(const FactorList& f, ResidueSet classes) {
    ClassWitness w;
    for (const auto& [p, e] : f.factors) {
        if (classes.contains(p)) {
            w.found = true;
            w.witness_prime = p;
            w.witness_class = static_cast<unsigned>(p % kModulus);
            break;
        }
    }
    return w;
}

WitnessSearch search_witness(u64 n, const ClassTrialDivider& divider) {
    WitnessSearch out;
    if (auto d = divider.smallest_divisor(n)) {
        out.witness.found = true;
        out.witness.witness_prime = *d;
        out.witness.witness_class = static_cast<unsigned>(*d % kModulus);
        return out;
    }
    out.factors = factor(n);
    out.witness = witness_from_factors(*out.factors, divider.classes());
    return out;
}

void check_cyclotomic(u64 p, const FactorList& f) {
    for (const auto& [q, e] : f.factors) {
        if (q != 3 && q % 3 != 1) {
            fail(ErrorCode::Internal, "prime factor " + std::to_string(q) + " of p^2+p+1 for p=" +
                                          std::to_string(p) + " is not 3 or 1 mod 3");
        }
    }
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : kSmall) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    return miller_rabin(n);
}

u64 rho_split(u64 n) {
    if (n % 2 == 0) return 2;
    const Montgomery mont(n);
    for (int attempt = 0; attempt < kRhoRetryCap; ++attempt) {
        const u64 c = mont.to(static_cast<u64>(attempt) + 1);
        auto f = [&](u64 x) { return mont.add(mont.mul(x, x), c); };
        u64 y = mont.to(static_cast<u64>(attempt) + 2);
        u64 x = y;
        u64 ys = y;
        u64 q = mont.one();
        u64 g = 1;
        for (u64 r = 1; g == 1 && r < (u64{1} << 30); r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && g == 1; k += kRhoBatch) {
                ys = y;
                const u64 steps = std::min(kRhoBatch, r - k);
                for (u64 i = 0; i < steps; ++i) {
                    y = f(y);
                    q = mont.mul(q, x > y ? x - y : y - x);
                }
                g = std::gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    fail(ErrorCode::Internal, "pollard rho exhausted its retry cap on " + std::to_string(n));
}

FactorList factor(u64 n) {
    if (n == 0) fail(ErrorCode::Domain, "factor(0) is undefined");
    if (n >= (u64{1} << 63)) fail(ErrorCode::Domain, "factor supports n < 2^63");
    FactorList result;
    result.n = n;
    u64 rest = n;
    for (u64 p : small_primes()) {
        if (p * p > rest) break;
        if (rest % p != 0) continue;
        unsigned e = 0;
        do {
            rest /= p;
            ++e;
        } while (rest % p == 0);
        result.factors.emplace_back(p, e);
    }
    if (rest > 1) {
        std::vector<u64> big;
        if (rest < kTrialBound * kTrialBound) {
            big.push_back(rest);
        } else {
            factor_cofactor(rest, big);
        }
        std::sort(big.begin(), big.end());
        for (u64 p : big) {
            if (!result.factors.empty() && result.factors.back().first == p) {
                ++result.factors.back().second;
            } else {
                result.factors.emplace_back(p, 1);
            }
        }
    }
    return result;
}

ClassTrialDivider::ClassTrialDivider(ResidueSet classes, u64 threshold) : classes_(classes), threshold_(threshold) {
    std::vector<bool> composite(threshold + 1, false);
    for (u64 i = 2; i <= threshold; ++i) {
        if (composite[i]) continue;
        for (u64 j = i * i; j <= threshold; j += i) composite[j] = true;
        if (!classes.contains(i)) continue;
        Entry e{};
        e.prime = i;
        if (i == 2) {
            e.inverse = 0;
            e.limit = 0;
        } else {
            u64 inv = i;
            for (int k = 0; k < 5; ++k) inv *= 2 - i * inv;
            e.inverse = inv;
            e.limit = ~u64{0} / i;
        }
        entries_.push_back(e);
    }
}

std::optional<u64> ClassTrialDivider::smallest_divisor(u64 n) const {
    for (const Entry& e : entries_) {
        if (e.prime == 2) {
            if (n % 2 == 0) return 2;
            continue;
        }
        if (n * e.inverse <= e.limit) return e.prime;
    }
    return std::nullopt;
}

const ClassTrialDivider& default_forbidden_divider() {
    static const ClassTrialDivider divider(kForbiddenClasses, kDefaultClassThreshold);
    return divider;
}

ClassWitness has_factor_in_classes(u64 n, const ClassTrialDivider& divider) {
    if (n == 0) fail(ErrorCode::Domain, "has_factor_in_classes(0) is undefined");
    return search_witness(n, divider).witness;
}

ClassWitness has_factor_in_classes(u64 n, ResidueSet classes) {
    if (classes == kForbiddenClasses) return has_factor_in_classes(n, default_forbidden_divider());
    return has_factor_in_classes(n, ClassTrialDivider(classes, kDefaultClassThreshold));
}

PrimeClassRecord classify_prime(u64 p, ClassifyMode mode) {
    return classify_prime(p, mode, default_forbidden_divider());
}

PrimeClassRecord classify_prime(u64 p, ClassifyMode mode, const ClassTrialDivider& divider) {
    if (!is_prime(p)) fail(ErrorCode::Domain, std::to_string(p) + " is not prime");
    if (p >= (u64{1} << 31)) fail(ErrorCode::Capacity, "classify_prime supports p < 2^31");
    PrimeClassRecord rec;
    rec.p = p;
    rec.residue8 = static_cast<unsigned>(p % 8);
    rec.residue24 = static_cast<unsigned>(p % kModulus);
    if (rec.residue8 != 1 && rec.residue8 != 7) {
        rec.q_class = QClass::NotCandidate;
        return rec;
    }
    const u64 n = p * p + p + 1;
    ClassWitness w;
    if (mode == ClassifyMode::FullFactor) {
        const FactorList f = factor(n);
        check_cyclotomic(p, f);
        w = witness_from_factors(f, divider.classes());
    } else {
        WitnessSearch s = search_witness(n, divider);
        if (s.factors) check_cyclotomic(p, *s.factors);
        w = s.witness;
    }
    if (w.found) {
        rec.q_class = QClass::Excluded;
        rec.witness = w.witness_prime;
    } else {
        rec.q_class = rec.residue8 == 1 ? QClass::QPlus : QClass::QMinus;
    }
    return rec;
}

std::string_view to_string(QClass c) {
    switch (c) {
        case QClass::QPlus: return "QPlus";
        case QClass::QMinus: return "QMinus";
        case QClass::Excluded: return "Excluded";
        case QClass::NotCandidate: return "NotCandidate";
    }
    return "?";
}

std::optional<QClass> parse_qclass(std::string_view s) {
    for (QClass c : {QClass::QPlus, QClass::QMinus, QClass::Excluded, QClass::NotCandidate}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::vector<unsigned> ResidueSet::members() const {
    std::vector<unsigned> out;
    for (unsigned r = 0; r < kModulus; ++r) {
        if ((mask_ >> r) & 1u) out.push_back(r);
    }
    return out;
}

std::string ResidueSet::to_string() const {
    std::string out = "{";
    for (unsigned r : members()) {
        if (out.size() > 1) out += ",";
        out += std::to_string(r);
    }
    return out + "}";
}

}  // namespace qpv
