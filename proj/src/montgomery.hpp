#pragma once

#include <cstdint>

namespace qpv::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Montgomery arithmetic modulo an odd 64-bit n, R = 2^64.
class Montgomery {
public:
    explicit Montgomery(u64 n) : n_(n) {
        u64 inv = n;
        for (int i = 0; i < 5; ++i) inv *= 2 - n * inv;
        inv_ = inv;
        r1_ = (0 - n) % n;
        r2_ = static_cast<u64>(static_cast<u128>(r1_) * r1_ % n);
    }

    u64 modulus() const { return n_; }
    u64 one() const { return r1_; }

    u64 reduce(u128 t) const {
        const u64 u = static_cast<u64>(t) * inv_;
        const u64 hi = static_cast<u64>(t >> 64);
        const u64 mh = static_cast<u64>((static_cast<u128>(u) * n_) >> 64);
        return hi >= mh ? hi - mh : hi - mh + n_;
    }
    u64 to(u64 a) const { return reduce(static_cast<u128>(a % n_) * r2_); }
    u64 from(u64 a) const { return reduce(a); }
    u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
    u64 add(u64 a, u64 b) const {
        const u64 s = a + b;
        return (s >= n_ || s < a) ? s - n_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a - b + n_; }
    u64 pow(u64 base, u64 e) const {
        u64 result = r1_;
        while (e) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

private:
    u64 n_;
    u64 inv_;
    u64 r1_;
    u64 r2_;
};

}  // namespace qpv::detail
