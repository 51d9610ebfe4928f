#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qpv {

inline constexpr std::uint32_t kModulus = 24;

/// Set of residue classes modulo 24, stored as a bit mask.
class ResidueSet {
public:
    constexpr ResidueSet() = default;
    constexpr ResidueSet(std::initializer_list<unsigned> residues) {
        for (unsigned r : residues) mask_ |= 1u << (r % kModulus);
    }
    static constexpr ResidueSet from_mask(std::uint32_t mask) {
        ResidueSet s;
        s.mask_ = mask & ((1u << kModulus) - 1);
        return s;
    }
    /// Every class coprime to 24.
    static constexpr ResidueSet units() { return {1, 5, 7, 11, 13, 17, 19, 23}; }

    constexpr bool contains(std::uint64_t n) const { return (mask_ >> (n % kModulus)) & 1u; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint32_t mask() const { return mask_; }
    std::vector<unsigned> members() const;
    std::string to_string() const;

    friend constexpr bool operator==(ResidueSet a, ResidueSet b) { return a.mask_ == b.mask_; }

private:
    std::uint32_t mask_ = 0;
};

/// The two classes mod 24 whose prime divisors of p^2+p+1 rule p out.
inline constexpr ResidueSet kForbiddenClasses{7, 13};

}  // namespace qpv
