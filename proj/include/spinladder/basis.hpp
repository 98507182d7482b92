#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spinladder/errors.hpp"

namespace spinladder {

enum class Representation { SU2, SO4 };

inline const char* to_string(Representation r) {
    return r == Representation::SU2 ? "su2" : "so4";
}

/// Packed configuration of one ladder. SU2: occupancy bits, bit 2i+k is
/// site (i,k) (rung i, leg k, both 0-based), set bit = m +1/2. SO4: one
/// 2-bit rung code per rung, rung 0 in the most significant position so
/// that ascending codes are in lexicographic rung order.
using StateCode = std::uint32_t;

inline constexpr int kMaxLegLength = 16;

constexpr int site_bit(int rung, int leg) { return 2 * rung + leg; }

/// SO4 per-rung codes, ordered (0,0) < (1,-1) < (1,0) < (1,+1).
enum RungCode : StateCode {
    kRungSinglet = 0,
    kRungTripletMinus = 1,
    kRungTripletZero = 2,
    kRungTripletPlus = 3,
};

struct RungState {
    int total_spin;  // S
    int projection;  // M
};

constexpr RungState decode_rung(StateCode code) {
    switch (code) {
        case kRungSinglet: return {0, 0};
        case kRungTripletMinus: return {1, -1};
        case kRungTripletZero: return {1, 0};
        default: return {1, 1};
    }
}

constexpr StateCode rung_code(StateCode state, int rung, int length) {
    return (state >> (2 * (length - 1 - rung))) & 3u;
}

constexpr int su2_spin_sign(StateCode state, int rung, int leg) {
    return ((state >> site_bit(rung, leg)) & 1u) ? +1 : -1;
}

/// Ordered list of configurations spanning the M_tot = 0 sector, with exact
/// reverse lookup. Immutable once constructed.
class Basis {
public:
    Basis(Representation representation, int length, std::vector<StateCode> states)
        : representation_(representation), length_(length), states_(std::move(states)) {
        index_.reserve(states_.size());
        for (std::size_t p = 0; p < states_.size(); ++p) {
            auto [it, fresh] = index_.emplace(states_[p], p);
            if (!fresh) throw std::invalid_argument("basis: duplicate state");
        }
    }

    Representation representation() const noexcept { return representation_; }
    int length() const noexcept { return length_; }
    std::size_t size() const noexcept { return states_.size(); }
    StateCode state(std::size_t pos) const { return states_.at(pos); }
    const std::vector<StateCode>& states() const noexcept { return states_; }

    std::optional<std::size_t> index_of(StateCode s) const {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// New basis with states()[p] = old states()[perm[p]].
    Basis permuted(const std::vector<std::size_t>& perm) const {
        if (perm.size() != states_.size())
            throw DimensionMismatchError("permuted: permutation size != basis size");
        std::vector<StateCode> out(states_.size());
        for (std::size_t p = 0; p < perm.size(); ++p) out[p] = states_.at(perm[p]);
        return Basis(representation_, length_, std::move(out));
    }

    /// First `count` states of the current order.
    Basis prefix(std::size_t count) const {
        if (count == 0 || count > states_.size())
            throw DimensionMismatchError("prefix: count out of range");
        return Basis(representation_, length_,
                     std::vector<StateCode>(states_.begin(), states_.begin() + count));
    }

private:
    Representation representation_;
    int length_;
    std::vector<StateCode> states_;
    std::unordered_map<StateCode, std::size_t> index_;
};

namespace detail {

inline void check_length(int length) {
    if (length < 1 || length > kMaxLegLength)
        throw DimensionOverflowError("leg length must be in [1, " +
                                     std::to_string(kMaxLegLength) + "], got " +
                                     std::to_string(length));
}

}  // namespace detail

/// All occupancy masks of 2L bits with exactly L set bits, ascending.
inline Basis enumerate_su2(int length) {
    detail::check_length(length);
    const int nbits = 2 * length;
    std::vector<StateCode> states;
    // Gosper's hack walks same-popcount masks in ascending order.
    std::uint64_t v = (std::uint64_t{1} << length) - 1;
    const std::uint64_t limit = std::uint64_t{1} << nbits;
    while (v < limit) {
        states.push_back(static_cast<StateCode>(v));
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
    return Basis(Representation::SU2, length, std::move(states));
}

/// All rung-code sequences with total projection zero, lexicographic in
/// (S_i, M_i) with the per-rung order (0,0) < (1,-1) < (1,0) < (1,+1).
inline Basis enumerate_so4(int length) {
    detail::check_length(length);
    std::vector<StateCode> states;
    StateCode current = 0;
    auto recurse = [&](auto&& self, int rung, int mtot) -> void {
        if (rung == length) {
            if (mtot == 0) states.push_back(current);
            return;
        }
        const int remaining = length - rung - 1;
        for (StateCode code = 0; code < 4; ++code) {
            const int m = decode_rung(code).projection;
            if (std::abs(mtot + m) > remaining) continue;  // cannot return to zero
            current |= code << (2 * (length - 1 - rung));
            self(self, rung + 1, mtot + m);
            current &= ~(3u << (2 * (length - 1 - rung)));
        }
    };
    recurse(recurse, 0, 0);
    return Basis(Representation::SO4, length, std::move(states));
}

enum class OrderingStrategy { DiagonalAscending, AmplitudeDescending };

}  // namespace spinladder
