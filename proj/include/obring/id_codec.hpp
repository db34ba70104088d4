#pragma once

// Identifier encoding and the arrangement predicates Algorithm-1 style
// elections rely on. Bits are indexed 1-based, most significant first, so
// bit(1) is always the leading 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace obring {

class EncodedId {
public:
    static constexpr std::size_t kMaxLength = 64;

    /// Binary representation of `value` (no leading zeros). Throws InvalidId for 0.
    static EncodedId from_raw(std::uint64_t value);
    /// Parses a string of '0'/'1'. The first character must be '1'.
    static EncodedId from_bits(std::string_view bits);

    std::size_t length() const noexcept { return length_; }
    std::uint64_t value() const noexcept { return value_; }
    /// 1-based, MSB first.
    int bit(std::size_t i) const;
    /// Integer value of the first i bits; throws OutOfRange unless 1 <= i <= length.
    std::uint64_t prefix_value(std::size_t i) const;
    std::size_t zero_count() const noexcept;
    std::string to_string() const;

    bool operator==(const EncodedId&) const = default;

private:
    EncodedId(std::uint64_t value, std::size_t length) : value_(value), length_(length) {}

    std::uint64_t value_ = 1;
    std::size_t length_ = 1;
};

/// 1^l 0 . binary(id) . 0 where l is the binary length of id; length 2l+2.
EncodedId encode(std::uint64_t id);

using Arrangement = std::vector<EncodedId>;

Arrangement encode_all(std::span<const std::uint64_t> ids);

bool is_strongly_prefix_free(std::span<const EncodedId> ids);
bool is_0_ended(std::span<const EncodedId> ids);

std::size_t min_length(std::span<const EncodedId> ids);

/// Processes still competing at round i (minimal on bits 1..i-1), split by bit i.
/// Index sets are sorted, i.e. in clockwise ring order.
struct ActiveSets {
    std::vector<std::size_t> active;
    std::vector<std::size_t> zero;
    std::vector<std::size_t> one;
};

/// Throws OutOfRange unless 1 <= i <= shortest length in the arrangement.
ActiveSets active_sets(const Arrangement& a, std::size_t i);

/// At every round with a bit-0 process, each bit-1 process sees a bit-0 process
/// among its first d-1 active predecessors and among its first d-1 active
/// successors. Throws BadParam for d == 0.
bool is_d_scattered(const Arrangement& a, std::uint64_t d);

/// The process that survives every elimination round. Throws NoUniqueMin when
/// several processes tie on all compared bits.
std::size_t min_id_index(const Arrangement& a);

}  // namespace obring
