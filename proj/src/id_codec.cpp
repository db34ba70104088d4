#include "obring/id_codec.hpp"

#include <algorithm>
#include <bit>

#include "obring/error.hpp"

namespace obring {

EncodedId EncodedId::from_raw(std::uint64_t value) {
    if (value == 0) throw Error(ErrorCode::InvalidId, "identifier 0 has no binary length");
    return EncodedId(value, static_cast<std::size_t>(std::bit_width(value)));
}

EncodedId EncodedId::from_bits(std::string_view bits) {
    if (bits.empty() || bits.front() != '1')
        throw Error(ErrorCode::InvalidId, "bit string must start with 1: '" + std::string(bits) + "'");
    if (bits.size() > kMaxLength)
        throw Error(ErrorCode::OutOfRange, "bit string longer than 64 bits");
    std::uint64_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw Error(ErrorCode::InvalidId, "bad bit character in '" + std::string(bits) + "'");
        v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return EncodedId(v, bits.size());
}

int EncodedId::bit(std::size_t i) const {
    if (i == 0 || i > length_)
        throw Error(ErrorCode::OutOfRange, "bit index " + std::to_string(i) + " outside 1.." +
                                               std::to_string(length_));
    return static_cast<int>((value_ >> (length_ - i)) & 1U);
}

std::uint64_t EncodedId::prefix_value(std::size_t i) const {
    if (i == 0 || i > length_)
        throw Error(ErrorCode::OutOfRange, "prefix length " + std::to_string(i) + " outside 1.." +
                                               std::to_string(length_));
    return value_ >> (length_ - i);
}

std::size_t EncodedId::zero_count() const noexcept {
    return length_ - static_cast<std::size_t>(std::popcount(value_));
}

std::string EncodedId::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if ((value_ >> (length_ - 1 - i)) & 1U) s[i] = '1';
    return s;
}

EncodedId encode(std::uint64_t id) {
    if (id == 0) throw Error(ErrorCode::InvalidId, "identifier 0 cannot be encoded");
    const auto len = static_cast<std::size_t>(std::bit_width(id));
    if (2 * len + 2 > EncodedId::kMaxLength)
        throw Error(ErrorCode::OutOfRange, "identifier too large to encode in 64 bits");
    std::string bits(len, '1');
    bits += '0';
    for (std::size_t i = len; i-- > 0;) bits += ((id >> i) & 1U) ? '1' : '0';
    bits += '0';
    return EncodedId::from_bits(bits);
}

Arrangement encode_all(std::span<const std::uint64_t> ids) {
    Arrangement out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(encode(id));
    return out;
}

bool is_strongly_prefix_free(std::span<const EncodedId> ids) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = 0; b < ids.size(); ++b) {
            if (a == b) continue;
            const auto& lo = ids[a];
            const auto& hi = ids[b];
            if (lo.value() <= hi.value() && lo.length() <= hi.length() &&
                lo.value() > hi.prefix_value(lo.length()))
                return false;
        }
    }
    return true;
}

bool is_0_ended(std::span<const EncodedId> ids) {
    return std::all_of(ids.begin(), ids.end(),
                       [](const EncodedId& e) { return (e.value() & 1U) == 0; });
}

std::size_t min_length(std::span<const EncodedId> ids) {
    if (ids.empty()) throw Error(ErrorCode::BadParam, "empty arrangement");
    return std::min_element(ids.begin(), ids.end(),
                            [](const EncodedId& x, const EncodedId& y) {
                                return x.length() < y.length();
                            })
        ->length();
}

namespace {

void split_by_bit(const Arrangement& a, std::size_t i, ActiveSets& sets) {
    sets.zero.clear();
    sets.one.clear();
    for (auto j : sets.active) (a[j].bit(i) == 0 ? sets.zero : sets.one).push_back(j);
}

}  // namespace

ActiveSets active_sets(const Arrangement& a, std::size_t i) {
    const auto lmin = min_length(a);
    if (i == 0 || i > lmin)
        throw Error(ErrorCode::OutOfRange,
                    "round " + std::to_string(i) + " outside 1.." + std::to_string(lmin));
    ActiveSets sets;
    sets.active.resize(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) sets.active[j] = j;
    for (std::size_t r = 1; r < i; ++r) {
        split_by_bit(a, r, sets);
        if (!sets.zero.empty()) sets.active = sets.zero;
    }
    split_by_bit(a, i, sets);
    return sets;
}

bool is_d_scattered(const Arrangement& a, std::uint64_t d) {
    if (d == 0) throw Error(ErrorCode::BadParam, "d must be positive");
    const auto lmin = min_length(a);
    for (std::size_t i = 1; i <= lmin; ++i) {
        const auto sets = active_sets(a, i);
        if (sets.zero.empty()) continue;
        const auto m = sets.active.size();
        std::vector<bool> is_zero(m, false);
        for (std::size_t pos = 0; pos < m; ++pos)
            is_zero[pos] = a[sets.active[pos]].bit(i) == 0;
        for (std::size_t pos = 0; pos < m; ++pos) {
            if (is_zero[pos]) continue;
            bool pred_ok = false;
            bool succ_ok = false;
            // Offsets past m wrap around to members already inspected.
            const auto kmax = std::min<std::uint64_t>(d - 1, m);
            for (std::uint64_t k = 1; k <= kmax && !(pred_ok && succ_ok); ++k) {
                const auto step = static_cast<std::size_t>(k % m);
                pred_ok = pred_ok || is_zero[(pos + m - step) % m];
                succ_ok = succ_ok || is_zero[(pos + step) % m];
            }
            if (!pred_ok || !succ_ok) return false;
        }
    }
    return true;
}

std::size_t min_id_index(const Arrangement& a) {
    const auto lmin = min_length(a);
    auto sets = active_sets(a, lmin);
    const auto& survivors = sets.zero.empty() ? sets.one : sets.zero;
    if (survivors.size() != 1)
        throw Error(ErrorCode::NoUniqueMin,
                    std::to_string(survivors.size()) + " processes tie through bit " +
                        std::to_string(lmin));
    return survivors.front();
}

}  // namespace obring
