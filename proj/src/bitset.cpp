#include "cg/bitset.hpp"

#include <cassert>

namespace cg {

namespace {

std::size_t words_for(std::size_t bits) {
    return (bits + BitSet::kWordBits - 1) / BitSet::kWordBits;
}

}  // namespace

BitSet::BitSet(std::size_t size, bool filled)
    : size_(size), words_(words_for(size), filled ? ~Word{0} : Word{0}) {
    trim();
}

BitSet::BitSet(std::size_t size, std::initializer_list<std::size_t> members) : BitSet(size) {
    for (std::size_t m : members) set(m);
}

BitSet BitSet::from_indices(std::size_t size, std::span<const std::size_t> members) {
    BitSet out(size);
    for (std::size_t m : members) out.set(m);
    return out;
}

void BitSet::trim() noexcept {
    const std::size_t tail = size_ % kWordBits;
    if (tail != 0 && !words_.empty()) words_.back() &= (Word{1} << tail) - 1;
}

std::size_t BitSet::count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool BitSet::empty() const noexcept {
    for (Word w : words_)
        if (w != 0) return false;
    return true;
}

BitSet& BitSet::operator&=(const BitSet& o) noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

BitSet& BitSet::operator|=(const BitSet& o) noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

BitSet& BitSet::operator-=(const BitSet& o) noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

BitSet& BitSet::operator^=(const BitSet& o) noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}

BitSet BitSet::complement() const {
    BitSet out = *this;
    for (Word& w : out.words_) w = ~w;
    out.trim();
    return out;
}

bool BitSet::is_subset_of(const BitSet& o) const noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
}

bool BitSet::intersects(const BitSet& o) const noexcept {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & o.words_[i]) != 0) return true;
    return false;
}

std::size_t BitSet::intersection_count(const BitSet& o) const noexcept {
    assert(size_ == o.size_);
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return n;
}

bool BitSet::equal_prefix(const BitSet& o, std::size_t limit) const noexcept {
    const std::size_t full = limit / kWordBits;
    for (std::size_t i = 0; i < full; ++i)
        if (words_[i] != o.words_[i]) return false;
    const std::size_t tail = limit % kWordBits;
    if (tail == 0) return true;
    const Word mask = (Word{1} << tail) - 1;
    return ((words_[full] ^ o.words_[full]) & mask) == 0;
}

bool lex_less(const BitSet& a, const BitSet& b) noexcept {
    assert(a.size_ == b.size_);
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        const BitSet::Word diff = a.words_[i] ^ b.words_[i];
        if (diff == 0) continue;
        // Lowest differing index decides; whoever holds the bit is larger.
        const BitSet::Word low = diff & (~diff + 1);
        return (b.words_[i] & low) != 0;
    }
    return false;
}

std::vector<std::size_t> BitSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

std::size_t BitSet::hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (Word w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

}  // namespace cg
