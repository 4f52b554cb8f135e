#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace cg {

/// Fixed-width set of small non-negative integers backed by 64-bit words.
///
/// All binary operations require both operands to have the same width.
/// Bits past `size()` in the last word are kept at zero so that counts and
/// comparisons can run word-parallel without masking.
class BitSet {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitSet() = default;
    explicit BitSet(std::size_t size, bool filled = false);
    BitSet(std::size_t size, std::initializer_list<std::size_t> members);

    static BitSet full(std::size_t size) { return BitSet(size, true); }
    static BitSet from_indices(std::size_t size, std::span<const std::size_t> members);

    std::size_t size() const noexcept { return size_; }
    std::size_t count() const noexcept;
    bool empty() const noexcept;
    bool all() const noexcept { return count() == size_; }

    bool test(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
    }
    void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
    void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
    void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    void assign(std::size_t i, bool v) noexcept { v ? set(i) : reset(i); }

    BitSet& operator&=(const BitSet& o) noexcept;
    BitSet& operator|=(const BitSet& o) noexcept;
    BitSet& operator-=(const BitSet& o) noexcept;
    BitSet& operator^=(const BitSet& o) noexcept;
    BitSet complement() const;

    friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }
    friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
    friend BitSet operator-(BitSet a, const BitSet& b) { return a -= b; }
    friend BitSet operator^(BitSet a, const BitSet& b) { return a ^= b; }

    bool is_subset_of(const BitSet& o) const noexcept;
    bool is_proper_subset_of(const BitSet& o) const noexcept {
        return is_subset_of(o) && !(*this == o);
    }
    bool intersects(const BitSet& o) const noexcept;
    std::size_t intersection_count(const BitSet& o) const noexcept;

    /// True iff this and `o` agree on every index below `limit`.
    bool equal_prefix(const BitSet& o, std::size_t limit) const noexcept;

    /// Lexicographic order of the bit string read from index 0 upward, with a
    /// set bit greater than a clear one.
    friend bool lex_less(const BitSet& a, const BitSet& b) noexcept;

    friend bool operator==(const BitSet& a, const BitSet& b) noexcept {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    std::vector<std::size_t> indices() const;

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            Word word = words_[w];
            while (word != 0) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(word));
                f(w * kWordBits + bit);
                word &= word - 1;
            }
        }
    }

    std::span<const Word> words() const noexcept { return words_; }
    void set_word(std::size_t w, Word value) noexcept {
        words_[w] = value;
        if (w + 1 == words_.size()) trim();
    }
    std::size_t hash() const noexcept;

private:
    void trim() noexcept;

    std::size_t size_ = 0;
    std::vector<Word> words_;
};

struct BitSetHash {
    std::size_t operator()(const BitSet& b) const noexcept { return b.hash(); }
};

}  // namespace cg
