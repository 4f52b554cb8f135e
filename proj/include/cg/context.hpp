#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cg/bitset.hpp"

namespace cg {

/// BitSet tagged with the universe it ranges over, so object and attribute sets
/// cannot be mixed up at compile time.
template <typename Tag>
class IndexSet : public BitSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::size_t size, bool filled = false) : BitSet(size, filled) {}
    IndexSet(std::size_t size, std::initializer_list<std::size_t> members) : BitSet(size, members) {}
    explicit IndexSet(BitSet bits) : BitSet(std::move(bits)) {}

    static IndexSet full(std::size_t size) { return IndexSet(size, true); }

    IndexSet& operator&=(const IndexSet& o) noexcept {
        BitSet::operator&=(o);
        return *this;
    }
    IndexSet& operator|=(const IndexSet& o) noexcept {
        BitSet::operator|=(o);
        return *this;
    }
    IndexSet& operator-=(const IndexSet& o) noexcept {
        BitSet::operator-=(o);
        return *this;
    }
    friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
    friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
    friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

    IndexSet complement() const { return IndexSet(BitSet::complement()); }
};

struct ObjectTag;
struct AttributeTag;
using ObjectSet = IndexSet<ObjectTag>;
using AttributeSet = IndexSet<AttributeTag>;

/// Binary object-attribute incidence (G, M, I) with labels.
///
/// Immutable after construction. Rows (object intents g') and columns
/// (attribute extents m') are both stored so that either derivation operator is
/// a sequence of word-parallel intersections.
class FormalContext {
public:
    /// Validates the invariants: non-empty dimensions, unique names, row widths.
    FormalContext(std::vector<std::string> object_names, std::vector<std::string> attribute_names,
                  std::vector<AttributeSet> rows);

    /// Context with synthesized names "g0.." and "m0..".
    static FormalContext from_rows(std::size_t attribute_count, std::vector<AttributeSet> rows);

    std::size_t object_count() const noexcept { return rows_.size(); }
    std::size_t attribute_count() const noexcept { return columns_.size(); }

    const std::vector<std::string>& object_names() const noexcept { return object_names_; }
    const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }

    /// g'
    const AttributeSet& row(std::size_t g) const { return rows_.at(g); }
    /// m'
    const ObjectSet& column(std::size_t m) const { return columns_.at(m); }
    const std::vector<AttributeSet>& rows() const noexcept { return rows_; }

    bool incidence(std::size_t g, std::size_t m) const { return rows_.at(g).test(m); }
    std::size_t cell_count() const noexcept { return object_count() * attribute_count(); }
    std::size_t ones() const noexcept;

    ObjectSet all_objects() const { return ObjectSet::full(object_count()); }
    AttributeSet all_attributes() const { return AttributeSet::full(attribute_count()); }
    ObjectSet no_objects() const { return ObjectSet(object_count()); }
    AttributeSet no_attributes() const { return AttributeSet(attribute_count()); }

    ObjectSet objects(std::initializer_list<std::size_t> ids) const;
    AttributeSet attributes(std::initializer_list<std::size_t> ids) const;

    friend bool operator==(const FormalContext& a, const FormalContext& b) {
        return a.object_names_ == b.object_names_ && a.attribute_names_ == b.attribute_names_ &&
               a.rows_ == b.rows_;
    }

private:
    std::vector<std::string> object_names_;
    std::vector<std::string> attribute_names_;
    std::vector<AttributeSet> rows_;
    std::vector<ObjectSet> columns_;
};

/// A' : attributes shared by every object of A (all of M when A is empty).
AttributeSet derive_objects(const FormalContext& ctx, const ObjectSet& objects);
/// B' : objects having every attribute of B (all of G when B is empty).
ObjectSet derive_attributes(const FormalContext& ctx, const AttributeSet& attributes);
/// B''
AttributeSet close_attributes(const FormalContext& ctx, const AttributeSet& attributes);
/// A''
ObjectSet close_objects(const FormalContext& ctx, const ObjectSet& objects);

/// Index-list overloads; reject out-of-range members with DimensionError.
AttributeSet derive_objects(const FormalContext& ctx, const std::vector<std::size_t>& objects);
ObjectSet derive_attributes(const FormalContext& ctx, const std::vector<std::size_t>& attributes);

struct RandomContextSpec {
    std::size_t n_objects = 0;
    std::size_t n_attributes = 0;
    double density = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct NoiseSpec {
    double rate = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Each cell is an independent Bernoulli(density) draw keyed by (seed, cell).
FormalContext generate_random_context(const RandomContextSpec& spec);

/// Flips each cell independently with probability `spec.rate`; names are kept.
FormalContext apply_noise(const FormalContext& ctx, const NoiseSpec& spec);

}  // namespace cg
