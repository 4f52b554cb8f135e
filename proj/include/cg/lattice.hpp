#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cg/context.hpp"

namespace cg {

using ConceptId = std::size_t;

inline constexpr std::size_t kDefaultConceptBudget = 1'000'000;

struct Concept {
    ConceptId id = 0;
    ObjectSet extent;
    AttributeSet intent;
};

struct EnumerationOptions {
    /// Minimum extent size; 0 yields the complete lattice.
    std::size_t min_support = 0;
    /// Enumeration aborts with BudgetError once more concepts than this exist.
    std::size_t budget = kDefaultConceptBudget;
};

/// All concepts of a context (or its iceberg part) with the covering relation.
///
/// Concept ids follow the lexicographic order of intent bit strings. Since a
/// proper sub-intent always sorts first, ids form a linear extension of the
/// order read top-down: c <= d implies id(d) <= id(c).
class ConceptLattice {
public:
    ConceptLattice(std::shared_ptr<const FormalContext> context, std::vector<Concept> concepts,
                   std::size_t min_support);

    const FormalContext& context() const noexcept { return *context_; }
    std::shared_ptr<const FormalContext> shared_context() const noexcept { return context_; }

    std::size_t size() const noexcept { return concepts_.size(); }
    const Concept& operator[](ConceptId id) const { return concepts_.at(id); }
    const Concept& at(ConceptId id) const { return concepts_.at(id); }
    std::span<const Concept> concepts() const noexcept { return concepts_; }

    /// Direct subconcepts (larger intents).
    std::span<const ConceptId> lower_neighbors(ConceptId id) const;
    /// Direct superconcepts (larger extents).
    std::span<const ConceptId> upper_neighbors(ConceptId id) const;

    ConceptId top() const noexcept { return top_; }
    /// Absent when a support threshold removed the concept with intent M.
    std::optional<ConceptId> bottom() const noexcept { return bottom_; }

    std::size_t min_support() const noexcept { return min_support_; }
    bool is_complete() const noexcept { return min_support_ == 0; }
    /// Throws PreconditionError naming `what` unless the lattice is complete.
    void require_complete(const std::string& what) const;

    /// extent(c) is a subset of extent(d).
    bool leq(ConceptId c, ConceptId d) const;
    /// Order ideal below c, including c, in ascending id order.
    std::vector<ConceptId> descendants(ConceptId c) const;
    /// Order filter above c, including c, in ascending id order.
    std::vector<ConceptId> ancestors(ConceptId c) const;

    std::optional<ConceptId> find_by_intent(const AttributeSet& intent) const;
    std::optional<ConceptId> find_by_extent(const ObjectSet& extent) const;

    std::size_t cover_count() const noexcept;

private:
    void check_id(ConceptId id) const;
    void build_covers();
    std::vector<ConceptId> reach(ConceptId c, const std::vector<std::vector<ConceptId>>& edges) const;

    std::shared_ptr<const FormalContext> context_;
    std::vector<Concept> concepts_;
    std::size_t min_support_ = 0;
    std::vector<std::vector<ConceptId>> lower_;
    std::vector<std::vector<ConceptId>> upper_;
    std::unordered_map<BitSet, ConceptId, BitSetHash> by_intent_;
    std::unordered_map<BitSet, ConceptId, BitSetHash> by_extent_;
    ConceptId top_ = 0;
    std::optional<ConceptId> bottom_;
};

/// Close-by-One enumeration with canonicity test, followed by the covering
/// relation. Throws BudgetError when the concept count exceeds the budget.
ConceptLattice enumerate_concepts(std::shared_ptr<const FormalContext> ctx,
                                  const EnumerationOptions& options = {});
ConceptLattice enumerate_concepts(const FormalContext& ctx, const EnumerationOptions& options = {});

/// mu(d, c) for every d <= c, for a fixed upper concept c.
class MobiusTable {
public:
    MobiusTable(ConceptId upper, std::vector<ConceptId> ids, std::vector<std::int64_t> values)
        : upper_(upper), ids_(std::move(ids)), values_(std::move(values)) {}

    ConceptId upper() const noexcept { return upper_; }
    /// Descendants of `upper` in ascending id order.
    std::span<const ConceptId> ids() const noexcept { return ids_; }
    std::span<const std::int64_t> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return ids_.size(); }

    /// mu(d, upper); zero when d is not below upper.
    std::int64_t operator()(ConceptId d) const;

private:
    ConceptId upper_;
    std::vector<ConceptId> ids_;
    std::vector<std::int64_t> values_;
};

/// mu(c, c) = 1 and mu(d, c) = -sum_{d < z <= c} mu(z, c).
MobiusTable mobius(const ConceptLattice& lattice, ConceptId c);

/// JSON dump: names, concepts (sorted index arrays plus names), cover edges
/// [lower, upper], top and bottom ids.
std::string lattice_to_json(const ConceptLattice& lattice);

/// Rebuilds the context behind a complete-lattice dump and re-mines it. The
/// incidence is recovered as g' = union of intents of concepts containing g.
/// Throws ParseError on malformed input and InvariantError when the re-mined
/// lattice does not reproduce the dump.
ConceptLattice lattice_from_json(const std::string& text,
                                 std::size_t budget = kDefaultConceptBudget);

}  // namespace cg
