#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "cg/index_table.hpp"
#include "cg/measures.hpp"

namespace cg {

enum class ComparisonScope { kSelf, kUpperNeighbors, kLowerNeighbors, kAllDescendants, kOutOfIntent };
enum class Comparison { kDifference, kRatio, kLogRatio, kNone };
enum class CompositeOrder { kCompareThenAggregate, kAggregateThenCompare };

/// scope elements -> base measure -> optional comparison with the concept's own
/// value -> aggregation. Concept scopes accept an index kind or the itemset form
/// of piatetsky_shapiro / lift; out_of_intent evaluates the rule B -> {m} for
/// every m outside the intent with any rule measure.
struct CompositeIndexSpec {
    ComparisonScope scope = ComparisonScope::kSelf;
    std::variant<MeasureKind, IndexSpec> base = MeasureKind::kPiatetskyShapiro;
    Comparison comparison = Comparison::kNone;
    AggregatorKind aggregator = AggregatorKind::kArithmeticMean;
    CompositeOrder order = CompositeOrder::kCompareThenAggregate;

    std::string to_string() const;
};

/// "scope:measure:comparison:aggregator[:order]", e.g.
/// "upper:piatetsky_shapiro:difference:minimum". Index parameters go in
/// parentheses: "lower:robustness(alpha=0.3):ratio:median".
CompositeIndexSpec parse_composite_spec(std::string_view text);

struct CompositeValue {
    double value = 0.0;
    bool empty_scope = false;
};

/// Throws SpecError for a fuzzy aggregator fed values outside [0, 1] (the
/// message names the value) and for base measures the scope cannot evaluate.
CompositeValue evaluate_composite(const ConceptLattice& lattice, ConceptId c, const CompositeIndexSpec& spec);

/// Itemset form of a rule measure: PS(B) = P(B) - prod P(m), lift(B) = P(B) / prod P(m).
double itemset_measure(MeasureKind kind, const FormalContext& ctx, const AttributeSet& intent);

/// min over upper neighbors of PS(D) - PS(B); 0 at the top.
double index1(const ConceptLattice& lattice, ConceptId c);

enum class Index2Form { kLiteral, kHarmonic };
/// Literal: |M\B| * sum_{m not in B} 1/P(m|B) (+inf on a zero term).
/// Harmonic: |M\B| / sum 1/P(m|B). 0 when B = M.
double index2(const FormalContext& ctx, const Concept& c, Index2Form form = Index2Form::kLiteral);

}  // namespace cg
