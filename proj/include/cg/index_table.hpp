#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cg/indices.hpp"

namespace cg {

enum class IndexKind {
    kSupport,
    kStability,
    kLstab,
    kLstabLower,
    kDeltaL,
    kDeltaH,
    kStab2Noe,
    kStab2Oe,
    kStab2Oie,
    kLevelwiseStability,
    kIntegralStabilityMinor,
    kIntegralStabilityMajor,
    kRobustness,
    kConceptProbability,
    kSeparation,
    kMonocle,
    kDeltaTcfi,
    kMarginClosed,
    kMarginClosedRelaxed,
    kSimilarity,
    kPredictability,
    kCv,
    kCfc,
    kCu,
};

std::span<const IndexKind> all_index_kinds();
std::string_view to_string(IndexKind kind);
std::optional<IndexKind> parse_index_kind(std::string_view name);

/// One index column: a kind plus textual parameters in the order given.
///
///   stability              samples=N, seed=S     (Monte Carlo when samples is set)
///   levelwise_stability,
///   integral_stability_*   j=J or rate=R          (exactly one)
///   robustness             alpha=A                (required)
///   delta_tcfi             delta=D, reading=negated|literal
///   margin_closed          alpha=A, min_support=F
///   similarity             sim=smc|jaccard, obj=a|m, nbr=a|m, tnorm=T, threshold=X
///   predictability         nbr=a|m, tnorm=T, threshold=X
///   cu                     form=printed|standard
struct IndexSpec {
    IndexKind kind = IndexKind::kSupport;
    std::vector<std::pair<std::string, std::string>> params;

    /// "kind" or "kind:k=v,k=v"; used as the column key.
    std::string name() const;
    std::optional<std::string> param(std::string_view key) const;
    /// Throws SpecError when parameters are unknown, missing or out of range.
    void validate() const;

    double number(std::string_view key, double fallback) const;
    SimilarityConfig similarity_config() const;
};

/// "kind[:k=v,...]"; validates.
IndexSpec parse_index_spec(std::string_view text);
/// Comma-separated specs; a "k=v" item without a kind continues the previous
/// spec's parameter list, so "robustness:alpha=0.3,support" has two entries.
std::vector<IndexSpec> parse_index_list(std::string_view text);

struct IndexTable {
    std::size_t concept_count = 0;
    std::vector<std::size_t> extent_sizes;
    std::vector<std::size_t> intent_sizes;
    std::vector<std::string> names;
    /// columns[k][id]; booleans are 0/1.
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(std::string_view name) const;
};

/// Value of one index on one concept, through the single-concept operations.
double index_value(const ConceptLattice& lattice, ConceptId c, const IndexSpec& spec);
/// Whole column through the shared batch caches.
std::vector<double> compute_index_column(LatticeAnalysis& analysis, const IndexSpec& spec);
/// Errors from individual indices are re-thrown naming the offending spec.
IndexTable compute_index_table(const ConceptLattice& lattice, std::span<const IndexSpec> specs);

/// 12 significant digits; infinities as "inf" / "-inf".
std::string format_value(double v);
/// Header "id,extent_size,intent_size,<names>" then one row per concept.
std::string index_table_csv(const IndexTable& table);

}  // namespace cg
