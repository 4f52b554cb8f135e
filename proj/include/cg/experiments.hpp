#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cg/index_table.hpp"
#include "cg/lattice.hpp"

namespace cg {

struct TauResult {
    double value = 0.0;
    /// One side is constant; value is 0.
    bool degenerate = false;
};

/// Tie-corrected Kendall tau via Knight's O(n log n) pair count.
TauResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Mann-Whitney statistic from midranks; ties count one half.
double auc(std::span<const double> scores, const std::vector<bool>& labels);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    /// y is constant, so SST = 0 and R^2 is reported as 1.
    bool constant_y = false;
};

OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

struct IntRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/// Indices of the rank-correlation study, in output order.
std::vector<IndexSpec> default_correlation_indices();

struct CorrelationStudySpec {
    std::vector<double> densities{0.1, 0.2, 0.3, 0.4};
    std::size_t contexts_per_density = 100;
    IntRange objects{40, 80};
    IntRange attributes{10, 50};
    std::vector<IndexSpec> indices = default_correlation_indices();
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultConceptBudget;

    void validate() const;
};

struct TauCell {
    double mean = 0.0;
    double sd = 0.0;
    /// Contexts whose tau was not degenerate.
    std::size_t used = 0;
};

struct CorrelationGroup {
    /// Empty for the pooled group over all densities.
    std::optional<double> density;
    /// Upper triangle incl. diagonal, row-major over index pairs (a <= b).
    std::vector<TauCell> cells;
};

struct CorrelationResult {
    std::vector<std::string> index_names;
    std::vector<CorrelationGroup> groups;
    /// Contexts regenerated because their lattice exceeded the budget.
    std::size_t regenerated = 0;

    const TauCell& cell(const CorrelationGroup& g, std::size_t a, std::size_t b) const;
    const TauCell& pooled(std::string_view a, std::string_view b) const;
};

/// The random context used as context `k` of density group `d`. Dimensions are
/// uniform in the ranges; `attempt` > 0 re-draws after a budget overflow.
FormalContext study_context(std::uint64_t seed, double density, std::size_t d, std::size_t k, IntRange objects,
                            IntRange attributes, std::size_t attempt = 0);

CorrelationResult run_correlation_study(const CorrelationStudySpec& spec);
/// density,index_a,index_b,mean_tau,sd_tau; pooled rows use density "all".
std::string correlation_csv(const CorrelationResult& result);

struct ApproxStudySpec {
    std::vector<double> densities{0.1, 0.2, 0.3};
    std::vector<double> rates = default_rates();
    std::size_t contexts_per_density = 100;
    IntRange objects{40, 80};
    IntRange attributes{10, 50};
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultConceptBudget;

    static std::vector<double> default_rates();
    void validate() const;
};

struct ApproxCell {
    double density = 0.0;
    double rate = 0.0;
    OlsFit fit;
    std::size_t concepts = 0;
    /// Fewer than two usable concepts or constant x; fit is zero.
    bool skipped = false;
};

struct ApproxResult {
    std::vector<ApproxCell> cells;
    std::size_t regenerated = 0;
};

/// Regresses exact stability on the minor integral stability up to level
/// ceil(rate |A|), pooling every concept with a valid level.
ApproxResult run_approx_study(const ApproxStudySpec& spec);
/// density,rate,slope,intercept,r2,n_concepts
std::string approx_csv(const ApproxResult& result);

enum class OriginalMatch { kIntent, kExtent, kBoth };

struct NoiseStudySpec {
    FormalContext base = FormalContext::from_rows(1, {AttributeSet(1)});
    std::vector<double> noise_rates{0.01, 0.03, 0.05, 0.1};
    std::size_t trials_per_rate = 20;
    std::vector<IndexSpec> indices;
    OriginalMatch match = OriginalMatch::kIntent;
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultConceptBudget;

    void validate() const;
};

struct NoiseTrial {
    ConceptLattice lattice;
    /// Concept is an original concept of the base context.
    std::vector<bool> labels;
};

/// Noisy lattice and labels of trial `t` at rate index `r`.
NoiseTrial make_noise_trial(const NoiseStudySpec& spec, std::size_t r, std::size_t t);

struct NoiseCell {
    double rate = 0.0;
    std::string index;
    double mean_auc = 0.0;
    std::size_t trials_used = 0;
};

struct NoiseResult {
    std::vector<NoiseCell> cells;
    /// Trials dropped because every concept (or none) was original.
    std::size_t degenerate_trials = 0;
};

NoiseResult run_noise_study(const NoiseStudySpec& spec);
/// rate,index,mean_auc,trials_used
std::string noise_csv(const NoiseResult& result);

struct MetaRanking {
    std::string index;
    std::vector<ConceptId> top;
    std::vector<double> values;
};

struct MetaReport {
    std::size_t concept_count = 0;
    std::vector<MetaRanking> rankings;
    /// share of rankings containing each concept, by id
    std::vector<double> frequency;
};

/// Top-k concepts of `lattice` per index (descending, ties by id; the relaxed
/// margin-closed score ranks ascending). A concept with empty extent is never
/// ranked.
MetaReport run_meta_demo(const ConceptLattice& lattice, std::size_t k = 8);
/// The bundled index context with the default index list.
MetaReport run_meta_demo();
std::string meta_csv(const MetaReport& report, const ConceptLattice& lattice);

}  // namespace cg
