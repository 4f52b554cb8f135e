#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cg/lattice.hpp"
#include "cg/measures.hpp"

namespace cg {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// |A| / |G|.
double support(const ConceptLattice& lattice, ConceptId c);

/// sigma(c) = 2^|A| - sum_{d < c} sigma(d): the number of subsets of A whose
/// derivation is exactly the intent. Needs the complete lattice.
BigInt stability_count(const ConceptLattice& lattice, ConceptId c);
/// sigma(c) / 2^|A|.
double stability_exact(const ConceptLattice& lattice, ConceptId c);
/// Fraction of `samples` uniform subsets C of A with C' = B. The random stream
/// is keyed by (seed, concept id).
double stability_montecarlo(const FormalContext& ctx, const Concept& c, std::size_t samples,
                            std::uint64_t seed);

/// -log2(1 - sigma / 2^n) evaluated from the exact count; +inf when sigma = 2^n.
double lstab_from_count(const BigInt& sigma, std::size_t extent_size);

struct StabilityBounds {
    double lstab = 0.0;
    double lstab_lower = kInf;
    double delta_l = kInf;
    double delta_h = kInf;
    double stab2noe = kInf;
    double stab2oe = kInf;
    double stab2oie = kInf;
};

/// LStab plus its estimates. With D_d = A \ A_d for lower neighbors d:
///   delta_l    min |D_d|
///   delta_h    |A| - max_{m not in B} |A & m'|
///   lstab_lower -log2 sum 2^-|D_d|
///   stab2noe   |D_1| + |D_2|, d1 = argmin, d2 the smallest-drop strict
///              descendant whose difference set is disjoint from D_1
///   stab2oe    |D_1 u D_2|, d2 the neighbor maximizing |A_d2 \ A_d1|
///   stab2oie   |D_1 u D_2| over the two smallest-drop neighbors
/// Ties go to the smaller |D|, then the smaller id. A concept without lower
/// neighbors gets +inf in every estimate.
StabilityBounds lstab_and_bounds(const ConceptLattice& lattice, ConceptId c);

/// gamma_j for j = 0..|A|: the number of j-subsets of A deriving exactly B,
/// via gamma_j = sum_{d <= c} mu(d, c) C(|A_d|, j).
std::vector<BigInt> closure_counts(const ConceptLattice& lattice, ConceptId c);

struct LevelValue {
    double value = 0.0;
    /// False when j (or the whole level range) fell outside [2, |A| - 1].
    bool in_range = true;
};

enum class IntegralSide { kMinor, kMajor, kFull };

/// J_j = gamma_j / C(|A|, j); zero and flagged outside [2, |A| - 1].
LevelValue levelwise_stability(const ConceptLattice& lattice, ConceptId c, std::size_t j);
/// minor: J_2..J_j, major: J_j..J_{n-1}, full: J_2..J_{n-1}; j is ignored for full.
LevelValue integral_stability(const ConceptLattice& lattice, ConceptId c, std::size_t j,
                              IntegralSide side);
/// ceil(rate * n) clamped to [2, n - 1]; nullopt when n < 3.
std::optional<std::size_t> level_from_rate(double rate, std::size_t extent_size);

/// sum_{d <= c} mu(d, c) (1 - alpha)^{|A_c| - |A_d|}.
double robustness(const ConceptLattice& lattice, ConceptId c, double alpha);

/// Probability that B is closed in a random context with the same attribute
/// frequencies; log-space binomial weights.
double concept_probability(const FormalContext& ctx, const AttributeSet& intent);

/// |A||B| / (sum_{g in A} |g'| + sum_{m in B} |m'| - |A||B|); 0 for an empty side.
double separation(const FormalContext& ctx, const Concept& c);

/// (|A| + sum_{g in A} N_G(g)) (|B| + sum_{m in B} N_M(m)) where N_G(g) counts
/// concepts of H whose extent omits g (dually N_M). The first overload uses
/// every concept as H.
double monocle(const ConceptLattice& lattice, ConceptId c);
double monocle(const ConceptLattice& lattice, ConceptId c, std::span<const ConceptId> h);

enum class TcfiReading { kNegated, kLiteral };

/// Negated (default): no lower neighbor with |D| = |B| + 1 keeps at least
/// (1 - delta) of the support. Literal: every such neighbor does.
bool delta_tcfi(const ConceptLattice& lattice, ConceptId c, double delta,
                TcfiReading reading = TcfiReading::kNegated);

/// supp(B) >= min_support (a fraction of |G|) and every frequent proper
/// closed superset keeps at most (1 - alpha) of the support.
bool margin_closed(const ConceptLattice& lattice, ConceptId c, double alpha, double min_support = 0.0);
/// max over lower neighbors of |A_d| / |A|; 0 without lower neighbors.
double margin_closed_relaxed(const ConceptLattice& lattice, ConceptId c);

enum class SimilarityKind { kSmc, kJaccard };
enum class NeighborhoodAggregation { kAverage, kMinimum };

struct SimilarityConfig {
    SimilarityKind similarity = SimilarityKind::kSmc;
    NeighborhoodAggregation object_aggregation = NeighborhoodAggregation::kAverage;
    NeighborhoodAggregation neighbor_aggregation = NeighborhoodAggregation::kAverage;
    AggregatorKind tnorm = AggregatorKind::kMinimumT;
    double nonmonotone_threshold = 0.5;

    /// Throws SpecError for a non-t-norm or a threshold outside [0, 1].
    void validate() const;
};

/// sim_J of two empty sets is 1.
double object_similarity(SimilarityKind kind, const AttributeSet& x, const AttributeSet& y);
/// Pairwise similarity of object intents over the extent; 1 when |A| < 2.
double cohesion(const FormalContext& ctx, const ObjectSet& extent, SimilarityKind kind,
                NeighborhoodAggregation aggregation);
/// T(coh, coh_un, coh_ln) with each factor clamped to [0, 1].
double basic_level_similarity(const ConceptLattice& lattice, ConceptId c, const SimilarityConfig& cfg = {});

/// 1 - mean_{y in M - B} E(y) with E = -q log2 q, q = |A & y'| / |A|; 1 when B = M.
double predictability_factor(const FormalContext& ctx, const Concept& c);
/// The similarity scheme with the predictability factor in place of cohesion.
/// Only the neighbor aggregation, t-norm and threshold of `cfg` are used.
double predictability(const ConceptLattice& lattice, ConceptId c, const SimilarityConfig& cfg = {});

enum class CuForm { kPrinted, kStandard };

struct BasicLevelStats {
    double cv = 0.0;
    double cfc = 0.0;
    double cu = 0.0;
};

/// Attributes with empty extent contribute nothing. kPrinted uses
/// (|A & y'| / |y'|)^2 inside CU, kStandard uses (|A & y'| / |A|)^2.
BasicLevelStats cv_cfc_cu(const FormalContext& ctx, const Concept& c, CuForm form = CuForm::kPrinted);

/// Whole-lattice evaluation with caches shared across indices. Values agree
/// with the single-concept functions above; stability and robustness use the
/// bottom-up recursions r(c) = 1 - sum_{d < c} (1 - alpha)^{|A_c| - |A_d|} r(d).
class LatticeAnalysis {
public:
    explicit LatticeAnalysis(const ConceptLattice& lattice);
    ~LatticeAnalysis();
    LatticeAnalysis(const LatticeAnalysis&) = delete;
    LatticeAnalysis& operator=(const LatticeAnalysis&) = delete;

    const ConceptLattice& lattice() const noexcept { return lattice_; }

    /// Strict descendants of c in ascending id order.
    std::span<const ConceptId> strict_descendants(ConceptId c);

    const std::vector<double>& stability();
    const std::vector<double>& lstab();
    std::vector<double> robustness(double alpha);
    /// J_2..J_{n-1} per concept (index i holds J_{i+2}); empty when |A| < 3.
    const std::vector<std::vector<double>>& level_values();
    const std::vector<StabilityBounds>& bounds();
    const std::vector<double>& cohesion(SimilarityKind kind, NeighborhoodAggregation aggregation);
    const std::vector<double>& predictability_factors();
    std::vector<double> basic_level(const std::vector<double>& factor, const SimilarityConfig& cfg);
    const std::vector<double>& monocle();
    const std::vector<double>& concept_probability();

private:
    struct Impl;
    const ConceptLattice& lattice_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cg
