#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cg/context.hpp"

namespace cg {

/// 2x2 joint counts for a rule A -> B over n transactions.
struct ContingencyTable {
    std::size_t n_ab = 0;
    std::size_t n_a_not_b = 0;
    std::size_t n_not_a_b = 0;
    std::size_t n_not_a_not_b = 0;

    std::size_t n() const noexcept { return n_ab + n_a_not_b + n_not_a_b + n_not_a_not_b; }
    std::size_t n_a() const noexcept { return n_ab + n_a_not_b; }
    std::size_t n_b() const noexcept { return n_ab + n_not_a_b; }

    ContingencyTable scaled(std::size_t factor) const {
        return {n_ab * factor, n_a_not_b * factor, n_not_a_b * factor, n_not_a_not_b * factor};
    }
};

/// n = |G|, n_ab = |antecedent' & consequent'|, remaining cells by complement.
ContingencyTable contingency_from_sets(const FormalContext& ctx, const AttributeSet& antecedent,
                                       const AttributeSet& consequent);

enum class MeasureKind {
    kAccuracy,
    kAddedValue,
    kCertaintyFactor,
    kCollectiveStrength,
    kConditionalProbability,
    kConviction,
    kCosine,
    kGiniIndex,
    kInformationGain,
    kJMeasure,
    kJaccard,
    kKlosgen,
    kKlosgenMax,
    kLaplaceCorrection,
    kLeastContradiction,
    kLeverage,
    kLift,
    kLoevinger,
    kNormalizedMutualInformation,
    kOddMultiplier,
    kExampleCounterexampleRate,
    kOddsRatio,
    kOneWaySupport,
    kPearsonChi2,
    kPiatetskyShapiro,
    kRelativeRisk,
    kSebagSchoenauer,
    kTwoWaySupport,
    kLinearCorrelation,
    kZhang,
};

std::span<const MeasureKind> all_measure_kinds();
std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure_kind(std::string_view name);

struct MeasureValue {
    double value = 0.0;
    /// Set when a 0/0 was resolved to 0.
    bool undefined = false;
};

/// Rule measure over cell ratios. A nonzero value over a zero denominator yields
/// an infinity signed like the numerator; 0/0 yields 0 with `undefined` set.
/// "log" is natural, "log2" binary, matching the printed formulas; 0 log 0 = 0.
MeasureValue evaluate_measure(MeasureKind kind, const ContingencyTable& table);
inline double rule_measure(MeasureKind kind, const ContingencyTable& table) {
    return evaluate_measure(kind, table).value;
}

enum class AggregatorKind {
    kSum,
    kArithmeticMean,
    kGeometricMean,
    kHarmonicMean,
    kMedian,
    kMaximum,
    kMinimum,
    kMidrange,
    // t-norms
    kDrasticProduct,
    kBoundedDifference,
    kEinsteinProduct,
    kAlgebraicProduct,
    kHamacherProduct,
    kMinimumT,
    // s-norms
    kDrasticSum,
    kBoundedSum,
    kEinsteinSum,
    kProbabilisticSum,
    kHamacherSum,
    kMaximumS,
};

std::span<const AggregatorKind> all_aggregator_kinds();
std::string_view to_string(AggregatorKind kind);
std::optional<AggregatorKind> parse_aggregator_kind(std::string_view name);

bool is_tnorm(AggregatorKind kind) noexcept;
bool is_snorm(AggregatorKind kind) noexcept;
inline bool is_fuzzy(AggregatorKind kind) noexcept { return is_tnorm(kind) || is_snorm(kind); }
/// The printed dual pair partner (drastic product <-> drastic sum, ...).
AggregatorKind dual(AggregatorKind fuzzy_kind);

/// Binary fuzzy norm. Hamacher's 0/0 points resolve to the limits 0 (product at
/// (0,0)) and 1 (sum at (1,1)).
double fuzzy_norm(AggregatorKind kind, double a, double b);

/// Throws SpecError on empty input or on fuzzy input outside [0, 1].
/// Fuzzy kinds fold left over the binary norm.
double aggregate(std::span<const double> values, AggregatorKind kind);

}  // namespace cg
