#include "cg/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cg/error.hpp"

namespace cg {

namespace {

using real = long double;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates the 0/0 flag across the sub-ratios of one measure.
struct Eval {
    bool undefined = false;

    real ratio(real num, real den) {
        if (den != 0) return num / den;
        if (num == 0) {
            undefined = true;
            return 0;
        }
        return num > 0 ? kInf : -kInf;
    }

    // x * log(y) with 0 * log(anything) = 0.
    static real xlog(real x, real y, real base_log) {
        if (x == 0) return 0;
        if (y == 0) return -kInf;
        return x * std::log(y) / base_log;
    }
};

constexpr std::array<std::pair<MeasureKind, std::string_view>, 30> kMeasureNames{{
    {MeasureKind::kAccuracy, "accuracy"},
    {MeasureKind::kAddedValue, "added_value"},
    {MeasureKind::kCertaintyFactor, "certainty_factor"},
    {MeasureKind::kCollectiveStrength, "collective_strength"},
    {MeasureKind::kConditionalProbability, "conditional_probability"},
    {MeasureKind::kConviction, "conviction"},
    {MeasureKind::kCosine, "cosine"},
    {MeasureKind::kGiniIndex, "gini_index"},
    {MeasureKind::kInformationGain, "information_gain"},
    {MeasureKind::kJMeasure, "j_measure"},
    {MeasureKind::kJaccard, "jaccard"},
    {MeasureKind::kKlosgen, "klosgen"},
    {MeasureKind::kKlosgenMax, "klosgen_max"},
    {MeasureKind::kLaplaceCorrection, "laplace_correction"},
    {MeasureKind::kLeastContradiction, "least_contradiction"},
    {MeasureKind::kLeverage, "leverage"},
    {MeasureKind::kLift, "lift"},
    {MeasureKind::kLoevinger, "loevinger"},
    {MeasureKind::kNormalizedMutualInformation, "normalized_mutual_information"},
    {MeasureKind::kOddMultiplier, "odd_multiplier"},
    {MeasureKind::kExampleCounterexampleRate, "example_counterexample_rate"},
    {MeasureKind::kOddsRatio, "odds_ratio"},
    {MeasureKind::kOneWaySupport, "one_way_support"},
    {MeasureKind::kPearsonChi2, "pearson_chi2"},
    {MeasureKind::kPiatetskyShapiro, "piatetsky_shapiro"},
    {MeasureKind::kRelativeRisk, "relative_risk"},
    {MeasureKind::kSebagSchoenauer, "sebag_schoenauer"},
    {MeasureKind::kTwoWaySupport, "two_way_support"},
    {MeasureKind::kLinearCorrelation, "linear_correlation"},
    {MeasureKind::kZhang, "zhang"},
}};

constexpr std::array<std::pair<AggregatorKind, std::string_view>, 20> kAggregatorNames{{
    {AggregatorKind::kSum, "sum"},
    {AggregatorKind::kArithmeticMean, "arithmetic_mean"},
    {AggregatorKind::kGeometricMean, "geometric_mean"},
    {AggregatorKind::kHarmonicMean, "harmonic_mean"},
    {AggregatorKind::kMedian, "median"},
    {AggregatorKind::kMaximum, "maximum"},
    {AggregatorKind::kMinimum, "minimum"},
    {AggregatorKind::kMidrange, "midrange"},
    {AggregatorKind::kDrasticProduct, "drastic_product"},
    {AggregatorKind::kBoundedDifference, "bounded_difference"},
    {AggregatorKind::kEinsteinProduct, "einstein_product"},
    {AggregatorKind::kAlgebraicProduct, "algebraic_product"},
    {AggregatorKind::kHamacherProduct, "hamacher_product"},
    {AggregatorKind::kMinimumT, "minimum_t"},
    {AggregatorKind::kDrasticSum, "drastic_sum"},
    {AggregatorKind::kBoundedSum, "bounded_sum"},
    {AggregatorKind::kEinsteinSum, "einstein_sum"},
    {AggregatorKind::kProbabilisticSum, "probabilistic_sum"},
    {AggregatorKind::kHamacherSum, "hamacher_sum"},
    {AggregatorKind::kMaximumS, "maximum_s"},
}};

std::array<MeasureKind, 30> measure_list() {
    std::array<MeasureKind, 30> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kMeasureNames[i].first;
    return out;
}

std::array<AggregatorKind, 20> aggregator_list() {
    std::array<AggregatorKind, 20> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kAggregatorNames[i].first;
    return out;
}

const std::array<MeasureKind, 30> kAllMeasures = measure_list();
const std::array<AggregatorKind, 20> kAllAggregators = aggregator_list();

}  // namespace

ContingencyTable contingency_from_sets(const FormalContext& ctx, const AttributeSet& antecedent,
                                       const AttributeSet& consequent) {
    const ObjectSet ea = derive_attributes(ctx, antecedent);
    const ObjectSet eb = derive_attributes(ctx, consequent);
    const std::size_t n = ctx.object_count();
    const std::size_t ab = ea.intersection_count(eb);
    const std::size_t a = ea.count();
    const std::size_t b = eb.count();
    return {ab, a - ab, b - ab, n - a - b + ab};
}

std::span<const MeasureKind> all_measure_kinds() { return kAllMeasures; }

std::string_view to_string(MeasureKind kind) {
    for (const auto& [k, name] : kMeasureNames)
        if (k == kind) return name;
    return "?";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view name) {
    for (const auto& [k, n] : kMeasureNames)
        if (n == name) return k;
    return std::nullopt;
}

MeasureValue evaluate_measure(MeasureKind kind, const ContingencyTable& t) {
    const real n = static_cast<real>(t.n());
    if (t.n() == 0) throw PreconditionError("contingency table is empty");
    const real a = t.n_ab, b = t.n_a_not_b, c = t.n_not_a_b, d = t.n_not_a_not_b;
    const real na = a + b, nb = a + c, nna = c + d, nnb = b + d;
    // n * n_ab - n_a * n_b: zero exactly on independent tables.
    const real cov = a * n - na * nb;
    static const real kLn2 = std::log(2.0L);
    Eval e;
    real v = 0;
    switch (kind) {
        case MeasureKind::kAccuracy: v = (a + d) / n; break;
        case MeasureKind::kAddedValue: v = e.ratio(cov, na * n); break;
        case MeasureKind::kCertaintyFactor: v = e.ratio(cov, na * nnb); break;
        case MeasureKind::kCollectiveStrength: {
            const real expected = na * nb + nna * nnb;
            v = e.ratio((a + d) * (n * n - expected), expected * (b + c));
            break;
        }
        case MeasureKind::kConditionalProbability: v = e.ratio(a, na); break;
        case MeasureKind::kConviction: v = e.ratio(na * nnb, n * b); break;
        case MeasureKind::kCosine: v = e.ratio(a, std::sqrt(na * nb)); break;
        case MeasureKind::kGiniIndex: {
            real g = -(nb / n) * (nb / n) - (nnb / n) * (nnb / n);
            if (na > 0) g += (na / n) * ((a / na) * (a / na) + (b / na) * (b / na));
            if (nna > 0) g += (nna / n) * ((c / nna) * (c / nna) + (d / nna) * (d / nna));
            v = g;
            break;
        }
        case MeasureKind::kInformationGain: {
            const real r = e.ratio(a * n, na * nb);
            v = e.undefined ? 0 : (r == 0 ? -kInf : std::log(r));
            break;
        }
        case MeasureKind::kJMeasure:
            v = Eval::xlog(a / n, e.ratio(a * n, na * nb), 1) + Eval::xlog(b / n, e.ratio(b * n, na * nnb), 1);
            break;
        case MeasureKind::kJaccard: v = e.ratio(a, na + nb - a); break;
        case MeasureKind::kKlosgen:
        case MeasureKind::kKlosgenMax: {
            if (a == 0) break;
            real gap = e.ratio(cov, na * n);
            if (kind == MeasureKind::kKlosgenMax) gap = std::max(gap, e.ratio(cov, nb * n));
            v = std::sqrt(a / n) * gap;
            break;
        }
        case MeasureKind::kLaplaceCorrection: v = (a + 1) / (na + 2); break;
        case MeasureKind::kLeastContradiction: v = e.ratio(a - b, nb); break;
        case MeasureKind::kLeverage:
        case MeasureKind::kPiatetskyShapiro: v = cov / (n * n); break;
        case MeasureKind::kLift: v = e.ratio(a * n, na * nb); break;
        case MeasureKind::kLoevinger: v = 1 - e.ratio(na * nnb, n * b); break;
        case MeasureKind::kNormalizedMutualInformation: {
            const real cells[2][2] = {{a, b}, {c, d}};
            const real rows[2] = {na, nna};
            const real cols[2] = {nb, nnb};
            real info = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    if (cells[i][j] > 0)
                        info += Eval::xlog(cells[i][j] / n, cells[i][j] * n / (rows[i] * cols[j]), kLn2);
            real h = 0;
            for (real r : rows) h -= Eval::xlog(r / n, r / n, kLn2);
            // rounding can leave a tiny nonzero info when it should vanish
            if (cov == 0) info = 0;
            v = e.ratio(info, h);
            break;
        }
        case MeasureKind::kOddMultiplier: v = e.ratio(a * nnb, nb * b); break;
        case MeasureKind::kExampleCounterexampleRate: v = 1 - e.ratio(b, a); break;
        case MeasureKind::kOddsRatio: v = e.ratio(a * d, b * c); break;
        case MeasureKind::kOneWaySupport: {
            if (a == 0) break;
            const real lift = e.ratio(a * n, na * nb);
            v = (a / na) * std::log(lift) / kLn2;
            break;
        }
        case MeasureKind::kPearsonChi2: {
            const real cells[2][2] = {{a, b}, {c, d}};
            const real rows[2] = {na, nna};
            const real cols[2] = {nb, nnb};
            real chi = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const real dev = n * cells[i][j] - rows[i] * cols[j];
                    chi += e.ratio(dev * dev, n * rows[i] * cols[j]);
                }
            v = chi;
            break;
        }
        case MeasureKind::kRelativeRisk: v = e.ratio(a * nna, na * c); break;
        case MeasureKind::kSebagSchoenauer: v = e.ratio(a, b); break;
        case MeasureKind::kTwoWaySupport: {
            if (a == 0) break;
            v = (a / n) * std::log(e.ratio(a * n, na * nb)) / kLn2;
            break;
        }
        case MeasureKind::kLinearCorrelation: v = e.ratio(cov, std::sqrt(na * nb * nna * nnb)); break;
        case MeasureKind::kZhang: v = e.ratio(cov, std::max(a * nnb, nb * b)); break;
    }
    return {static_cast<double>(v), e.undefined};
}

std::span<const AggregatorKind> all_aggregator_kinds() { return kAllAggregators; }

std::string_view to_string(AggregatorKind kind) {
    for (const auto& [k, name] : kAggregatorNames)
        if (k == kind) return name;
    return "?";
}

std::optional<AggregatorKind> parse_aggregator_kind(std::string_view name) {
    for (const auto& [k, n] : kAggregatorNames)
        if (n == name) return k;
    if (name == "mean") return AggregatorKind::kArithmeticMean;
    if (name == "min") return AggregatorKind::kMinimum;
    if (name == "max") return AggregatorKind::kMaximum;
    return std::nullopt;
}

bool is_tnorm(AggregatorKind kind) noexcept {
    switch (kind) {
        case AggregatorKind::kDrasticProduct:
        case AggregatorKind::kBoundedDifference:
        case AggregatorKind::kEinsteinProduct:
        case AggregatorKind::kAlgebraicProduct:
        case AggregatorKind::kHamacherProduct:
        case AggregatorKind::kMinimumT: return true;
        default: return false;
    }
}

bool is_snorm(AggregatorKind kind) noexcept {
    switch (kind) {
        case AggregatorKind::kDrasticSum:
        case AggregatorKind::kBoundedSum:
        case AggregatorKind::kEinsteinSum:
        case AggregatorKind::kProbabilisticSum:
        case AggregatorKind::kHamacherSum:
        case AggregatorKind::kMaximumS: return true;
        default: return false;
    }
}

AggregatorKind dual(AggregatorKind kind) {
    switch (kind) {
        case AggregatorKind::kDrasticProduct: return AggregatorKind::kDrasticSum;
        case AggregatorKind::kBoundedDifference: return AggregatorKind::kBoundedSum;
        case AggregatorKind::kEinsteinProduct: return AggregatorKind::kEinsteinSum;
        case AggregatorKind::kAlgebraicProduct: return AggregatorKind::kProbabilisticSum;
        case AggregatorKind::kHamacherProduct: return AggregatorKind::kHamacherSum;
        case AggregatorKind::kMinimumT: return AggregatorKind::kMaximumS;
        case AggregatorKind::kDrasticSum: return AggregatorKind::kDrasticProduct;
        case AggregatorKind::kBoundedSum: return AggregatorKind::kBoundedDifference;
        case AggregatorKind::kEinsteinSum: return AggregatorKind::kEinsteinProduct;
        case AggregatorKind::kProbabilisticSum: return AggregatorKind::kAlgebraicProduct;
        case AggregatorKind::kHamacherSum: return AggregatorKind::kHamacherProduct;
        case AggregatorKind::kMaximumS: return AggregatorKind::kMinimumT;
        default: throw SpecError(std::string(to_string(kind)) + " is not a fuzzy norm");
    }
}

namespace {

double fuzzy_raw(AggregatorKind kind, double x, double y) {
    switch (kind) {
        case AggregatorKind::kDrasticProduct: return std::max(x, y) == 1.0 ? std::min(x, y) : 0.0;
        case AggregatorKind::kBoundedDifference: return std::max(0.0, x + y - 1.0);
        case AggregatorKind::kEinsteinProduct: return x * y / (2.0 - (x + y - x * y));
        case AggregatorKind::kAlgebraicProduct: return x * y;
        case AggregatorKind::kHamacherProduct: {
            const double den = x + y - x * y;
            return den == 0.0 ? 0.0 : x * y / den;
        }
        case AggregatorKind::kMinimumT: return std::min(x, y);
        case AggregatorKind::kDrasticSum: return std::min(x, y) == 0.0 ? std::max(x, y) : 1.0;
        case AggregatorKind::kBoundedSum: return std::min(1.0, x + y);
        case AggregatorKind::kEinsteinSum: return (x + y) / (1.0 + x * y);
        case AggregatorKind::kProbabilisticSum: return x + y - x * y;
        case AggregatorKind::kHamacherSum: {
            // 1 is absorbing; the quotient drifts off it in floating point
            if (x == 1.0 || y == 1.0) return 1.0;
            const double den = 1.0 - x * y;
            return den == 0.0 ? 1.0 : (x + y - 2.0 * x * y) / den;
        }
        case AggregatorKind::kMaximumS: return std::max(x, y);
        default: throw SpecError(std::string(to_string(kind)) + " is not a fuzzy norm");
    }
}

}  // namespace

double fuzzy_norm(AggregatorKind kind, double x, double y) {
    return std::clamp(fuzzy_raw(kind, x, y), 0.0, 1.0);
}

double aggregate(std::span<const double> values, AggregatorKind kind) {
    if (values.empty()) throw SpecError("cannot aggregate an empty sequence with " + std::string(to_string(kind)));
    const double count = static_cast<double>(values.size());
    if (is_fuzzy(kind)) {
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                throw SpecError(std::string(to_string(kind)) + " needs values in [0,1], got " + std::to_string(v));
        double acc = values[0];
        for (std::size_t i = 1; i < values.size(); ++i) acc = fuzzy_norm(kind, acc, values[i]);
        return acc;
    }
    switch (kind) {
        case AggregatorKind::kSum: return std::accumulate(values.begin(), values.end(), 0.0);
        case AggregatorKind::kArithmeticMean: return std::accumulate(values.begin(), values.end(), 0.0) / count;
        case AggregatorKind::kGeometricMean: {
            double log_sum = 0.0, product = 1.0;
            for (double v : values) {
                if (v < 0.0) throw SpecError("geometric_mean needs non-negative values, got " + std::to_string(v));
                if (v == 0.0) return 0.0;
                log_sum += std::log(v);
                product *= v;
            }
            if (std::isfinite(product) && product > 0.0) return std::pow(product, 1.0 / count);
            return std::exp(log_sum / count);
        }
        case AggregatorKind::kHarmonicMean: {
            double inv = 0.0;
            for (double v : values) {
                if (v == 0.0) return 0.0;
                inv += 1.0 / v;
            }
            return count / inv;
        }
        case AggregatorKind::kMedian: {
            std::vector<double> sorted(values.begin(), values.end());
            std::sort(sorted.begin(), sorted.end());
            const std::size_t k = sorted.size();
            return k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
        }
        case AggregatorKind::kMaximum: return *std::max_element(values.begin(), values.end());
        case AggregatorKind::kMinimum: return *std::min_element(values.begin(), values.end());
        case AggregatorKind::kMidrange: {
            auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            return 0.5 * (*lo + *hi);
        }
        default: break;
    }
    throw SpecError("unknown aggregator");
}

}  // namespace cg
