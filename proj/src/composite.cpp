#include "cg/composite.hpp"

#include <cmath>
#include <vector>

#include "cg/error.hpp"

namespace cg {

namespace {

struct ScopeName {
    ComparisonScope scope;
    std::string_view shortname;
    std::string_view longname;
};

constexpr ScopeName kScopes[] = {
    {ComparisonScope::kSelf, "self", "self"},
    {ComparisonScope::kUpperNeighbors, "upper", "upper_neighbors"},
    {ComparisonScope::kLowerNeighbors, "lower", "lower_neighbors"},
    {ComparisonScope::kAllDescendants, "descendants", "all_descendants"},
    {ComparisonScope::kOutOfIntent, "out_of_intent", "out_of_intent_attributes"},
};

constexpr std::pair<Comparison, std::string_view> kComparisons[] = {
    {Comparison::kDifference, "difference"},
    {Comparison::kRatio, "ratio"},
    {Comparison::kLogRatio, "log_ratio"},
    {Comparison::kNone, "none"},
};

std::vector<std::string_view> split_top_level(std::string_view text) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (text[i] == ':' && depth == 0) {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(text.substr(start));
    return out;
}

double compare(Comparison how, double element, double own) {
    switch (how) {
        case Comparison::kDifference: return element - own;
        case Comparison::kRatio:
        case Comparison::kLogRatio: {
            double r;
            if (own == 0.0)
                r = element == 0.0 ? 0.0 : (element > 0 ? kInf : -kInf);
            else
                r = element / own;
            if (how == Comparison::kRatio) return r;
            if (r < 0.0) throw SpecError("log_ratio of a negative ratio " + std::to_string(r));
            return std::log(r);
        }
        case Comparison::kNone: return element;
    }
    return element;
}

double prob_of(const FormalContext& ctx, const AttributeSet& b) {
    return static_cast<double>(derive_attributes(ctx, b).count()) / static_cast<double>(ctx.object_count());
}

}  // namespace

std::string CompositeIndexSpec::to_string() const {
    std::string out;
    for (const auto& s : kScopes)
        if (s.scope == scope) out = std::string(s.shortname);
    out += ':';
    if (auto m = std::get_if<MeasureKind>(&base)) {
        out += std::string(cg::to_string(*m));
    } else {
        const auto& spec = std::get<IndexSpec>(base);
        out += std::string(cg::to_string(spec.kind));
        if (!spec.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < spec.params.size(); ++i)
                out += (i ? "," : "") + spec.params[i].first + "=" + spec.params[i].second;
            out += ')';
        }
    }
    for (const auto& [k, name] : kComparisons)
        if (k == comparison) out += ":" + std::string(name);
    out += ":" + std::string(cg::to_string(aggregator));
    if (order == CompositeOrder::kAggregateThenCompare) out += ":aggregate_then_compare";
    return out;
}

CompositeIndexSpec parse_composite_spec(std::string_view text) {
    const auto parts = split_top_level(text);
    if (parts.size() != 4 && parts.size() != 5)
        throw SpecError("composite spec needs scope:measure:comparison:aggregator[:order], got '" +
                        std::string(text) + "'");
    CompositeIndexSpec spec;
    bool found = false;
    for (const auto& s : kScopes)
        if (parts[0] == s.shortname || parts[0] == s.longname) {
            spec.scope = s.scope;
            found = true;
        }
    if (!found) throw SpecError("unknown composite scope '" + std::string(parts[0]) + "'");

    const std::string_view base = parts[1];
    if (auto m = parse_measure_kind(base)) {
        spec.base = *m;
    } else {
        std::string index(base);
        const auto open = index.find('(');
        if (open != std::string::npos) {
            if (index.back() != ')') throw SpecError("unbalanced parentheses in '" + index + "'");
            index = index.substr(0, open) + ":" + index.substr(open + 1, index.size() - open - 2);
        }
        if (!parse_index_kind(index.substr(0, index.find(':'))))
            throw SpecError("unknown measure or index '" + std::string(base) + "'");
        spec.base = parse_index_spec(index);
    }

    found = false;
    for (const auto& [k, name] : kComparisons)
        if (parts[2] == name) {
            spec.comparison = k;
            found = true;
        }
    if (!found) throw SpecError("unknown comparison '" + std::string(parts[2]) + "'");

    auto agg = parse_aggregator_kind(parts[3]);
    if (!agg) throw SpecError("unknown aggregator '" + std::string(parts[3]) + "'");
    spec.aggregator = *agg;

    if (parts.size() == 5) {
        if (parts[4] == "aggregate_then_compare")
            spec.order = CompositeOrder::kAggregateThenCompare;
        else if (parts[4] != "compare_then_aggregate")
            throw SpecError("unknown order '" + std::string(parts[4]) + "'");
    }
    return spec;
}

double itemset_measure(MeasureKind kind, const FormalContext& ctx, const AttributeSet& intent) {
    double independent = 1.0;
    intent.for_each([&](std::size_t m) {
        independent *= static_cast<double>(ctx.column(m).count()) / static_cast<double>(ctx.object_count());
    });
    const double joint = prob_of(ctx, intent);
    switch (kind) {
        case MeasureKind::kPiatetskyShapiro:
        case MeasureKind::kLeverage: return joint - independent;
        case MeasureKind::kLift:
            if (independent == 0.0) return joint == 0.0 ? 0.0 : kInf;
            return joint / independent;
        default:
            throw SpecError(std::string(to_string(kind)) +
                            " has no itemset form; use it with the out_of_intent scope");
    }
}

CompositeValue evaluate_composite(const ConceptLattice& lat, ConceptId c, const CompositeIndexSpec& spec) {
    const FormalContext& ctx = lat.context();
    const Concept& self = lat.at(c);
    std::vector<double> values;

    if (spec.scope == ComparisonScope::kOutOfIntent) {
        const auto* kind = std::get_if<MeasureKind>(&spec.base);
        if (!kind) throw SpecError("out_of_intent scope needs a rule measure, not an index");
        if (spec.comparison != Comparison::kNone)
            throw SpecError("out_of_intent scope has no own value to compare against; use comparison none");
        for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
            if (self.intent.test(m)) continue;
            AttributeSet consequent = ctx.no_attributes();
            consequent.set(m);
            values.push_back(rule_measure(*kind, contingency_from_sets(ctx, self.intent, consequent)));
        }
        if (values.empty()) return {0.0, true};
        return {aggregate(values, spec.aggregator), false};
    }

    auto base = [&](ConceptId id) {
        if (auto kind = std::get_if<MeasureKind>(&spec.base)) return itemset_measure(*kind, ctx, lat[id].intent);
        return index_value(lat, id, std::get<IndexSpec>(spec.base));
    };

    std::vector<ConceptId> scope;
    switch (spec.scope) {
        case ComparisonScope::kSelf: scope = {c}; break;
        case ComparisonScope::kUpperNeighbors: {
            lat.require_complete("neighbor scope");
            auto u = lat.upper_neighbors(c);
            scope.assign(u.begin(), u.end());
            break;
        }
        case ComparisonScope::kLowerNeighbors: {
            lat.require_complete("neighbor scope");
            auto l = lat.lower_neighbors(c);
            scope.assign(l.begin(), l.end());
            break;
        }
        case ComparisonScope::kAllDescendants:
            scope = lat.descendants(c);
            scope.erase(scope.begin());
            break;
        case ComparisonScope::kOutOfIntent: break;
    }
    if (scope.empty()) return {0.0, true};

    for (ConceptId id : scope) values.push_back(base(id));
    if (spec.comparison == Comparison::kNone) return {aggregate(values, spec.aggregator), false};
    const double own = base(c);
    if (spec.order == CompositeOrder::kAggregateThenCompare)
        return {compare(spec.comparison, aggregate(values, spec.aggregator), own), false};
    for (double& v : values) v = compare(spec.comparison, v, own);
    return {aggregate(values, spec.aggregator), false};
}

double index1(const ConceptLattice& lat, ConceptId c) {
    CompositeIndexSpec spec;
    spec.scope = ComparisonScope::kUpperNeighbors;
    spec.base = MeasureKind::kPiatetskyShapiro;
    spec.comparison = Comparison::kDifference;
    spec.aggregator = AggregatorKind::kMinimum;
    return evaluate_composite(lat, c, spec).value;
}

double index2(const FormalContext& ctx, const Concept& c, Index2Form form) {
    const ObjectSet ext = derive_attributes(ctx, c.intent);
    const double n_b = static_cast<double>(ext.count());
    std::size_t outside = 0;
    double inverse_sum = 0.0;
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
        if (c.intent.test(m)) continue;
        ++outside;
        const double hit = static_cast<double>(ext.intersection_count(ctx.column(m)));
        inverse_sum += (hit == 0.0 || n_b == 0.0) ? kInf : n_b / hit;
    }
    if (outside == 0) return 0.0;
    const double k = static_cast<double>(outside);
    if (form == Index2Form::kHarmonic) return k / inverse_sum;
    return k * inverse_sum;
}

}  // namespace cg
