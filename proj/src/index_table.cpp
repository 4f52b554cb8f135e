#include "cg/index_table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cg/error.hpp"
#include "cg/io.hpp"

namespace cg {

namespace {

constexpr std::array<std::pair<IndexKind, std::string_view>, 24> kIndexNames{{
    {IndexKind::kSupport, "support"},
    {IndexKind::kStability, "stability"},
    {IndexKind::kLstab, "lstab"},
    {IndexKind::kLstabLower, "lstab_lower"},
    {IndexKind::kDeltaL, "delta_l"},
    {IndexKind::kDeltaH, "delta_h"},
    {IndexKind::kStab2Noe, "stab2noe"},
    {IndexKind::kStab2Oe, "stab2oe"},
    {IndexKind::kStab2Oie, "stab2oie"},
    {IndexKind::kLevelwiseStability, "levelwise_stability"},
    {IndexKind::kIntegralStabilityMinor, "integral_stability_minor"},
    {IndexKind::kIntegralStabilityMajor, "integral_stability_major"},
    {IndexKind::kRobustness, "robustness"},
    {IndexKind::kConceptProbability, "concept_probability"},
    {IndexKind::kSeparation, "separation"},
    {IndexKind::kMonocle, "monocle"},
    {IndexKind::kDeltaTcfi, "delta_tcfi"},
    {IndexKind::kMarginClosed, "margin_closed"},
    {IndexKind::kMarginClosedRelaxed, "margin_closed_relaxed"},
    {IndexKind::kSimilarity, "similarity"},
    {IndexKind::kPredictability, "predictability"},
    {IndexKind::kCv, "cv"},
    {IndexKind::kCfc, "cfc"},
    {IndexKind::kCu, "cu"},
}};

std::array<IndexKind, 24> kind_list() {
    std::array<IndexKind, 24> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kIndexNames[i].first;
    return out;
}
const std::array<IndexKind, 24> kAllKinds = kind_list();

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view text, const std::string& what) {
    // from_chars for double is available in libstdc++ 11
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw SpecError(what + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw SpecError(what + ": expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

std::set<std::string_view> allowed_params(IndexKind kind) {
    switch (kind) {
        case IndexKind::kStability: return {"samples", "seed"};
        case IndexKind::kLevelwiseStability:
        case IndexKind::kIntegralStabilityMinor:
        case IndexKind::kIntegralStabilityMajor: return {"j", "rate"};
        case IndexKind::kRobustness: return {"alpha"};
        case IndexKind::kDeltaTcfi: return {"delta", "reading"};
        case IndexKind::kMarginClosed: return {"alpha", "min_support"};
        case IndexKind::kSimilarity: return {"sim", "obj", "nbr", "tnorm", "threshold"};
        case IndexKind::kPredictability: return {"nbr", "tnorm", "threshold"};
        case IndexKind::kCu: return {"form"};
        default: return {};
    }
}

NeighborhoodAggregation parse_aggregation(const std::string& v, const std::string& what) {
    if (v == "a" || v == "average") return NeighborhoodAggregation::kAverage;
    if (v == "m" || v == "minimum") return NeighborhoodAggregation::kMinimum;
    throw SpecError(what + ": expected a or m, got '" + v + "'");
}

std::size_t level_for(const IndexSpec& spec, std::size_t n, bool& usable) {
    usable = true;
    if (auto r = spec.param("rate")) {
        auto j = level_from_rate(spec.number("rate", 0.5), n);
        if (!j) {
            usable = false;
            return 0;
        }
        return *j;
    }
    const auto j = static_cast<std::size_t>(spec.number("j", 2));
    if (j < 2 || j + 1 > n) usable = false;
    return j;
}

}  // namespace

std::span<const IndexKind> all_index_kinds() { return kAllKinds; }

std::string_view to_string(IndexKind kind) {
    for (const auto& [k, name] : kIndexNames)
        if (k == kind) return name;
    return "?";
}

std::optional<IndexKind> parse_index_kind(std::string_view name) {
    for (const auto& [k, n] : kIndexNames)
        if (n == name) return k;
    return std::nullopt;
}

std::string IndexSpec::name() const {
    std::string out(to_string(kind));
    for (std::size_t i = 0; i < params.size(); ++i) {
        out += i == 0 ? ':' : ',';
        out += params[i].first + "=" + params[i].second;
    }
    return out;
}

std::optional<std::string> IndexSpec::param(std::string_view key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    return std::nullopt;
}

double IndexSpec::number(std::string_view key, double fallback) const {
    auto v = param(key);
    if (!v) return fallback;
    return parse_real(*v, name() + " parameter " + std::string(key));
}

SimilarityConfig IndexSpec::similarity_config() const {
    SimilarityConfig cfg;
    const std::string who = name();
    if (auto v = param("sim")) {
        if (*v == "smc")
            cfg.similarity = SimilarityKind::kSmc;
        else if (*v == "jaccard" || *v == "j")
            cfg.similarity = SimilarityKind::kJaccard;
        else
            throw SpecError(who + ": sim must be smc or jaccard");
    }
    if (auto v = param("obj")) cfg.object_aggregation = parse_aggregation(*v, who);
    if (auto v = param("nbr")) cfg.neighbor_aggregation = parse_aggregation(*v, who);
    if (auto v = param("tnorm")) {
        auto k = parse_aggregator_kind(*v);
        if (!k) throw SpecError(who + ": unknown t-norm '" + *v + "'");
        cfg.tnorm = *k;
    }
    cfg.nonmonotone_threshold = number("threshold", cfg.nonmonotone_threshold);
    cfg.validate();
    return cfg;
}

void IndexSpec::validate() const {
    const std::string who = name();
    const auto allowed = allowed_params(kind);
    std::set<std::string> seen;
    for (const auto& [k, v] : params) {
        if (!allowed.count(k)) throw SpecError(who + ": unknown parameter '" + k + "'");
        if (!seen.insert(k).second) throw SpecError(who + ": parameter '" + k + "' given twice");
    }
    auto probability = [&](const char* key) {
        const double p = number(key, 0.0);
        if (!(p >= 0.0 && p <= 1.0)) throw SpecError(who + ": " + key + " must lie in [0,1]");
    };
    switch (kind) {
        case IndexKind::kStability:
            if (param("samples") && parse_unsigned(*param("samples"), who) < 1)
                throw SpecError(who + ": samples must be at least 1");
            if (param("seed")) {
                if (!param("samples")) throw SpecError(who + ": seed only applies with samples");
                parse_unsigned(*param("seed"), who);
            }
            break;
        case IndexKind::kLevelwiseStability:
        case IndexKind::kIntegralStabilityMinor:
        case IndexKind::kIntegralStabilityMajor:
            if (param("j").has_value() == param("rate").has_value())
                throw SpecError(who + ": give exactly one of j or rate");
            if (param("j")) parse_unsigned(*param("j"), who);
            if (param("rate")) {
                const double r = number("rate", 0.0);
                if (!(r > 0.0 && r < 1.0)) throw SpecError(who + ": rate must lie in (0,1)");
            }
            break;
        case IndexKind::kRobustness:
            if (!param("alpha")) throw SpecError(who + ": alpha is required");
            probability("alpha");
            break;
        case IndexKind::kDeltaTcfi:
            if (!param("delta")) throw SpecError(who + ": delta is required");
            probability("delta");
            if (auto r = param("reading"); r && *r != "negated" && *r != "literal")
                throw SpecError(who + ": reading must be negated or literal");
            break;
        case IndexKind::kMarginClosed:
            if (!param("alpha")) throw SpecError(who + ": alpha is required");
            probability("alpha");
            probability("min_support");
            break;
        case IndexKind::kSimilarity:
        case IndexKind::kPredictability: similarity_config(); break;
        case IndexKind::kCu:
            if (auto f = param("form"); f && *f != "printed" && *f != "standard")
                throw SpecError(who + ": form must be printed or standard");
            break;
        default: break;
    }
}

IndexSpec parse_index_spec(std::string_view text) {
    text = trim(text);
    IndexSpec spec;
    const auto colon = text.find(':');
    const std::string_view kind = trim(text.substr(0, colon));
    auto k = parse_index_kind(kind);
    if (!k) throw SpecError("unknown index kind '" + std::string(kind) + "'");
    spec.kind = *k;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0)
                throw SpecError("index parameter must look like name=value, got '" + std::string(item) + "'");
            spec.params.emplace_back(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    spec.validate();
    return spec;
}

std::vector<IndexSpec> parse_index_list(std::string_view text) {
    std::vector<std::string> groups;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view item = trim(text.substr(start, comma - start));
        if (!item.empty()) {
            const bool continues = item.find('=') != std::string_view::npos && item.find(':') == std::string_view::npos;
            if (continues) {
                if (groups.empty()) throw SpecError("index parameter '" + std::string(item) + "' has no index");
                groups.back() += "," + std::string(item);
            } else {
                groups.emplace_back(item);
            }
        }
        start = comma + 1;
    }
    std::vector<IndexSpec> out;
    for (const auto& g : groups) out.push_back(parse_index_spec(g));
    return out;
}

const std::vector<double>& IndexTable::column(std::string_view name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return columns[k];
    throw SpecError("no index column named '" + std::string(name) + "'");
}

double index_value(const ConceptLattice& lat, ConceptId c, const IndexSpec& spec) {
    const FormalContext& ctx = lat.context();
    const Concept& x = lat.at(c);
    switch (spec.kind) {
        case IndexKind::kSupport: return support(lat, c);
        case IndexKind::kStability:
            if (auto s = spec.param("samples"))
                return stability_montecarlo(ctx, x, parse_unsigned(*s, spec.name()),
                                            parse_unsigned(spec.param("seed").value_or("0"), spec.name()));
            return stability_exact(lat, c);
        case IndexKind::kLstab: return lstab_and_bounds(lat, c).lstab;
        case IndexKind::kLstabLower: return lstab_and_bounds(lat, c).lstab_lower;
        case IndexKind::kDeltaL: return lstab_and_bounds(lat, c).delta_l;
        case IndexKind::kDeltaH: return lstab_and_bounds(lat, c).delta_h;
        case IndexKind::kStab2Noe: return lstab_and_bounds(lat, c).stab2noe;
        case IndexKind::kStab2Oe: return lstab_and_bounds(lat, c).stab2oe;
        case IndexKind::kStab2Oie: return lstab_and_bounds(lat, c).stab2oie;
        case IndexKind::kLevelwiseStability:
        case IndexKind::kIntegralStabilityMinor:
        case IndexKind::kIntegralStabilityMajor: {
            bool usable = true;
            const std::size_t j = level_for(spec, x.extent.count(), usable);
            if (!usable) {
                lat.require_complete("level-wise stability");
                return 0.0;
            }
            if (spec.kind == IndexKind::kLevelwiseStability) return levelwise_stability(lat, c, j).value;
            return integral_stability(lat, c, j,
                                      spec.kind == IndexKind::kIntegralStabilityMinor ? IntegralSide::kMinor
                                                                                      : IntegralSide::kMajor)
                .value;
        }
        case IndexKind::kRobustness: return robustness(lat, c, spec.number("alpha", 0.5));
        case IndexKind::kConceptProbability: return concept_probability(ctx, x.intent);
        case IndexKind::kSeparation: return separation(ctx, x);
        case IndexKind::kMonocle: return monocle(lat, c);
        case IndexKind::kDeltaTcfi:
            return delta_tcfi(lat, c, spec.number("delta", 0.0),
                              spec.param("reading") == "literal" ? TcfiReading::kLiteral : TcfiReading::kNegated)
                       ? 1.0
                       : 0.0;
        case IndexKind::kMarginClosed:
            return margin_closed(lat, c, spec.number("alpha", 0.0), spec.number("min_support", 0.0)) ? 1.0 : 0.0;
        case IndexKind::kMarginClosedRelaxed: return margin_closed_relaxed(lat, c);
        case IndexKind::kSimilarity: return basic_level_similarity(lat, c, spec.similarity_config());
        case IndexKind::kPredictability: return predictability(lat, c, spec.similarity_config());
        case IndexKind::kCv: return cv_cfc_cu(ctx, x).cv;
        case IndexKind::kCfc: return cv_cfc_cu(ctx, x).cfc;
        case IndexKind::kCu:
            return cv_cfc_cu(ctx, x, spec.param("form") == "standard" ? CuForm::kStandard : CuForm::kPrinted).cu;
    }
    throw SpecError("unhandled index kind");
}

std::vector<double> compute_index_column(LatticeAnalysis& an, const IndexSpec& spec) {
    const ConceptLattice& lat = an.lattice();
    const std::size_t count = lat.size();
    std::vector<double> out(count);
    auto per_concept = [&](auto&& f) {
        for (ConceptId c = 0; c < count; ++c) out[c] = f(c);
        return out;
    };
    auto from_bounds = [&](double StabilityBounds::*field) {
        const auto& b = an.bounds();
        return per_concept([&](ConceptId c) { return b[c].*field; });
    };
    switch (spec.kind) {
        case IndexKind::kStability:
            if (spec.param("samples")) break;
            return an.stability();
        case IndexKind::kLstab: return an.lstab();
        case IndexKind::kLstabLower: return from_bounds(&StabilityBounds::lstab_lower);
        case IndexKind::kDeltaL: return from_bounds(&StabilityBounds::delta_l);
        case IndexKind::kDeltaH: return from_bounds(&StabilityBounds::delta_h);
        case IndexKind::kStab2Noe: return from_bounds(&StabilityBounds::stab2noe);
        case IndexKind::kStab2Oe: return from_bounds(&StabilityBounds::stab2oe);
        case IndexKind::kStab2Oie: return from_bounds(&StabilityBounds::stab2oie);
        case IndexKind::kLevelwiseStability:
        case IndexKind::kIntegralStabilityMinor:
        case IndexKind::kIntegralStabilityMajor: {
            const auto& levels = an.level_values();
            return per_concept([&](ConceptId c) {
                const std::size_t n = lat[c].extent.count();
                bool usable = true;
                const std::size_t j = level_for(spec, n, usable);
                if (!usable) return 0.0;
                const auto& lv = levels[c];  // lv[i] = J_{i+2}
                if (spec.kind == IndexKind::kLevelwiseStability) return lv[j - 2];
                double sum = 0.0;
                if (spec.kind == IndexKind::kIntegralStabilityMinor)
                    for (std::size_t i = 2; i <= j; ++i) sum += lv[i - 2];
                else
                    for (std::size_t i = j; i <= n - 1; ++i) sum += lv[i - 2];
                return sum;
            });
        }
        case IndexKind::kRobustness: return an.robustness(spec.number("alpha", 0.5));
        case IndexKind::kConceptProbability: return an.concept_probability();
        case IndexKind::kMonocle: return an.monocle();
        case IndexKind::kSimilarity: {
            const SimilarityConfig cfg = spec.similarity_config();
            lat.require_complete("basic level similarity");
            return an.basic_level(an.cohesion(cfg.similarity, cfg.object_aggregation), cfg);
        }
        case IndexKind::kPredictability:
            lat.require_complete("predictability");
            return an.basic_level(an.predictability_factors(), spec.similarity_config());
        default: break;
    }
    return per_concept([&](ConceptId c) { return index_value(lat, c, spec); });
}

IndexTable compute_index_table(const ConceptLattice& lattice, std::span<const IndexSpec> specs) {
    IndexTable table;
    table.concept_count = lattice.size();
    for (const Concept& c : lattice.concepts()) {
        table.extent_sizes.push_back(c.extent.count());
        table.intent_sizes.push_back(c.intent.count());
    }
    LatticeAnalysis analysis(lattice);
    for (const IndexSpec& spec : specs) {
        const std::string name = spec.name();
        try {
            spec.validate();
            table.columns.push_back(compute_index_column(analysis, spec));
        } catch (const PreconditionError& e) {
            throw PreconditionError("index " + name + ": " + e.what());
        } catch (const SpecError& e) {
            throw SpecError("index " + name + ": " + e.what());
        }
        table.names.push_back(name);
    }
    return table;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (std::string_view(buf) == "-0") return "0";
    return buf;
}

std::string index_table_csv(const IndexTable& table) {
    std::ostringstream out;
    out << "id,extent_size,intent_size";
    for (const auto& n : table.names) out << ',' << quote_csv_field(n);
    out << '\n';
    for (std::size_t c = 0; c < table.concept_count; ++c) {
        out << c << ',' << table.extent_sizes[c] << ',' << table.intent_sizes[c];
        for (const auto& col : table.columns) out << ',' << format_value(col[c]);
        out << '\n';
    }
    return out.str();
}

}  // namespace cg
