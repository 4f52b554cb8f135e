#include "cg/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "cg/error.hpp"
#include "json.hpp"

namespace cg {

namespace {

class CloseByOne {
public:
    CloseByOne(const FormalContext& ctx, const EnumerationOptions& options)
        : ctx_(ctx), options_(options) {}

    std::vector<Concept> run() {
        const ObjectSet all = ctx_.all_objects();
        if (all.count() < options_.min_support) return {};
        generate(all, derive_objects(ctx_, all), 0);
        return std::move(out_);
    }

private:
    void generate(const ObjectSet& extent, const AttributeSet& intent, std::size_t start) {
        if (out_.size() >= options_.budget)
            throw BudgetError("concept budget of " + std::to_string(options_.budget) + " exceeded",
                              options_.budget);
        out_.push_back(Concept{0, extent, intent});
        const std::size_t m = ctx_.attribute_count();
        for (std::size_t j = start; j < m; ++j) {
            if (intent.test(j)) continue;
            ObjectSet child_extent = extent & ctx_.column(j);
            if (child_extent.count() < options_.min_support) continue;
            AttributeSet child_intent = derive_objects(ctx_, child_extent);
            if (!child_intent.equal_prefix(intent, j)) continue;
            generate(child_extent, child_intent, j + 1);
        }
    }

    const FormalContext& ctx_;
    const EnumerationOptions& options_;
    std::vector<Concept> out_;
};

}  // namespace

ConceptLattice::ConceptLattice(std::shared_ptr<const FormalContext> context,
                               std::vector<Concept> concepts, std::size_t min_support)
    : context_(std::move(context)), concepts_(std::move(concepts)), min_support_(min_support) {
    if (concepts_.empty()) throw PreconditionError("lattice has no concepts");
    std::sort(concepts_.begin(), concepts_.end(),
              [](const Concept& a, const Concept& b) { return lex_less(a.intent, b.intent); });
    for (ConceptId id = 0; id < concepts_.size(); ++id) {
        concepts_[id].id = id;
        if (!by_intent_.emplace(concepts_[id].intent, id).second)
            throw InvariantError("duplicate intent in concept list");
        if (!by_extent_.emplace(concepts_[id].extent, id).second)
            throw InvariantError("duplicate extent in concept list");
    }
    top_ = 0;
    if (concepts_[top_].extent.count() != context_->object_count())
        throw InvariantError("first concept is not the top concept");
    if (concepts_.back().intent.all()) bottom_ = concepts_.size() - 1;
    build_covers();
}

void ConceptLattice::build_covers() {
    const FormalContext& ctx = *context_;
    lower_.assign(concepts_.size(), {});
    upper_.assign(concepts_.size(), {});
    std::vector<ObjectSet> candidates;
    for (const Concept& c : concepts_) {
        candidates.clear();
        for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
            if (c.intent.test(m)) continue;
            ObjectSet ext = c.extent & ctx.column(m);
            if (ext.count() < min_support_) continue;
            if (std::find(candidates.begin(), candidates.end(), ext) == candidates.end())
                candidates.push_back(std::move(ext));
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            bool maximal = true;
            for (std::size_t k = 0; k < candidates.size() && maximal; ++k)
                if (k != i && candidates[i].is_proper_subset_of(candidates[k])) maximal = false;
            if (!maximal) continue;
            auto it = by_extent_.find(candidates[i]);
            if (it == by_extent_.end()) throw InvariantError("lower neighbor missing from lattice");
            lower_[c.id].push_back(it->second);
        }
        std::sort(lower_[c.id].begin(), lower_[c.id].end());
    }
    for (ConceptId c = 0; c < concepts_.size(); ++c)
        for (ConceptId d : lower_[c]) upper_[d].push_back(c);
    for (auto& u : upper_) std::sort(u.begin(), u.end());
}

void ConceptLattice::check_id(ConceptId id) const {
    if (id >= concepts_.size())
        throw DimensionError("concept id " + std::to_string(id) + " out of range (lattice has " +
                             std::to_string(concepts_.size()) + " concepts)");
}

void ConceptLattice::require_complete(const std::string& what) const {
    if (!is_complete())
        throw PreconditionError(what + " needs the complete lattice (mined with min_support " +
                                std::to_string(min_support_) + ")");
}

std::span<const ConceptId> ConceptLattice::lower_neighbors(ConceptId id) const {
    check_id(id);
    return lower_[id];
}

std::span<const ConceptId> ConceptLattice::upper_neighbors(ConceptId id) const {
    check_id(id);
    return upper_[id];
}

bool ConceptLattice::leq(ConceptId c, ConceptId d) const {
    check_id(c);
    check_id(d);
    return concepts_[c].extent.is_subset_of(concepts_[d].extent);
}

std::vector<ConceptId> ConceptLattice::descendants(ConceptId c) const {
    check_id(c);
    return reach(c, lower_);
}

std::vector<ConceptId> ConceptLattice::ancestors(ConceptId c) const {
    check_id(c);
    return reach(c, upper_);
}

std::vector<ConceptId> ConceptLattice::reach(ConceptId c,
                                             const std::vector<std::vector<ConceptId>>& edges) const {
    // covers generate the order, so a walk along them finds every comparable concept
    std::vector<ConceptId> out{c};
    std::unordered_set<ConceptId> seen{c};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (ConceptId d : edges[out[i]])
            if (seen.insert(d).second) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<ConceptId> ConceptLattice::find_by_intent(const AttributeSet& intent) const {
    auto it = by_intent_.find(intent);
    if (it == by_intent_.end()) return std::nullopt;
    return it->second;
}

std::optional<ConceptId> ConceptLattice::find_by_extent(const ObjectSet& extent) const {
    auto it = by_extent_.find(extent);
    if (it == by_extent_.end()) return std::nullopt;
    return it->second;
}

std::size_t ConceptLattice::cover_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : lower_) n += l.size();
    return n;
}

ConceptLattice enumerate_concepts(std::shared_ptr<const FormalContext> ctx,
                                  const EnumerationOptions& options) {
    if (!ctx) throw PreconditionError("null context");
    if (options.min_support > ctx->object_count())
        throw PreconditionError("min_support " + std::to_string(options.min_support) +
                                " exceeds object count " + std::to_string(ctx->object_count()));
    auto concepts = CloseByOne(*ctx, options).run();
    return ConceptLattice(std::move(ctx), std::move(concepts), options.min_support);
}

ConceptLattice enumerate_concepts(const FormalContext& ctx, const EnumerationOptions& options) {
    return enumerate_concepts(std::make_shared<const FormalContext>(ctx), options);
}

std::int64_t MobiusTable::operator()(ConceptId d) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), d);
    if (it == ids_.end() || *it != d) return 0;
    return values_[static_cast<std::size_t>(it - ids_.begin())];
}

MobiusTable mobius(const ConceptLattice& lattice, ConceptId c) {
    std::vector<ConceptId> ids = lattice.descendants(c);
    std::unordered_map<ConceptId, std::size_t> pos;
    for (std::size_t i = 0; i < ids.size(); ++i) pos.emplace(ids[i], i);
    std::vector<std::int64_t> mu(ids.size(), 0);
    // ids ascend, so every z strictly above d inside [d, c] precedes d
    mu[0] = 1;
    std::vector<std::size_t> stack;
    std::vector<std::size_t> mark(ids.size(), 0);
    for (std::size_t i = 1; i < ids.size(); ++i) {
        std::int64_t sum = 0;
        stack.assign(1, i);
        mark[i] = i;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            for (ConceptId u : lattice.upper_neighbors(ids[k])) {
                auto it = pos.find(u);
                if (it == pos.end() || mark[it->second] == i) continue;
                mark[it->second] = i;
                stack.push_back(it->second);
                if (__builtin_add_overflow(sum, mu[it->second], &sum))
                    throw InvariantError("Moebius value overflows 64 bits");
            }
        }
        mu[i] = -sum;
    }
    return MobiusTable(c, std::move(ids), std::move(mu));
}

std::string lattice_to_json(const ConceptLattice& lattice) {
    using nlohmann::ordered_json;
    const FormalContext& ctx = lattice.context();
    ordered_json doc;
    doc["objects"] = ctx.object_names();
    doc["attributes"] = ctx.attribute_names();
    doc["min_support"] = lattice.min_support();
    doc["concept_count"] = lattice.size();
    ordered_json concepts = ordered_json::array();
    for (const Concept& c : lattice.concepts()) {
        ordered_json item;
        item["id"] = c.id;
        const auto ext = c.extent.indices();
        const auto itt = c.intent.indices();
        item["extent"] = ext;
        item["intent"] = itt;
        std::vector<std::string> ext_names, int_names;
        for (auto g : ext) ext_names.push_back(ctx.object_names()[g]);
        for (auto m : itt) int_names.push_back(ctx.attribute_names()[m]);
        item["extent_names"] = ext_names;
        item["intent_names"] = int_names;
        concepts.push_back(std::move(item));
    }
    doc["concepts"] = std::move(concepts);
    ordered_json covers = ordered_json::array();
    for (const Concept& c : lattice.concepts())
        for (ConceptId d : lattice.lower_neighbors(c.id)) covers.push_back({d, c.id});
    doc["covers"] = std::move(covers);
    doc["top"] = lattice.top();
    if (auto b = lattice.bottom())
        doc["bottom"] = *b;
    else
        doc["bottom"] = nullptr;
    return doc.dump(2) + "\n";
}

ConceptLattice lattice_from_json(const std::string& text, std::size_t budget) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid lattice JSON: ") + e.what(), 1);
    }
    try {
        const auto objects = doc.at("objects").get<std::vector<std::string>>();
        const auto attributes = doc.at("attributes").get<std::vector<std::string>>();
        if (doc.at("min_support").get<std::size_t>() != 0)
            throw PreconditionError("only complete-lattice dumps (min_support 0) can be reloaded");
        std::vector<AttributeSet> rows(objects.size(), AttributeSet(attributes.size()));
        std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> listed;
        for (const auto& item : doc.at("concepts")) {
            auto ext = item.at("extent").get<std::vector<std::size_t>>();
            auto itt = item.at("intent").get<std::vector<std::size_t>>();
            for (auto g : ext) {
                if (g >= objects.size()) throw ParseError("extent index out of range", 1);
                for (auto m : itt) {
                    if (m >= attributes.size()) throw ParseError("intent index out of range", 1);
                    rows[g].set(m);
                }
            }
            listed.emplace_back(std::move(ext), std::move(itt));
        }
        auto lattice = enumerate_concepts(FormalContext(objects, attributes, std::move(rows)),
                                          EnumerationOptions{0, budget});
        if (lattice.size() != listed.size())
            throw InvariantError("lattice dump lists " + std::to_string(listed.size()) +
                                 " concepts but its context has " + std::to_string(lattice.size()));
        for (std::size_t i = 0; i < listed.size(); ++i) {
            if (lattice[i].extent.indices() != listed[i].first ||
                lattice[i].intent.indices() != listed[i].second)
                throw InvariantError("lattice dump concept " + std::to_string(i) +
                                     " does not match the re-mined lattice");
        }
        return lattice;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed lattice JSON: ") + e.what(), 1);
    }
}

}  // namespace cg
