#include "cg/context.hpp"

#include <string>
#include <unordered_set>

#include "cg/error.hpp"
#include "cg/random.hpp"

namespace cg {

namespace {

void require_unique(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second)
            throw DimensionError(std::string("duplicate ") + what + " name '" + n + "'");
    }
}

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

FormalContext::FormalContext(std::vector<std::string> object_names,
                             std::vector<std::string> attribute_names,
                             std::vector<AttributeSet> rows)
    : object_names_(std::move(object_names)),
      attribute_names_(std::move(attribute_names)),
      rows_(std::move(rows)) {
    if (object_names_.empty()) throw DimensionError("context needs at least one object");
    if (attribute_names_.empty()) throw DimensionError("context needs at least one attribute");
    if (rows_.size() != object_names_.size())
        throw DimensionError("row count " + std::to_string(rows_.size()) +
                             " does not match object count " +
                             std::to_string(object_names_.size()));
    require_unique(object_names_, "object");
    require_unique(attribute_names_, "attribute");

    const std::size_t m = attribute_names_.size();
    columns_.assign(m, ObjectSet(rows_.size()));
    for (std::size_t g = 0; g < rows_.size(); ++g) {
        if (rows_[g].size() != m)
            throw DimensionError("row " + std::to_string(g) + " has width " +
                                 std::to_string(rows_[g].size()) + ", expected " +
                                 std::to_string(m));
        rows_[g].for_each([&](std::size_t a) { columns_[a].set(g); });
    }
}

FormalContext FormalContext::from_rows(std::size_t attribute_count,
                                       std::vector<AttributeSet> rows) {
    std::vector<std::string> objects(rows.size());
    std::vector<std::string> attributes(attribute_count);
    for (std::size_t g = 0; g < objects.size(); ++g) objects[g] = "g" + std::to_string(g);
    for (std::size_t m = 0; m < attribute_count; ++m) attributes[m] = "m" + std::to_string(m);
    return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

std::size_t FormalContext::ones() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.count();
    return n;
}

ObjectSet FormalContext::objects(std::initializer_list<std::size_t> ids) const {
    ObjectSet out(object_count());
    for (std::size_t g : ids) {
        if (g >= object_count()) throw DimensionError("object index " + std::to_string(g) + " out of range");
        out.set(g);
    }
    return out;
}

AttributeSet FormalContext::attributes(std::initializer_list<std::size_t> ids) const {
    AttributeSet out(attribute_count());
    for (std::size_t m : ids) {
        if (m >= attribute_count())
            throw DimensionError("attribute index " + std::to_string(m) + " out of range");
        out.set(m);
    }
    return out;
}

AttributeSet derive_objects(const FormalContext& ctx, const ObjectSet& objects) {
    if (objects.size() != ctx.object_count())
        throw DimensionError("object set width " + std::to_string(objects.size()) +
                             " does not match |G| = " + std::to_string(ctx.object_count()));
    AttributeSet out = ctx.all_attributes();
    objects.for_each([&](std::size_t g) { out &= ctx.row(g); });
    return out;
}

ObjectSet derive_attributes(const FormalContext& ctx, const AttributeSet& attributes) {
    if (attributes.size() != ctx.attribute_count())
        throw DimensionError("attribute set width " + std::to_string(attributes.size()) +
                             " does not match |M| = " + std::to_string(ctx.attribute_count()));
    ObjectSet out = ctx.all_objects();
    attributes.for_each([&](std::size_t m) { out &= ctx.column(m); });
    return out;
}

AttributeSet close_attributes(const FormalContext& ctx, const AttributeSet& attributes) {
    return derive_objects(ctx, derive_attributes(ctx, attributes));
}

ObjectSet close_objects(const FormalContext& ctx, const ObjectSet& objects) {
    return derive_attributes(ctx, derive_objects(ctx, objects));
}

AttributeSet derive_objects(const FormalContext& ctx, const std::vector<std::size_t>& objects) {
    ObjectSet set(ctx.object_count());
    for (std::size_t g : objects) {
        if (g >= ctx.object_count())
            throw DimensionError("object index " + std::to_string(g) + " out of range");
        set.set(g);
    }
    return derive_objects(ctx, set);
}

ObjectSet derive_attributes(const FormalContext& ctx, const std::vector<std::size_t>& attributes) {
    AttributeSet set(ctx.attribute_count());
    for (std::size_t m : attributes) {
        if (m >= ctx.attribute_count())
            throw DimensionError("attribute index " + std::to_string(m) + " out of range");
        set.set(m);
    }
    return derive_attributes(ctx, set);
}

void RandomContextSpec::validate() const {
    if (n_objects == 0 || n_attributes == 0)
        throw SpecError("random context needs positive dimensions");
    if (!valid_probability(density)) throw SpecError("density must lie in [0, 1]");
}

void NoiseSpec::validate() const {
    if (!valid_probability(rate)) throw SpecError("noise rate must lie in [0, 1]");
}

FormalContext generate_random_context(const RandomContextSpec& spec) {
    spec.validate();
    const CounterStream rng(spec.seed, stream_id(StreamDomain::kGenerate));
    std::vector<AttributeSet> rows(spec.n_objects, AttributeSet(spec.n_attributes));
    for (std::size_t g = 0; g < spec.n_objects; ++g)
        for (std::size_t m = 0; m < spec.n_attributes; ++m)
            if (rng.bernoulli(g * spec.n_attributes + m, spec.density)) rows[g].set(m);
    return FormalContext::from_rows(spec.n_attributes, std::move(rows));
}

FormalContext apply_noise(const FormalContext& ctx, const NoiseSpec& spec) {
    spec.validate();
    const CounterStream rng(spec.seed, stream_id(StreamDomain::kNoise));
    const std::size_t width = ctx.attribute_count();
    std::vector<AttributeSet> rows = ctx.rows();
    for (std::size_t g = 0; g < rows.size(); ++g)
        for (std::size_t m = 0; m < width; ++m)
            if (rng.bernoulli(g * width + m, spec.rate)) rows[g].flip(m);
    return FormalContext(ctx.object_names(), ctx.attribute_names(), std::move(rows));
}

}  // namespace cg
