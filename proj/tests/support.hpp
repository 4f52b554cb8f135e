#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "cg/context.hpp"
#include "cg/lattice.hpp"

namespace cgtest {

using namespace cg;

// G={g1,g2,g3}, M={a,b}; g1->{a}, g2->{a,b}, g3->{b}
inline FormalContext k1() {
    return FormalContext({"g1", "g2", "g3"}, {"a", "b"},
                         {AttributeSet(2, {0}), AttributeSet(2, {0, 1}), AttributeSet(2, {1})});
}

inline ConceptLattice k1_lattice() { return enumerate_concepts(k1()); }

inline ConceptId id_of(const ConceptLattice& lat, std::initializer_list<std::size_t> intent) {
    return lat.find_by_intent(AttributeSet(lat.context().attribute_count(), intent)).value();
}

inline FormalContext random_context(std::size_t g, std::size_t m, double density, std::uint64_t seed) {
    return generate_random_context(RandomContextSpec{g, m, density, seed});
}

// every closed attribute set, by closing all 2^|M| subsets
inline std::set<std::vector<std::size_t>> brute_intents(const FormalContext& ctx) {
    std::set<std::vector<std::size_t>> out;
    const std::size_t m = ctx.attribute_count();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        AttributeSet b(m);
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1) b.set(i);
        out.insert(close_attributes(ctx, b).indices());
    }
    return out;
}

// Subsets C of the extent with C' = intent, bucketed by |C|.
inline std::vector<std::uint64_t> brute_closure_counts(const FormalContext& ctx, const Concept& c) {
    const auto members = c.extent.indices();
    const std::size_t n = members.size();
    std::vector<std::uint64_t> out(n + 1, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        ObjectSet sub(ctx.object_count());
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) sub.set(members[i]);
        if (derive_objects(ctx, sub) == c.intent) ++out[static_cast<std::size_t>(__builtin_popcountll(mask))];
    }
    return out;
}

inline double brute_stability(const FormalContext& ctx, const Concept& c) {
    const auto counts = brute_closure_counts(ctx, c);
    std::uint64_t total = 0;
    for (auto v : counts) total += v;
    return static_cast<double>(total) / static_cast<double>(std::uint64_t{1} << c.extent.count());
}

// P(C' = B) when each extent object is kept with probability alpha.
inline double brute_robustness(const FormalContext& ctx, const Concept& c, double alpha) {
    const auto counts = brute_closure_counts(ctx, c);
    const std::size_t n = c.extent.count();
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        sum += static_cast<double>(counts[k]) * std::pow(alpha, static_cast<double>(k)) *
               std::pow(1.0 - alpha, static_cast<double>(n - k));
    return sum;
}

}  // namespace cgtest
