#include "doctest.h"

#include <cmath>
#include <numeric>

#include "cg/error.hpp"
#include "cg/indices.hpp"
#include "support.hpp"

using namespace cg;
using cgtest::id_of;

namespace {

constexpr double kEps = 1e-12;

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// the closed-form sum evaluated directly in double
double concept_probability_oracle(const FormalContext& ctx, const AttributeSet& b) {
    const std::size_t n = ctx.object_count();
    auto p = [&](std::size_t m) {
        return static_cast<double>(ctx.column(m).count()) / static_cast<double>(n);
    };
    double pb = 1.0;
    b.for_each([&](std::size_t m) { pb *= p(m); });
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        double term = binom(n, k) * std::pow(pb, double(k)) * std::pow(1.0 - pb, double(n - k));
        for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
            if (!b.test(m)) term *= 1.0 - std::pow(p(m), double(k));
        sum += term;
    }
    return sum;
}

std::vector<FormalContext> corpus(std::size_t count, std::size_t max_g, std::size_t max_m) {
    std::vector<FormalContext> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double density = 0.1 + 0.1 * static_cast<double>(i % 4);
        out.push_back(cgtest::random_context(max_g - i % 5, max_m - i % 3, density, 1000 + i));
    }
    return out;
}

}  // namespace

TEST_CASE("K1 stability family") {
    const auto lat = cgtest::k1_lattice();
    const ConceptId top = 0, a = id_of(lat, {0}), bot = *lat.bottom();
    CHECK(support(lat, a) == doctest::Approx(2.0 / 3.0));
    CHECK(support(lat, top) == 1.0);
    CHECK(support(lat, bot) == doctest::Approx(1.0 / 3.0));
    CHECK(stability_exact(lat, a) == 0.5);
    CHECK(stability_exact(lat, top) == 0.25);
    CHECK(stability_exact(lat, bot) == 1.0);
    CHECK(stability_count(lat, top) == 2);

    const auto ba = lstab_and_bounds(lat, a);
    CHECK(ba.lstab == doctest::Approx(1.0));
    CHECK(ba.delta_l == 1.0);
    CHECK(ba.delta_h == 1.0);
    CHECK(ba.lstab_lower == doctest::Approx(1.0));
    const auto bt = lstab_and_bounds(lat, top);
    CHECK(bt.delta_l == 1.0);
    CHECK(bt.lstab == doctest::Approx(-std::log2(0.75)));
    const auto bb = lstab_and_bounds(lat, bot);
    CHECK(std::isinf(bb.lstab));
    CHECK(std::isinf(bb.delta_l));

    const auto lv = levelwise_stability(lat, top, 2);
    CHECK(lv.in_range);
    CHECK(lv.value == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(levelwise_stability(lat, top, 3).in_range);
    CHECK(integral_stability(lat, a, 0, IntegralSide::kFull).value == 0.0);

    CHECK(robustness(lat, a, 0.5) == doctest::Approx(0.5));
    CHECK(robustness(lat, top, 0.5) == doctest::Approx(0.25));
    for (ConceptId c = 0; c < lat.size(); ++c) CHECK(robustness(lat, c, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(robustness(lat, a, 1.5), PreconditionError);
}

TEST_CASE("K1 structural indices") {
    const auto ctx = cgtest::k1();
    const auto lat = cgtest::k1_lattice();
    const ConceptId a = id_of(lat, {0});
    CHECK(concept_probability(ctx, ctx.attributes({0})) == doctest::Approx(386.0 / 729.0));
    const FormalContext ones({"x", "y"}, {"p", "q"}, {AttributeSet(2, true), AttributeSet(2, true)});
    CHECK(concept_probability(ones, ones.all_attributes()) == doctest::Approx(1.0));
    CHECK(concept_probability(ones, ones.attributes({0})) == 0.0);

    CHECK(separation(ctx, lat[a]) == doctest::Approx(2.0 / 3.0));
    CHECK(separation(ctx, lat[0]) == 0.0);
    CHECK(monocle(lat, a) == 12.0);
    CHECK(monocle(lat, a, std::span<const ConceptId>{}) == 2.0);

    CHECK(delta_tcfi(lat, a, 0.4));
    CHECK_FALSE(delta_tcfi(lat, a, 0.5));
    CHECK_FALSE(delta_tcfi(lat, a, 1.0));
    CHECK(margin_closed_relaxed(lat, a) == 0.5);
    CHECK(margin_closed_relaxed(lat, *lat.bottom()) == 0.0);
    CHECK(margin_closed(lat, a, 0.4));
    CHECK_FALSE(margin_closed(lat, a, 0.6));
}

TEST_CASE("K1 basic-level indices") {
    const auto ctx = cgtest::k1();
    const auto lat = cgtest::k1_lattice();
    const ConceptId a = id_of(lat, {0});
    SimilarityConfig cfg;
    cfg.nonmonotone_threshold = 1.0;
    CHECK(cohesion(ctx, lat[a].extent, SimilarityKind::kSmc, NeighborhoodAggregation::kAverage) == 0.5);
    CHECK(cohesion(ctx, lat[*lat.bottom()].extent, SimilarityKind::kSmc, NeighborhoodAggregation::kAverage) == 1.0);
    CHECK(basic_level_similarity(lat, a, cfg) == doctest::Approx(1.0 / 3.0));
    CHECK(predictability_factor(ctx, lat[a]) == doctest::Approx(0.5));
    CHECK(predictability_factor(ctx, lat[*lat.bottom()]) == 1.0);
    const auto s = cv_cfc_cu(ctx, lat[a]);
    CHECK(s.cv == doctest::Approx(1.0));
    CHECK(s.cfc == doctest::Approx(1.25));
    CHECK(s.cu == doctest::Approx(13.0 / 54.0));
    CHECK(object_similarity(SimilarityKind::kJaccard, AttributeSet(3), AttributeSet(3)) == 1.0);
    CHECK(object_similarity(SimilarityKind::kSmc, AttributeSet(3, {0}), AttributeSet(3, {1})) ==
          doctest::Approx(1.0 / 3.0));
}

TEST_CASE("stability and level counts match subset enumeration") {
    for (const auto& ctx : corpus(24, 14, 9)) {
        const auto lat = enumerate_concepts(ctx);
        LatticeAnalysis an(lat);
        const auto& stab = an.stability();
        const auto& lv = an.level_values();
        for (ConceptId c = 0; c < lat.size(); ++c) {
            const std::size_t n = lat[c].extent.count();
            if (n > 15) continue;
            const double brute = cgtest::brute_stability(ctx, lat[c]);
            CHECK(std::abs(stability_exact(lat, c) - brute) <= kEps);
            CHECK(std::abs(stab[c] - brute) <= kEps);
            if (n > 12) continue;
            const auto counts = cgtest::brute_closure_counts(ctx, lat[c]);
            const auto gamma = closure_counts(lat, c);
            REQUIRE(gamma.size() == counts.size());
            for (std::size_t j = 0; j <= n; ++j) CHECK(gamma[j] == counts[j]);
            for (std::size_t j = 2; j + 1 <= n; ++j) {
                const double expect = static_cast<double>(counts[j]) / binom(n, j);
                CHECK(std::abs(levelwise_stability(lat, c, j).value - expect) <= kEps);
                CHECK(std::abs(lv[c][j - 2] - expect) <= kEps);
            }
        }
    }
}

TEST_CASE("robustness matches the sampling oracle and stability at one half") {
    for (const auto& ctx : corpus(12, 12, 8)) {
        const auto lat = enumerate_concepts(ctx);
        LatticeAnalysis an(lat);
        for (double alpha : {0.1, 0.3, 0.5, 0.8}) {
            const auto batch = an.robustness(alpha);
            for (ConceptId c = 0; c < lat.size(); ++c) {
                const double brute = cgtest::brute_robustness(ctx, lat[c], alpha);
                CHECK(std::abs(robustness(lat, c, alpha) - brute) <= 1e-10);
                CHECK(std::abs(batch[c] - brute) <= 1e-10);
            }
        }
        const auto half = an.robustness(0.5);
        for (ConceptId c = 0; c < lat.size(); ++c) CHECK(std::abs(half[c] - stability_exact(lat, c)) <= 1e-9);
    }
}

TEST_CASE("counts partition the power set") {
    // every subset C of G lands in exactly one concept, the one generated by C
    for (std::size_t g : {20, 130, 200}) {
        const auto ctx = cgtest::random_context(g, 7, 0.35, g);
        const auto lat = enumerate_concepts(ctx);
        BigInt total = 0;
        std::vector<BigInt> by_size(g + 1, BigInt(0));
        for (ConceptId c = 0; c < lat.size(); ++c) {
            total += stability_count(lat, c);
            const auto gamma = closure_counts(lat, c);
            for (std::size_t j = 0; j < gamma.size(); ++j) by_size[j] += gamma[j];
        }
        CHECK(total == BigInt(1) << g);
        BigInt choose = 1;
        for (std::size_t j = 0; j <= g; ++j) {
            CHECK(by_size[j] == choose);
            choose = choose * (g - j) / (j + 1);
        }
    }
}

TEST_CASE("batch analysis agrees with single-concept operations") {
    for (std::size_t g : {25, 140}) {
        const auto ctx = cgtest::random_context(g, 9, 0.3, 7 * g);
        const auto lat = enumerate_concepts(ctx);
        LatticeAnalysis an(lat);
        const auto& stab = an.stability();
        const auto& ls = an.lstab();
        const auto& bounds = an.bounds();
        const auto& mono = an.monocle();
        const auto& prob = an.concept_probability();
        const auto rob = an.robustness(0.3);
        const auto& lv = an.level_values();
        SimilarityConfig cfg;
        const auto bl = an.basic_level(an.cohesion(cfg.similarity, cfg.object_aggregation), cfg);
        for (ConceptId c = 0; c < lat.size(); ++c) {
            CHECK(stab[c] == doctest::Approx(stability_exact(lat, c)).epsilon(1e-12));
            const auto one = lstab_and_bounds(lat, c);
            CHECK((ls[c] == one.lstab || std::abs(ls[c] - one.lstab) <= 1e-9));
            CHECK(bounds[c].delta_l == one.delta_l);
            CHECK(bounds[c].stab2noe == one.stab2noe);
            CHECK(bounds[c].stab2oe == one.stab2oe);
            CHECK(bounds[c].stab2oie == one.stab2oie);
            CHECK(mono[c] == monocle(lat, c));
            CHECK(prob[c] == doctest::Approx(concept_probability(ctx, lat[c].intent)).epsilon(1e-9));
            CHECK(std::abs(rob[c] - robustness(lat, c, 0.3)) <= 1e-9);
            CHECK(bl[c] == doctest::Approx(basic_level_similarity(lat, c, cfg)).epsilon(1e-12));
            const std::size_t n = lat[c].extent.count();
            if (n >= 3 && n <= 60) {
                CHECK(lv[c].size() == n - 2);
                const std::size_t j = 2 + (n - 3) / 2;
                CHECK(lv[c][j - 2] == doctest::Approx(levelwise_stability(lat, c, j).value).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("bound chain") {
    for (const auto& ctx : corpus(30, 30, 14)) {
        const auto lat = enumerate_concepts(ctx);
        LatticeAnalysis an(lat);
        const double log_m = std::log2(static_cast<double>(ctx.attribute_count()));
        const auto& bounds = an.bounds();
        for (ConceptId c = 0; c < lat.size(); ++c) {
            const auto& b = bounds[c];
            CHECK(b.delta_h == b.delta_l);
            if (lat.lower_neighbors(c).empty()) continue;
            CHECK(b.delta_l - log_m <= b.lstab_lower + 1e-9);
            CHECK(b.lstab_lower <= b.lstab + 1e-9);
            CHECK(b.lstab <= b.delta_l + 1e-9);
            CHECK(b.lstab <= b.stab2noe + 1e-9);
            CHECK(b.lstab <= b.stab2oe + 1e-9);
            CHECK(b.lstab <= b.stab2oie + 1e-9);
        }
    }
}

TEST_CASE("Monte Carlo stability") {
    const auto lat = cgtest::k1_lattice();
    const auto& ctx = lat.context();
    const ConceptId a = id_of(lat, {0});
    CHECK(stability_montecarlo(ctx, lat[*lat.bottom()], 100, 1) == 1.0);
    const double est = stability_montecarlo(ctx, lat[a], 100000, 3);
    CHECK(std::abs(est - 0.5) <= 4.0 * std::sqrt(0.25 / 100000.0));
    const double one = stability_montecarlo(ctx, lat[a], 1, 9);
    CHECK((one == 0.0 || one == 1.0));
    CHECK(stability_montecarlo(ctx, lat[a], 1, 9) == one);
    CHECK_THROWS_AS(stability_montecarlo(ctx, lat[a], 0, 9), PreconditionError);

    // a 150-object extent needs several words per draw
    const auto big = enumerate_concepts(cgtest::random_context(150, 6, 0.4, 11));
    for (ConceptId c = 0; c < big.size(); c += 5) {
        const double exact = stability_exact(big, c);
        const double mc = stability_montecarlo(big.context(), big[c], 20000, 4);
        CHECK(std::abs(mc - exact) <= 4.0 * std::sqrt(0.25 / 20000.0) + 1e-12);
    }
}

TEST_CASE("concept probability against the direct sum") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto ctx = cgtest::random_context(15, 6, 0.45, seed);
        const auto lat = enumerate_concepts(ctx);
        for (const Concept& c : lat.concepts())
            CHECK(concept_probability(ctx, c.intent) ==
                  doctest::Approx(concept_probability_oracle(ctx, c.intent)).epsilon(1e-9));
    }
}

TEST_CASE("level from rate") {
    CHECK(level_from_rate(0.4, 10) == 4u);
    CHECK(level_from_rate(0.05, 10) == 2u);
    CHECK(level_from_rate(0.95, 10) == 9u);
    CHECK(level_from_rate(0.5, 3) == 2u);
    CHECK_FALSE(level_from_rate(0.5, 2).has_value());
    CHECK_THROWS_AS(level_from_rate(0.0, 10), SpecError);
}

TEST_CASE("iceberg lattices refuse exact indices") {
    const auto ice = enumerate_concepts(cgtest::random_context(20, 8, 0.4, 2), {3, kDefaultConceptBudget});
    CHECK_THROWS_AS(stability_exact(ice, 0), PreconditionError);
    CHECK_THROWS_AS(robustness(ice, 0, 0.5), PreconditionError);
    CHECK_THROWS_AS(lstab_and_bounds(ice, 0), PreconditionError);
    CHECK_NOTHROW(support(ice, 0));
    CHECK_NOTHROW(separation(ice.context(), ice[0]));
}
