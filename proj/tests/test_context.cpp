#include "doctest.h"

#include <sstream>

#include "cg/error.hpp"
#include "cg/io.hpp"
#include "support.hpp"

using namespace cg;
using cgtest::k1;

TEST_CASE("derivation on K1") {
    const auto ctx = k1();
    CHECK(derive_objects(ctx, ctx.objects({0, 1})) == ctx.attributes({0}));
    CHECK(derive_objects(ctx, ctx.no_objects()) == ctx.all_attributes());
    CHECK(derive_objects(ctx, ctx.all_objects()).empty());
    CHECK(derive_attributes(ctx, ctx.attributes({0})) == ctx.objects({0, 1}));
    CHECK(derive_attributes(ctx, ctx.no_attributes()) == ctx.all_objects());
    CHECK(derive_attributes(ctx, ctx.attributes({0, 1})) == ctx.objects({1}));
}

TEST_CASE("closure laws on random contexts") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ctx = cgtest::random_context(9, 7, 0.35, seed);
        for (std::uint64_t mask = 0; mask < 128; ++mask) {
            AttributeSet b(7);
            for (std::size_t i = 0; i < 7; ++i)
                if (mask >> i & 1) b.set(i);
            const auto c = close_attributes(ctx, b);
            CHECK(b.is_subset_of(c));
            CHECK(close_attributes(ctx, c) == c);
            // A' = A''' for the object side too
            const auto a = derive_attributes(ctx, b);
            CHECK(derive_attributes(ctx, derive_objects(ctx, a)) == a);
        }
    }
}

TEST_CASE("derivation rejects out-of-range indices") {
    const auto ctx = k1();
    CHECK_THROWS_AS(derive_objects(ctx, std::vector<std::size_t>{3}), DimensionError);
    CHECK_THROWS_AS(derive_attributes(ctx, std::vector<std::size_t>{2}), DimensionError);
}

TEST_CASE("context invariants") {
    CHECK_THROWS_AS(FormalContext({"x", "x"}, {"a"}, {AttributeSet(1), AttributeSet(1)}), DimensionError);
    CHECK_THROWS_AS(FormalContext({}, {"a"}, {}), DimensionError);
    CHECK_THROWS_AS(FormalContext({"x"}, {"a"}, {AttributeSet(2)}), DimensionError);
}

TEST_CASE("random generation is seeded and density-faithful") {
    const RandomContextSpec spec{200, 50, 0.3, 42};
    const auto a = generate_random_context(spec);
    const auto b = generate_random_context(spec);
    CHECK(a == b);
    const double density = static_cast<double>(a.ones()) / static_cast<double>(a.cell_count());
    CHECK(density == doctest::Approx(0.3).epsilon(0.05));
    CHECK_FALSE(generate_random_context({200, 50, 0.3, 43}) == a);
    CHECK(generate_random_context({5, 5, 0.0, 1}).ones() == 0);
    CHECK(generate_random_context({5, 5, 1.0, 1}).ones() == 25);
    CHECK_THROWS_AS(generate_random_context({0, 5, 0.5, 1}), SpecError);
    CHECK_THROWS_AS(generate_random_context({5, 5, 1.5, 1}), SpecError);
}

TEST_CASE("noise flips cells at the requested rate") {
    const auto base = cgtest::random_context(100, 40, 0.5, 3);
    CHECK(apply_noise(base, {0.0, 9}) == base);
    const auto flipped = apply_noise(base, {1.0, 9});
    for (std::size_t g = 0; g < 100; ++g)
        for (std::size_t m = 0; m < 40; ++m) CHECK(flipped.incidence(g, m) != base.incidence(g, m));
    const auto noisy = apply_noise(base, {0.1, 9});
    std::size_t diff = 0;
    for (std::size_t g = 0; g < 100; ++g)
        for (std::size_t m = 0; m < 40; ++m) diff += noisy.incidence(g, m) != base.incidence(g, m);
    CHECK(static_cast<double>(diff) / 4000.0 == doctest::Approx(0.1).epsilon(0.25));
    CHECK(apply_noise(base, {0.1, 9}) == noisy);
    CHECK_THROWS_AS(apply_noise(base, {-0.1, 9}), SpecError);
}

TEST_CASE("formats round-trip") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ctx = cgtest::random_context(12, 9, 0.4, seed);
        for (auto fmt : {ContextFormat::kCxt, ContextFormat::kCsv}) {
            const auto text = format_context(ctx, fmt);
            CHECK(parse_context(text, fmt) == ctx);
        }
        // FIMI drops names and trailing empty attributes, so compare incidence
        const auto back = parse_context(format_context(ctx, ContextFormat::kFimi), ContextFormat::kFimi);
        CHECK(back.object_count() == ctx.object_count());
        for (std::size_t g = 0; g < ctx.object_count(); ++g)
            for (std::size_t m = 0; m < back.attribute_count(); ++m)
                CHECK(back.incidence(g, m) == ctx.incidence(g, m));
    }
}

TEST_CASE("csv names with commas survive quoting") {
    const FormalContext ctx({"a,b", "q\"x"}, {"m 1", "m,2"}, {AttributeSet(2, {0}), AttributeSet(2, {1})});
    CHECK(parse_context(format_context(ctx, ContextFormat::kCsv), ContextFormat::kCsv) == ctx);
}

TEST_CASE("cxt parse errors carry positions") {
    try {
        parse_context("B\n\n2\n2\n\ng1\ng2\na\nb\nX.\nXq\n", ContextFormat::kCxt);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 11);
        CHECK(e.column() == 2);
    }
    CHECK_THROWS_AS(parse_context("C\n", ContextFormat::kCxt), ParseError);
    CHECK_THROWS_AS(parse_context("B\n\n2\n2\n\ng1\ng2\na\nb\nX.\n", ContextFormat::kCxt), ParseError);
    CHECK_THROWS_AS(parse_context("B\n\n2\n2\n\ng1\ng1\na\nb\nX.\n.X\n", ContextFormat::kCxt), ParseError);
    CHECK_THROWS_AS(parse_context(",a,a\nx,1,0\n", ContextFormat::kCsv), ParseError);
    CHECK_THROWS_AS(parse_context(",a\nx,2\n", ContextFormat::kCsv), ParseError);
    CHECK_THROWS_AS(parse_context("1 x\n", ContextFormat::kFimi), ParseError);
    CHECK_THROWS_AS(parse_context_format("xml"), SpecError);
}
