#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "cg/error.hpp"
#include "cg/experiments.hpp"
#include "cg/fixtures.hpp"
#include "cg/index_table.hpp"
#include "cg/io.hpp"
#include "cg/lattice.hpp"

namespace fs = std::filesystem;
using namespace cg;

namespace {

enum Exit { kOk = 0, kUsage = 2, kBudget = 3, kInternal = 4 };

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
    bool quiet = false;
};

std::size_t concept_budget() {
    const char* env = std::getenv("CG_BUDGET");
    if (!env || !*env) return kDefaultConceptBudget;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(env, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != std::string(env).size() || v == 0) throw SpecError("CG_BUDGET must be a positive integer");
    return static_cast<std::size_t>(v);
}

// temp file next to the target, then rename
void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const fs::path target(g.out);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw SpecError("cannot write " + tmp.string());
        f << text;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw SpecError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

void note(const Globals& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << '\n';
}

ContextFormat input_format(const Globals& g, const std::string& path) {
    return g.format.empty() ? format_from_extension(path) : parse_context_format(g.format);
}

ContextFormat output_format(const Globals& g) {
    return g.format.empty() ? ContextFormat::kCxt : parse_context_format(g.format);
}

FormalContext load_context(const Globals& g, const std::string& path) {
    if (!fs::exists(path)) throw SpecError("no such input: " + path);
    return read_context_file(path, input_format(g, path));
}

std::vector<IndexSpec> index_list(const std::string& text) {
    try {
        return parse_index_list(text);
    } catch (const SpecError& e) {
        std::string kinds;
        for (IndexKind k : all_index_kinds()) kinds += (kinds.empty() ? "" : ", ") + std::string(to_string(k));
        throw SpecError(std::string(e.what()) + "\nvalid kinds: " + kinds);
    }
}

IntRange range_of(const std::vector<std::size_t>& v, const char* flag) {
    if (v.size() != 2) throw SpecError(std::string(flag) + " takes LO,HI");
    return {v[0], v[1]};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SpecError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cg: concept lattices and concept quality indices"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    app.add_option("--out,-o", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "context format: cxt, fimi, csv")
        ->check(CLI::IsMember({"cxt", "fimi", "dat", "csv"}));
    app.add_flag("--quiet,-q", g.quiet, "no progress notes on stderr");

    // mine
    std::string mine_input;
    std::size_t mine_support = 0;
    auto* mine = app.add_subcommand("mine", "enumerate concepts, write lattice JSON");
    mine->add_option("--input,-i", mine_input)->required();
    mine->add_option("--min-support", mine_support, "minimum extent size")->capture_default_str();

    // index
    std::string idx_input, idx_lattice, idx_specs;
    std::size_t idx_support = 0;
    auto* index = app.add_subcommand("index", "index table CSV");
    auto* in_opt = index->add_option("--input,-i", idx_input, "context file");
    auto* lat_opt = index->add_option("--lattice", idx_lattice, "lattice JSON from mine");
    in_opt->excludes(lat_opt);
    index->add_option("--indices", idx_specs, "kind[:k=v,...] list")->required();
    index->add_option("--min-support", idx_support)->capture_default_str();

    // correlate
    CorrelationStudySpec corr;
    std::vector<std::size_t> corr_obj{corr.objects.lo, corr.objects.hi}, corr_att{corr.attributes.lo, corr.attributes.hi};
    std::string corr_indices;
    auto* correlate = app.add_subcommand("correlate", "rank correlation study");
    correlate->add_option("--densities", corr.densities)->delimiter(',')->capture_default_str();
    correlate->add_option("--contexts", corr.contexts_per_density, "contexts per density")->capture_default_str();
    correlate->add_option("--objects", corr_obj, "LO,HI")->delimiter(',')->capture_default_str();
    correlate->add_option("--attributes", corr_att, "LO,HI")->delimiter(',')->capture_default_str();
    correlate->add_option("--indices", corr_indices, "index list (default: study set)");

    // approx
    ApproxStudySpec appr;
    std::vector<std::size_t> appr_obj{appr.objects.lo, appr.objects.hi}, appr_att{appr.attributes.lo, appr.attributes.hi};
    auto* approx = app.add_subcommand("approx", "stability vs integral stability regression");
    approx->add_option("--densities", appr.densities)->delimiter(',')->capture_default_str();
    approx->add_option("--rates", appr.rates)->delimiter(',');
    approx->add_option("--contexts", appr.contexts_per_density)->capture_default_str();
    approx->add_option("--objects", appr_obj, "LO,HI")->delimiter(',')->capture_default_str();
    approx->add_option("--attributes", appr_att, "LO,HI")->delimiter(',')->capture_default_str();

    // noise
    NoiseStudySpec nspec;
    std::string noise_fixture = "block300x6", noise_input, noise_indices, noise_match = "intent";
    auto* noise = app.add_subcommand("noise", "noise study AUC");
    auto* nf = noise->add_option("--fixture", noise_fixture)->capture_default_str();
    auto* ni = noise->add_option("--input,-i", noise_input, "base context file");
    nf->excludes(ni);
    noise->add_option("--rates", nspec.noise_rates)->delimiter(',')->capture_default_str();
    noise->add_option("--trials", nspec.trials_per_rate)->capture_default_str();
    noise->add_option("--indices", noise_indices, "index list (default: study set)");
    noise->add_option("--match", noise_match)->check(CLI::IsMember({"intent", "extent", "both"}))->capture_default_str();

    // gen
    RandomContextSpec gspec;
    auto* gen = app.add_subcommand("gen", "random context");
    gen->add_option("--objects", gspec.n_objects)->required();
    gen->add_option("--attributes", gspec.n_attributes)->required();
    gen->add_option("--density", gspec.density)->required();

    // demo
    std::string which;
    auto* demo = app.add_subcommand("demo", "bundled fixtures; meta runs the top-8 demo");
    demo->add_option("--which", which)
        ->required()
        ->check(CLI::IsMember({"fig2", "table1", "block300x6", "block400x4", "meta"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const std::size_t budget = concept_budget();
        if (*mine) {
            const auto ctx = load_context(g, mine_input);
            const auto lat = enumerate_concepts(ctx, {mine_support, budget});
            emit(g, lattice_to_json(lat));
            note(g, std::to_string(lat.size()) + " concepts");
        } else if (*index) {
            if (idx_input.empty() == idx_lattice.empty()) throw SpecError("index needs --input or --lattice");
            const auto specs = index_list(idx_specs);
            const auto lat = idx_lattice.empty()
                                 ? enumerate_concepts(load_context(g, idx_input), {idx_support, budget})
                                 : lattice_from_json(slurp(idx_lattice), budget);
            emit(g, index_table_csv(compute_index_table(lat, specs)));
            note(g, std::to_string(lat.size()) + " rows");
        } else if (*correlate) {
            corr.objects = range_of(corr_obj, "--objects");
            corr.attributes = range_of(corr_att, "--attributes");
            if (!corr_indices.empty()) corr.indices = index_list(corr_indices);
            corr.seed = g.seed;
            corr.budget = budget;
            const auto r = run_correlation_study(corr);
            emit(g, correlation_csv(r));
            note(g, std::to_string(r.regenerated) + " contexts regenerated");
        } else if (*approx) {
            appr.objects = range_of(appr_obj, "--objects");
            appr.attributes = range_of(appr_att, "--attributes");
            appr.seed = g.seed;
            appr.budget = budget;
            const auto r = run_approx_study(appr);
            emit(g, approx_csv(r));
            note(g, std::to_string(r.regenerated) + " contexts regenerated");
        } else if (*noise) {
            nspec.base = noise_input.empty() ? fixture_context(noise_fixture) : load_context(g, noise_input);
            nspec.indices = noise_indices.empty() ? default_correlation_indices() : index_list(noise_indices);
            nspec.match = noise_match == "intent"   ? OriginalMatch::kIntent
                          : noise_match == "extent" ? OriginalMatch::kExtent
                                                    : OriginalMatch::kBoth;
            nspec.seed = g.seed;
            nspec.budget = budget;
            const auto r = run_noise_study(nspec);
            emit(g, noise_csv(r));
            const std::size_t total = nspec.noise_rates.size() * nspec.trials_per_rate;
            note(g, std::to_string(r.degenerate_trials) + " of " + std::to_string(total) +
                        " trials degenerate (every concept or none original)");
        } else if (*gen) {
            gspec.seed = g.seed;
            emit(g, format_context(generate_random_context(gspec), output_format(g)));
        } else if (*demo) {
            if (which == "meta") {
                const auto lat = enumerate_concepts(fixture_context("table1"), {0, budget});
                emit(g, meta_csv(run_meta_demo(lat), lat));
            } else {
                const auto ctx = fixture_context(which);
                emit(g, format_context(ctx, output_format(g)));
                note(g, std::to_string(ctx.object_count()) + "x" + std::to_string(ctx.attribute_count()));
            }
        }
        return kOk;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
