// One line per acceptance criterion; exit status is the number of failures.
// usage: cg_acceptance PATH_TO_CG [--smoke]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cg/experiments.hpp"
#include "cg/fixtures.hpp"
#include "cg/indices.hpp"
#include "cg/lattice.hpp"
#include "cg/measures.hpp"

namespace fs = std::filesystem;
using namespace cg;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s", secs);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title << " -- " << o.detail
              << " (" << buf << ")" << std::endl;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// the corpus shared by criteria 2 and 4
std::vector<FormalContext> prop1_corpus() {
    std::vector<FormalContext> out;
    std::mt19937_64 rng(2024);
    for (std::size_t i = 0; i < 60; ++i) {
        RandomContextSpec s;
        s.n_objects = 10 + rng() % 31;
        s.n_attributes = 5 + rng() % 16;
        s.density = 0.1 + 0.1 * static_cast<double>(i % 4);
        s.seed = rng();
        out.push_back(generate_random_context(s));
    }
    return out;
}

std::vector<std::uint64_t> brute_counts(const FormalContext& ctx, const Concept& c) {
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

Outcome c1() {
    const auto t0 = Clock::now();
    const auto f = enumerate_concepts(fixture_context("fig2")).size();
    const auto t = enumerate_concepts(fixture_context("table1")).size();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {f == 8 && t == 73 && secs < 1.0,
            "fig2=" + std::to_string(f) + " table1=" + std::to_string(t) + " in " + fmt(secs) + " s"};
}

Outcome c2(const std::vector<FormalContext>& corpus) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t concepts = 0;
    for (const auto& ctx : corpus) {
        const auto lat = enumerate_concepts(ctx);
        for (ConceptId c = 0; c < lat.size(); ++c) {
            worst = std::max(worst, std::abs(robustness(lat, c, 0.5) - stability_exact(lat, c)));
            ++concepts;
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {worst <= 1e-9 && secs < 60.0 && corpus.size() >= 50,
            std::to_string(corpus.size()) + " contexts, " + std::to_string(concepts) + " concepts, max |diff| " +
                fmt(worst)};
}

Outcome c3() {
    std::mt19937_64 rng(7);
    std::size_t stab_checked = 0, gamma_checked = 0, bad = 0;
    for (int i = 0; i < 24; ++i) {
        RandomContextSpec s{18 + rng() % 10, 6 + rng() % 8, 0.15 + 0.05 * (i % 5), rng()};
        const auto ctx = generate_random_context(s);
        const auto lat = enumerate_concepts(ctx);
        LatticeAnalysis an(lat);
        const auto& batch = an.stability();
        for (ConceptId c = 0; c < lat.size(); ++c) {
            const std::size_t n = lat[c].extent.count();
            if (n > 15) continue;
            const auto counts = brute_counts(ctx, lat[c]);
            std::uint64_t total = 0;
            for (auto v : counts) total += v;
            const double brute = static_cast<double>(total) / static_cast<double>(std::uint64_t{1} << n);
            ++stab_checked;
            if (stability_exact(lat, c) != brute || std::abs(batch[c] - brute) > 1e-12) ++bad;
            if (n > 12) continue;
            const auto gamma = closure_counts(lat, c);
            ++gamma_checked;
            for (std::size_t j = 0; j <= n; ++j)
                if (gamma[j] != BigInt(counts[j])) {
                    ++bad;
                    break;
                }
        }
    }
    return {bad == 0 && stab_checked > 0 && gamma_checked > 0,
            std::to_string(stab_checked) + " stabilities, " + std::to_string(gamma_checked) + " gamma vectors, " +
                std::to_string(bad) + " mismatches"};
}

Outcome c4(const std::vector<FormalContext>& corpus) {
    std::size_t checked = 0, bad = 0;
    const double eps = 1e-9;
    for (const auto& ctx : corpus) {
        const auto lat = enumerate_concepts(ctx);
        const double logm = std::log2(static_cast<double>(ctx.attribute_count()));
        for (ConceptId c = 0; c < lat.size(); ++c) {
            const auto b = lstab_and_bounds(lat, c);
            if (b.delta_h != b.delta_l) ++bad;
            if (lat.lower_neighbors(c).empty()) continue;
            ++checked;
            const bool chain = b.delta_l - logm <= b.lstab_lower + eps && b.lstab_lower <= b.lstab + eps &&
                               b.lstab <= b.delta_l + eps && b.lstab <= b.stab2noe + eps &&
                               b.lstab <= b.stab2oe + eps && b.lstab <= b.stab2oie + eps;
            if (!chain) ++bad;
        }
    }
    return {bad == 0 && checked > 0, std::to_string(checked) + " concepts, " + std::to_string(bad) + " violations"};
}

Outcome c5(bool smoke) {
    ApproxStudySpec spec;
    spec.densities = {0.2, 0.3};
    if (smoke) spec.contexts_per_density = 10;
    const auto r = run_approx_study(spec);
    bool ok = true;
    std::string detail;
    for (double d : spec.densities) {
        std::vector<const ApproxCell*> row;
        for (const auto& c : r.cells)
            if (c.density == d) row.push_back(&c);
        const ApproxCell* at04 = nullptr;
        bool local_max = false;
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (std::abs(row[i]->rate - 0.4) < 1e-9) at04 = row[i];
            if (row[i]->fit.r_squared > row[argmax]->fit.r_squared) argmax = i;
            if (row[i]->rate < 0.3 - 1e-9 || row[i]->rate > 0.5 + 1e-9 || row[i]->skipped) continue;
            const double v = row[i]->fit.r_squared;
            const bool left = i == 0 || v >= row[i - 1]->fit.r_squared;
            const bool right = i + 1 == row.size() || v >= row[i + 1]->fit.r_squared;
            local_max = local_max || (left && right);
        }
        const bool band = at04 && !at04->skipped && at04->fit.r_squared >= 0.68 && at04->fit.r_squared <= 0.89;
        ok = ok && band && local_max;
        detail += "d=" + fmt(d) + ": R2(0.4)=" + (at04 ? fmt(at04->fit.r_squared) : "n/a") + " peak at rate " +
                  fmt(row[argmax]->rate) + " (R2 " + fmt(row[argmax]->fit.r_squared) + ")" +
                  (local_max ? "" : " no local max in [0.3,0.5]") + "; ";
    }
    return {ok, detail + std::to_string(spec.contexts_per_density) + " contexts per density"};
}

Outcome c6_run(std::size_t per_density, double widen) {
    CorrelationStudySpec spec;
    spec.contexts_per_density = per_density;
    const auto r = run_correlation_study(spec);
    const double stab_dl = r.pooled("stability", "delta_l").mean;
    const double rob = r.pooled("robustness:alpha=0.1", "robustness:alpha=0.3").mean;
    double max_sd = 0.0;
    std::string where;
    const std::size_t n = r.index_names.size();
    for (const auto& g : r.groups) {
        if (!g.density) continue;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (r.cell(g, a, b).sd > max_sd) {
                    max_sd = r.cell(g, a, b).sd;
                    where = r.index_names[a] + "/" + r.index_names[b] + " at d=" + fmt(*g.density);
                }
    }
    double named_sd = 0.0;
    for (const auto& g : r.groups)
        if (g.density)
            named_sd = std::max({named_sd, r.cell(g, 0, 1).sd, r.cell(g, 6, 7).sd});
    const bool ok = stab_dl >= 0.78 - widen && rob >= 0.84 - widen && rob <= 0.98 + widen && max_sd <= 0.1 + widen;
    return {ok, std::to_string(4 * per_density) + " contexts: tau(stability,delta_l)=" + fmt(stab_dl) +
                    " [>= " + fmt(0.78 - widen) + "], tau(rob0.1,rob0.3)=" + fmt(rob) + " [" + fmt(0.84 - widen) +
                    "," + fmt(0.98 + widen) + "], max within-group sd=" + fmt(max_sd) + " (" + where + ") [<= " +
                    fmt(0.1 + widen) + "], sd of the two named pairs <= " + fmt(named_sd)};
}

Outcome c7() {
    std::string detail;
    bool ok = true;
    double rob_min = 1.0, sim_lo = 1.0, sim_hi = 0.0;
    std::size_t degenerate = 0;
    for (const char* fixture : {"block300x6", "block400x4"}) {
        NoiseStudySpec spec;
        spec.base = fixture_context(fixture);
        spec.indices = parse_index_list(
            "robustness:alpha=0.3, robustness:alpha=0.5, robustness:alpha=0.8, similarity:sim=smc,obj=a,nbr=a, "
            "similarity:sim=smc,obj=a,nbr=m, similarity:sim=smc,obj=m,nbr=a, similarity:sim=smc,obj=m,nbr=m, "
            "similarity:sim=jaccard,obj=a,nbr=a, similarity:sim=jaccard,obj=a,nbr=m, "
            "similarity:sim=jaccard,obj=m,nbr=a, similarity:sim=jaccard,obj=m,nbr=m");
        const auto r = run_noise_study(spec);
        degenerate += r.degenerate_trials;
        for (const auto& c : r.cells) {
            if (c.trials_used == 0) {
                ok = false;
                continue;
            }
            if (c.index.rfind("robustness", 0) == 0)
                rob_min = std::min(rob_min, c.mean_auc);
            else {
                sim_lo = std::min(sim_lo, c.mean_auc);
                sim_hi = std::max(sim_hi, c.mean_auc);
            }
        }
    }
    ok = ok && rob_min >= 0.7 && sim_lo >= 0.35 && sim_hi <= 0.65;
    detail = "min robustness AUC " + fmt(rob_min) + " [>= 0.7], similarity AUC range [" + fmt(sim_lo) + ", " +
             fmt(sim_hi) + "] [0.35, 0.65], " + std::to_string(degenerate) + " degenerate trials";
    return {ok, detail};
}

Outcome c8() {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
    std::size_t bad = 0, checks = 0;
    auto expect = [&](bool cond) {
        ++checks;
        if (!cond) ++bad;
    };
    for (AggregatorKind k : all_aggregator_kinds()) {
        if (!is_fuzzy(k)) continue;
        const bool t = is_tnorm(k);
        const AggregatorKind p = dual(k);
        for (double x : grid) {
            expect(std::abs(fuzzy_norm(k, x, t ? 1.0 : 0.0) - x) <= 1e-12);
            for (double y : grid) {
                const double v = fuzzy_norm(k, x, y);
                expect(v >= 0.0 && v <= 1.0);
                expect(std::abs(v - fuzzy_norm(k, y, x)) <= 1e-12);
                expect(std::abs(v - (1.0 - fuzzy_norm(p, 1.0 - x, 1.0 - y))) <= 1e-12);
                for (double y2 : grid)
                    if (y2 >= y) expect(fuzzy_norm(k, x, y2) >= v - 1e-12);
                for (double z : grid)
                    expect(std::abs(fuzzy_norm(k, fuzzy_norm(k, x, y), z) - fuzzy_norm(k, x, fuzzy_norm(k, y, z))) <=
                           1e-12);
            }
        }
    }
    std::size_t tables = 0;
    for (std::size_t h = 2; h <= 12; ++h)
        for (std::size_t x = 1; x < h; ++x)
            for (std::size_t k = 2; k <= 12; ++k)
                for (std::size_t y = 1; y < k; ++y) {
                    const ContingencyTable tab{x * y, x * (k - y), (h - x) * y, (h - x) * (k - y)};
                    ++tables;
                    expect(rule_measure(MeasureKind::kLift, tab) == 1.0);
                    expect(rule_measure(MeasureKind::kPiatetskyShapiro, tab) == 0.0);
                    expect(rule_measure(MeasureKind::kLeverage, tab) == 0.0);
                    expect(rule_measure(MeasureKind::kInformationGain, tab) == 0.0);
                }
    return {bad == 0, std::to_string(checks) + " checks incl. " + std::to_string(tables) + " independent tables, " +
                          std::to_string(bad) + " failures"};
}

int sgn(double v) { return (v > 0) - (v < 0); }

Outcome c9() {
    std::mt19937_64 rng(99);
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 199;
        const std::uint64_t levels = 2 + rng() % 30;
        std::vector<double> x(n), y(n);
        std::vector<bool> lab(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % levels) / 7.0;
            y[i] = static_cast<double>(rng() % levels) / 3.0;
            lab[i] = rng() & 1;
        }
        lab[0] = true;
        lab[1] = false;
        std::int64_t s = 0;
        std::uint64_t n0 = 0, n1 = 0, n2 = 0, twice = 0, p = 0, q = 0;
        for (std::size_t i = 0; i < n; ++i) {
            (lab[i] ? p : q)++;
            for (std::size_t j = i + 1; j < n; ++j) {
                ++n0;
                const int dx = sgn(x[i] - x[j]), dy = sgn(y[i] - y[j]);
                n1 += dx == 0;
                n2 += dy == 0;
                s += dx * dy;
            }
            for (std::size_t j = 0; j < n; ++j)
                if (lab[i] && !lab[j]) twice += x[i] > x[j] ? 2 : x[i] == x[j] ? 1 : 0;
        }
        const auto tau = kendall_tau_b(x, y);
        const bool degen = n1 == n0 || n2 == n0;
        const double want =
            degen ? 0.0
                  : static_cast<double>(s) / std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
        if (tau.degenerate != degen || tau.value != want) ++bad;
        if (auc(x, lab) != static_cast<double>(twice) / static_cast<double>(2 * p * q)) ++bad;
    }
    // x = 1..5: mean 3, Sxx = 10
    const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 5, 4, 5};
    const auto f = ols_fit(x, y);
    // Sxy = 6, Syy = 6: slope 0.6, intercept 4 - 1.8, R2 = 36/60
    const bool ols = std::abs(f.slope - 0.6) <= 1e-12 && std::abs(f.intercept - 2.2) <= 1e-12 &&
                     std::abs(f.r_squared - 0.6) <= 1e-12;
    const std::vector<double> y2{3, 5, 7, 9, 11};
    const auto g = ols_fit(x, y2);
    const bool line = std::abs(g.slope - 2.0) <= 1e-12 && std::abs(g.intercept - 1.0) <= 1e-12 &&
                      std::abs(g.r_squared - 1.0) <= 1e-12;
    return {bad == 0 && ols && line, "1000 sequences, " + std::to_string(bad) + " oracle mismatches; OLS " +
                                         (ols && line ? "matches" : "differs from") + " hand values"};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome c10(const std::string& cg) {
    const fs::path dir = fs::temp_directory_path() / ("cg_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string d = dir.string() + "/";
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"fig2.cxt", "demo --which fig2"},
        {"table1.cxt", "demo --which table1"},
        {"meta.csv", "demo --which meta"},
        {"gen.cxt", "gen --objects 30 --attributes 12 --density 0.3 --seed 5"},
        {"gen.csv", "gen --objects 30 --attributes 12 --density 0.3 --seed 5 --format csv"},
        {"mine.json", "mine --input " + d + "gen.cxt.ref"},
        {"index.csv", "index --input " + d + "gen.cxt.ref --indices support,stability,robustness:alpha=0.3,cu,"
                                              "similarity:sim=jaccard,monocle,separation,lstab"},
        {"index_lat.csv", "index --lattice " + d + "mine.json.ref --indices support,stability,cv"},
        {"corr.csv", "correlate --contexts 2 --objects 20,30 --attributes 8,12 --seed 4"},
        {"approx.csv", "approx --contexts 2 --objects 20,30 --attributes 8,12 --seed 4"},
        {"noise.csv", "noise --fixture block400x4 --trials 2 --indices support,stability,robustness:alpha=0.5 "
                      "--seed 4"},
    };
    std::size_t same = 0;
    std::string diff;
    for (const auto& [file, args] : cmds) {
        bool ok = true;
        for (const char* suffix : {".ref", ".rerun"}) {
            const std::string cmd = "\"" + cg + "\" " + args + " --quiet --out " + d + file + suffix;
            if (std::system(cmd.c_str()) != 0) ok = false;
        }
        if (ok && slurp(d + file + ".ref") == slurp(d + file + ".rerun") && !slurp(d + file + ".ref").empty())
            ++same;
        else
            diff += " " + file;
    }
    fs::remove_all(dir);
    return {same == cmds.size(), std::to_string(same) + "/" + std::to_string(cmds.size()) +
                                     " commands byte-identical" + (diff.empty() ? "" : "; differing:" + diff)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cg_acceptance PATH_TO_CG [--smoke]\n";
        return 2;
    }
    const std::string cg = argv[1];
    const bool smoke = argc > 2 && std::string(argv[2]) == "--smoke";
    const auto corpus = prop1_corpus();

    report(1, "bundled fixture concept counts", c1);
    report(2, "robustness at 0.5 equals exact stability", [&] { return c2(corpus); });
    report(3, "stability and gamma against brute force", c3);
    report(4, "LStab bound chain", [&] { return c4(corpus); });
    report(5, "integral stability regression peaks near rate 0.4", [&] { return c5(smoke); });
    if (!smoke) report(6, "rank correlation study, full scale", [] { return c6_run(100, 0.0); });
    report(6, "rank correlation study, 20-context smoke", [] { return c6_run(5, 0.05); });
    report(7, "noise study AUC on block fixtures", c7);
    report(8, "norm laws and independence identities", c8);
    report(9, "tau-b, AUC and OLS against oracles", c9);
    report(10, "CLI determinism", [&] { return c10(cg); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion check(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
