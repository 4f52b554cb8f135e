#include "cg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "cg/error.hpp"
#include "cg/fixtures.hpp"
#include "cg/io.hpp"
#include "cg/random.hpp"

namespace cg {

namespace {

constexpr std::size_t kMaxAttempts = 64;

// Centered running sums (Welford), so pooled fits over millions of points
// never need the points themselves.
struct OlsAccumulator {
    std::size_t n = 0;
    long double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;

    void add(double x, double y) {
        ++n;
        const long double dx = x - mx;
        const long double dy = y - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }

    OlsFit fit() const {
        if (n < 2) throw SpecError("regression needs at least two points");
        if (sxx == 0) throw SpecError("regression on a constant regressor");
        OlsFit f;
        const long double slope = sxy / sxx;
        f.slope = static_cast<double>(slope);
        f.intercept = static_cast<double>(my - slope * mx);
        if (syy == 0) {
            f.r_squared = 1.0;
            f.constant_y = true;
        } else {
            f.r_squared = static_cast<double>(std::clamp<long double>(sxy * sxy / (sxx * syy), 0, 1));
        }
        return f;
    }
};

std::uint64_t pair_count(std::uint64_t t) { return t * (t - 1) / 2; }

// inversions of v (pairs i<j with v[i] > v[j]), sorting v
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            inv += mid - i;
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    return inv;
}

void check_finite_order(std::span<const double> v, const char* what) {
    for (double x : v)
        if (std::isnan(x)) throw SpecError(std::string(what) + " contains NaN");
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void check_range(IntRange r, const char* what, std::size_t min) {
    if (r.lo < min || r.lo > r.hi)
        throw SpecError(std::string(what) + " range must satisfy " + std::to_string(min) + " <= lo <= hi");
}

void check_densities(const std::vector<double>& d) {
    if (d.empty()) throw SpecError("at least one density is required");
    for (double x : d)
        if (!(x >= 0.0 && x <= 1.0)) throw SpecError("density must lie in [0,1], got " + std::to_string(x));
}

// enumerate, re-drawing the context while the lattice blows the budget
ConceptLattice study_lattice(std::uint64_t seed, double density, std::size_t d, std::size_t k, IntRange objects,
                             IntRange attributes, std::size_t budget, std::size_t& regenerated) {
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        try {
            return enumerate_concepts(study_context(seed, density, d, k, objects, attributes, attempt),
                                      {0, budget});
        } catch (const BudgetError&) {
            ++regenerated;
        }
    }
    throw BudgetError("no context within the concept budget after " + std::to_string(kMaxAttempts) + " draws",
                      budget);
}

std::vector<std::size_t> ranking(const std::vector<double>& values, bool ascending,
                                 const ConceptLattice* skip_empty = nullptr) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!skip_empty || (*skip_empty)[i].extent.count() > 0) ids.push_back(i);
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
        return ascending ? values[a] < values[b] : values[a] > values[b];
    });
    return ids;
}

std::string density_label(const std::optional<double>& d) { return d ? format_value(*d) : "all"; }

}  // namespace

TauResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw SpecError("tau-b needs sequences of equal length");
    const std::size_t n = x.size();
    if (n < 2) throw SpecError("tau-b needs at least two observations");
    check_finite_order(x, "tau-b input");
    check_finite_order(y, "tau-b input");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    const std::uint64_t n0 = pair_count(n);
    std::uint64_t n1 = 0, n3 = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        n1 += pair_count(j - i);
        for (std::size_t a = i; a < j;) {
            std::size_t b = a;
            while (b < j && y[order[b]] == y[order[a]]) ++b;
            n3 += pair_count(b - a);
            a = b;
        }
        i = j;
    }

    std::vector<double> ys(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    const std::uint64_t swaps = count_inversions(ys, buf, 0, n);
    std::uint64_t n2 = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && ys[j] == ys[i]) ++j;
        n2 += pair_count(j - i);
        i = j;
    }

    if (n1 == n0 || n2 == n0) return {0.0, true};
    // concordant minus discordant, exact in integers
    const std::int64_t s = static_cast<std::int64_t>(n0 - n1 - n2 + n3) - 2 * static_cast<std::int64_t>(swaps);
    return {static_cast<double>(s) / std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2)), false};
}

double auc(std::span<const double> scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) throw SpecError("AUC needs one label per score");
    check_finite_order(scores, "AUC scores");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // twice the positive rank sum, so midranks stay integral
    std::uint64_t rank2 = 0, positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) {
                rank2 += i + 1 + j;
                ++positives;
            }
        i = j;
    }
    const std::uint64_t negatives = n - positives;
    if (positives == 0 || negatives == 0) throw SpecError("AUC needs both positive and negative labels");
    const std::uint64_t u2 = rank2 - positives * (positives + 1);
    return static_cast<double>(u2) / static_cast<double>(2 * positives * negatives);
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw SpecError("regression needs sequences of equal length");
    OlsAccumulator acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
    return acc.fit();
}

std::vector<IndexSpec> default_correlation_indices() {
    return parse_index_list(
        "stability, delta_l, delta_h, stab2noe, stab2oe, stab2oie, robustness:alpha=0.1, robustness:alpha=0.3, "
        "robustness:alpha=0.5, robustness:alpha=0.8, concept_probability, separation, support, "
        "margin_closed_relaxed, similarity:sim=smc,obj=a,nbr=a, similarity:sim=smc,obj=a,nbr=m, "
        "similarity:sim=smc,obj=m,nbr=a, similarity:sim=smc,obj=m,nbr=m, similarity:sim=jaccard,obj=a,nbr=a, "
        "similarity:sim=jaccard,obj=a,nbr=m, similarity:sim=jaccard,obj=m,nbr=a, "
        "similarity:sim=jaccard,obj=m,nbr=m, predictability, cu, cv, cfc");
}

void CorrelationStudySpec::validate() const {
    check_densities(densities);
    if (contexts_per_density == 0) throw SpecError("contexts per density must be positive");
    check_range(objects, "object", 1);
    check_range(attributes, "attribute", 1);
    if (indices.empty()) throw SpecError("the correlation study needs at least one index");
    for (const auto& s : indices) s.validate();
}

const TauCell& CorrelationResult::cell(const CorrelationGroup& g, std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    const std::size_t n = index_names.size();
    if (b >= n) throw SpecError("index position out of range");
    // row a of the upper triangle starts after a rows of shrinking length
    return g.cells.at(a * n - a * (a - 1) / 2 + (b - a));
}

const TauCell& CorrelationResult::pooled(std::string_view a, std::string_view b) const {
    auto pos = [&](std::string_view name) {
        auto it = std::find(index_names.begin(), index_names.end(), name);
        if (it == index_names.end()) throw SpecError("no index named '" + std::string(name) + "' in study");
        return static_cast<std::size_t>(it - index_names.begin());
    };
    for (const auto& g : groups)
        if (!g.density) return cell(g, pos(a), pos(b));
    throw SpecError("study has no pooled group");
}

FormalContext study_context(std::uint64_t seed, double density, std::size_t d, std::size_t k, IntRange objects,
                            IntRange attributes, std::size_t attempt) {
    const CounterStream rng(seed, stream_id(StreamDomain::kStudy, (d << 40) ^ (k << 12) ^ attempt));
    RandomContextSpec spec;
    spec.n_objects = rng.uniform_int(0, objects.lo, objects.hi);
    spec.n_attributes = rng.uniform_int(1, attributes.lo, attributes.hi);
    spec.density = density;
    spec.seed = rng.bits(2);
    return generate_random_context(spec);
}

CorrelationResult run_correlation_study(const CorrelationStudySpec& spec) {
    spec.validate();
    CorrelationResult result;
    for (const auto& s : spec.indices) result.index_names.push_back(s.name());
    const std::size_t n = spec.indices.size();
    const std::size_t cells = n * (n + 1) / 2;

    std::vector<std::vector<double>> pooled(cells);
    for (std::size_t d = 0; d < spec.densities.size(); ++d) {
        std::vector<std::vector<double>> group(cells);
        for (std::size_t k = 0; k < spec.contexts_per_density; ++k) {
            const auto lat = study_lattice(spec.seed, spec.densities[d], d, k, spec.objects, spec.attributes,
                                           spec.budget, result.regenerated);
            if (lat.size() < 2) continue;
            const auto table = compute_index_table(lat, spec.indices);
            std::size_t at = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b, ++at) {
                    const auto tau = kendall_tau_b(table.columns[a], table.columns[b]);
                    if (tau.degenerate) continue;
                    group[at].push_back(tau.value);
                    pooled[at].push_back(tau.value);
                }
        }
        CorrelationGroup g;
        g.density = spec.densities[d];
        for (const auto& v : group)
            g.cells.push_back(v.empty() ? TauCell{std::nan(""), 0.0, 0} : TauCell{mean_of(v), sd_of(v), v.size()});
        result.groups.push_back(std::move(g));
    }
    CorrelationGroup all;
    for (const auto& v : pooled)
        all.cells.push_back(v.empty() ? TauCell{std::nan(""), 0.0, 0} : TauCell{mean_of(v), sd_of(v), v.size()});
    result.groups.push_back(std::move(all));
    return result;
}

std::string correlation_csv(const CorrelationResult& result) {
    std::ostringstream out;
    out << "density,index_a,index_b,mean_tau,sd_tau\n";
    const std::size_t n = result.index_names.size();
    for (const auto& g : result.groups)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                const auto& c = result.cell(g, a, b);
                out << density_label(g.density) << ',' << quote_csv_field(result.index_names[a]) << ','
                    << quote_csv_field(result.index_names[b]) << ',' << format_value(c.mean) << ','
                    << format_value(c.sd) << '\n';
            }
    return out.str();
}

std::vector<double> ApproxStudySpec::default_rates() {
    std::vector<double> r;
    for (int i = 1; i <= 19; ++i) r.push_back(i * 0.05);
    return r;
}

void ApproxStudySpec::validate() const {
    check_densities(densities);
    if (rates.empty()) throw SpecError("at least one rate is required");
    for (double r : rates)
        if (!(r > 0.0 && r < 1.0)) throw SpecError("rate must lie in (0,1), got " + std::to_string(r));
    if (contexts_per_density == 0) throw SpecError("contexts per density must be positive");
    check_range(objects, "object", 1);
    check_range(attributes, "attribute", 1);
}

ApproxResult run_approx_study(const ApproxStudySpec& spec) {
    spec.validate();
    ApproxResult result;
    for (std::size_t d = 0; d < spec.densities.size(); ++d) {
        std::vector<OlsAccumulator> acc(spec.rates.size());
        for (std::size_t k = 0; k < spec.contexts_per_density; ++k) {
            const auto lat = study_lattice(spec.seed, spec.densities[d], d, k, spec.objects, spec.attributes,
                                           spec.budget, result.regenerated);
            LatticeAnalysis an(lat);
            const auto& stab = an.stability();
            const auto& levels = an.level_values();
            for (ConceptId c = 0; c < lat.size(); ++c) {
                const std::size_t n = lat[c].extent.count();
                if (n < 3) continue;
                for (std::size_t r = 0; r < spec.rates.size(); ++r) {
                    const std::size_t j = *level_from_rate(spec.rates[r], n);
                    double x = 0.0;
                    for (std::size_t i = 2; i <= j; ++i) x += levels[c][i - 2];
                    acc[r].add(x, stab[c]);
                }
            }
        }
        for (std::size_t r = 0; r < spec.rates.size(); ++r) {
            ApproxCell cell;
            cell.density = spec.densities[d];
            cell.rate = spec.rates[r];
            cell.concepts = acc[r].n;
            try {
                cell.fit = acc[r].fit();
            } catch (const SpecError&) {
                cell.skipped = true;
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

std::string approx_csv(const ApproxResult& result) {
    std::ostringstream out;
    out << "density,rate,slope,intercept,r2,n_concepts\n";
    for (const auto& c : result.cells) {
        out << format_value(c.density) << ',' << format_value(c.rate) << ',';
        if (c.skipped)
            out << "nan,nan,nan,";
        else
            out << format_value(c.fit.slope) << ',' << format_value(c.fit.intercept) << ','
                << format_value(c.fit.r_squared) << ',';
        out << c.concepts << '\n';
    }
    return out.str();
}

void NoiseStudySpec::validate() const {
    if (noise_rates.empty()) throw SpecError("at least one noise rate is required");
    for (double r : noise_rates)
        if (!(r >= 0.0 && r <= 1.0)) throw SpecError("noise rate must lie in [0,1], got " + std::to_string(r));
    if (trials_per_rate == 0) throw SpecError("trials per rate must be positive");
    if (indices.empty()) throw SpecError("the noise study needs at least one index");
    for (const auto& s : indices) s.validate();
}

namespace {

struct Originals {
    std::unordered_set<BitSet, BitSetHash> intents;
    std::unordered_set<BitSet, BitSetHash> extents;
    std::unordered_set<BitSet, BitSetHash> pairs;  // extent bits then intent bits
};

BitSet joined(const Concept& c) {
    const std::size_t g = c.extent.size();
    BitSet out(g + c.intent.size());
    c.extent.for_each([&](std::size_t i) { out.set(i); });
    c.intent.for_each([&](std::size_t i) { out.set(g + i); });
    return out;
}

Originals originals_of(const NoiseStudySpec& spec) {
    const auto lat = enumerate_concepts(spec.base, {0, spec.budget});
    Originals o;
    for (const Concept& c : lat.concepts()) {
        o.intents.insert(c.intent);
        o.extents.insert(c.extent);
        o.pairs.insert(joined(c));
    }
    return o;
}

NoiseTrial noise_trial(const NoiseStudySpec& spec, const Originals& o, std::size_t r, std::size_t t) {
    const CounterStream rng(spec.seed, stream_id(StreamDomain::kNoise, r));
    const auto noisy = apply_noise(spec.base, {spec.noise_rates.at(r), rng.bits(t)});
    auto lat = enumerate_concepts(noisy, {0, spec.budget});
    std::vector<bool> labels(lat.size());
    for (ConceptId c = 0; c < lat.size(); ++c) {
        switch (spec.match) {
            case OriginalMatch::kIntent: labels[c] = o.intents.count(lat[c].intent) > 0; break;
            case OriginalMatch::kExtent: labels[c] = o.extents.count(lat[c].extent) > 0; break;
            case OriginalMatch::kBoth: labels[c] = o.pairs.count(joined(lat[c])) > 0; break;
        }
    }
    return {std::move(lat), std::move(labels)};
}

}  // namespace

NoiseTrial make_noise_trial(const NoiseStudySpec& spec, std::size_t r, std::size_t t) {
    return noise_trial(spec, originals_of(spec), r, t);
}

NoiseResult run_noise_study(const NoiseStudySpec& spec) {
    spec.validate();
    const Originals o = originals_of(spec);
    NoiseResult result;
    for (std::size_t r = 0; r < spec.noise_rates.size(); ++r) {
        std::vector<double> sum(spec.indices.size(), 0.0);
        std::size_t used = 0;
        for (std::size_t t = 0; t < spec.trials_per_rate; ++t) {
            const auto trial = noise_trial(spec, o, r, t);
            const auto positives = std::count(trial.labels.begin(), trial.labels.end(), true);
            if (positives == 0 || static_cast<std::size_t>(positives) == trial.labels.size()) {
                ++result.degenerate_trials;
                continue;
            }
            const auto table = compute_index_table(trial.lattice, spec.indices);
            for (std::size_t k = 0; k < spec.indices.size(); ++k) sum[k] += auc(table.columns[k], trial.labels);
            ++used;
        }
        for (std::size_t k = 0; k < spec.indices.size(); ++k)
            result.cells.push_back({spec.noise_rates[r], spec.indices[k].name(),
                                    used ? sum[k] / static_cast<double>(used) : std::nan(""), used});
    }
    return result;
}

std::string noise_csv(const NoiseResult& result) {
    std::ostringstream out;
    out << "rate,index,mean_auc,trials_used\n";
    for (const auto& c : result.cells)
        out << format_value(c.rate) << ',' << quote_csv_field(c.index) << ',' << format_value(c.mean_auc) << ','
            << c.trials_used << '\n';
    return out.str();
}

MetaReport run_meta_demo(const ConceptLattice& lattice, std::size_t k) {
    const auto specs = parse_index_list(
        "concept_probability, separation, monocle, margin_closed:alpha=0.3, margin_closed_relaxed, support, "
        "stability, delta_l, stab2oe, cv, cfc, cu, predictability, similarity:sim=jaccard, similarity:sim=smc, "
        "robustness:alpha=0.3");
    const auto table = compute_index_table(lattice, specs);
    MetaReport report;
    report.concept_count = lattice.size();
    report.frequency.assign(lattice.size(), 0.0);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const bool ascending = specs[i].kind == IndexKind::kMarginClosedRelaxed;
        // an empty bottom scores 1 on every stability-like index; not a group worth listing
        const auto order = ranking(table.columns[i], ascending, &lattice);
        const std::size_t take = std::min(k, order.size());
        MetaRanking r;
        r.index = table.names[i];
        for (std::size_t p = 0; p < take; ++p) {
            r.top.push_back(order[p]);
            r.values.push_back(table.columns[i][order[p]]);
            report.frequency[order[p]] += 1.0;
        }
        report.rankings.push_back(std::move(r));
    }
    for (double& f : report.frequency) f /= static_cast<double>(specs.size());
    return report;
}

MetaReport run_meta_demo() { return run_meta_demo(enumerate_concepts(fixture_context("table1"))); }

std::string meta_csv(const MetaReport& report, const ConceptLattice& lattice) {
    const FormalContext& ctx = lattice.context();
    auto names = [&](const Concept& c) {
        std::string out;
        c.extent.for_each([&](std::size_t g) { out += (out.empty() ? "" : ";") + ctx.object_names()[g]; });
        return quote_csv_field(out);
    };
    std::ostringstream out;
    out << "list,rank,concept,value,extent\n";
    for (const auto& r : report.rankings)
        for (std::size_t p = 0; p < r.top.size(); ++p)
            out << quote_csv_field(r.index) << ',' << p + 1 << ',' << r.top[p] << ',' << format_value(r.values[p])
                << ',' << names(lattice[r.top[p]]) << '\n';
    const auto order = ranking(report.frequency, false);
    std::size_t rank = 0;
    for (ConceptId c : order) {
        if (report.frequency[c] == 0.0) break;
        out << "frequency," << ++rank << ',' << c << ',' << format_value(report.frequency[c]) << ','
            << names(lattice[c]) << '\n';
    }
    return out.str();
}

}  // namespace cg
