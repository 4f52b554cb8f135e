#include "cg/indices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "cg/error.hpp"
#include "cg/random.hpp"

namespace cg {

namespace {

// Counts fit in 128 bits whenever |G| <= 126; larger contexts fall back to BigInt.
using Wide = __int128;
constexpr std::size_t kWideLimit = 126;

double to_double(const BigInt& x) { return x.convert_to<double>(); }
double to_double(Wide x) { return static_cast<double>(x); }

std::size_t extent_size(const ConceptLattice& lat, ConceptId c) { return lat[c].extent.count(); }

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw PreconditionError(std::string(name) + " must lie in [0,1], got " + std::to_string(p));
}

template <class Int>
std::vector<std::vector<Int>> pascal(std::size_t n) {
    std::vector<std::vector<Int>> rows(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        rows[k].assign(k + 1, Int(1));
        for (std::size_t j = 1; j < k; ++j) rows[k][j] = rows[k - 1][j - 1] + rows[k - 1][j];
    }
    return rows;
}

template <class Int>
double lstab_of(const Int& sigma, std::size_t n) {
    const Int rest = (Int(1) << n) - sigma;
    if (rest == 0) return kInf;
    return static_cast<double>(n) - std::log2(to_double(rest));
}

double clamp01(double v) {
    if (std::isnan(v)) return 0.0;
    return std::clamp(v, 0.0, 1.0);
}

// Neighbor quotient: 0/0 counts as equal (1), x/0 as unbounded.
double quotient(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
    return num / den;
}

StabilityBounds compute_bounds(const ConceptLattice& lat, ConceptId c, double lstab,
                               std::span<const ConceptId> strict_down) {
    StabilityBounds out;
    out.lstab = lstab;
    const auto lower = lat.lower_neighbors(c);
    if (lower.empty()) return out;
    const ObjectSet& ext = lat[c].extent;
    const std::size_t n = ext.count();
    std::vector<std::size_t> drop(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) drop[i] = n - extent_size(lat, lower[i]);

    std::vector<std::size_t> order(lower.size());
    std::iota(order.begin(), order.end(), 0);
    // lower is sorted by id, so a stable sort on drop breaks ties by id
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return drop[a] < drop[b]; });
    const std::size_t i1 = order[0];
    out.delta_l = static_cast<double>(drop[i1]);

    const FormalContext& ctx = lat.context();
    std::size_t best = 0;
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m)
        if (!lat[c].intent.test(m)) best = std::max(best, ext.intersection_count(ctx.column(m)));
    out.delta_h = static_cast<double>(n - best);

    long double mass = 0;
    for (std::size_t d : drop) mass += std::ldexp(1.0L, -static_cast<int>(d));
    out.lstab_lower = static_cast<double>(-std::log2(mass));

    const ObjectSet d1 = ext - lat[lower[i1]].extent;
    // stab2noe
    {
        std::size_t best_drop = 0;
        bool found = false;
        for (ConceptId e : strict_down) {
            const ObjectSet& ee = lat[e].extent;
            if (!d1.is_subset_of(ee)) continue;
            const std::size_t de = n - ee.count();
            if (!found || de < best_drop) {
                best_drop = de;
                found = true;
            }
        }
        out.stab2noe = found ? static_cast<double>(drop[i1] + best_drop) : out.delta_l;
    }
    if (lower.size() == 1) {
        out.stab2oe = out.stab2oie = out.delta_l;
        return out;
    }
    // stab2oe: the neighbor leaving out most of d1's extent
    {
        const ObjectSet& a1 = lat[lower[i1]].extent;
        std::size_t pick = 0;
        std::size_t pick_gain = 0;
        bool found = false;
        for (std::size_t k : order) {
            if (k == i1) continue;
            const std::size_t gain = (lat[lower[k]].extent - a1).count();
            if (!found || gain > pick_gain) {
                pick = k;
                pick_gain = gain;
                found = true;
            }
        }
        out.stab2oe = static_cast<double>((d1 | (ext - lat[lower[pick]].extent)).count());
    }
    out.stab2oie = static_cast<double>((d1 | (ext - lat[lower[order[1]]].extent)).count());
    return out;
}

double cohesion_of(const FormalContext& ctx, const ObjectSet& extent, SimilarityKind kind,
                   NeighborhoodAggregation aggregation) {
    const auto members = extent.indices();
    if (members.size() < 2) return 1.0;
    double sum = 0.0, low = 1.0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t k = i + 1; k < members.size(); ++k) {
            const double s = object_similarity(kind, ctx.row(members[i]), ctx.row(members[k]));
            sum += s;
            low = std::min(low, s);
        }
    if (aggregation == NeighborhoodAggregation::kMinimum) return low;
    const double pairs = static_cast<double>(members.size()) * (members.size() - 1) / 2.0;
    return sum / pairs;
}

// Shared by similarity and predictability: factor(c) combined with its
// neighbor terms.
template <class Factor>
double basic_level_combination(const ConceptLattice& lat, ConceptId c, const SimilarityConfig& cfg,
                               Factor&& factor) {
    cfg.validate();
    const double own = factor(c);
    const bool average = cfg.neighbor_aggregation == NeighborhoodAggregation::kAverage;

    double up_term = 1.0;
    const auto up = lat.upper_neighbors(c);
    if (!up.empty()) {
        double acc = average ? 0.0 : -kInf;
        std::size_t bad = 0;
        for (ConceptId u : up) {
            const double fu = factor(u);
            if (fu > own) ++bad;
            const double q = quotient(fu, own);
            acc = average ? acc + q : std::max(acc, q);
        }
        if (average) acc /= static_cast<double>(up.size());
        up_term = static_cast<double>(bad) / up.size() > cfg.nonmonotone_threshold ? 0.0 : 1.0 - acc;
    }

    double low_term = 1.0;
    const auto low = lat.lower_neighbors(c);
    if (!low.empty()) {
        double acc = average ? 0.0 : kInf;
        std::size_t bad = 0;
        for (ConceptId l : low) {
            const double fl = factor(l);
            if (fl < own) ++bad;
            const double q = quotient(own, fl);
            acc = average ? acc + q : std::min(acc, q);
        }
        if (average) acc /= static_cast<double>(low.size());
        low_term = static_cast<double>(bad) / low.size() > cfg.nonmonotone_threshold ? 0.0 : acc;
    }
    const double parts[3] = {clamp01(own), clamp01(up_term), clamp01(low_term)};
    return aggregate(parts, cfg.tnorm);
}

// 1 - p_m^k per (k, m), shared across concepts.
std::vector<std::vector<double>> miss_table(const FormalContext& ctx) {
    const std::size_t n = ctx.object_count();
    std::vector<std::vector<double>> table(n + 1, std::vector<double>(ctx.attribute_count()));
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
        const double p = static_cast<double>(ctx.column(m).count()) / static_cast<double>(n);
        double pk = 1.0;
        for (std::size_t k = 0; k <= n; ++k) {
            table[k][m] = 1.0 - pk;
            pk *= p;
        }
    }
    return table;
}

double probability_with(const FormalContext& ctx, const AttributeSet& intent,
                        const std::vector<std::vector<double>>& miss) {
    const std::size_t n = ctx.object_count();
    double p_b = 1.0;
    intent.for_each([&](std::size_t m) {
        p_b *= static_cast<double>(ctx.column(m).count()) / static_cast<double>(n);
    });
    const double log_p = std::log(p_b);
    const double log_q = std::log1p(-p_b);
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    long double total = 0;
    const AttributeSet outside = intent.complement();
    const auto out_ids = outside.indices();
    for (std::size_t k = 0; k <= n; ++k) {
        double log_w = lg_n - std::lgamma(static_cast<double>(k) + 1.0) -
                       std::lgamma(static_cast<double>(n - k) + 1.0);
        if (k > 0) log_w += static_cast<double>(k) * log_p;
        if (n - k > 0) log_w += static_cast<double>(n - k) * log_q;
        if (std::isinf(log_w) && log_w < 0) continue;
        double prod = 1.0;
        for (std::size_t m : out_ids) {
            prod *= miss[k][m];
            if (prod == 0.0) break;
        }
        total += static_cast<long double>(std::exp(log_w)) * prod;
    }
    return clamp01(static_cast<double>(total));
}

}  // namespace

double support(const ConceptLattice& lattice, ConceptId c) {
    return static_cast<double>(extent_size(lattice, c)) /
           static_cast<double>(lattice.context().object_count());
}

BigInt stability_count(const ConceptLattice& lattice, ConceptId c) {
    lattice.require_complete("exact stability");
    const auto ids = lattice.descendants(c);
    std::unordered_map<ConceptId, BigInt> sigma;
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
        BigInt s = BigInt(1) << extent_size(lattice, *it);
        for (ConceptId e : lattice.descendants(*it))
            if (e != *it) s -= sigma.at(e);
        sigma.emplace(*it, std::move(s));
    }
    return sigma.at(c);
}

double stability_exact(const ConceptLattice& lattice, ConceptId c) {
    const BigInt sigma = stability_count(lattice, c);
    return std::ldexp(to_double(sigma), -static_cast<int>(extent_size(lattice, c)));
}

double stability_montecarlo(const FormalContext& ctx, const Concept& c, std::size_t samples,
                            std::uint64_t seed) {
    if (samples == 0) throw PreconditionError("Monte Carlo stability needs at least one sample");
    const CounterStream rng(seed, stream_id(StreamDomain::kMonteCarlo, c.id));
    const auto words = c.extent.words();
    ObjectSet subset(ctx.object_count());
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t w = 0; w < words.size(); ++w)
            subset.set_word(w, words[w] & rng.bits(s * words.size() + w));
        if (derive_objects(ctx, subset) == c.intent) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

double lstab_from_count(const BigInt& sigma, std::size_t extent_size) {
    return lstab_of(sigma, extent_size);
}

StabilityBounds lstab_and_bounds(const ConceptLattice& lattice, ConceptId c) {
    lattice.require_complete("stability bounds");
    const double ls = lstab_of(stability_count(lattice, c), extent_size(lattice, c));
    auto down = lattice.descendants(c);
    down.erase(down.begin());
    return compute_bounds(lattice, c, ls, down);
}

std::vector<BigInt> closure_counts(const ConceptLattice& lattice, ConceptId c) {
    lattice.require_complete("level-wise stability");
    const MobiusTable mu = mobius(lattice, c);
    const std::size_t n = extent_size(lattice, c);
    const auto binom = pascal<BigInt>(n);
    std::vector<BigInt> gamma(n + 1, BigInt(0));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const std::int64_t m = mu.values()[i];
        if (m == 0) continue;
        const std::size_t k = extent_size(lattice, mu.ids()[i]);
        for (std::size_t j = 0; j <= k; ++j) gamma[j] += binom[k][j] * m;
    }
    return gamma;
}

LevelValue levelwise_stability(const ConceptLattice& lattice, ConceptId c, std::size_t j) {
    const std::size_t n = extent_size(lattice, c);
    if (j < 2 || j + 1 > n) {
        lattice.require_complete("level-wise stability");
        return {0.0, false};
    }
    const auto gamma = closure_counts(lattice, c);
    const auto binom = pascal<BigInt>(n);
    return {to_double(gamma[j]) / to_double(binom[n][j]), true};
}

LevelValue integral_stability(const ConceptLattice& lattice, ConceptId c, std::size_t j,
                              IntegralSide side) {
    const std::size_t n = extent_size(lattice, c);
    std::size_t lo = 2, hi = n >= 1 ? n - 1 : 0;
    if (side != IntegralSide::kFull && (j < 2 || j + 1 > n)) {
        lattice.require_complete("integral stability");
        return {0.0, false};
    }
    if (side == IntegralSide::kMinor) hi = j;
    if (side == IntegralSide::kMajor) lo = j;
    if (n < 3) {
        lattice.require_complete("integral stability");
        return {0.0, false};
    }
    const auto gamma = closure_counts(lattice, c);
    const auto binom = pascal<BigInt>(n);
    double sum = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) sum += to_double(gamma[i]) / to_double(binom[n][i]);
    return {sum, true};
}

std::optional<std::size_t> level_from_rate(double rate, std::size_t n) {
    if (!(rate > 0.0 && rate < 1.0)) throw SpecError("rate must lie in (0,1), got " + std::to_string(rate));
    if (n < 3) return std::nullopt;
    // a tiny slack keeps products like 0.4 * 10 at their exact integer
    auto j = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(j, 2, n - 1);
}

double robustness(const ConceptLattice& lattice, ConceptId c, double alpha) {
    require_probability(alpha, "alpha");
    lattice.require_complete("robustness");
    const MobiusTable mu = mobius(lattice, c);
    const std::size_t n = extent_size(lattice, c);
    const long double q = 1.0L - alpha;
    long double sum = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const std::size_t k = n - extent_size(lattice, mu.ids()[i]);
        sum += static_cast<long double>(mu.values()[i]) * std::pow(q, static_cast<long double>(k));
    }
    return static_cast<double>(sum);
}

double concept_probability(const FormalContext& ctx, const AttributeSet& intent) {
    return probability_with(ctx, intent, miss_table(ctx));
}

double separation(const FormalContext& ctx, const Concept& c) {
    const std::size_t a = c.extent.count();
    const std::size_t b = c.intent.count();
    if (a == 0 || b == 0) return 0.0;
    std::size_t covered = 0;
    c.extent.for_each([&](std::size_t g) { covered += ctx.row(g).count(); });
    c.intent.for_each([&](std::size_t m) { covered += ctx.column(m).count(); });
    return static_cast<double>(a * b) / static_cast<double>(covered - a * b);
}

double monocle(const ConceptLattice& lattice, ConceptId c) {
    std::vector<ConceptId> all(lattice.size());
    std::iota(all.begin(), all.end(), 0);
    return monocle(lattice, c, all);
}

double monocle(const ConceptLattice& lattice, ConceptId c, std::span<const ConceptId> h) {
    const Concept& x = lattice.at(c);
    double left = static_cast<double>(x.extent.count());
    double right = static_cast<double>(x.intent.count());
    for (ConceptId id : h) {
        const Concept& y = lattice.at(id);
        left += static_cast<double>((x.extent - y.extent).count());
        right += static_cast<double>((x.intent - y.intent).count());
    }
    return left * right;
}

bool delta_tcfi(const ConceptLattice& lattice, ConceptId c, double delta, TcfiReading reading) {
    require_probability(delta, "delta");
    const Concept& x = lattice.at(c);
    const double floor = (1.0 - delta) * static_cast<double>(x.extent.count()) - 1e-12;
    bool any = false, all = true;
    for (ConceptId d : lattice.lower_neighbors(c)) {
        if (lattice[d].intent.count() != x.intent.count() + 1) continue;
        const bool close = static_cast<double>(lattice[d].extent.count()) >= floor;
        any = any || close;
        all = all && close;
    }
    return reading == TcfiReading::kNegated ? !any : all;
}

bool margin_closed(const ConceptLattice& lattice, ConceptId c, double alpha, double min_support) {
    require_probability(alpha, "alpha");
    require_probability(min_support, "min_support");
    const double n_g = static_cast<double>(lattice.context().object_count());
    const double threshold = min_support * n_g - 1e-12;
    const double own = static_cast<double>(extent_size(lattice, c));
    if (own < threshold) return false;
    for (ConceptId d : lattice.lower_neighbors(c)) {
        const double s = static_cast<double>(extent_size(lattice, d));
        if (s < threshold) continue;
        if (s > (1.0 - alpha) * own + 1e-12) return false;
    }
    return true;
}

double margin_closed_relaxed(const ConceptLattice& lattice, ConceptId c) {
    const std::size_t own = extent_size(lattice, c);
    std::size_t best = 0;
    for (ConceptId d : lattice.lower_neighbors(c)) best = std::max(best, extent_size(lattice, d));
    if (own == 0) return 0.0;
    return static_cast<double>(best) / static_cast<double>(own);
}

void SimilarityConfig::validate() const {
    if (!is_tnorm(tnorm)) throw SpecError(std::string(to_string(tnorm)) + " is not a t-norm");
    if (!(nonmonotone_threshold >= 0.0 && nonmonotone_threshold <= 1.0))
        throw SpecError("nonmonotone threshold must lie in [0,1]");
}

double object_similarity(SimilarityKind kind, const AttributeSet& x, const AttributeSet& y) {
    const std::size_t both = x.intersection_count(y);
    const std::size_t either = x.count() + y.count() - both;
    if (kind == SimilarityKind::kJaccard)
        return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
    const std::size_t m = x.size();
    return static_cast<double>(both + (m - either)) / static_cast<double>(m);
}

double cohesion(const FormalContext& ctx, const ObjectSet& extent, SimilarityKind kind,
                NeighborhoodAggregation aggregation) {
    return cohesion_of(ctx, extent, kind, aggregation);
}

double basic_level_similarity(const ConceptLattice& lattice, ConceptId c, const SimilarityConfig& cfg) {
    lattice.require_complete("basic level similarity");
    const FormalContext& ctx = lattice.context();
    return basic_level_combination(lattice, c, cfg, [&](ConceptId id) {
        return cohesion_of(ctx, lattice[id].extent, cfg.similarity, cfg.object_aggregation);
    });
}

double predictability_factor(const FormalContext& ctx, const Concept& c) {
    const std::size_t m = ctx.attribute_count();
    const std::size_t outside = m - c.intent.count();
    if (outside == 0) return 1.0;
    const double a = static_cast<double>(c.extent.count());
    double entropy = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
        if (c.intent.test(y)) continue;
        const std::size_t hit = c.extent.intersection_count(ctx.column(y));
        if (hit == 0) continue;
        const double q = static_cast<double>(hit) / a;
        entropy -= q * std::log2(q);
    }
    return 1.0 - entropy / static_cast<double>(outside);
}

double predictability(const ConceptLattice& lattice, ConceptId c, const SimilarityConfig& cfg) {
    lattice.require_complete("predictability");
    const FormalContext& ctx = lattice.context();
    return basic_level_combination(lattice, c, cfg,
                                   [&](ConceptId id) { return predictability_factor(ctx, lattice[id]); });
}

BasicLevelStats cv_cfc_cu(const FormalContext& ctx, const Concept& c, CuForm form) {
    BasicLevelStats out;
    const double a = static_cast<double>(c.extent.count());
    const double n = static_cast<double>(ctx.object_count());
    double cu_sum = 0.0;
    for (std::size_t y = 0; y < ctx.attribute_count(); ++y) {
        const double col = static_cast<double>(ctx.column(y).count());
        if (col == 0.0) continue;
        const double hit = static_cast<double>(c.extent.intersection_count(ctx.column(y)));
        if (c.intent.test(y)) out.cv += a / col;
        if (a > 0.0) out.cfc += (hit / col) * (hit / a);
        double share = hit / col;
        if (form == CuForm::kStandard) share = a > 0.0 ? hit / a : 0.0;
        cu_sum += share * share - (col / n) * (col / n);
    }
    out.cu = (a / n) * cu_sum;
    return out;
}

// ---------------------------------------------------------------------------

struct LatticeAnalysis::Impl {
    std::vector<std::vector<ConceptId>> down;
    bool down_ready = false;
    std::optional<std::vector<double>> stability;
    std::optional<std::vector<double>> lstab;
    std::optional<std::vector<std::vector<double>>> levels;
    std::optional<std::vector<StabilityBounds>> bounds;
    std::map<std::pair<int, int>, std::vector<double>> cohesion;
    std::optional<std::vector<double>> predictability;
    std::optional<std::vector<double>> monocle;
    std::optional<std::vector<double>> probability;
};

LatticeAnalysis::LatticeAnalysis(const ConceptLattice& lattice)
    : lattice_(lattice), impl_(std::make_unique<Impl>()) {}

LatticeAnalysis::~LatticeAnalysis() = default;

std::span<const ConceptId> LatticeAnalysis::strict_descendants(ConceptId c) {
    if (!impl_->down_ready) {
        const std::size_t n = lattice_.size();
        impl_->down.assign(n, {});
        std::vector<std::size_t> mark(n, n);
        std::vector<ConceptId> stack;
        for (ConceptId x = 0; x < n; ++x) {
            auto& out = impl_->down[x];
            stack.assign(1, x);
            mark[x] = x;
            while (!stack.empty()) {
                const ConceptId k = stack.back();
                stack.pop_back();
                for (ConceptId d : lattice_.lower_neighbors(k)) {
                    if (mark[d] == x) continue;
                    mark[d] = x;
                    out.push_back(d);
                    stack.push_back(d);
                }
            }
            std::sort(out.begin(), out.end());
        }
        impl_->down_ready = true;
    }
    return impl_->down.at(c);
}

namespace {

template <class Int>
void sigma_pass(LatticeAnalysis& an, const ConceptLattice& lat, std::vector<double>& stab,
                std::vector<double>& lstab) {
    const std::size_t count = lat.size();
    std::vector<Int> sigma(count);
    stab.assign(count, 0.0);
    lstab.assign(count, 0.0);
    for (std::size_t i = count; i-- > 0;) {
        const std::size_t n = extent_size(lat, i);
        Int s = Int(1) << n;
        for (ConceptId d : an.strict_descendants(i)) s -= sigma[d];
        if (s <= 0) throw InvariantError("non-positive stability count");
        stab[i] = std::ldexp(to_double(s), -static_cast<int>(n));
        lstab[i] = lstab_of(s, n);
        sigma[i] = std::move(s);
    }
}

template <class Int>
std::vector<std::vector<double>> level_pass(LatticeAnalysis& an, const ConceptLattice& lat) {
    const std::size_t count = lat.size();
    const auto binom = pascal<Int>(lat.context().object_count());
    std::vector<std::vector<Int>> poly(count);
    std::vector<std::vector<double>> out(count);
    for (std::size_t i = count; i-- > 0;) {
        const std::size_t n = extent_size(lat, i);
        std::vector<Int> p = binom[n];
        for (ConceptId d : an.strict_descendants(i)) {
            const auto& q = poly[d];
            for (std::size_t j = 0; j < q.size(); ++j) p[j] -= q[j];
        }
        if (n >= 3) {
            out[i].resize(n - 2);
            for (std::size_t j = 2; j <= n - 1; ++j)
                out[i][j - 2] = to_double(p[j]) / to_double(binom[n][j]);
        }
        poly[i] = std::move(p);
    }
    return out;
}

}  // namespace

const std::vector<double>& LatticeAnalysis::stability() {
    if (!impl_->stability) {
        lattice_.require_complete("exact stability");
        std::vector<double> s, l;
        if (lattice_.context().object_count() <= kWideLimit)
            sigma_pass<Wide>(*this, lattice_, s, l);
        else
            sigma_pass<BigInt>(*this, lattice_, s, l);
        impl_->stability = std::move(s);
        impl_->lstab = std::move(l);
    }
    return *impl_->stability;
}

const std::vector<double>& LatticeAnalysis::lstab() {
    stability();
    return *impl_->lstab;
}

std::vector<double> LatticeAnalysis::robustness(double alpha) {
    require_probability(alpha, "alpha");
    lattice_.require_complete("robustness");
    const std::size_t count = lattice_.size();
    std::vector<long double> power(lattice_.context().object_count() + 1, 1.0L);
    for (std::size_t k = 1; k < power.size(); ++k) power[k] = power[k - 1] * (1.0L - alpha);
    std::vector<long double> r(count, 0.0L);
    for (std::size_t i = count; i-- > 0;) {
        const std::size_t n = extent_size(lattice_, i);
        long double v = 1.0L;
        for (ConceptId d : strict_descendants(i)) v -= power[n - extent_size(lattice_, d)] * r[d];
        r[i] = v;
    }
    return std::vector<double>(r.begin(), r.end());
}

const std::vector<std::vector<double>>& LatticeAnalysis::level_values() {
    if (!impl_->levels) {
        lattice_.require_complete("level-wise stability");
        if (lattice_.context().object_count() <= kWideLimit)
            impl_->levels = level_pass<Wide>(*this, lattice_);
        else
            impl_->levels = level_pass<BigInt>(*this, lattice_);
    }
    return *impl_->levels;
}

const std::vector<StabilityBounds>& LatticeAnalysis::bounds() {
    if (!impl_->bounds) {
        const auto& ls = lstab();
        std::vector<StabilityBounds> out(lattice_.size());
        for (ConceptId c = 0; c < lattice_.size(); ++c)
            out[c] = compute_bounds(lattice_, c, ls[c], strict_descendants(c));
        impl_->bounds = std::move(out);
    }
    return *impl_->bounds;
}

const std::vector<double>& LatticeAnalysis::cohesion(SimilarityKind kind, NeighborhoodAggregation aggregation) {
    const auto key = std::make_pair(static_cast<int>(kind), static_cast<int>(aggregation));
    auto it = impl_->cohesion.find(key);
    if (it == impl_->cohesion.end()) {
        std::vector<double> out(lattice_.size());
        for (ConceptId c = 0; c < lattice_.size(); ++c)
            out[c] = cohesion_of(lattice_.context(), lattice_[c].extent, kind, aggregation);
        it = impl_->cohesion.emplace(key, std::move(out)).first;
    }
    return it->second;
}

const std::vector<double>& LatticeAnalysis::predictability_factors() {
    if (!impl_->predictability) {
        std::vector<double> out(lattice_.size());
        for (ConceptId c = 0; c < lattice_.size(); ++c)
            out[c] = predictability_factor(lattice_.context(), lattice_[c]);
        impl_->predictability = std::move(out);
    }
    return *impl_->predictability;
}

std::vector<double> LatticeAnalysis::basic_level(const std::vector<double>& factor, const SimilarityConfig& cfg) {
    lattice_.require_complete("basic level indices");
    std::vector<double> out(lattice_.size());
    for (ConceptId c = 0; c < lattice_.size(); ++c)
        out[c] = basic_level_combination(lattice_, c, cfg, [&](ConceptId id) { return factor[id]; });
    return out;
}

const std::vector<double>& LatticeAnalysis::monocle() {
    if (!impl_->monocle) {
        const FormalContext& ctx = lattice_.context();
        const double total = static_cast<double>(lattice_.size());
        std::vector<double> with_g(ctx.object_count(), 0.0), with_m(ctx.attribute_count(), 0.0);
        for (const Concept& c : lattice_.concepts()) {
            c.extent.for_each([&](std::size_t g) { with_g[g] += 1.0; });
            c.intent.for_each([&](std::size_t m) { with_m[m] += 1.0; });
        }
        std::vector<double> out(lattice_.size());
        for (const Concept& c : lattice_.concepts()) {
            double left = static_cast<double>(c.extent.count());
            double right = static_cast<double>(c.intent.count());
            c.extent.for_each([&](std::size_t g) { left += total - with_g[g]; });
            c.intent.for_each([&](std::size_t m) { right += total - with_m[m]; });
            out[c.id] = left * right;
        }
        impl_->monocle = std::move(out);
    }
    return *impl_->monocle;
}

const std::vector<double>& LatticeAnalysis::concept_probability() {
    if (!impl_->probability) {
        const auto miss = miss_table(lattice_.context());
        std::vector<double> out(lattice_.size());
        for (const Concept& c : lattice_.concepts()) out[c.id] = probability_with(lattice_.context(), c.intent, miss);
        impl_->probability = std::move(out);
    }
    return *impl_->probability;
}

}  // namespace cg
