#include "reltime/induction.hpp"

#include "reltime/errors.hpp"
#include "reltime/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

namespace reltime {

namespace {

// tau layout per observation: [b_i, b_i + d_i, b_j, b_j + d_j].
// The four relation terms compare tau[kAlpha[t]] - tau[kBeta[t]], matching
// relation_terms(): b1-b2, e1-b2, e2-b1, e1-e2.
constexpr int kAlpha[4] = {0, 1, 3, 1};
constexpr int kBeta[4] = {2, 2, 0, 3};

constexpr int kMaxHalvings = 60;

const double kLogChoose10[kDurationClasses] = {
    0.0,
    2.302585092994046,   // log 10
    3.8066624897703196,  // log 45
    4.787491742782046,   // log 120
    5.347107530717468,   // log 210
    5.529429087511423,   // log 252
    5.347107530717468,
    4.787491742782046,
    3.8066624897703196,
    2.302585092994046,
    0.0,
};

double sign(double x) { return (x > 0.0) - (x < 0.0); }

struct Flat {
    std::vector<double> v;  // [u_begin(0..n), u_duration(0..n), coeff]
    std::size_t n = 0;

    double& ub(std::size_t k) { return v[k]; }
    double& ud(std::size_t k) { return v[n + k]; }
    double& coeff() { return v[2 * n]; }
    double ub(std::size_t k) const { return v[k]; }
    double ud(std::size_t k) const { return v[n + k]; }
    double coeff() const { return v[2 * n]; }
};

Flat to_flat(const InductionPoint& p) {
    if (p.u_begin.size() != p.u_duration.size()) {
        throw DomainError("induction point: begin/duration size mismatch");
    }
    Flat f;
    f.n = p.u_begin.size();
    f.v.resize(2 * f.n + 1);
    std::copy(p.u_begin.begin(), p.u_begin.end(), f.v.begin());
    std::copy(p.u_duration.begin(), p.u_duration.end(), f.v.begin() + f.n);
    f.coeff() = p.coeff;
    return f;
}

InductionPoint from_flat(const Flat& f) {
    InductionPoint p;
    p.u_begin.assign(f.v.begin(), f.v.begin() + f.n);
    p.u_duration.assign(f.v.begin() + f.n, f.v.begin() + 2 * f.n);
    p.coeff = f.coeff();
    return p;
}

void check_observations(std::span<const PairObservation> obs, std::size_t n) {
    for (const auto& o : obs) {
        if (o.i >= n || o.j >= n) {
            throw DomainError("observation index out of range");
        }
        if (o.i == o.j) {
            throw DomainError("observation must pair two distinct predicates");
        }
        if (!(o.weight >= 0.0) || !std::isfinite(o.weight)) {
            throw DomainError("observation weight must be finite and >= 0");
        }
        if (!is_valid(o.target)) {
            throw DomainError("observation target is not a valid relative timeline");
        }
    }
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

void check_connected(std::span<const PairObservation> obs, std::size_t n) {
    UnionFind uf(n);
    for (const auto& o : obs) uf.unite(o.i, o.j);
    const std::size_t root = uf.find(0);
    for (std::size_t k = 1; k < n; ++k) {
        if (uf.find(k) != root) {
            throw NotConnected("predicate " + std::to_string(k) +
                               " is not connected to predicate 0 by any observation");
        }
    }
}

std::array<double, 4> tau_of(const Flat& f, const PairObservation& o) {
    const double bi = softplus(f.ub(o.i));
    const double di = softplus(f.ud(o.i));
    const double bj = softplus(f.ub(o.j));
    const double dj = softplus(f.ud(o.j));
    return {bi, bi + di, bj, bj + dj};
}

double objective_flat(std::span<const PairObservation> obs, const Flat& f, double lambda) {
    double total = 0.0;
    for (const auto& o : obs) {
        const auto tau = tau_of(f, o);
        const auto lo = std::min_element(tau.begin(), tau.end());
        const auto hi = std::max_element(tau.begin(), tau.end());
        const double range = *hi - *lo;
        if (!(range > 0.0)) {
            throw DegenerateSliders("projected pair has zero range");
        }
        const auto g = relation_terms(o.target);
        for (int t = 0; t < 4; ++t) {
            const double p = (tau[kAlpha[t]] - tau[kBeta[t]]) / range;
            total += o.weight * std::abs(p - g[t]);
        }
        if (lambda > 0.0 && o.gold_durations) {
            const std::pair<std::size_t, DurationClass> ends[2] = {
                {o.i, o.gold_durations->first}, {o.j, o.gold_durations->second}};
            for (const auto& [k, cls] : ends) {
                const double z = f.coeff() * std::log(softplus(f.ud(k)));
                // -log p_c under the binomial model, written with softplus
                // so it stays smooth and finite at saturation.
                const double g_rank = rank(cls);
                total += lambda * (-kLogChoose10[static_cast<int>(g_rank)] +
                                   g_rank * softplus(-z) +
                                   (kMaxDurationRank - g_rank) * softplus(z));
            }
        }
    }
    return total;
}

std::vector<double> gradient_flat(std::span<const PairObservation> obs, const Flat& f,
                                  double lambda) {
    std::vector<double> grad(f.v.size(), 0.0);
    Flat g;
    g.v = std::move(grad);
    g.n = f.n;
    for (const auto& o : obs) {
        const auto tau = tau_of(f, o);
        const std::size_t amin = static_cast<std::size_t>(
            std::min_element(tau.begin(), tau.end()) - tau.begin());
        const std::size_t amax = static_cast<std::size_t>(
            std::max_element(tau.begin(), tau.end()) - tau.begin());
        const double range = tau[amax] - tau[amin];
        if (!(range > 0.0)) {
            throw DegenerateSliders("projected pair has zero range");
        }
        const auto gt = relation_terms(o.target);
        std::array<double, 4> dtau{};
        for (int t = 0; t < 4; ++t) {
            const double num = tau[kAlpha[t]] - tau[kBeta[t]];
            const double resid = num / range - gt[t];
            const double s = sign(resid) * o.weight;
            if (s == 0.0) continue;
            dtau[kAlpha[t]] += s / range;
            dtau[kBeta[t]] -= s / range;
            const double through_range = s * num / (range * range);
            dtau[amax] -= through_range;
            dtau[amin] += through_range;
        }
        g.ub(o.i) += (dtau[0] + dtau[1]) * logistic(f.ub(o.i));
        g.ud(o.i) += dtau[1] * logistic(f.ud(o.i));
        g.ub(o.j) += (dtau[2] + dtau[3]) * logistic(f.ub(o.j));
        g.ud(o.j) += dtau[3] * logistic(f.ud(o.j));

        if (lambda > 0.0 && o.gold_durations) {
            const std::pair<std::size_t, DurationClass> ends[2] = {
                {o.i, o.gold_durations->first}, {o.j, o.gold_durations->second}};
            for (const auto& [k, cls] : ends) {
                const double dur = softplus(f.ud(k));
                const double z = f.coeff() * std::log(dur);
                const double pi = logistic(z);
                const double dz = lambda * (kMaxDurationRank * pi - rank(cls));
                g.coeff() += dz * std::log(dur);
                g.ud(k) += dz * f.coeff() / dur * logistic(f.ud(k));
            }
        }
    }
    return std::move(g.v);
}

// Reconstruct absolute intervals by propagating observation targets over a
// spanning tree of the pair graph. Exact for noiseless targets: each edge
// fixes the unknown interval by the unique affine map that sends the known
// interval to its normalized position in the target.
std::vector<std::pair<double, double>> spanning_tree_init(
    std::span<const PairObservation> obs, std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> edges_at(n);
    for (std::size_t e = 0; e < obs.size(); ++e) {
        edges_at[obs[e].i].push_back(e);
        edges_at[obs[e].j].push_back(e);
    }
    std::vector<std::pair<double, double>> interval(n, {0.0, 0.0});
    std::vector<bool> known(n, false);
    std::mt19937_64 rng(seed);

    for (std::size_t start = 0; start < n; ++start) {
        if (known[start]) continue;
        interval[start] = {0.0, 1.0};
        if (start > 0) {
            // Secondary components only arise when scale-free edges were
            // skipped; seeded placement keeps the run deterministic.
            std::uniform_real_distribution<double> u(0.0, 1.0);
            interval[start].first = u(rng);
            interval[start].second = interval[start].first + 1.0;
        }
        known[start] = true;
        std::deque<std::size_t> queue{start};
        while (!queue.empty()) {
            const std::size_t at = queue.front();
            queue.pop_front();
            for (std::size_t e : edges_at[at]) {
                const auto& o = obs[e];
                const std::size_t other = o.i == at ? o.j : o.i;
                if (known[other]) continue;
                const double kb = o.i == at ? o.target.b1 : o.target.b2;
                const double ke = o.i == at ? o.target.e1 : o.target.e2;
                const double ob = o.i == at ? o.target.b2 : o.target.b1;
                const double oe = o.i == at ? o.target.e2 : o.target.e1;
                if (ke - kb < 1e-9) continue;  // zero span fixes no scale
                const auto [kb_abs, ke_abs] = interval[at];
                const double scale = (ke_abs - kb_abs) / (ke - kb);
                const double shift = kb_abs - kb * scale;
                double b = shift + ob * scale;
                double en = shift + oe * scale;
                if (en - b < 1e-9 * scale) en = b + 1e-9 * scale;
                interval[other] = {b, en};
                known[other] = true;
                queue.push_back(other);
            }
        }
    }
    return interval;
}

Flat initial_point(std::span<const PairObservation> obs, std::size_t n, std::uint64_t seed) {
    auto interval = spanning_tree_init(obs, n, seed);
    double lo = interval[0].first, hi = interval[0].second;
    for (const auto& [b, e] : interval) {
        lo = std::min(lo, b);
        hi = std::max(hi, e);
    }
    const double span = hi - lo;
    Flat f;
    f.n = n;
    f.v.assign(2 * n + 1, 0.0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jitter(-1e-6, 1e-6);
    for (std::size_t k = 0; k < n; ++k) {
        // Land in [0.5, 1.5] where the softplus inverse is well conditioned.
        // The jitter keeps the start off the exact L1 kinks: the tree init
        // zeroes most residuals, and sign(0) = 0 would freeze the descent
        // right there.
        const double begin = 0.5 + (interval[k].first - lo) / span;
        const double dur = std::max((interval[k].second - interval[k].first) / span, 1e-9);
        f.ub(k) = softplus_inverse(begin) + jitter(rng);
        f.ud(k) = softplus_inverse(dur) + jitter(rng);
    }
    f.coeff() = 1.0;
    return f;
}

}  // namespace

double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double softplus_inverse(double y) {
    if (!(y > 0.0)) {
        throw DomainError("softplus_inverse: argument must be > 0");
    }
    if (y > 30.0) return y;  // exp(-y) below double resolution
    return std::log(std::expm1(y));
}

bool is_valid(const DocumentTimeline& t, double eps) {
    if (t.entries.empty()) return false;
    double min_begin = t.entries.front().begin;
    for (const auto& e : t.entries) {
        if (!std::isfinite(e.begin) || !std::isfinite(e.duration)) return false;
        if (e.begin < -eps || e.duration <= 0.0) return false;
        min_begin = std::min(min_begin, e.begin);
    }
    return std::abs(min_begin) <= eps;
}

RelativeTimeline project_pair(const DocumentTimeline& t, std::size_t i, std::size_t j) {
    if (i >= t.size() || j >= t.size()) {
        throw DomainError("project_pair: predicate index out of range");
    }
    const auto& a = t.entries[i];
    const auto& b = t.entries[j];
    return normalize_sliders(
        {a.begin, a.begin + a.duration, b.begin, b.begin + b.duration});
}

double induction_objective(std::span<const PairObservation> observations,
                           const InductionPoint& point, double duration_weight) {
    return objective_flat(observations, to_flat(point), duration_weight);
}

InductionPoint induction_gradient(std::span<const PairObservation> observations,
                                  const InductionPoint& point, double duration_weight) {
    Flat f = to_flat(point);
    Flat g;
    g.v = gradient_flat(observations, f, duration_weight);
    g.n = f.n;
    return from_flat(g);
}

InductionResult induce(std::span<const PairObservation> observations,
                       std::size_t n_predicates, const InductionConfig& cfg) {
    if (n_predicates == 0) {
        throw DomainError("induce: need at least one predicate");
    }
    if (cfg.max_iters < 1 || !(cfg.step_size > 0.0) || !(cfg.tolerance > 0.0) ||
        !(cfg.duration_weight >= 0.0)) {
        throw DomainError("induce: invalid config");
    }
    check_observations(observations, n_predicates);

    InductionResult result;
    if (observations.empty()) {
        if (n_predicates > 1) {
            throw NotConnected("no observations for a multi-predicate document");
        }
        result.timeline.entries = {{0.0, 1.0}};
        result.diagnostics.converged = true;
        return result;
    }
    check_connected(observations, n_predicates);

    const double lambda = cfg.duration_weight;
    Flat x = initial_point(observations, n_predicates, cfg.seed);
    double fx = objective_flat(observations, x, lambda);
    result.diagnostics.objective_trace.push_back(fx);

    // Cyclic per-coordinate line search. The subgradient direction can hit
    // a kink wall where no step along -grad improves even though single
    // coordinates still can; this runs at stall points before giving up.
    const auto coordinate_sweep = [&]() {
        const double before = fx;
        for (std::size_t k = 0; k < x.v.size(); ++k) {
            double s = cfg.step_size;
            const double keep = x.v[k];
            for (int h = 0; h <= kMaxHalvings; ++h) {
                bool moved = false;
                for (double candidate : {keep + s, keep - s}) {
                    x.v[k] = candidate;
                    const double ft = objective_flat(observations, x, lambda);
                    if (ft < fx) {
                        fx = ft;
                        result.diagnostics.objective_trace.push_back(fx);
                        moved = true;
                        break;
                    }
                }
                if (moved) break;
                x.v[k] = keep;
                s /= 2.0;
            }
        }
        return (before - fx) / std::max(1.0, std::abs(before));
    };

    // Tiny accepted steps near L1 kinks do not mean the descent is done, so
    // convergence needs a run of consecutive sub-tolerance improvements,
    // and a final coordinate sweep must fail to make progress too.
    constexpr int kPatience = 5;
    int small_streak = 0;
    int iterations = 0;
    bool converged = false;
    while (iterations < cfg.max_iters && !converged) {
        ++iterations;
        const auto grad = gradient_flat(observations, x, lambda);
        double gnorm2 = 0.0;
        for (double v : grad) gnorm2 += v * v;
        bool stalled = gnorm2 == 0.0;
        if (!stalled) {
            bool accepted = false;
            double s = cfg.step_size;
            Flat trial = x;
            for (int h = 0; h <= kMaxHalvings; ++h) {
                for (std::size_t k = 0; k < x.v.size(); ++k) {
                    trial.v[k] = x.v[k] - s * grad[k];
                }
                const double ft = objective_flat(observations, trial, lambda);
                if (ft < fx) {
                    const double rel = (fx - ft) / std::max(1.0, std::abs(fx));
                    x.v = trial.v;
                    fx = ft;
                    result.diagnostics.objective_trace.push_back(fx);
                    small_streak = rel < cfg.tolerance ? small_streak + 1 : 0;
                    accepted = true;
                    break;
                }
                s /= 2.0;
            }
            stalled = !accepted || small_streak >= kPatience;
        }
        if (stalled) {
            if (coordinate_sweep() < cfg.tolerance) {
                converged = true;
            } else {
                small_streak = 0;
            }
        }
    }

    DocumentTimeline timeline;
    timeline.entries.resize(n_predicates);
    double min_begin = softplus(x.ub(0));
    for (std::size_t k = 0; k < n_predicates; ++k) {
        timeline.entries[k] = {softplus(x.ub(k)), softplus(x.ud(k))};
        min_begin = std::min(min_begin, timeline.entries[k].begin);
    }
    for (auto& e : timeline.entries) e.begin -= min_begin;

    result.timeline = std::move(timeline);
    result.diagnostics.final_loss = fx;
    result.diagnostics.iterations = iterations;
    result.diagnostics.converged = converged;
    result.diagnostics.duration_coeff = x.coeff();
    result.diagnostics.pair_residuals.reserve(observations.size());
    for (const auto& o : observations) {
        result.diagnostics.pair_residuals.push_back(
            relation_loss(o.target, project_pair(result.timeline, o.i, o.j)));
    }
    return result;
}

double gradient_check(std::span<const PairObservation> observations,
                      const InductionPoint& point, double duration_weight,
                      double step, double margin) {
    Flat f = to_flat(point);
    check_observations(observations, f.n);

    for (const auto& o : observations) {
        const auto tau = tau_of(f, o);
        auto sorted = tau;
        std::sort(sorted.begin(), sorted.end());
        if (sorted[1] - sorted[0] < margin || sorted[3] - sorted[2] < margin) {
            throw KinkNearby("min/max selection within margin of a tie");
        }
        const double range = sorted[3] - sorted[0];
        const auto g = relation_terms(o.target);
        for (int t = 0; t < 4; ++t) {
            const double resid = (tau[kAlpha[t]] - tau[kBeta[t]]) / range - g[t];
            if (std::abs(resid) < margin) {
                throw KinkNearby("L1 residual within margin of its kink");
            }
        }
    }

    const auto analytic = gradient_flat(observations, f, duration_weight);
    double worst = 0.0;
    Flat probe = f;
    for (std::size_t k = 0; k < f.v.size(); ++k) {
        probe.v[k] = f.v[k] + step;
        const double hi = objective_flat(observations, probe, duration_weight);
        probe.v[k] = f.v[k] - step;
        const double lo = objective_flat(observations, probe, duration_weight);
        probe.v[k] = f.v[k];
        worst = std::max(worst, std::abs(analytic[k] - (hi - lo) / (2.0 * step)));
    }
    return worst;
}

TimelineAgreement compare_timelines(const DocumentTimeline& a, const DocumentTimeline& b) {
    if (a.size() != b.size()) {
        throw DomainError("compare_timelines: predicate counts differ");
    }
    std::vector<double> ab, bb, ad, bd;
    for (const auto& e : a.entries) {
        ab.push_back(e.begin);
        ad.push_back(e.duration);
    }
    for (const auto& e : b.entries) {
        bb.push_back(e.begin);
        bd.push_back(e.duration);
    }
    return {spearman(ab, bb), spearman(ad, bd)};
}

}  // namespace reltime
