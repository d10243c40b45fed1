#include "reltime/induction.hpp"

#include "helpers.hpp"
#include "reltime/corpus.hpp"
#include "reltime/errors.hpp"
#include "reltime/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace reltime;
using namespace reltime::testutil;

namespace {

InductionPoint random_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    InductionPoint p;
    for (std::size_t k = 0; k < n; ++k) {
        p.u_begin.push_back(u(rng));
        p.u_duration.push_back(u(rng));
    }
    p.coeff = 1.0 + 0.3 * u(rng);
    return p;
}

std::vector<PairObservation> random_observations(std::mt19937_64& rng, std::size_t n) {
    std::vector<PairObservation> obs;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        PairObservation o;
        o.i = k;
        o.j = k + 1;
        o.target = random_timeline(rng);
        o.gold_durations = {duration_class_from_rank(static_cast<int>(k) % 11),
                            duration_class_from_rank(static_cast<int>(k + 3) % 11)};
        obs.push_back(o);
    }
    return obs;
}

}  // namespace

TEST_CASE("project_pair matches the hand-normalized projections") {
    DocumentTimeline t;
    t.entries = {{0, 1}, {1, 1}};
    const auto a = project_pair(t, 0, 1);
    CHECK(a == RelativeTimeline{0, 0.5, 0.5, 1});

    t.entries = {{0, 2}, {0.5, 1}};
    const auto b = project_pair(t, 0, 1);
    CHECK(b == RelativeTimeline{0, 1, 0.25, 0.75});

    t.entries = {{0, 1}, {0, 1}};
    const auto c = project_pair(t, 0, 1);
    CHECK(c == RelativeTimeline{0, 1, 0, 1});

    CHECK_THROWS_AS(project_pair(t, 0, 5), DomainError);
}

TEST_CASE("a single observation is satisfied exactly") {
    PairObservation o;
    o.i = 0;
    o.j = 1;
    o.target = {0, 0.25, 0.5, 1};
    const std::vector<PairObservation> obs{o};
    const auto result = induce(obs, 2);
    CHECK(result.diagnostics.final_loss <= 1e-6);
    CHECK(result.diagnostics.pair_residuals[0] <= 1e-6);
    CHECK(result.diagnostics.converged);
    const auto projected = project_pair(result.timeline, 0, 1);
    CHECK(relation_loss(o.target, projected) <= 1e-6);
}

TEST_CASE("noiseless synthetic documents are recovered exactly") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SynthConfig cfg;
        cfg.n_predicates = 6;
        cfg.noise_sd = 0.0;
        cfg.seed = seed;
        const auto doc = synth_document(cfg);
        const auto result = induce(doc.observations, cfg.n_predicates);
        double mean_residual = 0.0;
        for (double r : result.diagnostics.pair_residuals) mean_residual += r;
        mean_residual /= static_cast<double>(result.diagnostics.pair_residuals.size());
        CHECK(mean_residual <= 1e-3);
        const auto agreement = compare_timelines(result.timeline, doc.truth);
        CHECK(agreement.begin_rho == 1.0);

        double min_begin = result.timeline.entries.front().begin;
        for (const auto& e : result.timeline.entries) {
            min_begin = std::min(min_begin, e.begin);
            CHECK(e.duration > 0.0);
        }
        CHECK(min_begin == 0.0);
        CHECK(is_valid(result.timeline));
    }
}

TEST_CASE("induction is deterministic for a fixed seed and config") {
    SynthConfig cfg;
    cfg.n_predicates = 5;
    cfg.noise_sd = 0.05;
    cfg.seed = 9;
    const auto doc = synth_document(cfg);
    InductionConfig ic;
    ic.max_iters = 400;
    const auto a = induce(doc.observations, cfg.n_predicates, ic);
    const auto b = induce(doc.observations, cfg.n_predicates, ic);
    REQUIRE(a.timeline.size() == b.timeline.size());
    for (std::size_t k = 0; k < a.timeline.size(); ++k) {
        CHECK(a.timeline.entries[k].begin == b.timeline.entries[k].begin);
        CHECK(a.timeline.entries[k].duration == b.timeline.entries[k].duration);
    }
    CHECK(a.diagnostics.final_loss == b.diagnostics.final_loss);
    CHECK(a.diagnostics.iterations == b.diagnostics.iterations);
}

TEST_CASE("the objective trace never increases") {
    SynthConfig cfg;
    cfg.n_predicates = 6;
    cfg.noise_sd = 0.1;
    cfg.seed = 12;
    const auto doc = synth_document(cfg);
    InductionConfig ic;
    ic.max_iters = 300;
    ic.duration_weight = 0.25;
    const auto result = induce(doc.observations, cfg.n_predicates, ic);
    const auto& trace = result.diagnostics.objective_trace;
    REQUIRE(trace.size() >= 2);
    for (std::size_t k = 1; k < trace.size(); ++k) {
        CHECK(trace[k] <= trace[k - 1]);
    }
}

TEST_CASE("disconnected observation graphs are rejected") {
    PairObservation a, b;
    a.i = 0;
    a.j = 1;
    a.target = {0, 0.5, 0.5, 1};
    b.i = 2;
    b.j = 3;
    b.target = {0, 0.5, 0.5, 1};
    const std::vector<PairObservation> obs{a, b};
    CHECK_THROWS_AS(induce(obs, 4), NotConnected);
    CHECK_THROWS_AS(induce(std::vector<PairObservation>{a}, 3), NotConnected);
    CHECK_THROWS_AS(induce({}, 2), NotConnected);
}

TEST_CASE("finite differences back the analytic gradient") {
    std::mt19937_64 rng(41);
    int accepted = 0;
    while (accepted < 25) {
        const std::size_t n = 3 + accepted % 4;
        const auto obs = random_observations(rng, n);
        const auto point = random_point(rng, n);
        double deviation = 0.0;
        try {
            deviation = gradient_check(obs, point, 0.7);
        } catch (const KinkNearby&) {
            continue;
        }
        ++accepted;
        CHECK(deviation <= 1e-4);
    }
}

TEST_CASE("gradient_check rejects points at kinks and ties") {
    PairObservation o;
    o.i = 0;
    o.j = 1;
    o.target = {0, 0.5, 0.5, 1};
    const std::vector<PairObservation> obs{o};
    // identical intervals tie the min and max selections
    InductionPoint tied;
    tied.u_begin = {0.3, 0.3};
    tied.u_duration = {0.4, 0.4};
    CHECK_THROWS_AS(gradient_check(obs, tied, 0.0), KinkNearby);
}

TEST_CASE("the finite-difference harness itself is sound") {
    // smooth quadratic: exact gradient agrees to high precision
    const auto quadratic = [](const std::vector<double>& x) {
        double f = 0.0;
        for (double v : x) f += v * v;
        return f;
    };
    std::vector<double> x{0.3, -1.2, 2.0};
    std::vector<double> grad{0.6, -2.4, 4.0};
    CHECK(max_fd_deviation(quadratic, grad, x) <= 1e-6);

    // negative control: a broken gradient is caught
    std::vector<double> broken = grad;
    broken[1] += 0.5;
    CHECK(max_fd_deviation(quadratic, broken, x) > 1e-2);
}

TEST_CASE("a broken induction gradient is detectable") {
    std::mt19937_64 rng(42);
    const std::size_t n = 4;
    for (;;) {
        const auto obs = random_observations(rng, n);
        const auto point = random_point(rng, n);
        try {
            (void)gradient_check(obs, point, 0.5);
        } catch (const KinkNearby&) {
            continue;
        }
        auto grad = induction_gradient(obs, point, 0.5);
        grad.u_begin[0] += 0.25;  // sabotage
        std::vector<double> flat;
        flat.insert(flat.end(), point.u_begin.begin(), point.u_begin.end());
        flat.insert(flat.end(), point.u_duration.begin(), point.u_duration.end());
        flat.push_back(point.coeff);
        std::vector<double> flat_grad;
        flat_grad.insert(flat_grad.end(), grad.u_begin.begin(), grad.u_begin.end());
        flat_grad.insert(flat_grad.end(), grad.u_duration.begin(), grad.u_duration.end());
        flat_grad.push_back(grad.coeff);
        const auto objective = [&](const std::vector<double>& v) {
            InductionPoint p;
            p.u_begin.assign(v.begin(), v.begin() + n);
            p.u_duration.assign(v.begin() + n, v.begin() + 2 * n);
            p.coeff = v.back();
            return induction_objective(obs, p, 0.5);
        };
        CHECK(max_fd_deviation(objective, flat_grad, flat) > 1e-2);
        break;
    }
}

TEST_CASE("duration penalty pulls induced durations toward the gold classes") {
    // two predicates, one observation with maximally different gold classes
    PairObservation o;
    o.i = 0;
    o.j = 1;
    o.target = {0, 0.5, 0.25, 1};
    o.gold_durations = {DurationClass::Seconds, DurationClass::Centuries};
    const std::vector<PairObservation> obs{o};
    InductionConfig cfg;
    cfg.duration_weight = 5.0;
    cfg.max_iters = 3000;
    const auto result = induce(obs, 2, cfg);
    CHECK(result.timeline.entries[0].duration < result.timeline.entries[1].duration);
    CHECK(std::isfinite(result.diagnostics.duration_coeff));
}

TEST_CASE("the induction duration term matches the duration module's NLL") {
    PairObservation o;
    o.i = 0;
    o.j = 1;
    o.target = {0, 0.5, 0.25, 1};
    o.gold_durations = {DurationClass::Minutes, DurationClass::Decades};
    const std::vector<PairObservation> obs{o};
    InductionPoint point;
    point.u_begin = {0.2, 0.6};
    point.u_duration = {-0.4, 1.1};
    point.coeff = 0.8;
    const double with = induction_objective(obs, point, 1.0);
    const double without = induction_objective(obs, point, 0.0);
    double expected = 0.0;
    const std::pair<double, DurationClass> ends[2] = {
        {softplus(point.u_duration[0]), DurationClass::Minutes},
        {softplus(point.u_duration[1]), DurationClass::Decades}};
    for (const auto& [dur, cls] : ends) {
        expected += duration_nll(
            binomial_distribution(pi_from_absolute_duration(dur, point.coeff)), cls);
    }
    CHECK(with - without == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("the relation objective ignores global rescaling of the timeline") {
    std::mt19937_64 rng(44);
    const std::size_t n = 4;
    const auto obs = random_observations(rng, n);
    const auto point = random_point(rng, n);
    for (double factor : {2.0, 0.25, 17.0}) {
        InductionPoint scaled;
        for (std::size_t k = 0; k < n; ++k) {
            scaled.u_begin.push_back(softplus_inverse(factor * softplus(point.u_begin[k])));
            scaled.u_duration.push_back(
                softplus_inverse(factor * softplus(point.u_duration[k])));
        }
        scaled.coeff = point.coeff;
        CHECK(induction_objective(obs, scaled, 0.0) ==
              doctest::Approx(induction_objective(obs, point, 0.0)).epsilon(1e-10));
    }
}

TEST_CASE("timeline comparison") {
    DocumentTimeline a;
    a.entries = {{0, 1}, {2, 3}, {5, 1}};
    CHECK(compare_timelines(a, a).begin_rho == 1.0);
    CHECK(compare_timelines(a, a).duration_rho == 1.0);

    DocumentTimeline b;
    b.entries = {{5, 1}, {2, 3}, {0, 1}};
    CHECK(compare_timelines(a, b).begin_rho == -1.0);

    DocumentTimeline c;
    c.entries = {{0, 1}, {2, 3}};
    CHECK_THROWS_AS(compare_timelines(a, c), DomainError);
}
