#include "reltime/metrics.hpp"

#include "reltime/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reltime {

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        // 1-based ranks; tied values share the mean rank of the block.
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

bool is_constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// R1 = 1 - MAE / MAE of the median baseline.
double r1_score(std::span<const double> gold, std::span<const double> pred,
                std::span<const double> baseline) {
    double mae = 0.0, mae_base = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        mae += std::abs(gold[i] - pred[i]);
        mae_base += std::abs(gold[i] - baseline[i]);
    }
    if (mae_base == 0.0) {
        throw DegenerateInput("r1: median baseline has zero error (constant gold)");
    }
    return 1.0 - mae / mae_base;
}

}  // namespace

std::string to_json_string(const MetricReport& report) {
    nlohmann::json j = nlohmann::json::object();
    if (report.spearman_rho) j["rho"] = *report.spearman_rho;
    if (report.mean_rank_diff) j["rank_diff"] = *report.mean_rank_diff;
    if (report.r1) j["r1"] = *report.r1;
    if (report.absolute_rho) j["absolute_rho"] = *report.absolute_rho;
    if (report.relative_rho) j["relative_rho"] = *report.relative_rho;
    return j.dump();
}

std::array<double, 4> relation_terms(const RelativeTimeline& t) {
    return {t.b1 - t.b2, t.e1 - t.b2, t.e2 - t.b1, t.e1 - t.e2};
}

double relation_loss(const RelativeTimeline& gold, const RelativeTimeline& pred) {
    const auto g = relation_terms(gold);
    const auto p = relation_terms(pred);
    double loss = 0.0;
    for (int i = 0; i < 4; ++i) loss += std::abs(g[i] - p[i]);
    return loss;
}

double total_loss(std::span<const PairLossInput> items) {
    if (items.empty()) {
        throw DomainError("total_loss: items must be nonempty");
    }
    double total = 0.0;
    for (const auto& item : items) {
        const double w_rel = item.weight_rel.value_or(1.0);
        const double w_dur1 = item.weight_dur1.value_or(1.0);
        const double w_dur2 = item.weight_dur2.value_or(1.0);
        double dur = 0.0;
        if (item.gold_durations && item.pred_duration_dists) {
            dur += w_dur1 * duration_nll(item.pred_duration_dists->first,
                                         item.gold_durations->first);
            dur += w_dur2 * duration_nll(item.pred_duration_dists->second,
                                         item.gold_durations->second);
        }
        total += dur + 2.0 * w_rel * relation_loss(item.gold, item.pred);
    }
    return total;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DomainError("spearman: length mismatch");
    }
    if (x.size() < 2) {
        throw DegenerateInput("spearman: need at least 2 observations");
    }
    if (is_constant(x) || is_constant(y)) {
        throw DegenerateInput("spearman: constant input has no rank variation");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    // Identical or exactly mirrored rank vectors short-circuit so perfect
    // (anti-)correlation comes out as an exact +/-1.
    const double mirror = static_cast<double>(rx.size() + 1);
    bool same = true, reversed = true;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        same = same && rx[i] == ry[i];
        reversed = reversed && rx[i] == mirror - ry[i];
    }
    if (same) return 1.0;
    if (reversed) return -1.0;
    return pearson(rx, ry);
}

MetricReport eval_durations(std::span<const DurationClass> gold,
                            std::span<const DurationClass> pred) {
    if (gold.size() != pred.size() || gold.empty()) {
        throw DomainError("eval_durations: lists must be nonempty and aligned");
    }
    std::vector<double> g(gold.size()), p(pred.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        g[i] = static_cast<double>(rank(gold[i]));
        p[i] = static_cast<double>(rank(pred[i]));
    }
    if (g.size() < 2 || is_constant(g)) {
        throw DegenerateInput("eval_durations: gold ranks carry no variation");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) diff += std::abs(g[i] - p[i]);

    const std::vector<double> baseline(g.size(), median(g));
    MetricReport report;
    // A constant prediction (the median baseline itself) has no rank
    // correlation; the error metrics still apply, so rho stays unset.
    if (!is_constant(p)) report.spearman_rho = spearman(g, p);
    report.mean_rank_diff = diff / static_cast<double>(g.size());
    report.r1 = r1_score(g, p, baseline);
    return report;
}

MetricReport eval_relations(std::span<const RelativeTimeline> gold,
                            std::span<const RelativeTimeline> pred) {
    if (gold.size() != pred.size() || gold.empty()) {
        throw DomainError("eval_relations: lists must be nonempty and aligned");
    }
    const std::size_t n = gold.size();
    std::vector<double> g_points, p_points;
    std::vector<double> g_terms, p_terms;
    g_points.reserve(4 * n);
    p_points.reserve(4 * n);
    g_terms.reserve(4 * n);
    p_terms.reserve(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (double v : gold[i].values()) g_points.push_back(v);
        for (double v : pred[i].values()) p_points.push_back(v);
        for (double v : relation_terms(gold[i])) g_terms.push_back(v);
        for (double v : relation_terms(pred[i])) p_terms.push_back(v);
    }
    // Per-term medians over pairs: the baseline predicts, for each of the
    // four term kinds, the gold median of that kind.
    std::vector<double> baseline(4 * n);
    for (int t = 0; t < 4; ++t) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = g_terms[4 * i + t];
        const double m = median(std::move(col));
        for (std::size_t i = 0; i < n; ++i) baseline[4 * i + t] = m;
    }
    MetricReport report;
    if (g_points.size() < 2 || is_constant(g_points)) {
        throw DegenerateInput("eval_relations: gold values carry no variation");
    }
    if (!is_constant(p_points)) report.absolute_rho = spearman(g_points, p_points);
    // Relative rho averages the per-kind Spearman across the four term
    // kinds. Pooling the kinds into one correlation instead would reward
    // any predictor for the systematic offsets between kinds (e1-b2 runs
    // positive, b1-b2 is centered), so an uninformative prediction would
    // already score around 0.25.
    double kind_sum = 0.0;
    int kinds_defined = 0;
    for (int t = 0; t < 4; ++t) {
        std::vector<double> gk(n), pk(n);
        for (std::size_t i = 0; i < n; ++i) {
            gk[i] = g_terms[4 * i + t];
            pk[i] = p_terms[4 * i + t];
        }
        if (n < 2 || is_constant(gk) || is_constant(pk)) continue;
        kind_sum += spearman(gk, pk);
        ++kinds_defined;
    }
    if (kinds_defined > 0) {
        report.relative_rho = kind_sum / static_cast<double>(kinds_defined);
    }
    report.r1 = r1_score(g_terms, p_terms, baseline);
    return report;
}

}  // namespace reltime
