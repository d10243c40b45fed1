#include "reltime/duration.hpp"

#include "reltime/errors.hpp"

#include <algorithm>
#include <cmath>

namespace reltime {

namespace {

constexpr std::array<double, kDurationClasses> kChoose10 = {
    1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1};

constexpr const char* kClassNames[kDurationClasses] = {
    "instantaneous", "seconds", "minutes", "hours",   "days",    "weeks",
    "months",        "years",   "decades", "centuries", "forever"};

// NLL cap: -log(1e-300).
const double kMaxNll = -std::log(1e-300);

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

int rank(DurationClass c) { return static_cast<int>(c); }

DurationClass duration_class_from_rank(int r) {
    if (r < 0 || r > kMaxDurationRank) {
        throw DomainError("duration rank must be in [0, 10], got " + std::to_string(r));
    }
    return static_cast<DurationClass>(r);
}

const char* to_string(DurationClass c) { return kClassNames[rank(c)]; }

DurationClass duration_class_from_string(const std::string& name) {
    for (int r = 0; r < kDurationClasses; ++r) {
        if (name == kClassNames[r]) return static_cast<DurationClass>(r);
    }
    throw DomainError("unknown duration class name '" + name + "'");
}

DurationClass DurationDistribution::mode() const {
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
        if (p[c] > p[best]) best = c;
    }
    return static_cast<DurationClass>(best);
}

bool is_valid(const DurationDistribution& d, double tol) {
    double sum = 0.0;
    for (double v : d.p) {
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

DurationDistribution binomial_distribution(double pi) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw DomainError("binomial_distribution: pi must be in [0, 1]");
    }
    DurationDistribution d;
    for (int c = 0; c < kDurationClasses; ++c) {
        d.p[c] = kChoose10[c] * std::pow(pi, c) * std::pow(1.0 - pi, kMaxDurationRank - c);
    }
    return d;
}

DurationDistribution softmax_distribution(const std::array<double, kDurationClasses>& logits) {
    for (double v : logits) {
        if (!std::isfinite(v)) throw DomainError("softmax_distribution: logits must be finite");
    }
    const double hi = *std::max_element(logits.begin(), logits.end());
    DurationDistribution d;
    double sum = 0.0;
    for (int c = 0; c < kDurationClasses; ++c) {
        d.p[c] = std::exp(logits[c] - hi);
        sum += d.p[c];
    }
    for (double& v : d.p) v /= sum;
    return d;
}

double duration_nll(const DurationDistribution& dist, DurationClass gold) {
    if (!is_valid(dist)) {
        throw DomainError("duration_nll: distribution must be a valid probability vector");
    }
    const double p = dist[gold];
    if (p <= 1e-300) return kMaxNll;
    return std::min(-std::log(p), kMaxNll);
}

double pi_from_relative_duration(const RelativeTimeline& t, int event) {
    if (event != 1 && event != 2) {
        throw DomainError("pi_from_relative_duration: event must be 1 or 2");
    }
    return event == 1 ? t.span1() : t.span2();
}

double pi_from_absolute_duration(double t_dur, double coeff) {
    if (!(t_dur > 0.0)) {
        throw DomainError("pi_from_absolute_duration: duration must be > 0");
    }
    return logistic(coeff * std::log(t_dur));
}

bool check_consistency(const SliderQuadruple& raw, DurationClass d1, DurationClass d2) {
    if (!is_valid(raw)) {
        throw DomainError("check_consistency: sliders must be finite with end >= begin");
    }
    const int span_sign = sign((raw.e1 - raw.b1) - (raw.e2 - raw.b2));
    const int rank_sign = sign(static_cast<double>(rank(d1) - rank(d2)));
    return span_sign * rank_sign >= 0;
}

}  // namespace reltime
