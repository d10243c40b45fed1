#ifndef RELTIME_TESTS_HELPERS_HPP
#define RELTIME_TESTS_HELPERS_HPP

#include "reltime/timeline.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace reltime::testutil {

// Raw quadruple on a UI-like scale with a usable range, end >= begin.
inline SliderQuadruple random_quadruple(std::mt19937_64& rng, double lo = 0.0,
                                        double hi = 100.0, double min_range = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (;;) {
        double b1 = u(rng), e1 = u(rng), b2 = u(rng), e2 = u(rng);
        if (e1 < b1) std::swap(b1, e1);
        if (e2 < b2) std::swap(b2, e2);
        const double range = std::max(std::max(e1, e2) - std::min(b1, b2), 0.0);
        if (range >= min_range) return {b1, e1, b2, e2};
    }
}

inline RelativeTimeline random_timeline(std::mt19937_64& rng) {
    return normalize_sliders(random_quadruple(rng));
}

// Average ranks by pair counting; the O(n^2) oracle kept deliberately
// independent of the sort-based path under test.
inline std::vector<long double> counting_ranks(std::span<const double> x) {
    std::vector<long double> ranks(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::size_t below = 0, equal = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            below += x[j] < x[i];
            equal += x[j] == x[i];
        }
        ranks[i] = static_cast<long double>(below) +
                   (static_cast<long double>(equal) + 1.0L) / 2.0L;
    }
    return ranks;
}

inline double spearman_oracle(std::span<const double> x, std::span<const double> y) {
    const auto rx = counting_ranks(x);
    const auto ry = counting_ranks(y);
    const auto n = static_cast<long double>(x.size());
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Max deviation between a supplied gradient and central finite differences.
template <typename F>
double max_fd_deviation(F&& f, std::span<const double> grad, std::vector<double> x,
                        double h = 1e-6) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double keep = x[k];
        x[k] = keep + h;
        const double hi = f(x);
        x[k] = keep - h;
        const double lo = f(x);
        x[k] = keep;
        worst = std::max(worst, std::abs(grad[k] - (hi - lo) / (2.0 * h)));
    }
    return worst;
}

}  // namespace reltime::testutil

#endif  // RELTIME_TESTS_HELPERS_HPP
