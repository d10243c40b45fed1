#include "reltime/duration.hpp"

#include "reltime/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace reltime;

TEST_CASE("duration class names and ranks are a bijection") {
    const char* names[] = {"instantaneous", "seconds", "minutes", "hours",
                           "days",          "weeks",   "months",  "years",
                           "decades",       "centuries", "forever"};
    for (int r = 0; r <= kMaxDurationRank; ++r) {
        const auto c = duration_class_from_rank(r);
        CHECK(rank(c) == r);
        CHECK(std::string(to_string(c)) == names[r]);
        CHECK(duration_class_from_string(names[r]) == c);
    }
    CHECK_THROWS_AS(duration_class_from_rank(11), DomainError);
    CHECK_THROWS_AS(duration_class_from_string("Minutes"), DomainError);
}

TEST_CASE("binomial duration distribution") {
    const auto zero = binomial_distribution(0.0);
    CHECK(zero.p[0] == 1.0);
    for (int c = 1; c <= 10; ++c) CHECK(zero.p[c] == 0.0);

    const auto one = binomial_distribution(1.0);
    CHECK(one.p[10] == 1.0);

    const auto half = binomial_distribution(0.5);
    CHECK(half.p[5] == doctest::Approx(252.0 / 1024.0).epsilon(1e-14));

    CHECK_THROWS_AS(binomial_distribution(-0.01), DomainError);
    CHECK_THROWS_AS(binomial_distribution(1.01), DomainError);

    for (int grid = 0; grid <= 100; ++grid) {
        const double pi = grid / 100.0;
        const auto d = binomial_distribution(pi);
        CHECK(is_valid(d, 1e-12));
        for (int c = 1; c <= 9; ++c) {
            CHECK(d.p[c] * d.p[c] >= d.p[c - 1] * d.p[c + 1]);
        }
    }
}

TEST_CASE("binomial mode is monotone in pi") {
    int previous = 0;
    for (int grid = 0; grid <= 20; ++grid) {
        const double pi = grid * 0.05;
        const int mode = rank(binomial_distribution(pi).mode());
        CHECK(mode >= previous);
        previous = mode;
    }
    CHECK(rank(binomial_distribution(0.0).mode()) == 0);
    CHECK(rank(binomial_distribution(1.0).mode()) == 10);
}

TEST_CASE("softmax duration distribution") {
    std::array<double, kDurationClasses> logits{};
    const auto uniform = softmax_distribution(logits);
    for (double p : uniform.p) CHECK(p == doctest::Approx(1.0 / 11.0).epsilon(1e-14));

    std::array<double, kDurationClasses> shifted{};
    for (auto& v : shifted) v = 7.0;
    const auto same = softmax_distribution(shifted);
    for (int c = 0; c < kDurationClasses; ++c) {
        CHECK(same.p[c] == doctest::Approx(uniform.p[c]).epsilon(1e-14));
    }

    std::array<double, kDurationClasses> saturated{};
    saturated[3] = 50.0;
    CHECK(softmax_distribution(saturated).p[3] >= 1.0 - 1e-12);
}

TEST_CASE("duration NLL is a capped cross-entropy") {
    DurationDistribution sure{};
    sure.p[4] = 1.0;
    CHECK(duration_nll(sure, DurationClass::Days) == 0.0);

    DurationDistribution quarter{};
    quarter.p[2] = 0.25;
    quarter.p[7] = 0.75;
    CHECK(duration_nll(quarter, DurationClass::Minutes) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-14));

    std::array<double, kDurationClasses> logits{};
    const auto uniform = softmax_distribution(logits);
    CHECK(duration_nll(uniform, DurationClass::Forever) ==
          doctest::Approx(std::log(11.0)).epsilon(1e-12));

    // impossible gold saturates at the cap instead of infinity
    CHECK(duration_nll(binomial_distribution(0.0), DurationClass::Seconds) ==
          doctest::Approx(-std::log(1e-300)).epsilon(1e-12));
}

TEST_CASE("binomial NLL is minimized at pi = rank/10") {
    for (int r = 0; r <= kMaxDurationRank; ++r) {
        const auto gold = duration_class_from_rank(r);
        int best_grid = -1;
        double best = 1e308;
        for (int grid = 0; grid <= 100; ++grid) {
            const double nll = duration_nll(binomial_distribution(grid / 100.0), gold);
            if (nll < best) {
                best = nll;
                best_grid = grid;
            }
        }
        CHECK(best_grid == 10 * r);
    }
}

TEST_CASE("pi links from relative and absolute durations") {
    const RelativeTimeline t{0, 0.3, 0.2, 1};
    CHECK(pi_from_relative_duration(t, 1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(pi_from_relative_duration(t, 2) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(pi_from_relative_duration({0, 1, 0, 1}, 1) == 1.0);
    CHECK(pi_from_relative_duration({0, 1, 0, 1}, 2) == 1.0);
    CHECK_THROWS_AS(pi_from_relative_duration(t, 3), DomainError);

    CHECK(pi_from_absolute_duration(1.0, 1.0) == 0.5);
    CHECK(pi_from_absolute_duration(std::exp(2.0), 1.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-14));
    CHECK(pi_from_absolute_duration(1e-200, 1.0) < 1e-100);
    CHECK_THROWS_AS(pi_from_absolute_duration(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(pi_from_absolute_duration(-2.0, 1.0), DomainError);
}

TEST_CASE("slider/duration consistency check") {
    // the annotated contradiction: think [7,60] minutes vs do [50,60] years
    const SliderQuadruple contradiction{7, 60, 50, 60};
    CHECK_FALSE(check_consistency(contradiction, DurationClass::Minutes, DurationClass::Years));
    // swapped spans line up with the ranks again
    const SliderQuadruple aligned{50, 60, 7, 60};
    CHECK(check_consistency(aligned, DurationClass::Minutes, DurationClass::Years));
    // ties on either side never count as contradictions
    CHECK(check_consistency({0, 10, 20, 30}, DurationClass::Days, DurationClass::Days));
    CHECK(check_consistency({0, 10, 20, 30}, DurationClass::Days, DurationClass::Years));

    // symmetric under swapping events
    const SliderQuadruple swapped{50, 60, 7, 60};
    CHECK(check_consistency(contradiction, DurationClass::Minutes, DurationClass::Years) ==
          check_consistency(swapped, DurationClass::Years, DurationClass::Minutes));
}
