#ifndef RELTIME_DURATION_HPP
#define RELTIME_DURATION_HPP

#include "reltime/timeline.hpp"

#include <array>
#include <string>

namespace reltime {

// The 11-rank ordinal duration scale.
enum class DurationClass : int {
    Instantaneous = 0,
    Seconds = 1,
    Minutes = 2,
    Hours = 3,
    Days = 4,
    Weeks = 5,
    Months = 6,
    Years = 7,
    Decades = 8,
    Centuries = 9,
    Forever = 10,
};

inline constexpr int kDurationClasses = 11;
inline constexpr int kMaxDurationRank = 10;

int rank(DurationClass c);
DurationClass duration_class_from_rank(int rank);

// Serialized names are the lowercase strings below, bit-exact.
const char* to_string(DurationClass c);
DurationClass duration_class_from_string(const std::string& name);

// Probabilities over the 11 duration ranks.
struct DurationDistribution {
    std::array<double, kDurationClasses> p{};

    double operator[](DurationClass c) const { return p[static_cast<std::size_t>(rank(c))]; }
    // Lowest rank wins ties.
    DurationClass mode() const;
    bool operator==(const DurationDistribution&) const = default;
};

// True when all entries are nonnegative and sum to 1 within tol.
bool is_valid(const DurationDistribution& d, double tol = 1e-12);

// p_c = C(10,c) pi^c (1-pi)^(10-c). Log-concave in the rank c.
// Throws DomainError unless 0 <= pi <= 1.
DurationDistribution binomial_distribution(double pi);

// Softmax over 11 logits; invariant to a common shift of the logits.
DurationDistribution softmax_distribution(const std::array<double, kDurationClasses>& logits);

// Cross-entropy -log p_gold, capped at -log(1e-300) so an impossible gold
// class keeps aggregate losses finite.
double duration_nll(const DurationDistribution& dist, DurationClass gold);

// Binomial parameter implied by an event's normalized span: e_k - b_k.
double pi_from_relative_duration(const RelativeTimeline& t, int event);

// Binomial parameter implied by an absolute duration: sigma(coeff * log t).
// Throws DomainError unless t_dur > 0.
double pi_from_absolute_duration(double t_dur, double coeff);

// An annotation contradicts itself when one event has the strictly smaller
// slider span but the strictly longer categorical duration. Symmetric in
// the two events; any tie on either side counts as consistent.
bool check_consistency(const SliderQuadruple& raw, DurationClass d1, DurationClass d2);

}  // namespace reltime

#endif  // RELTIME_DURATION_HPP
