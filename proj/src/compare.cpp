#include "noisy/compare.hpp"

#include <cmath>
#include <stdexcept>

namespace noisy {

PosteriorOdds::PosteriorOdds(double p) : step_bits_(log2_odds_ratio(p)) {}

void PosteriorOdds::update(bool answer_below) {
    if (answer_below)
        ++up_;
    else
        ++down_;
}

double PosteriorOdds::posterior() const {
    // 1 / (1 + ((1-p)/p)^(-net))
    return 1.0 / (1.0 + std::exp2(-log_odds_bits()));
}

double PosteriorOdds::log_odds_bits() const {
    return static_cast<double>(net_steps()) * step_bits_;
}

CompareOutcome less_than_detail(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                                std::string_view tag) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("less_than: delta must lie in (0, 1/2)");
    const long stop = threshold_steps(oracle.crossover(), delta);
    PosteriorOdds odds(oracle.crossover());
    while (odds.net_steps() > -stop && odds.net_steps() < stop)
        odds.update(oracle.noisy_compare(x, y, tag));
    return {odds.net_steps() >= stop, odds.query_count(), odds.net_steps(), 0};
}

bool less_than(NoisyOracle& oracle, ElementId x, ElementId y, double delta, std::string_view tag) {
    return less_than_detail(oracle, x, y, delta, tag).is_less;
}

CompareOutcome safe_less_than_detail(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                                     std::string_view tag) {
    const double bound = pairwise_query_bound(oracle.crossover(), delta);
    std::uint64_t restarts = 0;
    CompareOutcome out = restart_wrap(
        oracle, bound, [&] { return less_than_detail(oracle, x, y, delta, tag); }, &restarts);
    out.restarts = restarts;
    return out;
}

bool safe_less_than(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                    std::string_view tag) {
    return safe_less_than_detail(oracle, x, y, delta, tag).is_less;
}

bool majority_compare(NoisyOracle& oracle, ElementId x, ElementId y, unsigned repetitions,
                      std::string_view tag) {
    if (repetitions == 0 || repetitions % 2 == 0)
        throw std::invalid_argument("majority_compare: repetition count must be odd");
    unsigned below = 0;
    for (unsigned i = 0; i < repetitions; ++i)
        if (oracle.noisy_compare(x, y, tag)) ++below;
    return below > repetitions / 2;
}

double majority_error(unsigned repetitions, double p) {
    if (repetitions == 0 || repetitions % 2 == 0)
        throw std::invalid_argument("majority_error: repetition count must be odd");
    if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("majority_error: p must lie in (0, 1/2)");
    // Sum P[Binomial(t, p) = k] for k > t/2 with a running binomial term.
    const unsigned t = repetitions;
    double term = std::pow(1.0 - p, t);  // k = 0
    double tail = 0.0;
    for (unsigned k = 0; k <= t; ++k) {
        if (k > t / 2) tail += term;
        if (k < t)
            term *= (static_cast<double>(t - k) / static_cast<double>(k + 1)) * (p / (1.0 - p));
    }
    return tail;
}

unsigned majority_repetitions(double p, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("majority_repetitions: delta must lie in (0, 1)");
    for (unsigned t = 1;; t += 2)
        if (majority_error(t, p) <= delta) return t;
}

std::uint64_t restart_cap(double expected_queries) {
    if (!(expected_queries > 0.0))
        throw std::invalid_argument("restart_cap: expected query count must be positive");
    double cap = std::ceil(expected_queries * std::log2(expected_queries));
    if (expected_queries < 2.0)
        cap = std::max({cap, std::ceil(2.0 * expected_queries), 1.0});
    return static_cast<std::uint64_t>(cap);
}

}  // namespace noisy
