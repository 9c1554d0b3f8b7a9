#pragma once

#include <cstdint>
#include <string_view>

#include "noisy/constants.hpp"
#include "noisy/oracle.hpp"

namespace noisy {

// Posterior of one pairwise comparison, kept as integer step counts. The
// log-odds of "x before y" is exactly net_steps() * log2((1-p)/p), so the
// quantization of the underlying walk holds with no float drift; the
// probability itself is materialized only on demand.
class PosteriorOdds {
public:
    explicit PosteriorOdds(double p);

    // Feed the answer of one noisy "x < y?" query.
    void update(bool answer_below);

    std::int64_t net_steps() const {
        return static_cast<std::int64_t>(up_) - static_cast<std::int64_t>(down_);
    }
    std::uint64_t query_count() const { return up_ + down_; }
    double posterior() const;      // current belief that x precedes y, in (0, 1)
    double log_odds_bits() const;  // net_steps() * log2((1-p)/p)

private:
    std::uint64_t up_ = 0;
    std::uint64_t down_ = 0;
    double step_bits_;
};

struct CompareOutcome {
    bool is_less = false;
    std::uint64_t queries = 0;    // queries spent by the deciding attempt
    std::int64_t net_steps = 0;   // walk position at the stopping time
    std::uint64_t restarts = 0;   // abandoned attempts (safe variant only)
};

// Sequential pairwise test: query until the posterior leaves
// [delta, 1-delta], i.e. until |net steps| reaches threshold_steps(p, delta).
// Error probability <= delta; expected queries <= pairwise_query_bound.
// delta must lie in (0, 1/2).
CompareOutcome less_than_detail(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                                std::string_view tag = "less-than");
bool less_than(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
               std::string_view tag = "less-than");

// Restart-hardened variant: attempts are capped at
// restart_cap(pairwise_query_bound(p, delta)) queries each.
CompareOutcome safe_less_than_detail(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                                     std::string_view tag = "less-than");
bool safe_less_than(NoisyOracle& oracle, ElementId x, ElementId y, double delta,
                    std::string_view tag = "less-than");

// Fixed odd number of queries, majority verdict. Benchmark baseline only.
bool majority_compare(NoisyOracle& oracle, ElementId x, ElementId y, unsigned repetitions,
                      std::string_view tag = "majority");

// Exact error probability of the majority vote: P[Binomial(t, p) > t/2].
double majority_error(unsigned repetitions, double p);

// Smallest odd repetition count whose majority error is at most delta.
unsigned majority_repetitions(double p, double delta);

// Per-attempt budget for restart_wrap: ceil(m log2 m), floored at ceil(2m)
// and 1 when m < 2 where the log degenerates.
std::uint64_t restart_cap(double expected_queries);

// Runs attempt() under a per-attempt query cap derived from its expected
// query count. An attempt that would exceed the cap is abandoned and rerun;
// the streams keep advancing, so each attempt sees fresh randomness. The
// restart probability is at most m/cap by Markov's inequality.
template <class Attempt>
auto restart_wrap(NoisyOracle& oracle, double expected_queries, Attempt&& attempt,
                  std::uint64_t* restart_count = nullptr) -> decltype(attempt()) {
    const std::uint64_t cap = restart_cap(expected_queries);
    for (;;) {
        BudgetScope scope(oracle, cap);
        try {
            return attempt();
        } catch (const BudgetExceeded& overflow) {
            if (overflow.scope_id != scope.id()) throw;
            oracle.note_restart();
            if (restart_count) ++*restart_count;
        }
    }
}

}  // namespace noisy
