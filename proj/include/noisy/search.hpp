#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "noisy/compare.hpp"
#include "noisy/oracle.hpp"

namespace noisy {

// Posterior distribution over the n+1 predecessor gaps of a sorted list.
// Gap g means exactly g list elements precede the target; gap 0 means the
// target precedes everything.
//
// Every query outcome multiplies the weights on one side of a single split
// point by (1-p) and the other side by p, then renormalizes. The weights
// therefore stay piecewise constant over gaps, with one new breakpoint per
// distinct query position, and are stored as segments rather than per gap:
// each round costs O(rounds so far) instead of O(n).
//
// Weights are plain doubles renormalized after every update; above
// kLogSpaceElements list entries (or on request) they switch to per-segment
// log2 weights so far-off gaps cannot underflow to zero on long runs.
class GapPosterior {
public:
    static constexpr std::size_t kLogSpaceElements = std::size_t{1} << 20;

    GapPosterior(std::size_t element_count, double p, bool force_log_space = false);

    std::size_t element_count() const { return elements_; }
    std::size_t gap_count() const { return elements_ + 1; }
    std::size_t update_count() const { return updates_; }
    bool log_space() const { return log_space_; }

    // Element index e whose "target precedes element e" mass is closest to
    // 1/2, ties toward the lower index. Requires element_count >= 1.
    std::size_t split_element() const;

    // Bayes update for the answer of one query against sorted element
    // `element`; reported_below is the channel's "target < element" bit.
    void update(std::size_t element, bool reported_below);

    double gap_mass(std::size_t gap) const;
    std::size_t top_gap() const;  // argmax gap, lowest index on ties
    double top_mass() const;
    double total_mass() const;     // 1 up to rounding; exposed for invariant checks
    double min_log2_mass() const;  // finite iff every gap keeps positive mass

private:
    struct Segment {
        std::size_t first_gap;  // covers [first_gap, next.first_gap)
        double weight;          // per-gap mass, or its log2 in log space
    };

    std::size_t segment_span(std::size_t index) const;
    double segment_mass(std::size_t index) const;  // per-gap, linear scale
    void normalize();

    std::vector<Segment> segments_;
    std::size_t elements_;
    std::size_t updates_ = 0;
    double p_;
    bool log_space_;
};

struct SearchOutcome {
    std::size_t predecessor_gap = 0;  // 0 = target precedes every element
    std::uint64_t queries = 0;
    std::uint64_t restarts = 0;
};

// Core noisy binary search: query the posterior's most even split until one
// gap holds mass >= 1-delta. Error <= delta; expected queries scale as
// (log2 n + log2(1/delta)) / capacity. sorted_ids must be sorted under the
// oracle's hidden order and must not contain the target (caller contract;
// not detected). delta must lie in (0, 1/2).
SearchOutcome posterior_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                               ElementId target, double delta, std::string_view tag = "search");

// posterior_search under the restart wrapper, capping each attempt at
// restart_cap of the analytic expectation below.
SearchOutcome safe_binary_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                                 ElementId target, double delta, std::string_view tag = "search");

// (log2 n + log2(1/delta)) / capacity; the attempt budget base for
// safe_binary_search.
double binary_search_query_estimate(std::size_t element_count, double p, double delta);

// Verify-and-restart search: find a candidate predecessor with the core
// search at coarse error, confirm it against both enclosing elements with
// pairwise tests at delta/4, and retry on any failure. End gaps verify
// against virtual sentinels for free. Error <= delta for any delta in
// (0, 1); for delta above the coarse error the whole search is skipped
// with the excess probability and a single core search answers otherwise.
SearchOutcome noisy_binary_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                                  ElementId target, double delta, std::string_view tag = "search");

}  // namespace noisy
