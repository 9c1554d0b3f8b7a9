#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "noisy/oracle.hpp"
#include "noisy/search.hpp"

namespace noisy {

// Budget multiplier for the pivot insertion sort: hard cap c1 * n log2 n
// total queries. Usage concentrates near ratio 2.5 at n = 2^10, so the cap
// trips on well under 1% of runs.
inline constexpr double kDefaultC1 = 3.0;

// Budget multiplier for the full sort: hard cap c2 * sort_constant *
// n log2 n queries. Calibrated so overflow stays under 5% at n = 2^12.
inline constexpr double kDefaultC2 = 1.5;

// Below this size the pivot machinery is meaningless (sampling at rate
// 1/log2 n would select nearly everything) and the sort falls back to
// weak_sort.
inline constexpr std::size_t kSmallSortCutoff = 64;

// Pivot partition produced by the main sort, kept for inspection.
// Every non-pivot id ends up in exactly one retained bucket or in overflow.
struct BucketPlan {
    std::vector<ElementId> pivots;                // sorted pivot ids, sentinels excluded
    std::vector<std::vector<ElementId>> buckets;  // retained contents per gap, pivots.size()+1 entries
    std::vector<std::size_t> assigned_sizes;      // bucket sizes before the overflow rule applied
    std::vector<ElementId> overflow;              // deferred to reinsertion, arrival order
    double bucket_cap = 0.0;                      // size threshold 6 (log2 n)^2
};

struct SortStats {
    BucketPlan plan;
    std::uint64_t budget = 0;  // hard cap in force, when one applies
    bool budget_exhausted = false;
    bool used_fallback = false;
};

// Insertion sort whose adjacent comparisons run at per-comparison error
// sigma. With t inversions in the input, error <= (n-1+t) sigma and the
// expected cost stays near (n-1+t) pairwise_query_bound(p, sigma).
std::vector<ElementId> sort_inversion(NoisyOracle& oracle, std::span<const ElementId> ids,
                                      double sigma, std::string_view tag = "sort-inversion");

// Binary insertion sort; every insertion searches with error delta/n, so
// the whole sort errs with probability at most delta.
std::vector<ElementId> simple_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                   double delta, std::string_view tag = "simple-sort");

// Two phases: simple_sort at internal error n^-2 leaves O(1) expected
// inversions, then sort_inversion at sigma = delta/n repairs them.
std::vector<ElementId> weak_sort(NoisyOracle& oracle, std::span<const ElementId> ids, double delta,
                                 std::string_view tag = "weak-sort");

// weak_sort under the restart wrapper, attempts capped at restart_cap of
// weak_sort_query_estimate.
std::vector<ElementId> safe_weak_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                      double delta, std::string_view tag = "weak-sort");

double weak_sort_query_estimate(std::size_t n, double p, double delta);

// Binary insertion sort with per-insertion error 1/(n log2 n) through
// safe_binary_search, hard-capped at c1 * n log2 n queries in total. On
// cap overflow the input order comes back unchanged, which downstream
// treats as an (unlikely) error.
std::vector<ElementId> safe_simple_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                        double c1 = kDefaultC1,
                                        std::string_view tag = "simple-sort");

double safe_simple_sort_budget(std::size_t n, double c1);

// Main sort: sample pivots at rate 1/log2 n, sort them, route every other
// element to its pivot gap by noisy search at error 1/log2 n, weak-sort
// each reasonably sized bucket and trim its ends against the enclosing
// pivots, then reinsert everything deferred along the way one by one.
// Output is always a permutation of the input. Below kSmallSortCutoff it
// delegates to weak_sort.
std::vector<ElementId> noisy_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                  double c1 = kDefaultC1, SortStats* stats = nullptr);

// noisy_sort under a hard overall budget of c2 * sort_constant * n log2 n
// queries; overflow returns the input order unchanged.
std::vector<ElementId> safe_noisy_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                       double c1 = kDefaultC1, double c2 = kDefaultC2,
                                       SortStats* stats = nullptr);

double safe_noisy_sort_budget(std::size_t n, double p, double c2);

}  // namespace noisy
