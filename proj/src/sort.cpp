#include "noisy/sort.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace noisy {

namespace {

std::vector<ElementId> copy_ids(std::span<const ElementId> ids) {
    return {ids.begin(), ids.end()};
}

}  // namespace

std::vector<ElementId> sort_inversion(NoisyOracle& oracle, std::span<const ElementId> ids,
                                      double sigma, std::string_view tag) {
    if (!(sigma > 0.0 && sigma < 0.5))
        throw std::invalid_argument("sort_inversion: sigma must lie in (0, 1/2)");
    std::vector<ElementId> out = copy_ids(ids);
    for (std::size_t i = 1; i < out.size(); ++i)
        for (std::size_t j = i; j >= 1; --j) {
            if (!less_than(oracle, out[j], out[j - 1], sigma, tag)) break;
            std::swap(out[j], out[j - 1]);
        }
    return out;
}

std::vector<ElementId> simple_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                   double delta, std::string_view tag) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("simple_sort: delta must lie in (0, 1)");
    std::vector<ElementId> sorted;
    if (ids.empty()) return sorted;
    sorted.reserve(ids.size());
    sorted.push_back(ids[0]);
    const double per_insert = delta / static_cast<double>(ids.size());
    for (std::size_t i = 1; i < ids.size(); ++i) {
        const std::size_t gap =
            posterior_search(oracle, sorted, ids[i], per_insert, tag).predecessor_gap;
        sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(gap), ids[i]);
    }
    return sorted;
}

std::vector<ElementId> weak_sort(NoisyOracle& oracle, std::span<const ElementId> ids, double delta,
                                 std::string_view tag) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("weak_sort: delta must lie in (0, 1)");
    const std::size_t n = ids.size();
    if (n <= 1) return copy_ids(ids);
    const double nd = static_cast<double>(n);
    std::vector<ElementId> mostly = simple_sort(oracle, ids, 1.0 / (nd * nd), tag);
    return sort_inversion(oracle, mostly, delta / nd, tag);
}

double weak_sort_query_estimate(std::size_t n, double p, double delta) {
    if (n <= 1) return 1.0;
    const double nd = static_cast<double>(n);
    const double lg = std::log2(nd);
    // Insertion phase at internal error n^-2: each search pays about
    // (log2 i + 3 log2 n)/capacity; the repair pass pays the pairwise bound
    // per adjacent confirmation.
    const double insert_part = nd * 4.0 * lg / constants(p).capacity;
    const double repair_part = nd * pairwise_query_bound(p, delta / nd);
    return insert_part + repair_part;
}

std::vector<ElementId> safe_weak_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                      double delta, std::string_view tag) {
    if (ids.size() <= 1) return copy_ids(ids);
    const double estimate = weak_sort_query_estimate(ids.size(), oracle.crossover(), delta);
    return restart_wrap(oracle, estimate, [&] { return weak_sort(oracle, ids, delta, tag); });
}

double safe_simple_sort_budget(std::size_t n, double c1) {
    const double nd = static_cast<double>(n);
    return c1 * nd * std::log2(std::max(nd, 2.0));
}

std::vector<ElementId> safe_simple_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                        double c1, std::string_view tag) {
    const std::size_t n = ids.size();
    if (n <= 1) return copy_ids(ids);
    const double nd = static_cast<double>(n);
    const auto budget = static_cast<std::uint64_t>(std::ceil(safe_simple_sort_budget(n, c1)));
    const double per_insert = 1.0 / std::max(nd * std::log2(nd), 4.0);
    std::vector<ElementId> sorted;
    sorted.reserve(n);
    sorted.push_back(ids[0]);
    BudgetScope scope(oracle, budget);
    try {
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t gap =
                safe_binary_search(oracle, sorted, ids[i], per_insert, tag).predecessor_gap;
            sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(gap), ids[i]);
        }
    } catch (const BudgetExceeded& overflow) {
        if (overflow.scope_id != scope.id()) throw;
        return copy_ids(ids);
    }
    return sorted;
}

std::vector<ElementId> noisy_sort(NoisyOracle& oracle, std::span<const ElementId> ids, double c1,
                                  SortStats* stats) {
    const std::size_t n = ids.size();
    if (n < kSmallSortCutoff) {
        if (stats) stats->used_fallback = true;
        if (n <= 1) return copy_ids(ids);
        const double fallback_delta = 1.0 / std::max(std::log2(static_cast<double>(n)), 2.0);
        return weak_sort(oracle, ids, fallback_delta, "bucket-sort");
    }

    const double lg = std::log2(static_cast<double>(n));
    const double bucket_cap = 6.0 * lg * lg;
    const double assign_delta = 1.0 / lg;
    const double guard_delta = 1.0 / (static_cast<double>(n) * lg);

    std::vector<ElementId> pivot_sample;
    std::vector<ElementId> rest;
    for (const ElementId id : ids)
        (oracle.algo_rng().bernoulli(1.0 / lg) ? pivot_sample : rest).push_back(id);

    const std::vector<ElementId> pivots = safe_simple_sort(oracle, pivot_sample, c1, "pivot-sort");

    std::vector<std::vector<ElementId>> buckets(pivots.size() + 1);
    for (const ElementId a : rest) {
        const std::size_t gap =
            safe_binary_search(oracle, pivots, a, assign_delta, "bucket-assign").predecessor_gap;
        buckets[gap].push_back(a);
    }

    std::vector<ElementId> overflow;
    std::vector<ElementId> result;
    result.reserve(n);
    if (stats) {
        stats->plan.pivots = pivots;
        stats->plan.bucket_cap = bucket_cap;
        stats->plan.buckets.assign(buckets.size(), {});
        stats->plan.assigned_sizes.assign(buckets.size(), 0);
    }

    for (std::size_t g = 0; g < buckets.size(); ++g) {
        if (g > 0) result.push_back(pivots[g - 1]);
        auto& bucket = buckets[g];
        if (stats) stats->plan.assigned_sizes[g] = bucket.size();
        if (static_cast<double>(bucket.size()) > bucket_cap) {
            // Oversized buckets are mostly misrouted elements; defer them
            // wholesale instead of weak-sorting.
            overflow.insert(overflow.end(), bucket.begin(), bucket.end());
            continue;
        }
        const std::vector<ElementId> ordered =
            safe_weak_sort(oracle, bucket, guard_delta, "bucket-sort");
        // Shed front elements that test below the left pivot and back
        // elements that test above the right pivot; sentinels at the ends
        // fail these tests for free.
        std::size_t lo = 0;
        std::size_t hi = ordered.size();
        if (g > 0)
            while (lo < hi &&
                   safe_less_than(oracle, ordered[lo], pivots[g - 1], guard_delta, "trim")) {
                overflow.push_back(ordered[lo]);
                ++lo;
            }
        if (g < pivots.size())
            while (hi > lo &&
                   safe_less_than(oracle, pivots[g], ordered[hi - 1], guard_delta, "trim")) {
                overflow.push_back(ordered[hi - 1]);
                --hi;
            }
        result.insert(result.end(), ordered.begin() + static_cast<std::ptrdiff_t>(lo),
                      ordered.begin() + static_cast<std::ptrdiff_t>(hi));
        if (stats)
            stats->plan.buckets[g].assign(ordered.begin() + static_cast<std::ptrdiff_t>(lo),
                                          ordered.begin() + static_cast<std::ptrdiff_t>(hi));
    }

    for (const ElementId x : overflow) {
        const std::size_t gap =
            safe_binary_search(oracle, result, x, guard_delta, "reinsert").predecessor_gap;
        result.insert(result.begin() + static_cast<std::ptrdiff_t>(gap), x);
    }
    if (stats) stats->plan.overflow = overflow;
    return result;
}

double safe_noisy_sort_budget(std::size_t n, double p, double c2) {
    const double nd = static_cast<double>(n);
    return c2 * constants(p).sort_constant * nd * std::log2(std::max(nd, 2.0));
}

std::vector<ElementId> safe_noisy_sort(NoisyOracle& oracle, std::span<const ElementId> ids,
                                       double c1, double c2, SortStats* stats) {
    if (ids.size() <= 1) return copy_ids(ids);
    const auto budget = static_cast<std::uint64_t>(
        std::ceil(safe_noisy_sort_budget(ids.size(), oracle.crossover(), c2)));
    if (stats) stats->budget = budget;
    BudgetScope scope(oracle, budget);
    try {
        return noisy_sort(oracle, ids, c1, stats);
    } catch (const BudgetExceeded& overflow) {
        if (overflow.scope_id != scope.id()) throw;
        if (stats) stats->budget_exhausted = true;
        return copy_ids(ids);
    }
}

}  // namespace noisy
