#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "noisy/rng.hpp"

namespace noisy {

using ElementId = std::uint32_t;

// Query counters for one trial, partitioned by caller tag.
// Invariant: total equals the sum over by_tag at all times.
struct QueryLedger {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t, std::less<>> by_tag;
    std::uint64_t random_bits_extracted = 0;
};

// Thrown by the oracle when a query would exceed an installed budget.
// scope_id identifies which budget tripped, so nested budget owners can
// tell their own overflow apart from an enclosing one.
struct BudgetExceeded {
    std::uint64_t scope_id;
};

inline constexpr std::string_view kRandomBitTag = "random-bit";

// Simulated noisy comparison model: a hidden strict total order over ids
// 0..n-1, each comparison answered through a memoryless symmetric channel
// that flips the true bit with probability p. All queries are counted here;
// algorithms never see the hidden order directly.
//
// Channel noise and algorithm randomness are separate streams derived from
// the same seed, so (truth, p, seed, query sequence) replays exactly.
// An oracle belongs to a single trial and is not thread-safe.
class NoisyOracle {
public:
    // rank_of_id[id] = position of id in the hidden order; must be a
    // bijection onto [0, n). p must lie strictly inside (0, 1/2).
    NoisyOracle(std::vector<std::uint32_t> rank_of_id, double p, std::uint64_t seed);

    std::size_t size() const { return rank_.size(); }
    double crossover() const { return p_; }

    // One noisy comparison: 1{x before y} xor Bernoulli(p), fresh noise per
    // call. Throws std::invalid_argument for x == y or unknown ids.
    bool noisy_compare(ElementId x, ElementId y, std::string_view tag);

    // Von Neumann extractor over the comparison channel: query the pair
    // twice until the two answers differ, return the first of that pair.
    // The result is exactly Bernoulli(1/2) whatever the hidden order says.
    bool extract_random_bit(ElementId x, ElementId y);

    QueryLedger ledger_snapshot() const { return ledger_; }
    std::uint64_t total_queries() const { return ledger_.total; }

    // Stream for the algorithm's own coins (pivot sampling, early exits).
    RandomStream& algo_rng() { return algo_rng_; }

    // Ground truth, for scoring and tests only; costs no queries.
    bool truth_less(ElementId x, ElementId y) const { return rank_[x] < rank_[y]; }
    std::uint32_t rank_of(ElementId id) const { return rank_[id]; }

    std::uint64_t restarts() const { return restarts_; }
    void note_restart() { ++restarts_; }

    // Budget scopes; prefer the BudgetScope RAII wrapper below.
    std::uint64_t push_budget(std::uint64_t max_queries);
    void pop_budget(std::uint64_t scope_id);

private:
    struct BudgetFrame {
        std::uint64_t id;
        std::uint64_t start_total;
        std::uint64_t cap;
    };

    std::vector<std::uint32_t> rank_;
    double p_;
    RandomStream channel_rng_;
    RandomStream algo_rng_;
    QueryLedger ledger_;
    std::uint64_t restarts_ = 0;
    std::vector<BudgetFrame> budgets_;
    std::uint64_t next_scope_id_ = 1;
};

// Installs a query cap on the oracle for the current scope. When a query
// would push the count past the cap, the oracle throws BudgetExceeded with
// this scope's id before issuing it, so the cap is never overshot.
class BudgetScope {
public:
    BudgetScope(NoisyOracle& oracle, std::uint64_t max_queries)
        : oracle_(oracle), id_(oracle.push_budget(max_queries)) {}
    ~BudgetScope() { oracle_.pop_budget(id_); }

    BudgetScope(const BudgetScope&) = delete;
    BudgetScope& operator=(const BudgetScope&) = delete;

    std::uint64_t id() const { return id_; }

private:
    NoisyOracle& oracle_;
    std::uint64_t id_;
};

}  // namespace noisy
