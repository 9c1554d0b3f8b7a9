#include "noisy/oracle.hpp"

#include <stdexcept>

namespace noisy {

NoisyOracle::NoisyOracle(std::vector<std::uint32_t> rank_of_id, double p, std::uint64_t seed)
    : rank_(std::move(rank_of_id)),
      p_(p),
      channel_rng_(seed, 0),
      algo_rng_(seed, 1) {
    if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("NoisyOracle: crossover probability must lie in (0, 1/2)");
    std::vector<bool> seen(rank_.size(), false);
    for (std::uint32_t r : rank_) {
        if (r >= rank_.size() || seen[r])
            throw std::invalid_argument("NoisyOracle: rank_of_id must be a bijection onto [0, n)");
        seen[r] = true;
    }
}

bool NoisyOracle::noisy_compare(ElementId x, ElementId y, std::string_view tag) {
    if (x == y)
        throw std::invalid_argument("noisy_compare: elements must be distinct");
    if (x >= rank_.size() || y >= rank_.size())
        throw std::invalid_argument("noisy_compare: unknown element id");
    // Outermost budgets first, so a global cutoff wins over a nested one
    // tripping on the same query.
    for (const auto& frame : budgets_)
        if (ledger_.total - frame.start_total >= frame.cap)
            throw BudgetExceeded{frame.id};
    ++ledger_.total;
    auto it = ledger_.by_tag.find(tag);
    if (it == ledger_.by_tag.end())
        it = ledger_.by_tag.emplace(std::string(tag), 0).first;
    ++it->second;
    const bool truth = rank_[x] < rank_[y];
    return truth != channel_rng_.bernoulli(p_);
}

bool NoisyOracle::extract_random_bit(ElementId x, ElementId y) {
    for (;;) {
        const bool first = noisy_compare(x, y, kRandomBitTag);
        const bool second = noisy_compare(x, y, kRandomBitTag);
        if (first != second) {
            ++ledger_.random_bits_extracted;
            return first;
        }
    }
}

std::uint64_t NoisyOracle::push_budget(std::uint64_t max_queries) {
    const std::uint64_t id = next_scope_id_++;
    budgets_.push_back({id, ledger_.total, max_queries});
    return id;
}

void NoisyOracle::pop_budget(std::uint64_t scope_id) {
    if (budgets_.empty() || budgets_.back().id != scope_id)
        throw std::logic_error("pop_budget: scopes must unwind in stack order");
    budgets_.pop_back();
}

}  // namespace noisy
