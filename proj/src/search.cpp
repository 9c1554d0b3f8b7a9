#include "noisy/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace noisy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

GapPosterior::GapPosterior(std::size_t element_count, double p, bool force_log_space)
    : elements_(element_count),
      p_(p),
      log_space_(force_log_space || element_count > kLogSpaceElements) {
    if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("GapPosterior: p must lie in (0, 1/2)");
    const double uniform = 1.0 / static_cast<double>(gap_count());
    segments_.push_back({0, log_space_ ? std::log2(uniform) : uniform});
}

std::size_t GapPosterior::segment_span(std::size_t index) const {
    const std::size_t next =
        index + 1 < segments_.size() ? segments_[index + 1].first_gap : gap_count();
    return next - segments_[index].first_gap;
}

double GapPosterior::segment_mass(std::size_t index) const {
    const double w = segments_[index].weight;
    return log_space_ ? std::exp2(w) : w;
}

void GapPosterior::update(std::size_t element, bool reported_below) {
    if (element >= elements_)
        throw std::out_of_range("GapPosterior::update: element index out of range");
    // Gaps <= element sit below the queried element; break at element + 1.
    const std::size_t boundary = element + 1;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), boundary,
                               [](std::size_t b, const Segment& s) { return b < s.first_gap; });
    auto prev = std::prev(it);
    if (prev->first_gap != boundary) segments_.insert(it, {boundary, prev->weight});

    const double below = reported_below ? 1.0 - p_ : p_;
    const double above = reported_below ? p_ : 1.0 - p_;
    if (log_space_) {
        const double lb = std::log2(below);
        const double la = std::log2(above);
        for (auto& seg : segments_) seg.weight += seg.first_gap < boundary ? lb : la;
    } else {
        for (auto& seg : segments_) seg.weight *= seg.first_gap < boundary ? below : above;
    }
    normalize();
    ++updates_;
}

void GapPosterior::normalize() {
    if (log_space_) {
        double peak = -kInf;
        for (std::size_t i = 0; i < segments_.size(); ++i)
            peak = std::max(peak,
                            segments_[i].weight + std::log2(static_cast<double>(segment_span(i))));
        long double acc = 0.0L;
        for (std::size_t i = 0; i < segments_.size(); ++i)
            acc += std::exp2(segments_[i].weight +
                             std::log2(static_cast<double>(segment_span(i))) - peak);
        const double total = peak + static_cast<double>(std::log2(static_cast<double>(acc)));
        for (auto& seg : segments_) seg.weight -= total;
    } else {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < segments_.size(); ++i)
            acc += static_cast<long double>(segments_[i].weight) *
                   static_cast<long double>(segment_span(i));
        const double inv = static_cast<double>(1.0L / acc);
        for (auto& seg : segments_) seg.weight *= inv;
    }
}

std::size_t GapPosterior::split_element() const {
    if (elements_ == 0)
        throw std::logic_error("GapPosterior::split_element: no elements to query");
    double prefix = 0.0;
    double best_score = kInf;
    std::size_t best = 0;
    for (std::size_t si = 0; si < segments_.size(); ++si) {
        const std::size_t lo = segments_[si].first_gap;
        const std::size_t span = segment_span(si);
        const double w = segment_mass(si);
        // Element indices run over [0, elements_); the final gap carries none.
        const std::size_t end = std::min(lo + span, elements_);
        if (lo < end) {
            // Mass below element e is prefix + (e - lo + 1) w, affine in e;
            // the best candidates bracket the 1/2 crossing.
            std::size_t first_cand = lo;
            if (w > 0.0) {
                const double cross =
                    std::floor(static_cast<double>(lo) - 1.0 + (0.5 - prefix) / w);
                if (cross >= static_cast<double>(end - 1))
                    first_cand = end - 1;
                else if (cross > static_cast<double>(lo))
                    first_cand = static_cast<std::size_t>(cross);
            }
            const std::size_t second_cand = std::min(first_cand + 1, end - 1);
            for (std::size_t cand = first_cand; cand <= second_cand; ++cand) {
                const double mass_below =
                    prefix + static_cast<double>(cand - lo + 1) * w;
                const double score = std::abs(mass_below - 0.5);
                if (score < best_score) {
                    best_score = score;
                    best = cand;
                }
            }
        }
        prefix += w * static_cast<double>(span);
    }
    return best;
}

double GapPosterior::gap_mass(std::size_t gap) const {
    if (gap >= gap_count())
        throw std::out_of_range("GapPosterior::gap_mass: gap index out of range");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), gap,
                               [](std::size_t g, const Segment& s) { return g < s.first_gap; });
    const std::size_t index = static_cast<std::size_t>(std::prev(it) - segments_.begin());
    return segment_mass(index);
}

std::size_t GapPosterior::top_gap() const {
    std::size_t best = 0;
    double best_weight = -kInf;
    for (std::size_t i = 0; i < segments_.size(); ++i)
        if (segments_[i].weight > best_weight) {
            best_weight = segments_[i].weight;
            best = segments_[i].first_gap;
        }
    return best;
}

double GapPosterior::top_mass() const {
    double best = -kInf;
    for (const auto& seg : segments_) best = std::max(best, seg.weight);
    return log_space_ ? std::exp2(best) : best;
}

double GapPosterior::total_mass() const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < segments_.size(); ++i)
        acc += static_cast<long double>(segment_mass(i)) *
               static_cast<long double>(segment_span(i));
    return static_cast<double>(acc);
}

double GapPosterior::min_log2_mass() const {
    double least = kInf;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double w = segments_[i].weight;
        least = std::min(least, log_space_ ? w : std::log2(w));
    }
    return least;
}

SearchOutcome posterior_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                               ElementId target, double delta, std::string_view tag) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("posterior_search: delta must lie in (0, 1/2)");
    GapPosterior posterior(sorted_ids.size(), oracle.crossover());
    SearchOutcome out;
    while (posterior.top_mass() < 1.0 - delta) {
        const std::size_t element = posterior.split_element();
        const bool below = oracle.noisy_compare(target, sorted_ids[element], tag);
        posterior.update(element, below);
        ++out.queries;
    }
    out.predecessor_gap = posterior.top_gap();
    return out;
}

double binary_search_query_estimate(std::size_t element_count, double p, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("binary_search_query_estimate: delta must lie in (0, 1)");
    const double bits =
        std::log2(static_cast<double>(std::max<std::size_t>(element_count, 1))) +
        std::log2(1.0 / delta);
    return bits / constants(p).capacity;
}

SearchOutcome safe_binary_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                                 ElementId target, double delta, std::string_view tag) {
    if (sorted_ids.empty()) return {};
    const double estimate = binary_search_query_estimate(sorted_ids.size(), oracle.crossover(), delta);
    const std::uint64_t start = oracle.total_queries();
    std::uint64_t restarts = 0;
    SearchOutcome out = restart_wrap(
        oracle, estimate, [&] { return posterior_search(oracle, sorted_ids, target, delta, tag); },
        &restarts);
    out.restarts = restarts;
    out.queries = oracle.total_queries() - start;
    return out;
}

SearchOutcome noisy_binary_search(NoisyOracle& oracle, std::span<const ElementId> sorted_ids,
                                  ElementId target, double delta, std::string_view tag) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("noisy_binary_search: delta must lie in (0, 1)");
    const std::size_t n = sorted_ids.size();
    if (n == 0) return {};
    // Coarse error for the candidate search; the list is treated as having
    // at least 16 entries so the coarse rate never exceeds 1/4.
    const double coarse = 1.0 / std::max(std::log2(static_cast<double>(n)), 4.0);
    const std::uint64_t start = oracle.total_queries();
    SearchOutcome out;

    if (delta > coarse) {
        // The requested error budget exceeds the core search's; spend the
        // excess as an immediate arbitrary answer, else search once.
        if (oracle.algo_rng().bernoulli(delta - coarse)) return out;
        out.predecessor_gap = posterior_search(oracle, sorted_ids, target, coarse, tag).predecessor_gap;
        out.queries = oracle.total_queries() - start;
        return out;
    }

    const double verify_delta = delta / 4.0;
    for (;;) {
        const std::size_t gap =
            posterior_search(oracle, sorted_ids, target, coarse, tag).predecessor_gap;
        const bool left_ok =
            gap == 0 || less_than(oracle, sorted_ids[gap - 1], target, verify_delta, tag);
        if (left_ok &&
            (gap == n || less_than(oracle, target, sorted_ids[gap], verify_delta, tag))) {
            out.predecessor_gap = gap;
            out.queries = oracle.total_queries() - start;
            return out;
        }
        ++out.restarts;
        oracle.note_restart();
    }
}

}  // namespace noisy
