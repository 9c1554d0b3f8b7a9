#include "noisy/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace noisy {

namespace {

void require_crossover(double p) {
    if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("crossover probability must lie in (0, 1/2)");
}

}  // namespace

double binary_entropy(double p) {
    require_crossover(p);
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double log2_odds_ratio(double p) {
    require_crossover(p);
    return std::log2((1.0 - p) / p);
}

ConstantsRecord constants(double p) {
    require_crossover(p);
    ConstantsRecord rec;
    rec.p = p;
    rec.entropy = binary_entropy(p);
    rec.capacity = 1.0 - rec.entropy;
    rec.walk_rate = (1.0 - 2.0 * p) * log2_odds_ratio(p);
    rec.lower_only = 1.0 / rec.capacity;
    rec.sort_constant = rec.lower_only + 1.0 / rec.walk_rate;
    rec.prior_upper = 2.0 / std::log2(1.0 / (0.5 + std::sqrt(p * (1.0 - p))));
    return rec;
}

long threshold_steps(double p, double delta) {
    require_crossover(p);
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    const double ratio = std::log2((1.0 - delta) / delta) / log2_odds_ratio(p);
    return static_cast<long>(std::ceil(ratio));
}

double pairwise_query_bound(double p, double delta) {
    return static_cast<double>(threshold_steps(p, delta)) / (1.0 - 2.0 * p);
}

}  // namespace noisy
