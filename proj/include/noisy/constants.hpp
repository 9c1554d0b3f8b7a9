#pragma once

namespace noisy {

// Closed-form quantities of the comparison channel. All logarithms base 2.
struct ConstantsRecord {
    double p;              // crossover probability
    double entropy;        // h(p) = -p log2 p - (1-p) log2 (1-p)
    double capacity;       // I(p) = 1 - h(p), bits per query
    double walk_rate;      // (1-2p) log2((1-p)/p), log-odds drift per query
    double lower_only;     // 1/I(p)
    double sort_constant;  // 1/I(p) + 1/walk_rate
    double prior_upper;    // 2 / log2(1/(1/2 + sqrt(p(1-p))))
};

// All fields are pure functions of p; p must lie in the open interval (0, 1/2).
ConstantsRecord constants(double p);

double binary_entropy(double p);
double log2_odds_ratio(double p);  // log2((1-p)/p)

// Integer stopping threshold of the pairwise comparison walk:
// ceil(log2((1-delta)/delta) / log2((1-p)/p)).
long threshold_steps(double p, double delta);

// Expected-query bound for deciding one pairwise comparison with error
// at most delta: threshold_steps / (1-2p), ceiling included.
double pairwise_query_bound(double p, double delta);

}  // namespace noisy
