#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noisy/constants.hpp"
#include "noisy/sort.hpp"

namespace noisy {

enum class Algorithm {
    kNoisySort,
    kSafeNoisySort,
    kWeakSort,
    kSimpleSort,
    kBinarySearch,
    kLessThan,
    kMajorityBaseline,
};

std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct BenchConfig {
    Algorithm algorithm = Algorithm::kSafeNoisySort;
    std::size_t n = 1024;
    double p = 0.1;
    double delta = 0.05;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double c1 = kDefaultC1;
    double c2 = kDefaultC2;
    unsigned parallelism = 1;
};

// Everything recorded about one trial. wall_nanos is informational only;
// all other fields are determined by (config, trial index).
struct TrialReport {
    std::uint64_t seed = 0;
    bool correct = false;
    std::uint64_t queries_total = 0;
    std::map<std::string, std::uint64_t, std::less<>> queries_by_tag;
    std::uint64_t restarts = 0;
    std::uint64_t wall_nanos = 0;
};

struct AggregateReport {
    BenchConfig config;
    double error_rate = 0.0;
    double error_ci_lo = 0.0;  // Wilson 95% interval
    double error_ci_hi = 0.0;
    double mean_queries = 0.0;
    double std_queries = 0.0;
    std::uint64_t p95_queries = 0;
    double ratio_nlogn = 0.0;  // mean queries / (n log2 n), 0 when n log2 n = 0
    double mean_restarts = 0.0;
    std::map<std::string, double, std::less<>> mean_queries_by_tag;
    std::vector<TrialReport> per_trial;  // trial-index order
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

// Runs one trial: a fresh oracle over a uniformly random hidden permutation
// drawn from the trial's instance stream, then the configured algorithm.
TrialReport run_trial(const BenchConfig& config, std::size_t trial_index);

// Runs config.trials trials (config.parallelism at a time) and aggregates.
// Every emitted value except wall_nanos is a pure function of the config.
AggregateReport run_trials(const BenchConfig& config);

// Order-independent aggregation: all moments come from integer sums.
AggregateReport aggregate(const BenchConfig& config, std::vector<TrialReport> reports);

// Closed-form expected-query expressions the search benchmark is
// measured against.
double search_query_target(std::size_t n, double p, double delta);  // both terms
double search_query_floor(std::size_t n, double p, double delta);   // (1-delta) log2 n / I(p)

// Human-readable constants table; extended with the pairwise bound and the
// search expressions when delta (and n) are supplied.
std::string constants_report(double p, std::optional<double> delta, std::optional<std::size_t> n);

// CSV with the fixed header
// algorithm,n,p,delta,trials,error_rate,error_ci_lo,error_ci_hi,mean_queries,
// std_queries,p95_queries,ratio_nlogn,mean_restarts,seed,c1,c2
// one row per aggregate, shortest round-trip numeric formatting.
std::string to_csv(const std::vector<AggregateReport>& reports);

// Same schema as JSON; per_trial adds the per-trial records.
std::string to_json(const std::vector<AggregateReport>& reports, bool per_trial);

// Throws std::runtime_error on any I/O failure.
void write_file(const std::string& path, std::string_view contents);

}  // namespace noisy
