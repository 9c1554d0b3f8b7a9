#include "noisy/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "noisy/compare.hpp"
#include "noisy/search.hpp"

namespace noisy {

namespace {

struct AlgorithmEntry {
    Algorithm algorithm;
    std::string_view name;
};

constexpr AlgorithmEntry kAlgorithms[] = {
    {Algorithm::kNoisySort, "noisy-sort"},
    {Algorithm::kSafeNoisySort, "safe-noisy-sort"},
    {Algorithm::kWeakSort, "weak-sort"},
    {Algorithm::kSimpleSort, "simple-sort"},
    {Algorithm::kBinarySearch, "binary-search"},
    {Algorithm::kLessThan, "less-than"},
    {Algorithm::kMajorityBaseline, "majority-baseline"},
};

bool is_sorted_by_rank(const NoisyOracle& oracle, const std::vector<ElementId>& ids) {
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (oracle.rank_of(ids[i - 1]) >= oracle.rank_of(ids[i])) return false;
    return true;
}

std::vector<std::uint32_t> random_permutation(std::size_t n, RandomStream& rng) {
    std::vector<std::uint32_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(rank[i - 1], rank[j]);
    }
    return rank;
}

void validate(const BenchConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("bench: trials must be at least 1");
    if (config.n < 1) throw std::invalid_argument("bench: n must be at least 1");
    if (!(config.p > 0.0 && config.p < 0.5))
        throw std::invalid_argument("bench: p must lie in (0, 1/2)");
    if (!(config.delta > 0.0 && config.delta < 1.0))
        throw std::invalid_argument("bench: delta must lie in (0, 1)");
    if (config.c1 <= 0.0 || config.c2 < 1.0)
        throw std::invalid_argument("bench: need c1 > 0 and c2 >= 1");
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return {buf, res.ptr};
}

// Wilson 95% score interval; preferred over the normal interval because
// the target rates sit near zero.
std::pair<double, double> wilson_interval(std::size_t errors, std::size_t trials) {
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double margin = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - margin) / denom), std::min(1.0, (center + margin) / denom)};
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
    for (const auto& entry : kAlgorithms)
        if (entry.algorithm == algorithm) return entry.name;
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (const auto& entry : kAlgorithms)
        if (entry.name == name) return entry.algorithm;
    return std::nullopt;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index) {
    std::uint64_t state = master_seed + 0x9e3779b97f4a7c15ULL * (trial_index + 1);
    return splitmix64(state);
}

TrialReport run_trial(const BenchConfig& config, std::size_t trial_index) {
    validate(config);
    TrialReport report;
    report.seed = trial_seed(config.seed, trial_index);
    // Stream 2 feeds the instance itself (hidden permutation, search
    // target); streams 0 and 1 inside the oracle feed channel noise and
    // algorithm coins.
    RandomStream instance_rng(report.seed, 2);

    const auto start = std::chrono::steady_clock::now();
    switch (config.algorithm) {
        case Algorithm::kNoisySort:
        case Algorithm::kSafeNoisySort:
        case Algorithm::kWeakSort:
        case Algorithm::kSimpleSort: {
            NoisyOracle oracle(random_permutation(config.n, instance_rng), config.p, report.seed);
            std::vector<ElementId> ids(config.n);
            std::iota(ids.begin(), ids.end(), 0);
            std::vector<ElementId> out;
            switch (config.algorithm) {
                case Algorithm::kNoisySort:
                    out = noisy_sort(oracle, ids, config.c1);
                    break;
                case Algorithm::kSafeNoisySort:
                    out = safe_noisy_sort(oracle, ids, config.c1, config.c2);
                    break;
                case Algorithm::kWeakSort:
                    out = weak_sort(oracle, ids, config.delta);
                    break;
                default:
                    out = simple_sort(oracle, ids, config.delta);
                    break;
            }
            report.correct = is_sorted_by_rank(oracle, out);
            report.queries_total = oracle.total_queries();
            report.queries_by_tag = oracle.ledger_snapshot().by_tag;
            report.restarts = oracle.restarts();
            break;
        }
        case Algorithm::kBinarySearch: {
            // n sorted elements plus one target drawn uniformly; the
            // target's rank equals its true predecessor gap.
            std::vector<std::uint32_t> rank = random_permutation(config.n + 1, instance_rng);
            const auto target = static_cast<ElementId>(instance_rng.below(config.n + 1));
            std::vector<ElementId> sorted(config.n + 1);
            for (ElementId id = 0; id < sorted.size(); ++id) sorted[rank[id]] = id;
            std::erase(sorted, target);
            NoisyOracle oracle(std::move(rank), config.p, report.seed);
            const SearchOutcome outcome =
                noisy_binary_search(oracle, sorted, target, config.delta);
            report.correct = outcome.predecessor_gap == oracle.rank_of(target);
            report.queries_total = oracle.total_queries();
            report.queries_by_tag = oracle.ledger_snapshot().by_tag;
            report.restarts = outcome.restarts;
            break;
        }
        case Algorithm::kLessThan:
        case Algorithm::kMajorityBaseline: {
            NoisyOracle oracle(random_permutation(2, instance_rng), config.p, report.seed);
            bool verdict;
            if (config.algorithm == Algorithm::kLessThan) {
                verdict = less_than(oracle, 0, 1, config.delta);
            } else {
                verdict = majority_compare(oracle, 0, 1,
                                           majority_repetitions(config.p, config.delta));
            }
            report.correct = verdict == oracle.truth_less(0, 1);
            report.queries_total = oracle.total_queries();
            report.queries_by_tag = oracle.ledger_snapshot().by_tag;
            report.restarts = oracle.restarts();
            break;
        }
    }
    const auto stop = std::chrono::steady_clock::now();
    report.wall_nanos = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    return report;
}

AggregateReport run_trials(const BenchConfig& config) {
    validate(config);
    std::vector<TrialReport> reports(config.trials);
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.parallelism,
                                        static_cast<unsigned>(config.trials)));
    if (workers == 1) {
        for (std::size_t i = 0; i < config.trials; ++i) reports[i] = run_trial(config, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= config.trials || failed.load()) return;
                    try {
                        reports[i] = run_trial(config, i);
                    } catch (...) {
                        std::scoped_lock lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed.store(true);
                        return;
                    }
                }
            });
        for (auto& worker : pool) worker.join();
        if (error) std::rethrow_exception(error);
    }
    return aggregate(config, std::move(reports));
}

AggregateReport aggregate(const BenchConfig& config, std::vector<TrialReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: no trial reports");
    AggregateReport agg;
    agg.config = config;

    const std::size_t trials = reports.size();
    std::size_t errors = 0;
    std::uint64_t query_sum = 0;
    unsigned __int128 query_sq_sum = 0;
    std::uint64_t restart_sum = 0;
    std::map<std::string, std::uint64_t, std::less<>> tag_sums;
    std::vector<std::uint64_t> queries;
    queries.reserve(trials);
    for (const auto& report : reports) {
        if (!report.correct) ++errors;
        query_sum += report.queries_total;
        query_sq_sum += static_cast<unsigned __int128>(report.queries_total) *
                        report.queries_total;
        restart_sum += report.restarts;
        for (const auto& [tag, count] : report.queries_by_tag) tag_sums[tag] += count;
        queries.push_back(report.queries_total);
    }

    const double t = static_cast<double>(trials);
    agg.error_rate = static_cast<double>(errors) / t;
    std::tie(agg.error_ci_lo, agg.error_ci_hi) = wilson_interval(errors, trials);
    agg.mean_queries = static_cast<double>(query_sum) / t;
    if (trials > 1) {
        const double sq = static_cast<double>(query_sq_sum);
        const double variance =
            std::max(0.0, (sq - t * agg.mean_queries * agg.mean_queries) / (t - 1.0));
        agg.std_queries = std::sqrt(variance);
    }
    std::sort(queries.begin(), queries.end());
    const std::size_t rank95 =
        static_cast<std::size_t>(std::ceil(0.95 * t)) - 1;  // 1-indexed order statistic
    agg.p95_queries = queries[std::min(rank95, trials - 1)];
    const double nlogn =
        static_cast<double>(config.n) * std::log2(static_cast<double>(config.n));
    agg.ratio_nlogn = nlogn > 0.0 ? agg.mean_queries / nlogn : 0.0;
    agg.mean_restarts = static_cast<double>(restart_sum) / t;
    for (const auto& [tag, sum] : tag_sums)
        agg.mean_queries_by_tag[tag] = static_cast<double>(sum) / t;
    agg.per_trial = std::move(reports);
    return agg;
}

double search_query_floor(std::size_t n, double p, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("search_query_floor: delta must lie in (0, 1)");
    return (1.0 - delta) * std::log2(static_cast<double>(n)) / constants(p).capacity;
}

double search_query_target(std::size_t n, double p, double delta) {
    return search_query_floor(n, p, delta) +
           2.0 * std::log2(1.0 / delta) / constants(p).walk_rate;
}

std::string constants_report(double p, std::optional<double> delta, std::optional<std::size_t> n) {
    const ConstantsRecord rec = constants(p);
    char buf[256];
    std::string out;
    const auto line = [&](const char* label, double value) {
        std::snprintf(buf, sizeof(buf), "%-14s= %.6f\n", label, value);
        out += buf;
    };
    line("p", rec.p);
    line("entropy", rec.entropy);
    line("capacity", rec.capacity);
    line("walk_rate", rec.walk_rate);
    line("lower_only", rec.lower_only);
    line("sort_constant", rec.sort_constant);
    line("prior_upper", rec.prior_upper);
    if (delta) {
        line("pairwise_bound", pairwise_query_bound(p, *delta));
        if (n) {
            line("search_floor", search_query_floor(*n, p, *delta));
            line("search_target", search_query_target(*n, p, *delta));
        }
    }
    return out;
}

std::string to_csv(const std::vector<AggregateReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("to_csv: no reports");
    std::string out =
        "algorithm,n,p,delta,trials,error_rate,error_ci_lo,error_ci_hi,mean_queries,"
        "std_queries,p95_queries,ratio_nlogn,mean_restarts,seed,c1,c2\n";
    for (const auto& agg : reports) {
        out += algorithm_name(agg.config.algorithm);
        out += ',';
        out += std::to_string(agg.config.n);
        out += ',';
        out += format_double(agg.config.p);
        out += ',';
        out += format_double(agg.config.delta);
        out += ',';
        out += std::to_string(agg.per_trial.size());
        out += ',';
        out += format_double(agg.error_rate);
        out += ',';
        out += format_double(agg.error_ci_lo);
        out += ',';
        out += format_double(agg.error_ci_hi);
        out += ',';
        out += format_double(agg.mean_queries);
        out += ',';
        out += format_double(agg.std_queries);
        out += ',';
        out += std::to_string(agg.p95_queries);
        out += ',';
        out += format_double(agg.ratio_nlogn);
        out += ',';
        out += format_double(agg.mean_restarts);
        out += ',';
        out += std::to_string(agg.config.seed);
        out += ',';
        out += format_double(agg.config.c1);
        out += ',';
        out += format_double(agg.config.c2);
        out += '\n';
    }
    return out;
}

std::string to_json(const std::vector<AggregateReport>& reports, bool per_trial) {
    if (reports.empty()) throw std::invalid_argument("to_json: no reports");
    nlohmann::ordered_json root = nlohmann::ordered_json::array();
    for (const auto& agg : reports) {
        nlohmann::ordered_json entry;
        entry["algorithm"] = algorithm_name(agg.config.algorithm);
        entry["n"] = agg.config.n;
        entry["p"] = agg.config.p;
        entry["delta"] = agg.config.delta;
        entry["trials"] = agg.per_trial.size();
        entry["error_rate"] = agg.error_rate;
        entry["error_ci_lo"] = agg.error_ci_lo;
        entry["error_ci_hi"] = agg.error_ci_hi;
        entry["mean_queries"] = agg.mean_queries;
        entry["std_queries"] = agg.std_queries;
        entry["p95_queries"] = agg.p95_queries;
        entry["ratio_nlogn"] = agg.ratio_nlogn;
        entry["mean_restarts"] = agg.mean_restarts;
        entry["seed"] = agg.config.seed;
        entry["c1"] = agg.config.c1;
        entry["c2"] = agg.config.c2;
        nlohmann::ordered_json tags;
        for (const auto& [tag, mean] : agg.mean_queries_by_tag) tags[tag] = mean;
        entry["mean_queries_by_tag"] = std::move(tags);
        if (per_trial) {
            nlohmann::ordered_json trials = nlohmann::ordered_json::array();
            for (const auto& report : agg.per_trial) {
                nlohmann::ordered_json rec;
                rec["seed"] = report.seed;
                rec["correct"] = report.correct;
                rec["queries_total"] = report.queries_total;
                nlohmann::ordered_json by_tag;
                for (const auto& [tag, count] : report.queries_by_tag) by_tag[tag] = count;
                rec["queries_by_tag"] = std::move(by_tag);
                rec["restarts"] = report.restarts;
                rec["wall_nanos"] = report.wall_nanos;
                trials.push_back(std::move(rec));
            }
            entry["per_trial"] = std::move(trials);
        }
        root.push_back(std::move(entry));
    }
    return root.dump(2) + "\n";
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace noisy
