#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "noisy/bench.hpp"

using namespace noisy;

namespace {

BenchConfig small_config(Algorithm algorithm) {
    BenchConfig config;
    config.algorithm = algorithm;
    config.n = 64;
    config.p = 0.1;
    config.delta = 0.05;
    config.trials = 40;
    config.seed = 17;
    return config;
}

// wall_nanos is the one field allowed to differ between identical runs
std::string strip_wall(std::string text) {
    std::string out;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line))
        if (line.find("wall_nanos") == std::string::npos) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::kNoisySort, Algorithm::kSafeNoisySort, Algorithm::kWeakSort,
                        Algorithm::kSimpleSort, Algorithm::kBinarySearch, Algorithm::kLessThan,
                        Algorithm::kMajorityBaseline})
        CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK_FALSE(parse_algorithm("bogo-sort").has_value());
}

TEST_CASE("worker exceptions surface to the caller") {
    // less_than itself rejects delta >= 1/2; the failure must propagate
    // out of the pool instead of killing a worker thread
    BenchConfig config = small_config(Algorithm::kLessThan);
    config.n = 2;
    config.delta = 0.7;
    config.parallelism = 3;
    CHECK_THROWS_AS(run_trials(config), std::invalid_argument);
}

TEST_CASE("config validation rejects out-of-range fields") {
    BenchConfig config = small_config(Algorithm::kLessThan);
    config.trials = 0;
    CHECK_THROWS_AS(run_trials(config), std::invalid_argument);
    config = small_config(Algorithm::kLessThan);
    config.p = 0.5;
    CHECK_THROWS_AS(run_trials(config), std::invalid_argument);
    config = small_config(Algorithm::kLessThan);
    config.delta = 0.0;
    CHECK_THROWS_AS(run_trials(config), std::invalid_argument);
    config = small_config(Algorithm::kLessThan);
    config.n = 0;
    CHECK_THROWS_AS(run_trials(config), std::invalid_argument);
}

TEST_CASE("identical configs emit identical bytes") {
    const BenchConfig config = small_config(Algorithm::kSafeNoisySort);
    const AggregateReport first = run_trials(config);
    const AggregateReport second = run_trials(config);
    CHECK(to_csv({first}) == to_csv({second}));
    CHECK(to_json({first}, false) == to_json({second}, false));
    CHECK(strip_wall(to_json({first}, true)) == strip_wall(to_json({second}, true)));
}

TEST_CASE("worker count changes nothing but wall time") {
    BenchConfig config = small_config(Algorithm::kNoisySort);
    config.trials = 30;
    config.parallelism = 1;
    const std::string serial = to_csv({run_trials(config)});
    config.parallelism = 4;
    const std::string parallel = to_csv({run_trials(config)});
    CHECK(serial == parallel);
}

TEST_CASE("aggregation is order independent") {
    const BenchConfig config = small_config(Algorithm::kWeakSort);
    AggregateReport agg = run_trials(config);
    std::vector<TrialReport> shuffled = agg.per_trial;
    RandomStream rng(5, 5);
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    AggregateReport reordered = aggregate(config, std::move(shuffled));
    reordered.per_trial = agg.per_trial;  // per-trial order is presentation only
    CHECK(to_csv({agg}) == to_csv({reordered}));
}

TEST_CASE("csv schema is bit-exact with one row per aggregate") {
    const AggregateReport agg = run_trials(small_config(Algorithm::kLessThan));
    const std::string csv = to_csv({agg});
    std::stringstream stream(csv);
    std::string header;
    std::getline(stream, header);
    CHECK(header ==
          "algorithm,n,p,delta,trials,error_rate,error_ci_lo,error_ci_hi,mean_queries,"
          "std_queries,p95_queries,ratio_nlogn,mean_restarts,seed,c1,c2");
    int rows = 0;
    std::string line;
    while (std::getline(stream, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1);
}

TEST_CASE("csv values parse back to the in-memory aggregates exactly") {
    const AggregateReport agg = run_trials(small_config(Algorithm::kSimpleSort));
    const std::string csv = to_csv({agg});
    const std::string row = csv.substr(csv.find('\n') + 1);
    std::stringstream stream(row);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 16);
    CHECK(fields[0] == "simple-sort");
    CHECK(std::stoull(fields[1]) == agg.config.n);
    CHECK(std::stod(fields[2]) == agg.config.p);
    CHECK(std::stod(fields[3]) == agg.config.delta);
    CHECK(std::stoull(fields[4]) == agg.per_trial.size());
    CHECK(std::stod(fields[5]) == agg.error_rate);
    CHECK(std::stod(fields[6]) == agg.error_ci_lo);
    CHECK(std::stod(fields[7]) == agg.error_ci_hi);
    CHECK(std::stod(fields[8]) == agg.mean_queries);
    CHECK(std::stod(fields[9]) == agg.std_queries);
    CHECK(std::stoull(fields[10]) == agg.p95_queries);
    CHECK(std::stod(fields[11]) == agg.ratio_nlogn);
    CHECK(std::stod(fields[12]) == agg.mean_restarts);
    CHECK(std::stoull(fields[13]) == agg.config.seed);
    CHECK(std::stod(fields[14]) == agg.config.c1);
    CHECK(std::stod(fields[15]) == agg.config.c2);
}

TEST_CASE("per-trial json carries one record per trial") {
    const BenchConfig config = small_config(Algorithm::kBinarySearch);
    const AggregateReport agg = run_trials(config);
    const std::string json = to_json({agg}, true);
    std::size_t count = 0;
    for (std::size_t at = json.find("\"queries_total\""); at != std::string::npos;
         at = json.find("\"queries_total\"", at + 1))
        ++count;
    CHECK(count == config.trials);
    CHECK(to_json({agg}, false).find("per_trial") == std::string::npos);
}

TEST_CASE("trial seeds are deterministic and distinct") {
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 1000; ++i) seeds.push_back(trial_seed(42, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("pairwise comparison bench matches its contract") {
    BenchConfig config = small_config(Algorithm::kLessThan);
    config.n = 2;
    config.trials = 10000;
    const AggregateReport agg = run_trials(config);
    const double sigma = std::sqrt(config.delta * (1 - config.delta) / double(config.trials));
    CHECK(agg.error_rate <= config.delta + 3 * sigma);
    CHECK(agg.mean_queries <= 2.5 * 1.05);
    CHECK(agg.error_ci_lo <= agg.error_rate);
    CHECK(agg.error_ci_hi >= agg.error_rate);
}

TEST_CASE("majority baseline errs at the exact binomial tail of its repetition count") {
    BenchConfig config = small_config(Algorithm::kMajorityBaseline);
    config.n = 2;
    config.delta = 0.02;  // forces t = 5
    config.trials = 20000;
    const AggregateReport agg = run_trials(config);
    CHECK(agg.mean_queries == 5.0);
    const double exact = 0.00856;  // binomial tail of Binomial(5, 0.1) beyond 2
    CHECK(agg.error_rate <=
          exact + 3 * std::sqrt(exact * (1 - exact) / double(config.trials)) + 1e-12);
}

TEST_CASE("budgeted sort bench stays under the prior cost constant") {
    BenchConfig config = small_config(Algorithm::kSafeNoisySort);
    config.n = std::size_t{1} << 12;
    config.trials = 100;
    config.parallelism = 2;
    const AggregateReport agg = run_trials(config);
    CHECK(agg.ratio_nlogn > 0.0);
    CHECK(agg.ratio_nlogn < 6.21257);
    CHECK(agg.error_rate <= 0.10);
}

TEST_CASE("search expressions reject a degenerate delta") {
    CHECK_THROWS_AS(search_query_target(1024, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(search_query_floor(1024, 0.1, 0.0), std::invalid_argument);
    CHECK(search_query_floor(1 << 16, 0.1, 0.01) == doctest::Approx(29.830260933368134));
    CHECK(search_query_target(1 << 16, 0.1, 0.01) == doctest::Approx(35.0700191190916));
}

TEST_CASE("constants report prints the quoted values") {
    const std::string report = constants_report(0.1, 0.01, std::size_t{1} << 16);
    CHECK(report.find("lower_only    = 1.883224") != std::string::npos);
    CHECK(report.find("sort_constant = 2.277555") != std::string::npos);
    CHECK(report.find("prior_upper   = 6.212567") != std::string::npos);
    CHECK(report.find("pairwise_bound= 3.750000") != std::string::npos);
    CHECK(report.find("search_target = 35.070019") != std::string::npos);
}

TEST_CASE("write_file reports io failures") {
    CHECK_THROWS_AS(write_file("/nonexistent-dir/report.csv", "x"), std::runtime_error);
    const std::string path =
        (std::filesystem::temp_directory_path() / "noisy_bench_roundtrip.csv").string();
    write_file(path, "hello\n");
    std::ifstream in(path);
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(contents == "hello\n");
    std::filesystem::remove(path);
}
