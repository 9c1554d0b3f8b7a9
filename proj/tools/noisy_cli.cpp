// Command-line harness for the noisy comparison benchmark library.
//
// Subcommands:
//   constants  closed-form channel constants and query targets
//   bench      Monte Carlo trials of one algorithm configuration
//   sweep      cross product of n/p/delta lists, one aggregate per combo
//
// Exit status: 0 success, 2 usage or domain error, 1 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisy/bench.hpp"

namespace {

struct BenchCliOptions {
    std::string algorithm = "safe-noisy-sort";
    noisy::BenchConfig config;
    std::string format = "csv";
    std::string out_path;
    bool per_trial = false;
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> parts;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

void emit(const std::vector<noisy::AggregateReport>& reports, const BenchCliOptions& opts) {
    std::string payload = opts.format == "json" ? noisy::to_json(reports, opts.per_trial)
                                                : noisy::to_csv(reports);
    if (opts.out_path.empty())
        std::cout << payload;
    else
        noisy::write_file(opts.out_path, payload);
}

void print_summary(const noisy::AggregateReport& agg) {
    std::fprintf(stderr, "%s n=%zu p=%g delta=%g trials=%zu: error=%.4g queries mean=%.1f p95=%llu ratio=%.4f restarts=%.3f\n",
                 std::string(noisy::algorithm_name(agg.config.algorithm)).c_str(),
                 agg.config.n, agg.config.p, agg.config.delta, agg.per_trial.size(),
                 agg.error_rate, agg.mean_queries,
                 static_cast<unsigned long long>(agg.p95_queries), agg.ratio_nlogn,
                 agg.mean_restarts);
    if (agg.config.algorithm == noisy::Algorithm::kBinarySearch)
        std::fprintf(stderr, "  theory: floor=%.3f target=%.3f\n",
                     noisy::search_query_floor(agg.config.n, agg.config.p, agg.config.delta),
                     noisy::search_query_target(agg.config.n, agg.config.p, agg.config.delta));
}

void add_bench_options(CLI::App* cmd, BenchCliOptions& opts, bool lists,
                       std::string& n_list, std::string& p_list, std::string& delta_list) {
    cmd->add_option("--algorithm", opts.algorithm, "algorithm to benchmark")
        ->default_val(opts.algorithm);
    if (lists) {
        cmd->add_option("--n", n_list, "comma-separated instance sizes")->required();
        cmd->add_option("--p", p_list, "comma-separated crossover probabilities")->required();
        cmd->add_option("--delta", delta_list, "comma-separated target errors")->required();
    } else {
        cmd->add_option("--n", opts.config.n, "instance size")->default_val(opts.config.n);
        cmd->add_option("--p", opts.config.p, "crossover probability")
            ->default_val(opts.config.p);
        cmd->add_option("--delta", opts.config.delta, "target error probability")
            ->default_val(opts.config.delta);
    }
    cmd->add_option("--trials", opts.config.trials, "trial count")
        ->default_val(opts.config.trials);
    cmd->add_option("--seed", opts.config.seed, "master seed")->default_val(opts.config.seed);
    cmd->add_option("--c1", opts.config.c1, "pivot sort budget multiplier")
        ->default_val(opts.config.c1);
    cmd->add_option("--c2", opts.config.c2, "overall sort budget multiplier")
        ->default_val(opts.config.c2);
    cmd->add_option("--parallel", opts.config.parallelism, "worker thread count")
        ->default_val(opts.config.parallelism);
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val(opts.format);
    cmd->add_option("--out", opts.out_path, "output path (stdout when omitted)");
    cmd->add_flag("--per-trial", opts.per_trial, "include per-trial records (json)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy comparison sorting and searching benchmark"};
    app.require_subcommand(1);

    // constants
    double const_p = 0.1;
    std::optional<double> const_delta;
    std::optional<std::size_t> const_n;
    CLI::App* constants_cmd =
        app.add_subcommand("constants", "print channel constants and query targets");
    constants_cmd->add_option("--p", const_p, "crossover probability")->required();
    constants_cmd->add_option("--delta", const_delta, "target error probability");
    constants_cmd->add_option("--n", const_n, "instance size for the search expressions");

    // bench
    BenchCliOptions bench_opts;
    std::string unused_n, unused_p, unused_delta;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run Monte Carlo trials");
    add_bench_options(bench_cmd, bench_opts, false, unused_n, unused_p, unused_delta);

    // sweep
    BenchCliOptions sweep_opts;
    std::string n_list, p_list, delta_list;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a cross product of configurations");
    add_bench_options(sweep_cmd, sweep_opts, true, n_list, p_list, delta_list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (constants_cmd->parsed()) {
            std::cout << noisy::constants_report(const_p, const_delta, const_n);
            return 0;
        }
        if (bench_cmd->parsed()) {
            const auto algorithm = noisy::parse_algorithm(bench_opts.algorithm);
            if (!algorithm) throw std::invalid_argument("unknown algorithm: " + bench_opts.algorithm);
            bench_opts.config.algorithm = *algorithm;
            const noisy::AggregateReport agg = noisy::run_trials(bench_opts.config);
            print_summary(agg);
            emit({agg}, bench_opts);
            return 0;
        }
        // sweep
        const auto algorithm = noisy::parse_algorithm(sweep_opts.algorithm);
        if (!algorithm) throw std::invalid_argument("unknown algorithm: " + sweep_opts.algorithm);
        sweep_opts.config.algorithm = *algorithm;
        std::vector<noisy::AggregateReport> reports;
        for (const auto& n_str : split_list(n_list))
            for (const auto& p_str : split_list(p_list))
                for (const auto& delta_str : split_list(delta_list)) {
                    noisy::BenchConfig config = sweep_opts.config;
                    config.n = std::stoull(n_str);
                    config.p = std::stod(p_str);
                    config.delta = std::stod(delta_str);
                    reports.push_back(noisy::run_trials(config));
                    print_summary(reports.back());
                }
        if (reports.empty()) throw std::invalid_argument("sweep: empty n/p/delta lists");
        emit(reports, sweep_opts);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
