// Command-line front end: simulation tables, exact cdf curves, ecdf
// realizations, and the selection + replicability + pi0 pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "randpv/analysis.hpp"
#include "randpv/config.hpp"
#include "randpv/errors.hpp"
#include "randpv/simulation.hpp"
#include "randpv/validity.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_numeric = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw randpv::data_error("cannot open output file '" + path + "'");
    out << content;
}

// "a:b:step" -> inclusive list of tuning parameters.
std::vector<double> parse_sweep(const std::string& spec) {
    double a = 0.0, b = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0.0 || b < a)
        throw randpv::data_error("bad --lambda-sweep '" + spec + "', expected a:b:step");
    std::vector<double> lambdas;
    for (int i = 0;; ++i) {
        const double lambda = a + i * step;
        if (lambda > b + 1e-12) break;
        lambdas.push_back(lambda);
    }
    return lambdas;
}

// Comma-separated effect entries, each "value" or "valuexcount";
// "inf"/"+inf" is the infinite-effect sentinel.
std::vector<double> parse_theta(const std::string& spec) {
    std::vector<double> theta;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        std::string value = token;
        long count = 1;
        const auto x = token.find_last_of("xX");
        if (x != std::string::npos && x + 1 < token.size() &&
            token.find_first_not_of("0123456789", x + 1) == std::string::npos) {
            value = token.substr(0, x);
            count = std::strtol(token.c_str() + x + 1, nullptr, 10);
        }
        double v;
        if (value == "inf" || value == "+inf") {
            v = std::numeric_limits<double>::infinity();
        } else {
            char* end = nullptr;
            v = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0')
                throw randpv::data_error("bad effect entry '" + token + "'");
        }
        for (long i = 0; i < count; ++i) theta.push_back(v);
    }
    if (theta.empty()) throw randpv::data_error("empty --theta specification");
    return theta;
}

int run(int argc, char** argv) {
    CLI::App app{"Randomized p-values for replicability analysis"};
    app.require_subcommand(1);

    // simulate-table
    auto* table = app.add_subcommand("simulate-table",
                                     "Monte Carlo pi0 table from a grid configuration file");
    std::string config_path, table_out = "table.csv";
    int workers = 0;
    std::string sweep_spec, kind_override;
    table->add_option("--config", config_path, "grid configuration file")->required();
    table->add_option("--out", table_out, "output CSV path");
    table->add_option("--workers", workers, "worker threads (0 = hardware)");
    table->add_option("--lambda-sweep", sweep_spec,
                      "a:b:step sweep of the tuning parameter (single-cell grids)");
    table->add_option("--pvalue-kind", kind_override,
                      "restrict to one kind: lfc, rand, stouffer or fisher");

    // cdf-curves
    auto* curves = app.add_subcommand("cdf-curves",
                                      "Exact LFC/randomized p-value cdf curves for one "
                                      "effect column");
    int cs = 10, cgamma = 6, cn = 50, grid_points = 1001;
    double cd = 0.5;
    std::string theta_spec, curves_out = "curves.csv";
    curves->add_option("--s", cs, "number of studies")->required();
    curves->add_option("--gamma", cgamma, "replication requirement")->required();
    curves->add_option("--n", cn, "per-study sample size")->required();
    curves->add_option("--theta", theta_spec, "effects, e.g. \"-0.2121x5,1x5\"")->required();
    curves->add_option("--d", cd, "per-study sign threshold");
    curves->add_option("--grid-points", grid_points, "grid resolution");
    curves->add_option("--out", curves_out, "output CSV path");

    // ecdf-curves
    auto* ecdf = app.add_subcommand("ecdf-curves",
                                    "Empirical cdf of one simulated realization per kind");
    std::string ecdf_config, ecdf_out = "ecdf.csv";
    std::int64_t replicate = 0;
    ecdf->add_option("--config", ecdf_config, "grid configuration file (single cell)")
        ->required();
    ecdf->add_option("--replicate", replicate, "replicate index");
    ecdf->add_option("--out", ecdf_out, "output CSV path");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze",
                                           "BH selection + replicability p-values + pi0 "
                                           "estimation on a z-score table");
    std::string input_path, primary, analyze_out;
    double q = 0.2, lambda = 0.5;
    int agamma = 2, rand_repeats = 100000;
    std::uint64_t seed = 1;
    analyze_cmd->add_option("--input", input_path, "z-score table (tsv/csv)")->required();
    analyze_cmd->add_option("--primary", primary, "primary study id")->required();
    analyze_cmd->add_option("--q", q, "BH false discovery rate level")->required();
    analyze_cmd->add_option("--gamma", agamma, "replication requirement")->required();
    analyze_cmd->add_option("--lambda", lambda, "pi0 tuning parameter");
    analyze_cmd->add_option("--rand-repeats", rand_repeats, "uniform redraws");
    analyze_cmd->add_option("--seed", seed, "random seed");
    analyze_cmd->add_option("--out", analyze_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (table->parsed()) {
        std::vector<randpv::SimulationSetting> grid = randpv::load_table_grid(config_path);
        if (!kind_override.empty())
            for (auto& setting : grid) setting.kinds = {randpv::parse_kind(kind_override)};
        std::ostringstream prov;
        const auto& first = grid.front();
        prov << "randpv simulate-table config=" << config_path << " cells=" << grid.size()
             << " m=" << first.m << " s=" << first.s << " n=" << first.n
             << " lambda=" << randpv::shortest_double(first.lambda)
             << " reps=" << first.reps << " seed=" << first.seed;
        if (!sweep_spec.empty()) {
            if (grid.size() != 1)
                throw randpv::data_error("--lambda-sweep needs a single-cell grid");
            const std::vector<double> lambdas = parse_sweep(sweep_spec);
            const auto points = randpv::run_lambda_sweep(grid.front(), lambdas, workers);
            write_file(table_out,
                       randpv::curve_csv(points, "lambda", prov.str() + " sweep=" + sweep_spec));
        } else {
            const auto cells = randpv::run_table(grid, workers);
            write_file(table_out, randpv::table_csv(cells, prov.str()));
        }
        return exit_ok;
    }

    if (curves->parsed()) {
        const std::vector<double> theta = parse_theta(theta_spec);
        if (static_cast<int>(theta.size()) != cs)
            throw randpv::data_error("--theta must list exactly s effects");
        const randpv::ReplicabilityConfig config{cs, cgamma, cd};
        if (grid_points < 2) throw randpv::data_error("--grid-points must be >= 2");
        std::vector<double> grid(static_cast<std::size_t>(grid_points));
        for (int i = 0; i < grid_points; ++i)
            grid[static_cast<std::size_t>(i)] =
                static_cast<double>(i) / static_cast<double>(grid_points - 1);
        std::ostringstream prov;
        prov << "randpv cdf-curves s=" << cs << " gamma=" << cgamma << " n=" << cn
             << " theta=" << theta_spec;
        write_file(curves_out, randpv::cdf_curves_csv(theta, config, cn, grid, prov.str()));
        return exit_ok;
    }

    if (ecdf->parsed()) {
        const std::vector<randpv::SimulationSetting> grid = randpv::load_table_grid(ecdf_config);
        if (grid.size() != 1) throw randpv::data_error("ecdf-curves needs a single-cell grid");
        const auto points = randpv::ecdf_realization(grid.front(), replicate);
        std::ostringstream prov;
        prov << "randpv ecdf-curves config=" << ecdf_config << " replicate=" << replicate
             << " seed=" << grid.front().seed;
        write_file(ecdf_out, randpv::curve_csv(points, "t", prov.str()));
        return exit_ok;
    }

    // analyze
    const randpv::ZScoreMatrix matrix = randpv::load_zscore_matrix(input_path);
    const randpv::AnalysisReport report =
        randpv::analyze(matrix, primary, q, agamma, lambda, rand_repeats, seed);
    std::ostringstream prov;
    prov << "randpv analyze input=" << input_path << " primary=" << primary
         << " q=" << randpv::shortest_double(q) << " gamma=" << agamma
         << " lambda=" << randpv::shortest_double(lambda) << " rand-repeats=" << rand_repeats
         << " seed=" << seed;
    const std::string text = randpv::report_csv(report, prov.str());
    if (analyze_out.empty())
        std::cout << text;
    else
        write_file(analyze_out, text);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const randpv::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}
