#pragma once

#include <string>
#include <vector>

#include "fife/problems.hpp"

namespace fife {

/// One experiment section of a config file.
struct ExperimentConfig {
    std::string example; // ex1-projection | ex1-solve | ex2-solve | ex3-p-sweep | conditioning
    std::vector<int> degrees{1};
    std::vector<int> mesh_sizes{};
    double beta_minus = 1.0;
    std::vector<double> beta_plus{10.0};
    double sigma0 = 4.0;
    int volume_order = 0; // 0 = default m + 3
    int edge_order = 0;   // 0 = default m + 2
    double solver_tol = 1e-10;
    std::vector<double> epsilons{}; // conditioning study
    int problem = 1;                // ex3-p-sweep: 1 or 2
    bool dump_mesh = false;
    bool debug_dump_systems = false;
};

/// Parses the flat key = value format with one [example-id] section per
/// experiment. Throws ConfigError with line diagnostics.
std::vector<ExperimentConfig> parse_config(const std::string& text);
std::vector<ExperimentConfig> parse_config_file(const std::string& path);

struct RunOptions {
    std::string out_dir = ".";
    bool serial = false;
    int workers = 0; // 0 = hardware concurrency
};

struct ResultRow {
    std::string example;
    int m = 0;
    int n = 0;
    double h = 0.0;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    double rel_l2_error = 0.0;
    double rel_h1_error = 0.0;
    int dofs = 0;
    double solve_seconds = 0.0;
};

struct RunSummary {
    std::vector<ResultRow> rows;
    std::vector<std::string> outputs; // files written
};

/// Runs every configured experiment and writes results.csv, rates.csv,
/// conditioning.csv (when applicable) and manifest.json under out_dir.
RunSummary run_experiments(const std::vector<ExperimentConfig>& configs,
                           const RunOptions& options);

/// Library self-checks: analytic interface conditions of the Example 1
/// solution, curve validity and orientation of both example interfaces.
void run_selftest();

std::string library_version();

} // namespace fife
