#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "fife/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Frenet-coordinate immersed finite element experiment driver"};

    std::string config_path;
    std::string out_dir = ".";
    bool serial = false;
    int workers = 0;
    bool selftest = false;

    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--out", out_dir, "output directory for CSV/JSON tables");
    app.add_flag("--serial", serial, "run grid points sequentially");
    app.add_option("--workers", workers, "worker limit for concurrent grid points");
    app.add_flag("--selftest", selftest, "run library self-checks and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest) {
            fife::run_selftest();
            std::cout << "selftest: ok\n";
            if (config_path.empty()) return 0;
        }
        if (config_path.empty()) {
            std::cerr << "error: --config is required (or use --selftest)\n";
            return 2;
        }

        const std::vector<fife::ExperimentConfig> configs = fife::parse_config_file(config_path);
        if (configs.empty()) {
            std::cerr << "error: config defines no experiments\n";
            return 2;
        }

        fife::RunOptions options;
        options.out_dir = out_dir;
        options.serial = serial;
        options.workers = workers;

        const fife::RunSummary summary = fife::run_experiments(configs, options);
        std::cout << "wrote " << summary.rows.size() << " result rows\n";
        for (const auto& f : summary.outputs) std::cout << "  " << f << "\n";
        return 0;
    } catch (const fife::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
