#include "fife/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

namespace fife {

std::string library_version() { return "0.1.0"; }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

[[noreturn]] void config_fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

const std::vector<std::string> kKnownExamples = {
    "ex1-projection", "ex1-solve", "ex2-solve", "ex3-p-sweep", "conditioning"};

} // namespace

std::vector<ExperimentConfig> parse_config(const std::string& text) {
    std::vector<ExperimentConfig> configs;
    ExperimentConfig* current = nullptr;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') config_fail(lineno, "unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (std::find(kKnownExamples.begin(), kKnownExamples.end(), name) == kKnownExamples.end())
                config_fail(lineno, "unknown example id '" + name + "'");
            configs.emplace_back();
            configs.back().example = name;
            current = &configs.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) config_fail(lineno, "expected key = value");
        if (!current) config_fail(lineno, "key outside of any [example] section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) config_fail(lineno, "empty value for '" + key + "'");

        try {
            if (key == "m") {
                current->degrees.clear();
                for (const auto& v : split_list(value)) current->degrees.push_back(std::stoi(v));
            } else if (key == "n") {
                current->mesh_sizes.clear();
                for (const auto& v : split_list(value)) current->mesh_sizes.push_back(std::stoi(v));
            } else if (key == "beta_minus") {
                current->beta_minus = std::stod(value);
            } else if (key == "beta_plus") {
                current->beta_plus.clear();
                for (const auto& v : split_list(value)) current->beta_plus.push_back(std::stod(v));
            } else if (key == "sigma0") {
                current->sigma0 = std::stod(value);
            } else if (key == "volume_order") {
                current->volume_order = std::stoi(value);
            } else if (key == "edge_order") {
                current->edge_order = std::stoi(value);
            } else if (key == "solver_tol") {
                current->solver_tol = std::stod(value);
            } else if (key == "epsilon") {
                current->epsilons.clear();
                for (const auto& v : split_list(value)) current->epsilons.push_back(std::stod(v));
            } else if (key == "problem") {
                current->problem = std::stoi(value);
            } else if (key == "dump_mesh") {
                current->dump_mesh = (value == "true" || value == "1");
            } else if (key == "debug_dump_systems") {
                current->debug_dump_systems = (value == "true" || value == "1");
            } else {
                config_fail(lineno, "unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            config_fail(lineno, "could not parse value for '" + key + "'");
        }
    }

    for (auto& c : configs) {
        if (c.degrees.empty()) throw ConfigError("[" + c.example + "]: empty degree list");
        for (int m : c.degrees)
            if (m < 1) throw ConfigError("[" + c.example + "]: degrees must be >= 1");
        if (c.beta_minus <= 0) throw ConfigError("[" + c.example + "]: beta_minus must be positive");
        for (double b : c.beta_plus)
            if (b <= 0) throw ConfigError("[" + c.example + "]: beta_plus must be positive");
        if (c.sigma0 <= 0) throw ConfigError("[" + c.example + "]: sigma0 must be positive");

        if (c.example == "conditioning") {
            if (c.epsilons.empty())
                c.epsilons = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        } else if (c.example == "ex3-p-sweep") {
            if (c.mesh_sizes.empty()) c.mesh_sizes = {5};
            if (c.problem != 1 && c.problem != 2)
                throw ConfigError("[" + c.example + "]: problem must be 1 or 2");
        } else if (c.mesh_sizes.empty()) {
            throw ConfigError("[" + c.example + "]: empty mesh list");
        }
        for (int n : c.mesh_sizes)
            if (n < 1) throw ConfigError("[" + c.example + "]: mesh sizes must be >= 1");
    }
    return configs;
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void run_selftest() {
    verify_example1_interface(1.0, 10.0);
    verify_example1_interface(1.0, 1000.0);
    {
        const ExampleProblem p1 = make_example1(1.0, 10.0);
        validate_curve(p1.curve);
        validate_orientation(p1.curve, p1.in_plus);
    }
    {
        const ExampleProblem p2 = make_example2(1.0, 10.0);
        validate_curve(p2.curve);
        validate_orientation(p2.curve, p2.in_plus);
        // interface conditions of the Example 2 solution
        const SideLocator locator(p2.curve);
        for (int i = 0; i < 20; ++i) {
            const double xi = p2.curve.xi_begin +
                              p2.curve.domain_length() * (i + 0.5) / 20.0;
            const Vec2 x = p2.curve.g(xi);
            const FrenetFrame fr = frenet_apparatus(p2.curve, xi);
            const double vj = p2.u(x, Side::plus) - p2.u(x, Side::minus);
            const double fj = p2.beta_plus * p2.grad_u(x, Side::plus).dot(fr.n) -
                              p2.beta_minus * p2.grad_u(x, Side::minus).dot(fr.n);
            if (std::abs(vj) > 1e-11 || std::abs(fj) > 1e-9)
                throw ConfigError("selftest: Example 2 solution violates the jump conditions");
        }
    }
}

namespace {

struct Task {
    const ExperimentConfig* config;
    int m = 1;
    int n = 0;
    double beta_plus = 10.0;
    size_t order = 0; // deterministic output position
};

ResultRow run_task(const Task& task, const RunOptions& options,
                   std::vector<std::string>& outputs, std::mutex& output_mutex) {
    const ExperimentConfig& cfg = *task.config;
    ResultRow row;
    row.example = cfg.example;
    row.m = task.m;
    row.n = task.n;
    row.beta_minus = cfg.beta_minus;
    row.beta_plus = task.beta_plus;

    const bool is_ex2 = cfg.example == "ex2-solve" ||
                        (cfg.example == "ex3-p-sweep" && cfg.problem == 2);
    const ExampleProblem problem = is_ex2 ? make_example2(cfg.beta_minus, task.beta_plus)
                                          : make_example1(cfg.beta_minus, task.beta_plus);

    const Mesh mesh = build_mesh(problem.domain, task.n);
    row.h = mesh.h();
    const SideLocator locator(problem.curve);
    const DGSpace dg =
        build_dg_space(mesh, &problem.curve, &locator, task.m, cfg.beta_minus, task.beta_plus);
    row.dofs = dg.ndof();

    SolveOptions sopts;
    sopts.sigma0 = cfg.sigma0;
    sopts.volume_order = cfg.volume_order;
    sopts.edge_order = cfg.edge_order;
    sopts.residual_tol = cfg.solver_tol;

    if (cfg.example == "ex1-projection") {
        const auto t0 = std::chrono::steady_clock::now();
        const Eigen::VectorXd coeffs = project_l2(dg, problem.u, cfg.volume_order);
        row.solve_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const ErrorReport err = compute_error(dg, coeffs, problem.u, &problem.grad_u);
        row.rel_l2_error = err.rel_l2;
        row.rel_h1_error = err.rel_h1;
    } else {
        const GlobalSystem sys = assemble_and_solve(dg, problem.f, problem.g, sopts);
        row.solve_seconds = sys.solve_seconds;
        const ErrorReport err = compute_error(dg, sys.solution, problem.u, &problem.grad_u);
        row.rel_l2_error = err.rel_l2;
        row.rel_h1_error = err.rel_h1;
    }

    if (cfg.dump_mesh) {
        std::vector<std::optional<FrenetChart>> charts = dg.charts;
        char name[128];
        std::snprintf(name, sizeof(name), "mesh_%s_m%d_n%d.csv", cfg.example.c_str(), task.m, task.n);
        const std::filesystem::path path = std::filesystem::path(options.out_dir) / name;
        std::ofstream out(path);
        write_mesh_summary(out, dg.mesh, dg.cls, charts);
        std::lock_guard lock(output_mutex);
        outputs.push_back(path.string());
    }
    if (cfg.debug_dump_systems) {
        char name[128];
        std::snprintf(name, sizeof(name), "systems_%s_m%d_n%d.txt", cfg.example.c_str(), task.m, task.n);
        const std::filesystem::path path = std::filesystem::path(options.out_dir) / name;
        std::ofstream out(path);
        for (int e = 0; e < dg.mesh.n_elements(); ++e) {
            if (!dg.charts[e]) continue;
            out << "element " << e << "\n";
            const ExtensionSystem sys = extension_system(*dg.charts[e], task.m);
            dump_extension_system(out, sys, &dg.spaces[e].ext_coeffs);
        }
        std::lock_guard lock(output_mutex);
        outputs.push_back(path.string());
    }
    return row;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

RunSummary run_experiments(const std::vector<ExperimentConfig>& configs,
                           const RunOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);

    RunSummary summary;
    std::mutex output_mutex;

    // startup self-checks for the examples about to run
    bool any_ex1 = false, any_ex2 = false;
    for (const auto& c : configs) {
        if (c.example == "ex1-projection" || c.example == "ex1-solve" ||
            (c.example == "ex3-p-sweep" && c.problem == 1))
            any_ex1 = true;
        if (c.example == "ex2-solve" || (c.example == "ex3-p-sweep" && c.problem == 2))
            any_ex2 = true;
    }
    if (any_ex1) {
        const ExampleProblem p = make_example1(1.0, 10.0);
        verify_example1_interface(1.0, 10.0);
        validate_orientation(p.curve, p.in_plus);
    }
    if (any_ex2) {
        const ExampleProblem p = make_example2(1.0, 10.0);
        validate_curve(p.curve);
        validate_orientation(p.curve, p.in_plus);
    }

    // flatten the run grid
    std::vector<Task> tasks;
    for (const auto& cfg : configs) {
        if (cfg.example == "conditioning") continue;
        for (int m : cfg.degrees)
            for (int n : cfg.mesh_sizes)
                for (double bp : cfg.beta_plus)
                    tasks.push_back(Task{&cfg, m, n, bp, tasks.size()});
    }

    std::vector<ResultRow> rows(tasks.size());
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int workers = options.serial ? 1 : (options.workers > 0 ? options.workers : std::max(hw, 1));
    workers = std::min<int>(workers, std::max<size_t>(tasks.size(), 1));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= tasks.size()) return;
            try {
                rows[idx] = run_task(tasks[idx], options, summary.outputs, output_mutex);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // deterministic row order
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.example, a.m, a.n, a.beta_plus) <
               std::tie(b.example, b.m, b.n, b.beta_plus);
    });
    summary.rows = rows;

    const fs::path results_path = fs::path(options.out_dir) / "results.csv";
    {
        std::ofstream out(results_path);
        out << "example,m,n,h,beta_minus,beta_plus,rel_l2_error,rel_h1_error,dofs,solve_seconds\n";
        for (const auto& r : rows)
            out << r.example << "," << r.m << "," << r.n << "," << format_double(r.h) << ","
                << format_double(r.beta_minus) << "," << format_double(r.beta_plus) << ","
                << format_double(r.rel_l2_error) << "," << format_double(r.rel_h1_error) << ","
                << r.dofs << "," << format_double(r.solve_seconds) << "\n";
    }
    summary.outputs.push_back(results_path.string());

    // convergence-rate summary per (example, m, beta) over the mesh list
    {
        const fs::path rates_path = fs::path(options.out_dir) / "rates.csv";
        std::ofstream out(rates_path);
        out << "example,m,beta_minus,beta_plus,records,l2_slope\n";
        std::map<std::tuple<std::string, int, double, double>, std::vector<std::pair<double, double>>>
            groups;
        for (const auto& r : rows)
            groups[{r.example, r.m, r.beta_minus, r.beta_plus}].push_back({r.h, r.rel_l2_error});
        for (const auto& [key, records] : groups) {
            if (records.size() < 3) continue;
            const RateSummary rate = convergence_rates(records);
            out << std::get<0>(key) << "," << std::get<1>(key) << ","
                << format_double(std::get<2>(key)) << "," << format_double(std::get<3>(key)) << ","
                << records.size() << "," << format_double(rate.slope) << "\n";
        }
        summary.outputs.push_back(rates_path.string());
    }

    // conditioning studies
    bool any_conditioning = false;
    for (const auto& cfg : configs)
        if (cfg.example == "conditioning") any_conditioning = true;
    if (any_conditioning) {
        const fs::path cond_path = fs::path(options.out_dir) / "conditioning.csv";
        std::ofstream out(cond_path);
        out << "m,epsilon,cond\n";
        const Curve circle = Curve::circle(1.0);
        for (const auto& cfg : configs) {
            if (cfg.example != "conditioning") continue;
            for (int m : cfg.degrees) {
                const std::vector<double> conds =
                    conditioning_study(circle, m, cfg.epsilons);
                for (size_t i = 0; i < conds.size(); ++i)
                    out << m << "," << format_double(cfg.epsilons[i]) << ","
                        << format_double(conds[i]) << "\n";
            }
        }
        summary.outputs.push_back(cond_path.string());
    }

    // manifest with every parameter echoed
    {
        nlohmann::json manifest;
        manifest["library_version"] = library_version();
        manifest["serial"] = options.serial;
        manifest["workers"] = workers;
        manifest["experiments"] = nlohmann::json::array();
        for (const auto& cfg : configs) {
            nlohmann::json j;
            j["example"] = cfg.example;
            j["m"] = cfg.degrees;
            j["n"] = cfg.mesh_sizes;
            j["beta_minus"] = cfg.beta_minus;
            j["beta_plus"] = cfg.beta_plus;
            j["sigma0"] = cfg.sigma0;
            j["volume_order"] = cfg.volume_order;
            j["edge_order"] = cfg.edge_order;
            j["solver_tol"] = cfg.solver_tol;
            if (cfg.example == "conditioning") j["epsilon"] = cfg.epsilons;
            if (cfg.example == "ex3-p-sweep") j["problem"] = cfg.problem;
            manifest["experiments"].push_back(j);
        }
        const fs::path manifest_path = fs::path(options.out_dir) / "manifest.json";
        std::ofstream out(manifest_path);
        out << manifest.dump(2) << "\n";
        summary.outputs.push_back(manifest_path.string());
    }
    return summary;
}

} // namespace fife
