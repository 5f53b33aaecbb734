// Copyright 2026 The steerhier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steerhier/errors.hpp"
#include "steerhier/split_state.hpp"
#include "steerhier/tools/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

int default_workers() {
    if (const char *env = std::getenv("STEER_HIER_WORKERS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception &) {
            throw steer::tools::ConfigError(std::string("STEER_HIER_WORKERS is not an integer: ") + env);
        }
    }
    return 1;
}

int run_sweep_command(const steer::tools::SweepConfig &config) {
    using namespace steer::tools;
    const auto rows = run_sweep(config);
    const std::string body = config.format == OutputFormat::csv ? format_csv(rows) : format_json(config, rows);
    if (config.output_path.empty()) {
        std::cout << body;
    } else {
        write_atomically(config.output_path, body);
    }
    if (config.plot_path) render_plot(rows, *config.plot_path);
    return 0;
}

int run_self_check_command() {
    bool ok = true;
    for (const auto &line : steer::tools::run_self_check()) {
        std::printf("%-4s %-32s err=%.3e tol=%.0e\n", line.pass ? "PASS" : "FAIL", line.name.c_str(), line.error,
                    line.tolerance);
        ok = ok && line.pass;
    }
    return ok ? 0 : kExitNumerical;
}

int run_hierarchy_command(int n, double mu, const std::vector<int> &orders, const steer::AngleSearchPolicy &policy) {
    const auto report = steer::hierarchy_check(steer::split_state(n, mu), orders, policy);
    std::printf("N=%d mu=%.6g\n", report.n_atoms, report.mu);
    for (const auto &r : report.results) {
        std::printf("  %-10s % .10f  (phi_x=%.6f, phi_y=%.6f)\n", steer::to_string(r.spec()).c_str(), r.value,
                    r.phi_x, r.phi_y);
    }
    for (const auto &c : report.checks) {
        std::printf("%-4s %-24s lower=% .10f upper=% .10f\n", c.pass ? "PASS" : "FAIL", c.relation.c_str(), c.lower,
                    c.upper);
    }
    return report.all_pass() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace steer::tools;
    CLI::App app{"Steering criteria for split one-axis-twisted spin states"};
    app.require_subcommand(1);

    SweepConfig config;
    std::string n_list = "20";
    std::string criteria = "delta1,delta2:1,delta2:2,delta3:1,delta3:2,delta4";
    std::string format = "csv";
    std::string out_path;
    std::string plot_path;
    int workers = 0;

    auto *sweep = app.add_subcommand("sweep", "Evaluate criteria over an (N, mu) grid");
    sweep->add_option("--n", n_list, "Comma-separated atom numbers")->capture_default_str();
    sweep->add_option("--mu-min", config.mu_min)->capture_default_str();
    sweep->add_option("--mu-max", config.mu_max)->capture_default_str();
    sweep->add_option("--mu-steps", config.mu_steps)->capture_default_str();
    sweep->add_option("--criteria", criteria, "e.g. delta1,delta2:2,delta4")->capture_default_str();
    sweep->add_option("--grid-points", config.angle_policy.coarse_points, "Coarse grid points per angle")
        ->capture_default_str();
    sweep->add_option("--refine-rounds", config.angle_policy.refine_rounds)->capture_default_str();
    sweep->add_flag("--first-terms", config.emit_first_terms, "Also emit independently optimized first terms");
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sweep->add_option("--out", out_path, "Output file (stdout if omitted)");
    sweep->add_option("--plot", plot_path, "SVG plot path");
    sweep->add_option("--workers", workers, "Worker threads (default $STEER_HIER_WORKERS or 1)");

    auto *self_check = app.add_subcommand("self-check", "Compare against the brute-force oracle for N <= 4");
    self_check->group("");

    int h_n = 8;
    double h_mu = 0.3;
    std::string h_orders = "1,2";
    steer::AngleSearchPolicy h_policy;
    auto *hierarchy = app.add_subcommand("hierarchy", "Check the criterion inequalities at one point");
    hierarchy->add_option("--n", h_n)->capture_default_str();
    hierarchy->add_option("--mu", h_mu)->capture_default_str();
    hierarchy->add_option("--orders", h_orders)->capture_default_str();
    hierarchy->add_option("--grid-points", h_policy.coarse_points)->capture_default_str();
    hierarchy->add_option("--refine-rounds", h_policy.refine_rounds)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sweep) {
            config.n_atoms = parse_int_list(n_list);
            config.criteria = parse_criteria_list(criteria);
            config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
            config.output_path = out_path;
            if (!plot_path.empty()) config.plot_path = plot_path;
            config.workers = workers > 0 ? workers : default_workers();
            config.validate();
            return run_sweep_command(config);
        }
        if (*self_check) return run_self_check_command();
        if (*hierarchy) {
            h_policy.validate();
            if (h_n < 1 || h_n > steer::kMaxAtoms) throw ConfigError("--n outside [1, 40]");
            return run_hierarchy_command(h_n, h_mu, parse_int_list(h_orders), h_policy);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const steer::NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
