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

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "steerhier/criteria.hpp"

namespace steer::tools {

/// Invalid sweep configuration (exit code 2).
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Output could not be read or written (exit code 3).
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct SweepConfig {
    std::vector<int> n_atoms;
    double mu_min = 0.0;
    double mu_max = 1.0;
    int mu_steps = 21;
    std::vector<CriterionSpec> criteria;
    AngleSearchPolicy angle_policy;
    /// Adds first_delta1 / first_delta2:n / first_delta3:n rows.
    bool emit_first_terms = false;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::filesystem::path> plot_path;
    int workers = 1;

    /// Throws ConfigError.
    void validate() const;
    /// mu_min + i (mu_max - mu_min) / (mu_steps - 1).
    double mu_at(int index) const;
};

struct SweepRow {
    int n_atoms;
    double mu;
    /// "delta1".."delta4", or "first_delta1" etc. for first-term rows.
    std::string criterion;
    int order;
    double value;
    double phi_x;
    double phi_y;
    double first_term;
    double second_term;

    friend bool operator==(const SweepRow &, const SweepRow &) = default;
};

/// Evaluates every (N, mu) point on `config.workers` threads. Rows are
/// sorted by (n_atoms, mu, criterion, order) independent of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig &config);

inline constexpr std::string_view kCsvHeader = "n_atoms,mu,criterion,order,value,phi_x,phi_y,first_term,second_term";

std::string format_csv(const std::vector<SweepRow> &rows);
/// Throws IoError on a malformed document.
std::vector<SweepRow> parse_csv(std::string_view text);
std::string format_json(const SweepConfig &config, const std::vector<SweepRow> &rows);

/// Writes to a temporary sibling and renames it over `path`. Throws IoError.
void write_atomically(const std::filesystem::path &path, std::string_view contents);

/// One panel per N, one polyline per criterion series. Throws
/// std::invalid_argument("no data") on empty input.
std::string render_svg(const std::vector<SweepRow> &rows);
void render_plot(const std::vector<SweepRow> &rows, const std::filesystem::path &plot_path);

/// Parses "delta1,delta2:2,..."; throws ConfigError.
std::vector<CriterionSpec> parse_criteria_list(std::string_view text);
/// Parses "4,8,12"; throws ConfigError.
std::vector<int> parse_int_list(std::string_view text);

struct SelfCheckLine {
    std::string name;
    double error;
    double tolerance;
    bool pass;
};

/// Compares the production pipeline against the brute-force oracle for N <= 4.
std::vector<SelfCheckLine> run_self_check();

}  // namespace steer::tools
