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


#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "steerhier/split_state.hpp"
#include "steerhier/tools/sweep.hpp"

namespace steer::tools {

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field) {
    const std::string s(field);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw IoError("malformed number '" + s + "'");
    return v;
}

int parse_int(std::string_view field) {
    const std::string s(field);
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (s.empty() || used != s.size()) throw IoError("malformed integer '" + s + "'");
    return v;
}

SweepRow make_row(int n, double mu, const CriterionResult &r) {
    return {n, mu, std::string(to_string(r.criterion_id)), r.order, r.value, r.phi_x, r.phi_y, r.first_term,
            r.second_term};
}

SweepRow first_row(int n, double mu, std::string name, int order, double value, double phi) {
    return {n, mu, std::move(name), order, value, 0.0, phi, value, 0.0};
}

std::vector<SweepRow> evaluate_point(const SweepConfig &config, int n, double mu) {
    SteeringEvaluator eval(split_state(n, mu));
    std::vector<SweepRow> rows;
    for (const auto &r : evaluate_criteria(eval, config.criteria, config.angle_policy)) {
        rows.push_back(make_row(n, mu, r));
    }
    if (config.emit_first_terms) {
        std::vector<int> orders;
        bool want_fisher = false;
        for (const auto &c : config.criteria) {
            if (c.id == CriterionId::delta1) want_fisher = true;
            if (c.id == CriterionId::delta2 || c.id == CriterionId::delta3) orders.push_back(c.order);
        }
        std::sort(orders.begin(), orders.end());
        orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
        const FirstTerms ft = first_terms(eval, orders, config.angle_policy);
        if (want_fisher) rows.push_back(first_row(n, mu, "first_delta1", 1, ft.fisher, ft.fisher_phi));
        for (const auto &c : config.criteria) {
            if (c.id == CriterionId::delta2) {
                rows.push_back(first_row(n, mu, "first_delta2", c.order, ft.moment.at(c.order), ft.moment_phi.at(c.order)));
            } else if (c.id == CriterionId::delta3) {
                rows.push_back(first_row(n, mu, "first_delta3", c.order, ft.reid.at(c.order), ft.reid_phi.at(c.order)));
            }
        }
    }
    return rows;
}

}  // namespace

void SweepConfig::validate() const {
    if (n_atoms.empty()) throw ConfigError("at least one atom number is required");
    for (int n : n_atoms) {
        if (n < 1 || n > kMaxAtoms) {
            throw ConfigError("atom number " + std::to_string(n) + " outside [1, " + std::to_string(kMaxAtoms) + "]");
        }
    }
    if (mu_steps < 1) throw ConfigError("mu-steps must be at least 1");
    if (!std::isfinite(mu_min) || !std::isfinite(mu_max)) throw ConfigError("mu bounds must be finite");
    if (mu_min > mu_max) throw ConfigError("mu-min exceeds mu-max");
    if (criteria.empty()) throw ConfigError("at least one criterion is required");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    try {
        angle_policy.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

double SweepConfig::mu_at(int index) const {
    if (mu_steps == 1) return mu_min;
    return mu_min + index * (mu_max - mu_min) / (mu_steps - 1);
}

std::vector<SweepRow> run_sweep(const SweepConfig &config) {
    config.validate();
    std::vector<int> ns = config.n_atoms;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const std::size_t points = ns.size() * static_cast<std::size_t>(config.mu_steps);
    std::vector<std::vector<SweepRow>> per_point(points);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < points; i = next++) {
            try {
                const int n = ns[i / config.mu_steps];
                const double mu = config.mu_at(static_cast<int>(i % config.mu_steps));
                per_point[i] = evaluate_point(config, n, mu);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = points;
            }
        }
    };
    const int threads = static_cast<int>(std::min<std::size_t>(config.workers, points));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    for (auto &chunk : per_point) {
        for (auto &r : chunk) rows.push_back(std::move(r));
    }
    // Points are already in (n, mu) order; stable sort keeps that.
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.n_atoms, a.mu, a.criterion, a.order) < std::tie(b.n_atoms, b.mu, b.criterion, b.order);
    });
    return rows;
}

std::string format_csv(const std::vector<SweepRow> &rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto &r : rows) {
        out += std::to_string(r.n_atoms) + ',' + format_double(r.mu) + ',' + r.criterion + ',' +
               std::to_string(r.order) + ',' + format_double(r.value) + ',' + format_double(r.phi_x) + ',' +
               format_double(r.phi_y) + ',' + format_double(r.first_term) + ',' + format_double(r.second_term) + '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty() || trim(lines.front()) != kCsvHeader) throw IoError("missing or unexpected CSV header");
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(trim(lines[i]), ',');
        if (f.size() != 9) throw IoError("CSV line " + std::to_string(i + 1) + " does not have 9 fields");
        rows.push_back({parse_int(f[0]), parse_double(f[1]), std::string(f[2]), parse_int(f[3]), parse_double(f[4]),
                        parse_double(f[5]), parse_double(f[6]), parse_double(f[7]), parse_double(f[8])});
    }
    return rows;
}

std::string format_json(const SweepConfig &config, const std::vector<SweepRow> &rows) {
    nlohmann::ordered_json cfg;
    cfg["n_atoms"] = config.n_atoms;
    cfg["mu_min"] = config.mu_min;
    cfg["mu_max"] = config.mu_max;
    cfg["mu_steps"] = config.mu_steps;
    std::vector<std::string> names;
    for (const auto &c : config.criteria) names.push_back(to_string(c));
    cfg["criteria"] = names;
    cfg["angle_policy"] = {{"coarse_points", config.angle_policy.coarse_points},
                           {"refine_rounds", config.angle_policy.refine_rounds},
                           {"refine_shrink", config.angle_policy.refine_shrink}};
    cfg["emit_first_terms"] = config.emit_first_terms;

    nlohmann::ordered_json doc;
    doc["config"] = std::move(cfg);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        doc["rows"].push_back({{"n_atoms", r.n_atoms},
                               {"mu", r.mu},
                               {"criterion_id", r.criterion},
                               {"order", r.order},
                               {"value", r.value},
                               {"phi_x", r.phi_x},
                               {"phi_y", r.phi_y},
                               {"first_term", r.first_term},
                               {"second_term", r.second_term}});
    }
    return doc.dump(2) + '\n';
}

void write_atomically(const std::filesystem::path &path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

std::vector<CriterionSpec> parse_criteria_list(std::string_view text) {
    std::vector<CriterionSpec> out;
    for (auto token : split(text, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            out.push_back(parse_criterion_spec(token));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }
    if (out.empty()) throw ConfigError("empty criteria list");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (auto token : split(text, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            out.push_back(parse_int(token));
        } catch (const IoError &) {
            throw ConfigError("not an integer: '" + std::string(token) + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

}  // namespace steer::tools
