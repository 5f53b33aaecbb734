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


#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steerhier/tools/sweep.hpp"

namespace steer::tools {
namespace {

namespace fs = std::filesystem;

SweepConfig small_config() {
    SweepConfig c;
    c.n_atoms = {5, 3};
    c.mu_min = 0.0;
    c.mu_max = 0.6;
    c.mu_steps = 4;
    c.criteria = parse_criteria_list("delta4,delta1,delta2:2,delta3:1");
    c.angle_policy.coarse_points = 31;
    return c;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("steerhier_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(SweepConfig, Validation) {
    SweepConfig c = small_config();
    EXPECT_NO_THROW(c.validate());
    c.mu_steps = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.mu_min = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.n_atoms = {41};
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.criteria.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.workers = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.angle_policy.coarse_points = 3;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(parse_criteria_list("delta1,delta9"), ConfigError);
    EXPECT_THROW(parse_int_list("4,x"), ConfigError);
    EXPECT_EQ(parse_int_list("4, 8,12"), (std::vector<int>{4, 8, 12}));
}

TEST(SweepConfig, MuGrid) {
    SweepConfig c = small_config();
    EXPECT_DOUBLE_EQ(c.mu_at(0), 0.0);
    EXPECT_DOUBLE_EQ(c.mu_at(3), 0.6);
    c.mu_steps = 1;
    EXPECT_DOUBLE_EQ(c.mu_at(0), 0.0);
}

TEST(RunSweep, FourAtomCoincidence) {
    SweepConfig c;
    c.n_atoms = {4};
    c.mu_min = 0.0;
    c.mu_max = 0.5;
    c.mu_steps = 21;
    c.criteria = parse_criteria_list("delta1,delta2:2");
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 42u);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        ASSERT_EQ(rows[i].criterion, "delta1");
        ASSERT_EQ(rows[i + 1].criterion, "delta2");
        EXPECT_EQ(rows[i].mu, rows[i + 1].mu);
        EXPECT_LE(std::abs(rows[i].value - rows[i + 1].value), 1e-6);
    }
}

TEST(RunSweep, ProductStateRowsVanish) {
    SweepConfig c;
    c.n_atoms = {6};
    c.mu_min = c.mu_max = 0.0;
    c.mu_steps = 1;
    c.criteria = parse_criteria_list("delta1,delta2:1,delta2:2,delta3:1,delta3:2,delta4");
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto &r : rows) EXPECT_NEAR(r.value, 0.0, 1e-9) << r.criterion << ":" << r.order;
}

TEST(RunSweep, SortedRowsWithConsistentTerms) {
    const auto rows = run_sweep(small_config());
    ASSERT_EQ(rows.size(), 2u * 4u * 4u);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.n_atoms, a.mu, a.criterion, a.order) < std::tie(b.n_atoms, b.mu, b.criterion, b.order);
    }));
    EXPECT_EQ(rows.front().n_atoms, 3);
    for (const auto &r : rows) EXPECT_NEAR(r.value, r.first_term - r.second_term, 1e-10);
}

TEST(RunSweep, WorkerCountDoesNotChangeOutput) {
    SweepConfig c = small_config();
    c.workers = 1;
    const std::string one = format_csv(run_sweep(c));
    c.workers = 8;
    const std::string eight = format_csv(run_sweep(c));
    EXPECT_EQ(one, eight);
}

TEST(RunSweep, FirstTermRows) {
    SweepConfig c = small_config();
    c.n_atoms = {4};
    c.mu_steps = 1;
    c.mu_min = c.mu_max = 0.0;
    c.emit_first_terms = true;
    const auto rows = run_sweep(c);
    int first_rows = 0;
    for (const auto &r : rows) {
        if (!r.criterion.starts_with("first_")) continue;
        ++first_rows;
        EXPECT_NEAR(r.value, 2.0, 1e-9) << r.criterion;
        EXPECT_EQ(r.phi_x, 0.0);
        EXPECT_EQ(r.second_term, 0.0);
    }
    EXPECT_EQ(first_rows, 3);  // delta1, delta2:2, delta3:1
}

TEST(Csv, HeaderAndRoundTrip) {
    const auto rows = run_sweep(small_config());
    const std::string csv = format_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "n_atoms,mu,criterion,order,value,phi_x,phi_y,first_term,second_term");
    EXPECT_EQ(parse_csv(csv), rows);
    std::vector<SweepRow> odd{{7, 0.1, "delta2", 2, 1.0 / 3.0, 2.0 / 7.0, 3.141592653589793, -1e-300, 5e-324}};
    EXPECT_EQ(parse_csv(format_csv(odd)), odd);
    EXPECT_THROW(parse_csv("a,b\n"), IoError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"), IoError);
}

TEST(Json, MirrorsRowsWithConfigEcho) {
    const SweepConfig c = small_config();
    const auto rows = run_sweep(c);
    const auto doc = nlohmann::json::parse(format_json(c, rows));
    EXPECT_EQ(doc.at("config").at("mu_steps"), 4);
    ASSERT_EQ(doc.at("rows").size(), rows.size());
    const auto &r0 = doc.at("rows")[0];
    for (const char *key :
         {"n_atoms", "mu", "criterion_id", "order", "value", "phi_x", "phi_y", "first_term", "second_term"}) {
        EXPECT_TRUE(r0.contains(key)) << key;
    }
    EXPECT_EQ(r0.at("value").get<double>(), rows[0].value);
}

TEST(Output, AtomicWriteAndFailure) {
    const fs::path dir = scratch_dir();
    const fs::path target = dir / "out.csv";
    write_atomically(target, "first");
    write_atomically(target, "second");
    EXPECT_EQ(slurp(target), "second");
    EXPECT_FALSE(fs::exists(dir / "out.csv.tmp"));
    EXPECT_THROW(write_atomically(dir / "missing" / "out.csv", "x"), IoError);
    fs::remove_all(dir);
}

std::size_t count(const std::string &haystack, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

TEST(Plot, EmptyInputIsAnError) {
    try {
        render_svg({});
        FAIL() << "expected an exception";
    } catch (const std::invalid_argument &e) {
        EXPECT_STREQ(e.what(), "no data");
    }
}

TEST(Plot, OnePolylinePerSeriesAndPanelPerN) {
    SweepConfig c;
    c.n_atoms = {4};
    c.mu_max = 0.5;
    c.mu_steps = 21;
    c.criteria = parse_criteria_list("delta1,delta2:2");
    c.angle_policy.coarse_points = 31;
    const auto rows = run_sweep(c);
    const std::string svg = render_svg(rows);
    EXPECT_EQ(count(svg, "<polyline"), 2u);
    EXPECT_EQ(count(svg, "class=\"panel\""), 1u);
    EXPECT_EQ(count(svg, "class=\"zero\""), 1u);
    EXPECT_NE(svg.find(">μ<"), std::string::npos);
    EXPECT_NE(svg.find(">δ<"), std::string::npos);
    EXPECT_EQ(svg, render_svg(rows));

    const std::string two = render_svg(run_sweep(small_config()));
    EXPECT_EQ(count(two, "class=\"panel\""), 2u);
    EXPECT_EQ(count(two, "<polyline"), 8u);
}

TEST(SelfCheck, AllLinesPass) {
    for (const auto &line : run_self_check()) EXPECT_TRUE(line.pass) << line.name << " err=" << line.error;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(STEER_HIER_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Executable, ExitCodes) {
    const fs::path dir = scratch_dir();
    EXPECT_EQ(run_cli("sweep --n 3 --mu-steps 2 --criteria delta1,delta4 --grid-points 16 --out " +
                      (dir / "ok.csv").string() + " --plot " + (dir / "ok.svg").string()),
              0);
    EXPECT_TRUE(fs::exists(dir / "ok.csv"));
    EXPECT_TRUE(fs::exists(dir / "ok.svg"));
    EXPECT_EQ(parse_csv(slurp(dir / "ok.csv")).size(), 4u);
    EXPECT_EQ(run_cli("sweep --n 50"), 2);
    EXPECT_EQ(run_cli("sweep --n 3 --mu-min 1 --mu-max 0"), 2);
    EXPECT_EQ(run_cli("sweep --n 3 --criteria delta7"), 2);
    EXPECT_EQ(run_cli("sweep --bogus"), 2);
    EXPECT_EQ(run_cli("sweep --n 3 --mu-steps 2 --criteria delta4 --out " + (dir / "nope" / "x.csv").string()), 3);
    EXPECT_EQ(run_cli("hierarchy --n 4 --mu 0.2 --grid-points 31"), 0);
    fs::remove_all(dir);
}

TEST(Executable, WorkerEnvironmentVariable) {
    const fs::path dir = scratch_dir();
    const std::string common = "sweep --n 3,4 --mu-steps 3 --criteria delta1,delta3:1 --grid-points 16 --out ";
    EXPECT_EQ(run_cli(common + (dir / "a.csv").string() + " --workers 1"), 0);
    EXPECT_EQ(run_cli("") , 2);
    const std::string env_cmd = "STEER_HIER_WORKERS=4 " + std::string(STEER_HIER_EXE) + " " + common +
                                (dir / "b.csv").string() + " >/dev/null 2>&1";
    EXPECT_EQ(std::system(env_cmd.c_str()), 0);
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    fs::remove_all(dir);
}

}  // namespace
}  // namespace steer::tools
