// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qbench/bench.hpp"
#include "qbench/instance_io.hpp"

using namespace qbench;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("qbench_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        // Small budgets keep the end-to-end runs short.
        std::ofstream(path("fast.json")) << R"({"budget": 30, "p": 2, "sa_sweeps": 50, "sa_shots": 50,)"
                                         << R"( "maxcut_T": 2.0, "numpart_T": 2e-4, "knapsack_T": 2e-6,)"
                                         << R"( "spinglass_T": 2.0, "qa_T": 1.0})";
    }

    [[nodiscard]] std::string path(const std::string &name) const { return (dir_ / name).string(); }

    /// Runs the CLI and returns its exit status; stdout and stderr land in out_ / err_.
    int qbench(const std::string &args, const std::string &env = "") {
        const std::string cmd = env + " '" + std::string(QBENCH_CLI_PATH) + "' " + args + " > '" + path("stdout") +
                                "' 2> '" + path("stderr") + "'";
        const int status = std::system(cmd.c_str());
        out_ = slurp(path("stdout"));
        err_ = slurp(path("stderr"));
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(const std::string &p) {
        std::ifstream is(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    }

    static std::size_t count_lines(const std::string &s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

    fs::path dir_;
    std::string out_;
    std::string err_;
};

} // namespace

TEST_F(Cli, HelpExitsZero) {
    EXPECT_EQ(qbench("--help"), 0);
    EXPECT_NE(out_.find("gen"), std::string::npos);
    EXPECT_EQ(qbench(""), 2);
    EXPECT_EQ(qbench("frobnicate"), 2);
}

TEST_F(Cli, GenIsDeterministic) {
    ASSERT_EQ(qbench("gen maxcut --count 250 --n 5 --seed 0 -o " + path("a.jsonl")), 0) << err_;
    ASSERT_EQ(qbench("gen maxcut --count 250 --n 5 --seed 0 -o " + path("b.jsonl")), 0) << err_;
    const auto a = slurp(path("a.jsonl"));
    EXPECT_EQ(count_lines(a), 250U);
    EXPECT_EQ(a, slurp(path("b.jsonl")));
    std::ifstream is(path("a.jsonl"));
    const auto inst = read_instances(is);
    ASSERT_EQ(inst.size(), 250U);
    EXPECT_EQ(inst[17].seed, 17U);
    EXPECT_EQ(inst[17].n, 5U);
}

TEST_F(Cli, GenRejectsUnknownKind) {
    EXPECT_EQ(qbench("gen foo -o " + path("x.jsonl")), 2);
    EXPECT_NE(err_.find("maxcut"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.jsonl")));
}

TEST_F(Cli, RunWritesRecordsAndResumes) {
    ASSERT_EQ(qbench("gen maxcut --count 2 --n 4 --seed 5 -o " + path("i.jsonl")), 0);
    const std::string base = "run " + path("i.jsonl") + " --algo qite_sim,sa --no-timing --config " +
                             path("fast.json") + " -o " + path("r.csv");
    ASSERT_EQ(qbench(base), 0) << err_;
    const auto full = slurp(path("r.csv"));
    ASSERT_EQ(count_lines(full), 5U);
    std::istringstream is(full);
    for (const auto &r : read_results(is)) EXPECT_TRUE(r.ok());

    ASSERT_EQ(qbench(base + " --resume"), 0) << err_;
    EXPECT_EQ(slurp(path("r.csv")), full);
    fs::resize_file(path("r.csv"), full.size() - 10);
    ASSERT_EQ(qbench(base + " --resume"), 0) << err_;
    EXPECT_EQ(slurp(path("r.csv")), full);
}

TEST_F(Cli, RunReportsFailedRunsWithPartialExit) {
    ASSERT_EQ(qbench("gen spinglass --count 1 --n 3 -o " + path("sg.jsonl")), 0);
    EXPECT_EQ(qbench("run " + path("sg.jsonl") + " --algo sa --config " + path("fast.json") + " -o " + path("r.csv")), 3);
    EXPECT_EQ(qbench("run " + path("sg.jsonl") + " --algo sa --diagonal-part --config " + path("fast.json") + " -o " +
                     path("d.csv")),
              0)
        << err_;
}

TEST_F(Cli, RunRejectsHardwareAndBadInput) {
    ASSERT_EQ(qbench("gen maxcut --count 1 --n 3 -o " + path("i.jsonl")), 0);
    EXPECT_EQ(qbench("run " + path("i.jsonl") + " --algo qa_hw -o " + path("r.csv")), 2);
    EXPECT_NE(err_.find("hardware"), std::string::npos);
    EXPECT_EQ(qbench("run " + path("i.jsonl") + " --algo nope -o " + path("r.csv")), 2);
    std::ofstream(path("empty.jsonl")).flush();
    EXPECT_EQ(qbench("run " + path("empty.jsonl") + " -o " + path("r.csv")), 2);
    std::ofstream(path("bad.jsonl")) << slurp(path("i.jsonl")) << "{not json}\n";
    EXPECT_EQ(qbench("run " + path("bad.jsonl") + " -o " + path("r.csv")), 2);
    EXPECT_NE(err_.find("line 2"), std::string::npos);
}

TEST_F(Cli, SweepProducesOneRowPerRunAndTable) {
    ASSERT_EQ(qbench("sweep knapsack --p 1,2,4 --n 4,5,6 --per-cell 20 --config " + path("fast.json") + " -o " +
                     path("s.csv")),
              0)
        << err_;
    EXPECT_EQ(count_lines(slurp(path("s.csv"))), 181U);
    const auto table = slurp(path("s.csv.table.csv"));
    EXPECT_EQ(count_lines(table), 10U);
    EXPECT_EQ(table.rfind(std::string(kSweepTableHeader), 0), 0U);
    EXPECT_NE(out_.find("knapsack,4,6,20,"), std::string::npos);
}

TEST_F(Cli, SweepRejectsOversizedN) {
    EXPECT_EQ(qbench("sweep maxcut --p 1 --n 13 -o " + path("s.csv")), 2);
}

TEST_F(Cli, ReportMatchesSummary) {
    ASSERT_EQ(qbench("gen numpart --count 3 --n 4 -o " + path("i.jsonl")), 0);
    ASSERT_EQ(qbench("run " + path("i.jsonl") + " --algo qite_sim,sa --config " + path("fast.json") + " -o " +
                     path("r.csv")),
              0);
    ASSERT_EQ(qbench("report " + path("r.csv") + " -o " + path("rep")), 0) << err_;
    const auto summary = slurp(path("rep/summary.csv"));
    EXPECT_EQ(count_lines(summary), 3U);
    EXPECT_TRUE(fs::exists(path("rep/boxplot.svg")));
    std::istringstream is(summary);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        ASSERT_EQ(f.size(), 8U);
        EXPECT_NE(out_.find(f[0] + " " + f[1] + " median=" + f[5]), std::string::npos) << out_;
    }
}

TEST_F(Cli, ReportRejectsMalformedRows) {
    std::ofstream(path("r.csv")) << kResultsHeader << "\nmaxcut-n5-s0,maxcut,5,sa,2.0,,0,0,,0,x\n";
    EXPECT_EQ(qbench("report " + path("r.csv") + " -o " + path("rep")), 2);
    EXPECT_NE(err_.find("line 2"), std::string::npos);
    std::ofstream(path("e.csv")).flush();
    EXPECT_EQ(qbench("report " + path("e.csv") + " -o " + path("rep")), 2);
}

TEST_F(Cli, ConfigPrecedence) {
    ASSERT_EQ(qbench("gen maxcut --count 1 --n 3 -o " + path("i.jsonl")), 0);
    std::ofstream(path("c.json")) << R"({"count": 4, "n": 3})";
    ASSERT_EQ(qbench("gen maxcut -o " + path("a.jsonl"), "QBENCH_CONFIG='" + path("c.json") + "'"), 0) << err_;
    EXPECT_EQ(count_lines(slurp(path("a.jsonl"))), 4U);
    ASSERT_EQ(qbench("gen maxcut --count 2 --config " + path("c.json") + " -o " + path("b.jsonl")), 0) << err_;
    EXPECT_EQ(count_lines(slurp(path("b.jsonl"))), 2U);
    std::ofstream(path("bad.json")) << R"({"cuont": 4})";
    EXPECT_EQ(qbench("gen maxcut --config " + path("bad.json") + " -o " + path("c.jsonl")), 2);
    EXPECT_NE(err_.find("cuont"), std::string::npos);
}
