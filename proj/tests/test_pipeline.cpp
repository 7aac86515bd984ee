#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <thread>
#include <unistd.h>

#include "lapc/error.hpp"
#include "lapc/frontend.hpp"
#include "lapc/pipeline.hpp"

using namespace lapc;
namespace fs = std::filesystem;

namespace {

fs::path corpus(const std::string& name) { return fs::path(LAPC_CORPUS_DIR) / (name + ".lap"); }

fs::path tempDir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("lapc-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

SolverSpec shell(const std::string& script, EmitFormat f) { return {"fake", script + " # {file}", f}; }

// CSV with the timing columns cut off.
std::string untimed(const std::string& csv) {
    std::regex timing(R"((,[0-9]+\.[0-9]{3}){8}\n)");
    return std::regex_replace(csv, timing, "\n");
}

bool haveZ3() {
    try {
        resolveSolver("z3");
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

}  // namespace

TEST(Verdict, TokenScan) {
    EXPECT_EQ(parseVerdict(EmitFormat::TH0, "% SZS status Theorem for x"), Verdict::Proved);
    EXPECT_EQ(parseVerdict(EmitFormat::TH0, "% SZS status Unsatisfiable"), Verdict::Proved);
    EXPECT_EQ(parseVerdict(EmitFormat::TH0, "% SZS status CounterSatisfiable"), Verdict::Unknown);
    EXPECT_EQ(parseVerdict(EmitFormat::TH0, "% SZS status Timeout"), Verdict::Timeout);
    EXPECT_EQ(parseVerdict(EmitFormat::TH0, "unsat"), Verdict::Error);
    EXPECT_EQ(parseVerdict(EmitFormat::SMT, "unsat\n"), Verdict::Proved);
    EXPECT_EQ(parseVerdict(EmitFormat::SMT, "sat\n"), Verdict::Unknown);
    EXPECT_EQ(parseVerdict(EmitFormat::SMT, "unknown\n"), Verdict::Unknown);
    EXPECT_EQ(parseVerdict(EmitFormat::SMT, "(error \"unsat core\")\n"), Verdict::Error);
    EXPECT_EQ(parseVerdict(EmitFormat::SMT, "timeout\n"), Verdict::Timeout);
}

TEST(Solver, RunsCommandAndReadsVerdict) {
    fs::path f = tempDir("run") / "x.smt2";
    std::ofstream(f) << "(check-sat)\n";
    SolverRun r = runSolver(shell("echo unsat", EmitFormat::SMT), f, 5);
    EXPECT_EQ(r.verdict, Verdict::Proved);
    r = runSolver({"cat", "cat {file}", EmitFormat::SMT}, f, 5);
    EXPECT_EQ(r.output, "(check-sat)\n");
    EXPECT_EQ(r.verdict, Verdict::Error);
}

TEST(Solver, TimeoutKillsTheProcessGroup) {
    fs::path d = tempDir("timeout");
    fs::path marker = d / "survived";
    std::string cmd = "(sleep 3; touch '" + marker.string() + "') & sleep 30; echo unsat";
    auto start = std::chrono::steady_clock::now();
    SolverRun r = runSolver(shell(cmd, EmitFormat::SMT), d / "none", 1.0);
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(r.verdict, Verdict::Timeout);
    EXPECT_LT(took, 2.0);
    std::this_thread::sleep_for(std::chrono::milliseconds(3500));
    EXPECT_FALSE(fs::exists(marker));
}

TEST(Solver, Resolution) {
    EXPECT_THROW(resolveSolver("no-such-solver"), ConfigError);
    EXPECT_EQ(resolveSolver("my-prover {file}", EmitFormat::SMT).format, EmitFormat::SMT);
    fs::path d = tempDir("path");
    fs::path bin = d / "zipperposition";
    std::ofstream(bin) << "#!/bin/sh\necho '% SZS status Theorem'\n";
    fs::permissions(bin, fs::perms::owner_all);
    const char* old = std::getenv("LAPC_SOLVER_PATH");
    std::string saved = old ? old : "";
    ::setenv("LAPC_SOLVER_PATH", d.c_str(), 1);
    SolverSpec s = resolveSolver("zipperposition");
    EXPECT_EQ(s.format, EmitFormat::TH0);
    EXPECT_NE(s.command.find(bin.string()), std::string::npos);
    PipelineConfig c;
    c.solver = s;
    RunReport r = runPipeline(corpus("list_reverse_map"), c);
    EXPECT_EQ(r.verdict, Verdict::Proved);
    EXPECT_EQ(exitCode(r), 0);
    if (old) ::setenv("LAPC_SOLVER_PATH", saved.c_str(), 1);
    else ::unsetenv("LAPC_SOLVER_PATH");
}

TEST(Pipeline, StagesInOrder) {
    RunReport r = runPipeline(corpus("list_reverse_map"), {});
    std::vector<std::string> stages;
    for (const auto& t : r.timings) stages.push_back(t.stage);
    EXPECT_EQ(stages, (std::vector<std::string>{"frontend", "preprocess", "instantiate", "abstract", "check", "lift",
                                                "emit"}));
    EXPECT_EQ(r.typeVars, 4u);
    EXPECT_EQ(r.ehopFailed, 0u);
    EXPECT_EQ(r.ehopChecked, r.axioms);
    EXPECT_EQ(r.verdict, Verdict::NotRun);
    // the polymorphic lemmas (and partial instances) are replaced by their instances
    std::set<std::string> dropped;
    for (const auto& d : r.dropped) {
        dropped.insert(d.name);
        EXPECT_FALSE(d.reason.empty());
    }
    EXPECT_TRUE(dropped.count("map_reverse"));
    EXPECT_TRUE(dropped.count("reverse_reverse"));
}

TEST(Pipeline, BotPremiseNeedsNoSaturation) {
    RunReport r = runPipeline(corpus("bot_premise"), {});
    EXPECT_EQ(r.constInstances, 0u);
    EXPECT_EQ(r.eqTheorems, 0u);
    EXPECT_EQ(r.hypInstances, r.premises);
    const std::string* th0 = r.text(EmitFormat::TH0);
    ASSERT_NE(th0, nullptr);
    EXPECT_NE(th0->find("axiom, $false)."), std::string::npos);
}

TEST(Pipeline, ErrorsCarryTheirStage) {
    fs::path neg = fs::path(LAPC_CORPUS_DIR) / "negative";
    try {
        runPipeline(neg / "non_prop_premise.lap", {});
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "frontend");
        EXPECT_EQ(e.kind(), "TypeError");
    }
    PipelineConfig c;
    c.solver = SolverSpec{"fake", "true {file}", EmitFormat::TH0};
    RunReport r = runPipeline(corpus("bot_premise"), c);
    EXPECT_EQ(r.verdict, Verdict::Error);
    EXPECT_EQ(exitCode(r), 1);
}

TEST(Pipeline, AbsorbInstancesFlagOverridesFile) {
    PipelineConfig c;
    RunReport on = runPipeline(corpus("tc_add_comm"), c);
    c.absorbInstances = false;
    RunReport off = runPipeline(corpus("tc_add_comm"), c);
    EXPECT_LT(on.sizeRatio(), 1.0);
    EXPECT_GT(off.termVars, on.termVars);
}

TEST(Pipeline, OutDirReceivesFiles) {
    fs::path d = tempDir("out");
    PipelineConfig c;
    c.outDir = d;
    c.emit = {EmitFormat::TH0, EmitFormat::SMT};
    RunReport r = runPipeline(corpus("fin_add_comm3"), c);
    ASSERT_EQ(r.emittedPaths.size(), 2u);
    EXPECT_TRUE(fs::exists(d / "fin_add_comm3.p"));
    EXPECT_TRUE(fs::exists(d / "fin_add_comm3.smt2"));
    std::string json = reportJson(r);
    EXPECT_NE(json.find("\"verdict\": \"not-run\""), std::string::npos);
    EXPECT_NE(json.find("\"ratio\""), std::string::npos);
}

TEST(Pipeline, FinAddProvedByZ3) {
    if (!haveZ3()) GTEST_SKIP() << "z3 not installed";
    PipelineConfig c;
    c.solver = resolveSolver("z3");
    RunReport r = runPipeline(corpus("fin_add_comm3"), c);
    EXPECT_EQ(r.verdict, Verdict::Proved) << r.solverOutput;
    EXPECT_LT(r.solverSeconds, 10.0);
}

TEST(Batch, EmptyDirectory) {
    BatchReport b = runBatch(tempDir("empty"), {});
    EXPECT_TRUE(b.problems.empty());
    EXPECT_EQ(exitCode(b), 0);
    std::string csv = batchCsv(b);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST(Batch, CorpusRowsAndDeterminism) {
    BatchReport one = runBatch(LAPC_CORPUS_DIR, {}, 1);
    BatchReport four = runBatch(LAPC_CORPUS_DIR, {}, 4);
    EXPECT_EQ(one.problems.size(), 25u);
    EXPECT_EQ(one.failures, 0u);
    std::string csv = batchCsv(one);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 26);
    EXPECT_EQ(untimed(csv), untimed(batchCsv(four)));
    for (std::size_t i = 0; i < one.problems.size(); ++i)
        EXPECT_EQ(one.problems[i].emitted, four.problems[i].emitted) << one.problems[i].problem;
    EXPECT_EQ(exitCode(one), 0);
}

TEST(Batch, FailuresAreRecorded) {
    BatchReport b = runBatch(fs::path(LAPC_CORPUS_DIR) / "negative", {});
    EXPECT_EQ(b.failures, b.problems.size());
    EXPECT_EQ(exitCode(b), 2);
    for (const auto& r : b.problems) {
        EXPECT_FALSE(r.errorKind.empty());
        EXPECT_NE(reportJson(r).find("\"error\""), std::string::npos);
    }
}
