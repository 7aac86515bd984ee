#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lapc/emit.hpp"
#include "lapc/instantiation.hpp"
#include "lapc/preprocess.hpp"

namespace lapc {

enum class EmitFormat { TH0, SMT };
std::string formatName(EmitFormat f);      // "th0" / "smt2"
EmitFormat parseFormat(const std::string& s);  // ConfigError

// Command template; {file} is the emitted problem, {timeout} whole seconds.
struct SolverSpec {
    std::string name;
    std::string command;
    EmitFormat format = EmitFormat::TH0;
};

std::vector<std::string> solverPresets();
// A preset name (binary looked up in LAPC_SOLVER_PATH, then PATH) or a
// command containing {file}. ConfigError when neither.
SolverSpec resolveSolver(const std::string& presetOrCommand, EmitFormat customFormat = EmitFormat::TH0);

enum class Verdict { NotRun, Proved, Unknown, Timeout, Error };
std::string verdictName(Verdict v);
// Token scan of the solver's output.
Verdict parseVerdict(EmitFormat f, const std::string& output);

struct SolverRun {
    Verdict verdict = Verdict::NotRun;
    std::string output;
    double seconds = 0;
    int exitStatus = 0;
};
// Runs through /bin/sh; the whole process group is killed on expiry.
SolverRun runSolver(const SolverSpec& s, const std::filesystem::path& file, double timeoutSeconds);

struct PipelineConfig {
    SaturateOptions saturate;
    PreprocessOptions preprocess;
    std::optional<bool> absorbInstances;  // unset: the file's absorb-instances option
    bool dropNonQMono = false;
    std::vector<EmitFormat> emit = {EmitFormat::TH0};
    SmtEncoding smtEncoding = SmtEncoding::Applicative;
    bool th0FreeConstructors = true;
    std::optional<std::filesystem::path> outDir;  // emitted files; a temporary directory otherwise
    std::optional<SolverSpec> solver;
    double timeoutSeconds = 10;
};

struct StageTiming {
    std::string stage;
    double ms = 0;
};

struct DroppedPremise {
    std::string name;
    std::string reason;
};

struct RunReport {
    std::string problem;
    std::string file;
    std::vector<StageTiming> timings;
    std::size_t premises = 0;  // after preprocessing, negated goal included
    std::size_t hypInstances = 0, constInstances = 0, eqTheorems = 0;
    bool budgetHit = false;
    std::size_t axioms = 0;  // emitted
    std::size_t typeVars = 0, termVars = 0;
    std::size_t datatypes = 0;
    std::size_t ehopChecked = 0, ehopFailed = 0;
    std::vector<DroppedPremise> dropped;
    std::uint64_t inputSize = 0, monoSize = 0;
    std::vector<std::pair<EmitFormat, std::string>> emitted;  // format, text
    std::vector<std::string> emittedPaths;
    Verdict verdict = Verdict::NotRun;
    double solverSeconds = 0;
    std::string solverOutput;
    std::vector<std::string> warnings;
    // Translation failure (runBatch only; runPipeline throws StageError).
    std::string errorStage, errorKind, errorMessage;

    bool failed() const { return !errorKind.empty(); }
    double sizeRatio() const { return inputSize ? static_cast<double>(monoSize) / inputSize : 0; }
    const std::string* text(EmitFormat f) const;
};

// Stage errors are rethrown as StageError(stage, …).
RunReport runPipeline(const std::filesystem::path& file, const PipelineConfig& config);
RunReport runPipeline(const Problem& problem, const PipelineConfig& config);

struct BatchReport {
    std::vector<RunReport> problems;  // input order
    std::size_t proved = 0, unknown = 0, timeout = 0, solverErrors = 0, failures = 0;
    double meanTotalMs = 0;
    double meanSolverSeconds = 0;
    double meanSizeRatio = 0;  // over problems that translated
};

// *.lap directly in dir, sorted by name, processed by up to jobs workers.
BatchReport runBatch(const std::filesystem::path& dir, const PipelineConfig& config, std::size_t jobs = 1);

std::string reportJson(const RunReport& r);
std::string batchCsv(const BatchReport& b);
std::string batchSummary(const BatchReport& b);

// 0 all proved (or nothing to solve), 1 some unproved, 2 translation failure.
int exitCode(const RunReport& r);
int exitCode(const BatchReport& b);

}  // namespace lapc
