#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lapc/error.hpp"
#include "lapc/pipeline.hpp"

using namespace lapc;

namespace {

struct Flags {
    std::size_t maxInsts = 256;
    bool absorb = false;
    bool drop = false;
    std::string encoding = "applicative";
    bool noCtorAxioms = false;
};

void addTranslationFlags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--max-insts", f.maxInsts, "instance budget for saturation");
    cmd->add_flag("--absorb-instances", f.absorb, "carry instance-implicit arguments inside HOL* instances");
    cmd->add_flag("--drop-non-qmono", f.drop, "drop premises the abstraction rejects instead of failing");
    cmd->add_option("--smt-encoding", f.encoding, "applicative or ho")->check(CLI::IsMember({"applicative", "ho"}));
    cmd->add_flag("--th0-no-ctor-axioms", f.noCtorAxioms, "refuse datatypes in TH0 instead of axiomatizing them");
}

PipelineConfig configOf(const Flags& f) {
    PipelineConfig c;
    c.saturate.maxInsts = f.maxInsts;
    if (f.absorb) c.absorbInstances = true;
    c.dropNonQMono = f.drop;
    c.smtEncoding = f.encoding == "ho" ? SmtEncoding::HO : SmtEncoding::Applicative;
    c.th0FreeConstructors = !f.noCtorAxioms;
    return c;
}

void printError(const Error& e) { std::cerr << "lapc: " << e.kind() << ": " << e.what() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lapc: monomorphizing translator from λC problems to TH0 and SMT-LIB"};
    app.require_subcommand(1);
    Flags flags;

    std::string file, emit = "th0", out;
    auto* translate = app.add_subcommand("translate", "emit the translated problem");
    translate->add_option("file", file, ".lap problem")->required();
    translate->add_option("--emit", emit, "th0 or smt2")->check(CLI::IsMember({"th0", "smt2"}));
    translate->add_option("--out", out, "output file (stdout by default)");
    addTranslationFlags(translate, flags);

    std::string solver, report;
    double timeout = 10;
    auto* prove = app.add_subcommand("prove", "translate and run a solver");
    prove->add_option("file", file, ".lap problem")->required();
    prove->add_option("--solver", solver, "preset (zipperposition, eprover-ho, vampire, z3, cvc5) or command with {file}")
        ->required();
    prove->add_option("--emit", emit, "format for a custom solver command")->check(CLI::IsMember({"th0", "smt2"}));
    prove->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
    prove->add_option("--report", report, "write the JSON report here");
    addTranslationFlags(prove, flags);

    std::string dir, csv;
    std::size_t jobs = 1;
    std::string benchSolver;
    auto* bench = app.add_subcommand("bench", "translate (and optionally solve) every .lap file in a directory");
    bench->add_option("dir", dir, "problem directory")->required();
    bench->add_option("--csv", csv, "write per-problem CSV here");
    bench->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
    bench->add_option("--solver", benchSolver, "preset or command with {file}");
    bench->add_option("--emit", emit, "format for a custom solver command")->check(CLI::IsMember({"th0", "smt2"}));
    bench->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
    addTranslationFlags(bench, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        PipelineConfig config = configOf(flags);
        config.timeoutSeconds = timeout;
        if (*translate) {
            config.emit = {parseFormat(emit)};
            RunReport r = runPipeline(file, config);
            const std::string& text = r.emitted.front().second;
            if (out.empty()) {
                std::cout << text;
            } else {
                std::ofstream os(out, std::ios::binary);
                if (!os) throw ConfigError("cannot write " + out);
                os << text;
            }
            for (const auto& w : r.warnings) std::cerr << "lapc: warning: " << w << "\n";
            return 0;
        }
        if (*prove) {
            config.solver = resolveSolver(solver, parseFormat(emit));
            config.emit = {};
            RunReport r = runPipeline(file, config);
            for (const auto& w : r.warnings) std::cerr << "lapc: warning: " << w << "\n";
            std::cout << r.problem << ": " << verdictName(r.verdict) << " (" << r.solverSeconds << " s)\n";
            if (!report.empty()) {
                std::ofstream os(report);
                os << reportJson(r) << "\n";
            }
            return exitCode(r);
        }
        if (!benchSolver.empty()) config.solver = resolveSolver(benchSolver, parseFormat(emit));
        config.emit = {};
        if (!config.solver) config.emit = {EmitFormat::TH0, EmitFormat::SMT};
        BatchReport b = runBatch(dir, config, jobs);
        std::cout << batchSummary(b);
        if (!csv.empty()) {
            std::ofstream os(csv);
            if (!os) throw ConfigError("cannot write " + csv);
            os << batchCsv(b);
        }
        return exitCode(b);
    } catch (const ConfigError& e) {
        printError(e);
        return 3;
    } catch (const Error& e) {
        printError(e);
        return 2;
    }
}
