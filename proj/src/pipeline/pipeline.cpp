#include <unistd.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "lapc/error.hpp"
#include "lapc/frontend.hpp"
#include "lapc/pipeline.hpp"

namespace lapc {

const std::string* RunReport::text(EmitFormat f) const {
    for (const auto& [fmt, t] : emitted)
        if (fmt == f) return &t;
    return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

class Stages {
public:
    explicit Stages(RunReport& r) : r_(r) {}

    template <class F>
    auto run(const std::string& stage, F&& f) -> decltype(f()) {
        auto start = Clock::now();
        auto record = [&] {
            r_.timings.push_back({stage, std::chrono::duration<double, std::milli>(Clock::now() - start).count()});
        };
        try {
            if constexpr (std::is_void_v<decltype(f())>) {
                f();
                record();
            } else {
                auto v = f();
                record();
                return v;
            }
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            record();
            throw StageError(stage, e);
        }
    }

private:
    RunReport& r_;
};

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "yes" || v == "on"; }

std::filesystem::path scratchDir() {
    static std::atomic<unsigned> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("lapc-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

std::string extension(EmitFormat f) { return f == EmitFormat::TH0 ? ".p" : ".smt2"; }

}  // namespace

RunReport runPipeline(const Problem& input, const PipelineConfig& config) {
    RunReport r;
    r.problem = input.name;
    Stages stages(r);
    r.inputSize = problemSize(input);
    r.warnings = input.warnings;

    SaturateOptions sat = config.saturate;
    if (config.absorbInstances) {
        sat.dep.absorbInstances = *config.absorbInstances;
    } else if (auto it = input.options.find("absorb-instances"); it != input.options.end()) {
        sat.dep.absorbInstances = truthy(it->second);
    }

    PreprocessResult pre = stages.run("preprocess", [&] { return preprocess(input, config.preprocess); });
    const Problem& p = pre.problem;
    r.premises = p.premises.size();
    r.datatypes = pre.datatypes.size();
    if (pre.subexpr.truncated) r.warnings.push_back("equational theorem pairs truncated at the pair budget");

    TypeChecker tc(p.env);
    std::vector<Term> H;
    for (const auto& h : p.premises) H.push_back(h.type);
    SaturateResult satr = stages.run("instantiate", [&] { return saturateFull(tc, p.ctx, H, sat); });
    r.hypInstances = satr.stats.hypInstances;
    r.constInstances = satr.stats.constInstances;
    r.eqTheorems = satr.stats.eqTheorems;
    r.budgetHit = satr.stats.budgetHit;
    if (satr.stats.budgetHit) r.warnings.push_back("instance budget reached");

    auto premiseName = [&](const Term& t) -> std::optional<std::string> {
        for (const auto& h : p.premises)
            if (h.type == t) return h.name;
        return std::nullopt;
    };
    auto labelOf = [&](const Term& t, std::size_t k) { return premiseName(t).value_or("inst" + std::to_string(k)); };
    for (const auto& h : satr.hi) {
        if (abstractable(tc, p.ctx, h, sat.dep)) continue;
        std::string why = qMonoViolation(tc, p.ctx, {}, h, sat.dep);
        r.dropped.push_back({premiseName(h).value_or(display(h)), why.empty() ? "binder over a universe" : why});
    }

    AbstractionState st;
    st.opts = sat.dep;
    std::vector<PlanAxiom> holAxioms;
    std::vector<Term> sources;
    std::vector<PlanDatatype> dts;
    stages.run("abstract", [&] {
        std::size_t k = 0;
        std::set<std::string> used;
        for (const auto& h : satr.output) {
            std::string label = labelOf(h, k++);
            while (!used.insert(label).second) label += "'";
            try {
                holAxioms.push_back({label, lamAbst(tc, p.ctx, {}, h, st)});
                sources.push_back(h);
            } catch (const NotQuasiMono& e) {
                if (!config.dropNonQMono) throw;
                r.dropped.push_back({label, e.what()});
            }
        }
        dts = bindDatatypes(tc, p.ctx, pre.datatypes, st);
    });

    Substitution subst = stages.run("check", [&] {
        Substitution s = extractSubstitution(tc, st, p.ctx);
        for (std::size_t i = 0; i < holAxioms.size(); ++i) {
            ++r.ehopChecked;
            if (!ehopWitness(tc, s, holAxioms[i].formula, sources[i])) {
                ++r.ehopFailed;
                r.warnings.push_back("abstraction of " + holAxioms[i].label + " is not a witness");
            }
        }
        return s;
    });
    r.typeVars = st.types().size();
    r.termVars = st.terms().size();

    EmitPlan plan = stages.run("lift", [&] {
        EmitPlan pl = buildEmitPlan(p.name, subst, holAxioms, dts);
        checkPlan(pl);
        return pl;
    });
    r.axioms = plan.axioms.size();
    for (const auto& a : plan.axioms) r.monoSize += sizeOf(a.formula);

    stages.run("emit", [&] {
        for (EmitFormat f : config.emit) {
            if (f == EmitFormat::TH0)
                r.emitted.push_back({f, emitTH0(plan, {config.th0FreeConstructors})});
            else
                r.emitted.push_back({f, emitSMT(plan, {config.smtEncoding})});
        }
        if (config.solver && !r.text(config.solver->format)) {
            EmitFormat f = config.solver->format;
            r.emitted.push_back({f, f == EmitFormat::TH0 ? emitTH0(plan, {config.th0FreeConstructors})
                                                          : emitSMT(plan, {config.smtEncoding})});
        }
    });

    std::optional<std::filesystem::path> scratch;
    auto dir = config.outDir;
    if (!dir && config.solver) dir = scratch = scratchDir();
    if (dir) {
        std::filesystem::create_directories(*dir);
        for (const auto& [f, text] : r.emitted) {
            auto path = *dir / (p.name.empty() ? "problem" + extension(f) : p.name + extension(f));
            std::ofstream out(path, std::ios::binary);
            if (!out) throw ConfigError("cannot write " + path.string());
            out << text;
            r.emittedPaths.push_back(path.string());
        }
    }

    if (config.solver) {
        const SolverSpec& s = *config.solver;
        std::filesystem::path file;
        for (std::size_t i = 0; i < r.emitted.size(); ++i)
            if (r.emitted[i].first == s.format) file = r.emittedPaths[i];
        auto start = Clock::now();
        SolverRun run = runSolver(s, file, config.timeoutSeconds);
        r.timings.push_back({"solve", std::chrono::duration<double, std::milli>(Clock::now() - start).count()});
        r.verdict = run.verdict;
        r.solverSeconds = run.seconds;
        r.solverOutput = run.output.size() > 2000 ? run.output.substr(run.output.size() - 2000) : run.output;
        if (run.verdict == Verdict::Proved)
            r.warnings.push_back("proof by " + s.name + " is trusted, not reconstructed");
    }
    if (scratch) {
        std::error_code ec;
        std::filesystem::remove_all(*scratch, ec);
        r.emittedPaths.clear();
    }
    return r;
}

RunReport runPipeline(const std::filesystem::path& file, const PipelineConfig& config) {
    RunReport front;
    Problem p = Stages(front).run("frontend", [&] { return loadProblem(file); });
    RunReport r = runPipeline(p, config);
    r.file = file.string();
    r.timings.insert(r.timings.begin(), front.timings.front());
    return r;
}

BatchReport runBatch(const std::filesystem::path& dir, const PipelineConfig& config, std::size_t jobs) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) throw ConfigError(dir.string() + " is not a directory");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".lap") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    BatchReport b;
    b.problems.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < files.size();) {
            RunReport& r = b.problems[i];
            try {
                r = runPipeline(files[i], config);
            } catch (const Error& e) {
                r = RunReport{};
                r.problem = files[i].stem().string();
                r.file = files[i].string();
                if (const auto* se = dynamic_cast<const StageError*>(&e)) r.errorStage = se->stage();
                r.errorKind = e.kind();
                r.errorMessage = e.what();
            } catch (const std::exception& e) {
                r = RunReport{};
                r.problem = files[i].stem().string();
                r.file = files[i].string();
                r.errorKind = "InternalError";
                r.errorMessage = e.what();
            }
        }
    };
    std::size_t n = std::max<std::size_t>(1, std::min(jobs, files.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    double total = 0, solver = 0, ratio = 0;
    std::size_t translated = 0;
    for (const auto& r : b.problems) {
        if (r.failed()) {
            ++b.failures;
            continue;
        }
        ++translated;
        for (const auto& t : r.timings) total += t.ms;
        solver += r.solverSeconds;
        ratio += r.sizeRatio();
        switch (r.verdict) {
            case Verdict::Proved: ++b.proved; break;
            case Verdict::Unknown: ++b.unknown; break;
            case Verdict::Timeout: ++b.timeout; break;
            case Verdict::Error: ++b.solverErrors; break;
            case Verdict::NotRun: break;
        }
    }
    if (translated) {
        b.meanTotalMs = total / translated;
        b.meanSolverSeconds = solver / translated;
        b.meanSizeRatio = ratio / translated;
    }
    return b;
}

std::string reportJson(const RunReport& r) {
    nlohmann::ordered_json j;
    j["problem"] = r.problem;
    j["file"] = r.file;
    if (r.failed()) {
        j["error"] = {{"stage", r.errorStage}, {"kind", r.errorKind}, {"message", r.errorMessage}};
        return j.dump(2);
    }
    nlohmann::ordered_json timings = nlohmann::ordered_json::object();
    for (const auto& t : r.timings) timings[t.stage] = t.ms;
    j["timings_ms"] = timings;
    j["premises"] = r.premises;
    j["instances"] = {{"hypotheses", r.hypInstances}, {"constants", r.constInstances},
                      {"equational", r.eqTheorems}, {"budget_hit", r.budgetHit}};
    j["variables"] = {{"types", r.typeVars}, {"terms", r.termVars}};
    j["datatypes"] = r.datatypes;
    j["axioms"] = r.axioms;
    j["ehop"] = {{"checked", r.ehopChecked}, {"failed", r.ehopFailed}};
    nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
    for (const auto& d : r.dropped) dropped.push_back({{"name", d.name}, {"reason", d.reason}});
    j["dropped"] = dropped;
    j["size"] = {{"input", r.inputSize}, {"mono", r.monoSize}, {"ratio", r.sizeRatio()}};
    j["emitted"] = r.emittedPaths;
    j["verdict"] = verdictName(r.verdict);
    j["solver_seconds"] = r.solverSeconds;
    j["warnings"] = r.warnings;
    return j.dump(2);
}

namespace {

std::string csvField(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

double stageMs(const RunReport& r, const std::string& stage) {
    for (const auto& t : r.timings)
        if (t.stage == stage) return t.ms;
    return 0;
}

}  // namespace

std::string batchCsv(const BatchReport& b) {
    std::ostringstream os;
    os << "problem,status,verdict,error_kind,premises,hyp_instances,const_instances,eq_theorems,budget_hit,"
          "type_vars,term_vars,axioms,dropped,input_size,mono_size,size_ratio,frontend_ms,preprocess_ms,"
          "instantiate_ms,abstract_ms,check_ms,lift_ms,emit_ms,solve_ms\n";
    for (const auto& r : b.problems) {
        os << csvField(r.problem) << "," << (r.failed() ? "failed" : "translated") << "," << verdictName(r.verdict)
           << "," << r.errorKind << "," << r.premises << "," << r.hypInstances << "," << r.constInstances << ","
           << r.eqTheorems << "," << (r.budgetHit ? 1 : 0) << "," << r.typeVars << "," << r.termVars << ","
           << r.axioms << "," << r.dropped.size() << "," << r.inputSize << "," << r.monoSize << ","
           << fixed(r.sizeRatio(), 4);
        for (const char* s : {"frontend", "preprocess", "instantiate", "abstract", "check", "lift", "emit", "solve"})
            os << "," << fixed(stageMs(r, s), 3);
        os << "\n";
    }
    return os.str();
}

std::string batchSummary(const BatchReport& b) {
    std::ostringstream os;
    for (const auto& r : b.problems) {
        os << std::left << std::setw(24) << r.problem << " ";
        if (r.failed())
            os << "FAILED " << r.errorKind << ": " << r.errorMessage;
        else
            os << std::setw(8) << verdictName(r.verdict) << " ratio " << fixed(r.sizeRatio(), 3) << "  axioms "
               << r.axioms;
        os << "\n";
    }
    os << "problems " << b.problems.size() << ", proved " << b.proved << ", unknown " << b.unknown << ", timeout "
       << b.timeout << ", solver errors " << b.solverErrors << ", translation failures " << b.failures << "\n";
    os << "mean time " << fixed(b.meanTotalMs, 1) << " ms, mean size ratio " << fixed(b.meanSizeRatio, 4) << "\n";
    return os.str();
}

int exitCode(const RunReport& r) {
    if (r.failed()) return 2;
    return r.verdict == Verdict::NotRun || r.verdict == Verdict::Proved ? 0 : 1;
}

int exitCode(const BatchReport& b) {
    if (b.failures) return 2;
    for (const auto& r : b.problems)
        if (exitCode(r) != 0) return 1;
    return 0;
}

}  // namespace lapc
