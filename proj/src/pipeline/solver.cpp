#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include "lapc/error.hpp"
#include "lapc/pipeline.hpp"

namespace lapc {

std::string formatName(EmitFormat f) { return f == EmitFormat::TH0 ? "th0" : "smt2"; }

EmitFormat parseFormat(const std::string& s) {
    if (s == "th0" || s == "thf" || s == "p") return EmitFormat::TH0;
    if (s == "smt2" || s == "smt") return EmitFormat::SMT;
    throw ConfigError("unknown emission format '" + s + "' (th0 or smt2)");
}

namespace {

struct Preset {
    const char* name;
    const char* binary;
    const char* args;
    EmitFormat format;
};

const Preset kPresets[] = {
    {"zipperposition", "zipperposition", "--input tptp --timeout {timeout} {file}", EmitFormat::TH0},
    {"eprover-ho", "eprover-ho", "--auto --cpu-limit={timeout} -s {file}", EmitFormat::TH0},
    {"vampire", "vampire", "--input_syntax tptp --time_limit {timeout} {file}", EmitFormat::TH0},
    {"z3", "z3", "-T:{timeout} {file}", EmitFormat::SMT},
    {"cvc5", "cvc5", "--tlimit={timeout}000 {file}", EmitFormat::SMT},
};

std::optional<std::string> findBinary(const std::string& bin) {
    std::vector<std::string> dirs;
    auto split = [&](const char* v) {
        if (!v) return;
        std::stringstream ss(v);
        std::string d;
        while (std::getline(ss, d, ':'))
            if (!d.empty()) dirs.push_back(d);
    };
    split(std::getenv("LAPC_SOLVER_PATH"));
    split(std::getenv("PATH"));
    for (const auto& d : dirs) {
        std::filesystem::path p = std::filesystem::path(d) / bin;
        if (::access(p.c_str(), X_OK) == 0) return p.string();
    }
    return std::nullopt;
}

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::string replaceAll(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

std::vector<std::string> solverPresets() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.push_back(p.name);
    return out;
}

SolverSpec resolveSolver(const std::string& spec, EmitFormat customFormat) {
    for (const auto& p : kPresets) {
        if (spec != p.name) continue;
        auto bin = findBinary(p.binary);
        if (!bin) throw ConfigError(std::string("solver '") + p.name + "' not found in LAPC_SOLVER_PATH or PATH");
        return {p.name, quote(*bin) + " " + p.args, p.format};
    }
    if (spec.find("{file}") == std::string::npos)
        throw ConfigError("solver '" + spec + "' is neither a preset nor a command containing {file}");
    return {"custom", spec, customFormat};
}

std::string verdictName(Verdict v) {
    switch (v) {
        case Verdict::NotRun: return "not-run";
        case Verdict::Proved: return "proved";
        case Verdict::Unknown: return "unknown";
        case Verdict::Timeout: return "timeout";
        case Verdict::Error: return "error";
    }
    return "error";
}

Verdict parseVerdict(EmitFormat f, const std::string& output) {
    if (f == EmitFormat::TH0) {
        if (output.find("SZS status Theorem") != std::string::npos ||
            output.find("SZS status Unsatisfiable") != std::string::npos)
            return Verdict::Proved;
        if (output.find("SZS status Timeout") != std::string::npos ||
            output.find("SZS status ResourceOut") != std::string::npos)
            return Verdict::Timeout;
        if (output.find("SZS status") != std::string::npos) return Verdict::Unknown;
        return Verdict::Error;
    }
    std::istringstream in(output);
    std::string line;
    Verdict v = Verdict::Error;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line == "unsat") return Verdict::Proved;
        if (line == "sat" || line == "unknown") v = Verdict::Unknown;
        if (line == "timeout") v = Verdict::Timeout;
    }
    return v;
}

SolverRun runSolver(const SolverSpec& s, const std::filesystem::path& file, double timeoutSeconds) {
    using Clock = std::chrono::steady_clock;
    std::string cmd = replaceAll(s.command, "{file}", quote(file.string()));
    long whole = std::max(1L, static_cast<long>(timeoutSeconds));
    cmd = replaceAll(cmd, "{timeout}", std::to_string(whole));

    int fds[2];
    if (::pipe(fds) != 0) throw ConfigError("pipe failed");
    auto start = Clock::now();
    pid_t pid = ::fork();
    if (pid < 0) throw ConfigError("fork failed");
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], 1);
        ::dup2(fds[1], 2);
        ::close(fds[0]);
        ::close(fds[1]);
        ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(fds[1]);

    SolverRun run;
    auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeoutSeconds));
    bool killed = false;
    char buf[4096];
    for (;;) {
        auto now = Clock::now();
        if (now >= deadline) {
            ::kill(-pid, SIGKILL);
            killed = true;
            break;
        }
        int waitMs = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        pollfd p{fds[0], POLLIN, 0};
        int r = ::poll(&p, 1, std::min(waitMs, 100) + 1);
        if (r < 0 && errno != EINTR) break;
        if (r > 0) {
            ssize_t n = ::read(fds[0], buf, sizeof buf);
            if (n <= 0) break;  // EOF: every writer exited
            if (run.output.size() < (1u << 22)) run.output.append(buf, static_cast<std::size_t>(n));
        }
    }
    ::close(fds[0]);
    int status = 0;
    if (!killed) {
        // Output closed; the shell may still be exiting.
        while (::waitpid(pid, &status, WNOHANG) == 0) {
            if (Clock::now() >= deadline) {
                ::kill(-pid, SIGKILL);
                killed = true;
                ::waitpid(pid, &status, 0);
                break;
            }
            ::usleep(2000);
        }
    } else {
        ::waitpid(pid, &status, 0);
    }
    ::kill(-pid, SIGKILL);  // stragglers that closed their output
    run.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    run.exitStatus = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.verdict = parseVerdict(s.format, run.output);
    if (killed && run.verdict != Verdict::Proved) run.verdict = Verdict::Timeout;
    return run;
}

}  // namespace lapc
