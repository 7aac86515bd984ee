#include <map>
#include <sstream>

#include "lapc/error.hpp"
#include "spine.hpp"

namespace lapc {

using namespace emitdetail;

namespace {

class Th0Printer {
public:
    explicit Th0Printer(const EmitPlan& plan) : plan_(plan), view_(plan) {
        for (const auto& t : plan.typeDecls) names_[t.name] = sanitizeName(t.name, Target::TH0);
        for (const auto& s : plan.symbolDecls) names_[s.name] = sanitizeName(s.name, Target::TH0);
    }

    std::string name(const std::string& n) const { return names_.at(n); }

    std::string type(const HTerm& ty) const {
        switch (ty.kind()) {
            case HKind::Bool:
                return "$o";
            case HKind::FVar:
                return name(ty.name());
            case HKind::Arrow:
                return "(" + type(ty.dom()) + " > " + type(ty.cod()) + ")";
            default:
                throw UnsupportedInEmission("not a TH0 type: " + hDisplay(ty));
        }
    }

    // Fresh bound variable; the returned term stands for it inside formulas.
    HTerm bind(const HTerm& ty, std::string& decl) {
        std::string key = "\x01" + std::to_string(counter_);
        std::string var = "X" + std::to_string(counter_++);
        bound_[key] = {var, ty};
        decl = var + ": " + type(ty);
        return HTerm::fvar(key);
    }

    std::string formula(const HTerm& t) {
        Spine s = view_.view(t);
        HTerm vty;
        if (s.head == Head::Var) vty = varType(s.fn);
        std::vector<HTerm> miss = view_.missing(s, vty);
        if (!miss.empty() && s.head != Head::Var) {
            std::vector<HTerm> extra;
            std::string decls;
            for (const auto& ty : miss) {
                std::string d;
                extra.push_back(bind(ty, d));
                decls += (decls.empty() ? "" : ", ") + d;
            }
            return "(^[" + decls + "]: " + formula(hMkAppN(t, extra)) + ")";
        }
        const auto& a = s.args;
        switch (s.head) {
            case Head::Bot:
                return "$false";
            case Head::Imp:
                return "(" + formula(a[0]) + " => " + formula(a[1]) + ")";
            case Head::Not:
                return "(~ " + formula(a[0]) + ")";
            case Head::And:
                return "(" + formula(a[0]) + " & " + formula(a[1]) + ")";
            case Head::Or:
                return "(" + formula(a[0]) + " | " + formula(a[1]) + ")";
            case Head::Iff:
                return "(" + formula(a[0]) + " <=> " + formula(a[1]) + ")";
            case Head::Eq:
                return "(" + formula(a[0]) + " = " + formula(a[1]) + ")";
            case Head::Forall:
                return quant("!", s.sort, a[0]);
            case Head::Exists:
                return quant("?", s.sort, a[0]);
            case Head::Lam: {
                std::string d;
                HTerm x = bind(s.fn.binderType(), d);
                return "(^[" + d + "]: " + formula(hInstantiate(s.fn.body(), x)) + ")";
            }
            case Head::Var:
                break;
        }
        std::string out = atom(s.fn);
        if (a.empty()) return out;
        out = "(" + out;
        for (const auto& x : a) out += " @ " + formula(x);
        return out + ")";
    }

    std::string freeConstructorAxioms() {
        std::ostringstream os;
        for (const auto& d : plan_.datatypes) {
            std::string base = "dt_" + name(d.sort);
            for (std::size_t i = 0; i < d.ctors.size(); ++i) {
                for (std::size_t j = i + 1; j < d.ctors.size(); ++j) {
                    std::string decls;
                    HTerm l = applied(d.ctors[i], decls), r = applied(d.ctors[j], decls);
                    std::string body = "(~ (" + formula(l) + " = " + formula(r) + "))";
                    os << "thf(" << base << "_distinct_" << i << "_" << j << ", axiom, " << closeOver(decls, body)
                       << ").\n";
                }
                const PlanCtor& c = d.ctors[i];
                if (c.args.empty()) continue;
                std::string decls;
                HTerm l = applied(c, decls), r = applied(c, decls);
                std::vector<HTerm> xs = hGetAppArgs(l), ys = hGetAppArgs(r);
                std::string eqs;
                for (std::size_t k = 0; k < xs.size(); ++k)
                    eqs += (k ? " & " : "") + std::string("(") + formula(xs[k]) + " = " + formula(ys[k]) + ")";
                if (xs.size() > 1) eqs = "(" + eqs + ")";
                std::string body = "((" + formula(l) + " = " + formula(r) + ") => " + eqs + ")";
                os << "thf(" << base << "_inj_" << i << ", axiom, " << closeOver(decls, body) << ").\n";
            }
        }
        return os.str();
    }

private:
    const EmitPlan& plan_;
    SpineView view_;
    std::map<std::string, std::string> names_;
    std::map<std::string, std::pair<std::string, HTerm>> bound_;
    std::size_t counter_ = 0;

    HTerm varType(const HTerm& f) const {
        if (!f.is(HKind::FVar)) return HTerm();
        if (auto it = bound_.find(f.name()); it != bound_.end()) return it->second.second;
        if (const PlanSymbol* p = view_.symbol(f.name())) return p->type;
        return HTerm();
    }

    std::string atom(const HTerm& f) const {
        if (!f.is(HKind::FVar)) throw UnsupportedInEmission("unexpected head " + hDisplay(f));
        if (auto it = bound_.find(f.name()); it != bound_.end()) return it->second.first;
        auto it = names_.find(f.name());
        if (it == names_.end()) throw UnsupportedInEmission("undeclared symbol " + f.name());
        return it->second;
    }

    std::string quant(const char* q, const HTerm& sort, const HTerm& pred) {
        std::string d;
        HTerm x = bind(sort, d);
        return "(" + std::string(q) + "[" + d + "]: " + formula(HTerm::app(pred, x)) + ")";
    }

    HTerm applied(const PlanCtor& c, std::string& decls) {
        std::vector<HTerm> xs;
        for (const auto& ty : c.args) {
            std::string d;
            xs.push_back(bind(ty, d));
            decls += (decls.empty() ? "" : ", ") + d;
        }
        return hMkAppN(HTerm::fvar(c.symbol), xs);
    }

    static std::string closeOver(const std::string& decls, const std::string& body) {
        return decls.empty() ? body : "(![" + decls + "]: " + body + ")";
    }
};

}  // namespace

std::string emitTH0(const EmitPlan& plan, Th0Options opts) {
    checkPlan(plan);
    if (!plan.datatypes.empty() && !opts.freeConstructors)
        throw UnsupportedInEmission("datatype " + plan.datatypes.front().source +
                                    " needs constructor axioms; TH0 has no datatype declarations");
    Th0Printer pr(plan);
    std::ostringstream os;
    os << "% lap: problem " << plan.problem << "\n";
    os << "% lap: classical target; excluded middle is not axiomatized\n";
    for (const auto& line : plan.provenance) os << "% lap: " << line << "\n";
    for (const auto& t : plan.typeDecls) {
        std::string n = pr.name(t.name);
        os << "thf(" << n << "_type, type, " << n << ": $tType).\n";
    }
    for (const auto& s : plan.symbolDecls) {
        if (s.role != SymbolRole::Plain) continue;
        std::string n = pr.name(s.name);
        os << "thf(" << n << "_decl, type, " << n << ": " << pr.type(s.type) << ").\n";
    }
    if (!plan.datatypes.empty()) os << pr.freeConstructorAxioms();
    for (const auto& a : plan.axioms)
        os << "thf(ax_" << sanitizeName(a.label, Target::TH0) << ", axiom, " << pr.formula(a.formula) << ").\n";
    os << "thf(goal, conjecture, " << pr.formula(plan.conjecture) << ").\n";
    return os.str();
}

}  // namespace lapc
