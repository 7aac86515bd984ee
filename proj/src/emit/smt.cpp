#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lapc/error.hpp"
#include "spine.hpp"

namespace lapc {

using namespace emitdetail;

namespace {

// Generated names all contain a '.', which sanitized names never do.
class SmtPrinter {
public:
    SmtPrinter(const EmitPlan& plan, SmtOptions opts) : plan_(plan), view_(plan), ho_(opts.encoding == SmtEncoding::HO) {
        for (const auto& t : plan.typeDecls) {
            names_[t.name] = sanitizeName(t.name, Target::SMT);
            base_.push(t.name, HTerm::sortU(1));
        }
        for (const auto& s : plan.symbolDecls) {
            names_[s.name] = sanitizeName(s.name, Target::SMT);
            base_.push(s.name, s.type);
        }
    }

    std::string run() {
        std::set<std::string> ctorSymbols, dtSorts;
        for (const auto& d : plan_.datatypes) {
            dtSorts.insert(d.sort);
            for (const auto& c : d.ctors) ctorSymbols.insert(c.symbol);
        }
        std::vector<std::string> symbolLines, dtLines, axiomLines;
        for (const auto& s : plan_.symbolDecls) {
            if (s.role != SymbolRole::Plain || ctorSymbols.count(s.name)) continue;
            std::string args;
            for (const auto& a : argTypes(s.type)) args += (args.empty() ? "" : " ") + sort(a);
            symbolLines.push_back("(declare-fun " + name(s.name) + " (" + args + ") " + sort(resultType(s.type)) + ")");
        }
        for (const auto& d : plan_.datatypes) {
            if (d.ctors.empty()) continue;
            std::string body;
            for (const auto& c : d.ctors) {
                std::string ctor = "(" + name(c.symbol);
                for (std::size_t k = 0; k < c.args.size(); ++k)
                    ctor += " (sel." + name(c.symbol) + "." + std::to_string(k) + " " + sort(c.args[k]) + ")";
                body += (body.empty() ? "" : " ") + ctor + ")";
            }
            dtLines.push_back("; lap: datatype " + d.source);
            dtLines.push_back("(declare-datatypes ((" + name(d.sort) + " 0)) ((" + body + ")))");
        }
        for (const auto& a : plan_.axioms) {
            axiomLines.push_back("; lap: axiom " + a.label);
            axiomLines.push_back("(assert " + term(a.formula) + ")");
        }
        if (!plan_.conjecture.is(HKind::Bot)) {
            axiomLines.push_back("; lap: negated conjecture");
            axiomLines.push_back("(assert (not " + term(plan_.conjecture) + "))");
        }
        // Extensionality may register further function sorts.
        std::vector<std::string> extLines;
        for (std::size_t i = 0; i < funTypes_.size(); ++i) {
            const HTerm& ty = funTypes_[i];
            std::string f = "Fun." + std::to_string(i), ap = "app." + std::to_string(i), d = sort(ty.dom());
            extLines.push_back("(assert (forall ((f " + f + ") (g " + f + ")) (=> (forall ((x " + d + ")) (= (" + ap +
                               " f x) (" + ap + " g x))) (= f g))))");
        }

        std::ostringstream os;
        os << "; lap: problem " << plan_.problem << "\n";
        os << "; lap: classical target; excluded middle is not axiomatized\n";
        os << "; lap: encoding " << (ho_ ? "ho" : "applicative") << "\n";
        for (const auto& line : plan_.provenance) os << "; lap: " << line << "\n";
        os << "(set-logic " << (ho_ ? "HO_ALL" : "ALL") << ")\n";
        for (const auto& t : plan_.typeDecls) {
            bool dt = false;
            for (const auto& d : plan_.datatypes) dt |= d.sort == t.name && !d.ctors.empty();
            if (!dt) os << "(declare-sort " << name(t.name) << " 0)\n";
        }
        for (std::size_t i = 0; i < funTypes_.size(); ++i) os << "(declare-sort Fun." << i << " 0)\n";
        for (const auto& l : dtLines) os << l << "\n";
        for (std::size_t i = 0; i < funTypes_.size(); ++i)
            os << "(declare-fun app." << i << " (Fun." << i << " " << sort(funTypes_[i].dom()) << ") "
               << sort(funTypes_[i].cod()) << ")\n";
        for (const auto& l : symbolLines) os << l << "\n";
        for (const auto& l : liftDecls_) os << l << "\n";
        for (const auto& l : extLines) os << l << "\n";
        for (const auto& l : liftAxioms_) os << l << "\n";
        for (const auto& l : axiomLines) os << l << "\n";
        os << "(check-sat)\n";
        return os.str();
    }

private:
    struct Bound {
        std::string smt;
        HTerm type;
        std::size_t order;
    };

    const EmitPlan& plan_;
    SpineView view_;
    bool ho_;
    HContext base_;
    std::map<std::string, std::string> names_;
    std::map<std::string, Bound> bound_;
    std::size_t counter_ = 0;
    std::vector<HTerm> funTypes_;
    std::vector<std::pair<HTerm, std::string>> lifted_;
    std::set<std::string> graphs_;
    std::vector<std::string> liftDecls_, liftAxioms_;

    std::string name(const std::string& n) const { return names_.at(n); }

    std::string sort(const HTerm& ty) {
        switch (ty.kind()) {
            case HKind::Bool:
                return "Bool";
            case HKind::FVar:
                return name(ty.name());
            case HKind::Arrow: {
                if (ho_) {
                    std::string out = "(->";
                    for (const auto& a : argTypes(ty)) out += " " + sort(a);
                    return out + " " + sort(resultType(ty)) + ")";
                }
                auto it = std::find(funTypes_.begin(), funTypes_.end(), ty);
                std::size_t i = static_cast<std::size_t>(it - funTypes_.begin());
                if (it == funTypes_.end()) funTypes_.push_back(ty);
                return "Fun." + std::to_string(i);
            }
            default:
                throw UnsupportedInEmission("not an SMT sort: " + hDisplay(ty));
        }
    }

    HTerm bind(const HTerm& ty, std::string& decl) {
        std::string key = "\x01" + std::to_string(counter_);
        std::string var = "x." + std::to_string(counter_);
        bound_[key] = {var, ty, counter_++};
        decl = "(" + var + " " + sort(ty) + ")";
        return HTerm::fvar(key);
    }

    HTerm varType(const HTerm& f) const {
        if (!f.is(HKind::FVar)) return HTerm();
        if (auto it = bound_.find(f.name()); it != bound_.end()) return it->second.type;
        if (const PlanSymbol* p = view_.symbol(f.name())) return p->type;
        return HTerm();
    }

    std::string applyChain(std::string cur, HTerm ty, const std::vector<HTerm>& args) {
        for (const auto& a : args) {
            std::string s = sort(ty);  // registers the function sort
            cur = "(app." + s.substr(4) + " " + cur + " " + term(a) + ")";
            ty = ty.cod();
        }
        return cur;
    }

    std::string term(const HTerm& t) {
        Spine s = view_.view(t);
        HTerm vty;
        if (s.head == Head::Var) vty = varType(s.fn);
        std::vector<HTerm> miss = view_.missing(s, vty);
        if (!miss.empty() && s.head != Head::Var) {
            // η-expand, then treat as a λ
            std::vector<std::string> keys;
            std::vector<HTerm> extra;
            for (const auto& ty : miss) {
                std::string d;
                extra.push_back(bind(ty, d));
                keys.push_back(extra.back().name());
            }
            HTerm lam = hMkAppN(t, extra);
            for (std::size_t i = miss.size(); i-- > 0;) lam = hLamF(keys[i], miss[i], lam);
            for (const auto& k : keys) bound_.erase(k);
            return term(lam);
        }
        const auto& a = s.args;
        switch (s.head) {
            case Head::Bot:
                return "false";
            case Head::Imp:
                return "(=> " + term(a[0]) + " " + term(a[1]) + ")";
            case Head::Not:
                return "(not " + term(a[0]) + ")";
            case Head::And:
                return "(and " + term(a[0]) + " " + term(a[1]) + ")";
            case Head::Or:
                return "(or " + term(a[0]) + " " + term(a[1]) + ")";
            case Head::Iff:
            case Head::Eq:
                return "(= " + term(a[0]) + " " + term(a[1]) + ")";
            case Head::Forall:
                return quant("forall", s.sort, a[0]);
            case Head::Exists:
                return quant("exists", s.sort, a[0]);
            case Head::Lam:
                if (ho_) {
                    std::string d;
                    HTerm x = bind(s.fn.binderType(), d);
                    return "(lambda (" + d + ") " + term(hInstantiate(s.fn.body(), x)) + ")";
                }
                return lift(s.fn);
            case Head::Var:
                break;
        }
        if (!s.fn.is(HKind::FVar)) throw UnsupportedInEmission("unexpected head " + hDisplay(s.fn));
        auto bit = bound_.find(s.fn.name());
        if (bit != bound_.end()) {
            if (a.empty()) return bit->second.smt;
            if (ho_) return "(" + bit->second.smt + args(a) + ")";
            return applyChain(bit->second.smt, bit->second.type, a);
        }
        if (!names_.count(s.fn.name())) throw UnsupportedInEmission("undeclared symbol " + s.fn.name());
        std::string f = name(s.fn.name());
        if (a.empty()) return ho_ || !vty.is(HKind::Arrow) ? f : graph(s.fn.name());
        if (ho_ || a.size() == argTypes(vty).size()) return "(" + f + args(a) + ")";
        return applyChain(graph(s.fn.name()), vty, a);
    }

    std::string args(const std::vector<HTerm>& a) {
        std::string out;
        for (const auto& x : a) out += " " + term(x);
        return out;
    }

    std::string quant(const char* q, const HTerm& sortTy, const HTerm& pred) {
        std::string d;
        HTerm x = bind(sortTy, d);
        return "(" + std::string(q) + " (" + d + ") " + term(HTerm::app(pred, x)) + ")";
    }

    // Constant of function sort standing for a declared symbol.
    std::string graph(const std::string& sym) {
        std::string g = "fn." + name(sym);
        if (!graphs_.insert(sym).second) return g;
        HTerm ty = view_.symbol(sym)->type;
        liftDecls_.push_back("(declare-fun " + g + " () " + sort(ty) + ")");
        std::vector<HTerm> xs;
        std::string decls;
        for (const auto& at : argTypes(ty)) {
            std::string d;
            xs.push_back(bind(at, d));
            decls += (decls.empty() ? "" : " ") + d;
        }
        std::string lhs = applyChain(g, ty, xs), rhs = "(" + name(sym) + args(xs) + ")";
        liftAxioms_.push_back("(assert (forall (" + decls + ") (= " + lhs + " " + rhs + ")))");
        return g;
    }

    // λ-lifting over the bound variables the abstraction mentions.
    std::string lift(const HTerm& lam) {
        std::vector<std::pair<std::size_t, std::string>> fvs;
        for (const auto& v : hFreeVars(lam))
            if (auto it = bound_.find(v); it != bound_.end()) fvs.push_back({it->second.order, v});
        std::sort(fvs.begin(), fvs.end());
        HTerm closed = lam;
        for (std::size_t i = fvs.size(); i-- > 0;)
            closed = hLamF(fvs[i].second, bound_.at(fvs[i].second).type, closed);
        std::string call;
        for (const auto& [o, v] : fvs) call += " " + bound_.at(v).smt;
        auto wrap = [&](const std::string& n) { return fvs.empty() ? n : "(" + n + call + ")"; };
        for (const auto& [c, n] : lifted_)
            if (c == closed) return wrap(n);

        std::string n = "lam." + std::to_string(lifted_.size());
        lifted_.push_back({closed, n});
        HContext ctx = base_;
        for (const auto& [o, v] : fvs) ctx.push(v, bound_.at(v).type);
        HTerm ty = holInferType(HMode::HOL, ctx, lam);
        std::string params, decls;
        for (const auto& [o, v] : fvs) {
            params += (params.empty() ? "" : " ") + sort(bound_.at(v).type);
            decls += std::string(decls.empty() ? "" : " ") + "(" + bound_.at(v).smt + " " + sort(bound_.at(v).type) + ")";
        }
        liftDecls_.push_back("(declare-fun " + n + " (" + params + ") " + sort(ty) + ")");
        std::string d;
        HTerm x = bind(lam.binderType(), d);
        decls += (decls.empty() ? "" : " ") + d;
        std::string lhs = applyChain(wrap(n), ty, {x});
        liftAxioms_.push_back("(assert (forall (" + decls + ") (= " + lhs + " " + term(hInstantiate(lam.body(), x)) +
                              ")))");
        return wrap(n);
    }
};

}  // namespace

std::string emitSMT(const EmitPlan& plan, SmtOptions opts) {
    checkPlan(plan);
    return SmtPrinter(plan, opts).run();
}

}  // namespace lapc
