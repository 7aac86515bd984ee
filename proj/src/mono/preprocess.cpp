#include "lapc/preprocess.hpp"

#include <algorithm>
#include <functional>

#include "lapc/error.hpp"
#include "lapc/instantiation.hpp"

namespace lapc {

namespace {

std::string freshPremiseName(const Problem& p, const std::string& base) {
    auto taken = [&](const std::string& n) {
        return std::any_of(p.premises.begin(), p.premises.end(), [&](const Premise& q) { return q.name == n; });
    };
    if (!taken(base)) return base;
    for (std::size_t i = 1;; ++i)
        if (!taken(base + "_" + std::to_string(i))) return base + "_" + std::to_string(i);
}

}  // namespace

Problem introForalls(const Problem& p0) {
    Problem p = p0;
    TypeChecker tc(p.env);
    while (p.goal.isPi()) {
        const Term& dom = p.goal.binderType();
        bool dependent = hasLooseBVar(p.goal.body(), 0);
        if (!dependent && tc.isProp(p.ctx, dom)) {
            // an antecedent becomes a hypothesis
            const std::string& n = p.goal.binderName();
            p.premises.push_back({freshPremiseName(p, n.empty() || n == "_" ? "h" : n), dom});
            p.goal = lowerLoose(p.goal.body(), 1);
            continue;
        }
        std::string x = p.ctx.freshName(p.goal.binderName().empty() ? "x" : p.goal.binderName());
        p.ctx.push(x, dom, p.goal.binderInfo());
        p.goal = instantiate(p.goal.body(), Term::fvar(x));
    }
    return p;
}

Problem byContradiction(const Problem& p0) {
    Problem p = p0;
    p.premises.push_back({freshPremiseName(p, "neg_goal"), Term::app(Term::constant("Not"), p.goal)});
    p.goal = Term::constant("False");
    return p;
}

std::vector<std::string> unfoldOrder(const Environment& env, const std::vector<std::string>& names) {
    std::vector<std::string> list;
    for (const auto& n : names)
        if (std::find(list.begin(), list.end(), n) == list.end()) list.push_back(n);
    std::map<std::string, std::vector<std::string>> mentions;
    for (const auto& n : list) {
        const ConstantInfo* ci = env.find(n);
        if (!ci) throw UnknownConstant("unfold instruction names unknown constant " + n);
        if (!ci->value) throw PreprocessError("unfold instruction names " + n + ", which has no definition");
        std::set<std::string> cs = constantsOf(*ci->value);
        for (const auto& m : list)
            if (cs.count(m)) mentions[n].push_back(m);
    }
    // depth-first, emitting a constant once everything that mentions it is out
    std::map<std::string, int> state;  // 1 visiting, 2 done
    std::vector<std::string> post, stack;
    std::function<void(const std::string&)> dfs = [&](const std::string& n) {
        state[n] = 1;
        stack.push_back(n);
        for (const auto& m : mentions[n]) {
            if (state[m] == 1) {
                auto it = std::find(stack.begin(), stack.end(), m);
                std::string cyc;
                for (; it != stack.end(); ++it) cyc += *it + " → ";
                throw CyclicUnfold("cyclic unfold instruction: " + cyc + m);
            }
            if (state[m] == 0) dfs(m);
        }
        stack.pop_back();
        state[n] = 2;
        post.push_back(n);
    };
    for (const auto& n : list)
        if (state[n] == 0) dfs(n);
    std::reverse(post.begin(), post.end());
    return post;
}

Problem applyUnfoldInstruction(const Problem& p0) {
    if (p0.instructions.unfold.empty()) return p0;
    Problem p = p0;
    TypeChecker tc(p.env);
    auto rewrite = [&](Term& t) {
        Term r = t;
        for (const auto& n : unfoldOrder(p.env, p.instructions.unfold))
            r = replaceConst(r, n, *p.env.find(n)->value);
        if (r != t) t = tc.normalize(r);
    };
    for (auto& q : p.premises) rewrite(q.type);
    rewrite(p.goal);
    Context ctx;
    for (const auto& d : p.ctx) {
        Term ty = d.type;
        rewrite(ty);
        ctx.push(d.name, ty, d.info);
    }
    p.ctx = ctx;
    return p;
}

std::optional<Term> definitionEquation(TypeChecker& tc, const Context& ctx, const std::string& g) {
    const ConstantInfo* ci = tc.env().find(g);
    if (!ci) throw UnknownConstant("defeq instruction names unknown constant " + g);
    if (!ci->value) return std::nullopt;
    Context inner = ctx;
    std::vector<std::pair<std::string, Term>> ys;
    Term lhs = Term::constant(g);
    Term T = ci->type;
    for (;;) {
        Term W = T.isPi() ? T : tc.whnf(T, Reducibility::Opaque);
        if (!W.isPi()) break;
        std::string y = inner.freshName(W.binderName().empty() ? "x" : W.binderName());
        inner.push(y, W.binderType());
        ys.emplace_back(y, W.binderType());
        lhs = Term::app(lhs, Term::fvar(y));
        T = instantiate(W.body(), Term::fvar(y));
    }
    Term rhs = tc.normalize(*tc.unfoldHead(lhs, Reducibility::Opaque));
    Term ty = tc.inferType(inner, lhs);
    Level l = tc.sortLevel(inner, ty);
    if (l == 0) return std::nullopt;
    Term eqn = mkPiFVars(ys, mkAppN(Term::constant(eqName(l)), {ty, lhs, rhs}));
    if (!tc.isProp(ctx, eqn)) return std::nullopt;
    return eqn;
}

Problem applyDefeqInstruction(const Problem& p0) {
    Problem p = p0;
    TypeChecker tc(p.env);
    for (const auto& g : p.instructions.defeq) {
        auto e = definitionEquation(tc, p.ctx, g);
        if (!e) {
            p.warnings.push_back("defeq instruction: " + g + " has no definition to equate");
            continue;
        }
        p.premises.push_back({freshPremiseName(p, g + "_def"), *e});
    }
    return p;
}

namespace {

bool isLogicHead(const Term& h) {
    if (!h.isConst()) return false;
    if (isConnectiveConst(h.name())) return true;
    auto b = parseBuiltinName(h.name());
    return b && (b->family == "Eq" || b->family == "Exists");
}

struct SubtermCollector {
    std::vector<Term> out;

    void add(const Term& t) {
        if (t.looseBound() != 0 || t.isSort() || t.isBVar()) return;
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }

    // heads of the applications of a logic-free term, then its closed parts
    void logicFree(const Term& t) {
        if (t.looseBound() == 0) add(t);
        if (t.isApp()) {
            add(getAppFn(t));
            if (t.looseBound() != 0) {
                // longest closed prefix of the spine
                Term f = t;
                while (f.isApp() && f.looseBound() != 0) f = f.fn();
                add(f);
            }
            for (const auto& a : getAppArgs(t)) logicFree(a);
        } else if (t.isBinder() && t.looseBound() != 0) {
            logicFree(t.body());
        }
    }

    void go(const Term& t) {
        switch (t.kind()) {
            case TermKind::App: {
                Term h = getAppFn(t);
                if (!isLogicHead(h)) return logicFree(t);
                std::vector<Term> args = getAppArgs(t);
                auto b = parseBuiltinName(h.name());
                bool typed = b && (b->family == "Eq" || b->family == "Exists");
                for (std::size_t i = typed ? 1 : 0; i < args.size(); ++i) go(args[i]);
                return;
            }
            case TermKind::Pi:
                go(t.binderType());
                go(t.body());
                return;
            case TermKind::Lam:
                go(t.body());
                return;
            case TermKind::Const:
                if (isLogicHead(t)) return;
                return add(t);
            case TermKind::FVar:
                return add(t);
            default:
                return;
        }
    }
};

}  // namespace

std::vector<Term> logicFreeSubterms(const Term& t) {
    SubtermCollector c;
    c.go(t);
    return c.out;
}

Problem subexprEqTheorems(const Problem& p0, std::size_t pairBudget, SubexprStats* stats) {
    Problem p = p0;
    TypeChecker tc(p.env);
    SubtermCollector c;
    for (const auto& q : p.premises) c.go(q.type);
    c.go(p.goal);
    SubexprStats st;
    st.candidates = c.out.size();
    const auto& S = c.out;
    for (std::size_t i = 0; i < S.size() && !st.truncated; ++i) {
        if (!hasDefinitionHead(tc, S[i])) continue;
        for (std::size_t j = 0; j < S.size(); ++j) {
            if (i == j) continue;
            if (st.pairs >= pairBudget) {
                st.truncated = true;
                break;
            }
            ++st.pairs;
            auto e = genEqTheorems(tc, p.ctx, S[i], S[j]);
            if (!e) continue;
            bool known = std::any_of(p.premises.begin(), p.premises.end(), [&](const Premise& q) {
                return q.type == *e || hypEquiv(tc, p.ctx, q.type, *e);
            });
            if (known) continue;
            p.premises.push_back({freshPremiseName(p, "subexpr_eq"), *e});
            ++st.added;
        }
    }
    if (st.truncated)
        p.warnings.push_back("subexpression equations: pair budget " + std::to_string(pairBudget) + " exhausted");
    if (stats) *stats = st;
    return p;
}

void validateInductive(const Environment& env, const InductiveDecl& d) {
    (void)env;
    const std::size_t np = d.params.size();
    Term self = Term::constant(d.name);
    for (const auto& ctor : d.ctors) {
        Term t = ctor.type;
        std::vector<Term> ps;
        for (std::size_t i = 0; i < np; ++i) {
            if (!t.isPi())
                throw UnsupportedInductive(ctor.name + ": constructor does not take the parameters of " + d.name);
            std::string x = "#p" + std::to_string(i);
            ps.push_back(Term::fvar(x));
            t = instantiate(t.body(), ps.back());
        }
        Term full = mkAppN(self, ps);
        while (t.isPi()) {
            if (hasLooseBVar(t.body(), 0))
                throw UnsupportedInductive(ctor.name + ": dependent constructor argument");
            const Term& a = t.binderType();
            if (constantsOf(a).count(d.name) && a != full)
                throw UnsupportedInductive(ctor.name + ": nested occurrence of " + d.name + " in " + display(a));
            t = lowerLoose(t.body(), 1);
        }
        if (t != full) throw UnsupportedInductive(ctor.name + ": indexed result type " + display(t));
    }
}

namespace {

struct InductiveCollector {
    const Environment& env;
    TypeChecker tc;
    std::vector<DatatypeInstance> out;
    std::vector<Term> inProgress;

    bool known(const Term& t) {
        for (const auto& d : out)
            if (d.type == t || tc.isDefEq(d.type, t)) return true;
        for (const auto& q : inProgress)
            if (q == t || tc.isDefEq(q, t)) return true;
        return false;
    }

    void scan(const Term& t) {
        switch (t.kind()) {
            case TermKind::App:
            case TermKind::Const: {
                Term h = getAppFn(t);
                std::vector<Term> args = getAppArgs(t);
                for (const auto& a : args) scan(a);
                if (!h.isConst()) {
                    scan(h);
                    return;
                }
                const InductiveDecl* d = env.findInductive(h.name());
                if (d && args.size() == d->params.size() && t.looseBound() == 0) visit(*d, t, args);
                return;
            }
            case TermKind::Pi:
            case TermKind::Lam:
                scan(t.binderType());
                scan(t.body());
                return;
            default:
                return;
        }
    }

    void visit(const InductiveDecl& d, const Term& t, const std::vector<Term>& args) {
        if (known(t)) return;
        validateInductive(env, d);
        inProgress.push_back(t);
        DatatypeInstance inst{d.name, args, t, {}};
        for (const auto& c : d.ctors) {
            Term ty = c.type;
            for (const auto& a : args) ty = instantiate(ty.body(), a);
            DatatypeInstance::Ctor k{c.name, mkAppN(Term::constant(c.name), args), {}};
            while (ty.isPi()) {
                k.argTypes.push_back(ty.binderType());
                ty = lowerLoose(ty.body(), 1);
            }
            for (const auto& a : k.argTypes) scan(a);
            inst.constructors.push_back(std::move(k));
        }
        inProgress.pop_back();
        out.push_back(std::move(inst));
    }
};

}  // namespace

std::vector<DatatypeInstance> collectInductiveInstances(const Problem& p) {
    InductiveCollector c{p.env, TypeChecker(p.env), {}, {}};
    if (p.env.inductives().empty()) return {};
    for (const auto& d : p.ctx) c.scan(d.type);
    for (const auto& q : p.premises) c.scan(q.type);
    c.scan(p.goal);
    return std::move(c.out);
}

PreprocessResult preprocess(const Problem& p, const PreprocessOptions& opts) {
    PreprocessResult r;
    Problem q = applyUnfoldInstruction(p);
    q = applyDefeqInstruction(q);
    q = introForalls(q);
    q = byContradiction(q);
    if (opts.subexprEquations) q = subexprEqTheorems(q, opts.pairBudget, &r.subexpr);
    r.datatypes = collectInductiveInstances(q);
    r.problem = std::move(q);
    return r;
}

}  // namespace lapc
