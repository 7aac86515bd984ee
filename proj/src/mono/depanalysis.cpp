#include "lapc/depanalysis.hpp"

#include <unordered_map>

#include "lapc/error.hpp"

namespace lapc {

bool isLADT(const Term& s) { return s.isPi() && hasLooseBVar(s.body(), 0); }

std::string freshLocal(const Context& ctx, const std::string& base, const NameSet& avoid) {
    std::string b = base.empty() ? "x" : base;
    if (!ctx.contains(b) && !avoid.count(b)) return b;
    for (std::size_t i = 1;; ++i) {
        std::string c = b + "_" + std::to_string(i);
        if (!ctx.contains(c) && !avoid.count(c)) return c;
    }
}

Term etaOuter(const Term& t) {
    if (!t.isLam()) return t;
    Term body = etaOuter(t.body());
    if (body.isApp() && body.arg().isBVar() && body.arg().bvarIndex() == 0 && !hasLooseBVar(body.fn(), 0))
        return lowerLoose(body.fn(), 1);
    return Term::lam(t.binderName(), t.binderType(), body, t.binderInfo());
}

ArgAnalysis analyzeArgs(TypeChecker& tc, const Context& ctx, const Term& head, const std::vector<Term>& args,
                        DepOptions opts) {
    ArgAnalysis r;
    r.head = head;
    r.args = args;
    Term T = tc.inferType(ctx, head);
    std::vector<Term> domains;
    std::vector<std::string> binderNames;
    for (std::size_t i = 0; i < args.size(); ++i) {
        Term W = T.isPi() ? T : tc.whnf(T, Reducibility::Opaque);
        if (!W.isPi())
            throw TypeError("application rule: " + display(mkAppN(head, {args.begin(), args.begin() + i})) +
                            " is not a function");
        // LAD is judged on the β-normal type of a0 a1 … a_{i-1}
        Term body = tc.normalize(W.body());
        bool dep = hasLooseBVar(body, 0) || (opts.absorbInstances && W.binderInfo() == BinderInfo::Inst);
        if (dep) r.depIndices.insert(i + 1);
        domains.push_back(W.binderType());
        binderNames.push_back(W.binderName());
        T = tc.normalize(instantiate(body, args[i]));
    }
    std::vector<Term> w;
    std::vector<std::pair<std::string, Term>> binders;
    NameSet avoid;
    for (const auto& a : args)
        for (const auto& n : freeVars(a)) avoid.insert(n);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (r.depIndices.count(i + 1)) {
            r.dArgs.push_back(args[i]);
            w.push_back(args[i]);
        } else {
            r.lArgs.push_back(args[i]);
            std::string x = freshLocal(ctx, binderNames[i], avoid);
            avoid.insert(x);
            binders.emplace_back(x, domains[i]);
            w.push_back(Term::fvar(x));
        }
    }
    r.lFun = etaOuter(mkLambdaFVars(binders, mkAppN(head, w)));
    return r;
}

ArgAnalysis analyzeArgs(const Environment& env, const Context& ctx, const Term& head,
                        const std::vector<Term>& args, DepOptions opts) {
    TypeChecker tc(env);
    return analyzeArgs(tc, ctx, head, args, opts);
}

namespace {

bool disjoint(const Term& t, const NameSet& B) {
    if (!t.hasFVar() || B.empty()) return true;
    for (const auto& n : freeVars(t))
        if (B.count(n)) return false;
    return true;
}

struct QMonoCheck {
    TypeChecker& tc;
    DepOptions opts;

    // empty string when t is quasi-monomorphic
    std::string go(const Context& ctx, const NameSet& B, const Term& t) {
        switch (t.kind()) {
            case TermKind::FVar:
            case TermKind::Const:
            case TermKind::App:
                return app(ctx, B, t);
            case TermKind::Lam: {
                const Term& s = t.binderType();
                if (!disjoint(s, B)) return "λ binder type mentions a bound variable: " + display(t);
                if (tc.isProp(ctx, s)) return "λ over a proof: " + display(t);
                std::string x = freshLocal(ctx, t.binderName());
                Context inner = ctx.extended(x, s);
                NameSet B2 = B;
                B2.insert(x);
                return go(inner, B2, instantiate(t.body(), Term::fvar(x)));
            }
            case TermKind::Pi: {
                const Term& s = t.binderType();
                bool sProp = tc.isProp(ctx, s);
                if (!hasLooseBVar(t.body(), 0) && sProp) {
                    Term body = lowerLoose(t.body(), 1);
                    if (!tc.isProp(ctx, body)) return "implication with non-proposition codomain: " + display(t);
                    std::string e = go(ctx, B, s);
                    return e.empty() ? go(ctx, B, body) : e;
                }
                // dependent ∀, or a vacuous ∀ over a non-proposition
                if (!disjoint(s, B)) return "∀ binder type mentions a bound variable: " + display(t);
                if (sProp) return "∀ quantifies over a proof: " + display(t);
                std::string x = freshLocal(ctx, t.binderName());
                Context inner = ctx.extended(x, s);
                Term body = instantiate(t.body(), Term::fvar(x));
                if (!tc.isProp(inner, body)) return "∀ body is not a proposition: " + display(t);
                NameSet B2 = B;
                B2.insert(x);
                return go(inner, B2, body);
            }
            default:
                return "not a variable application, binder or implication: " + display(t);
        }
    }

    std::string app(const Context& ctx, const NameSet& B, const Term& t) {
        Term head = getAppFn(t);
        std::vector<Term> args = getAppArgs(t);
        if (!head.isFVar() && !head.isConst()) return "application head is not a variable: " + display(t);
        ArgAnalysis an = analyzeArgs(tc, ctx, head, args, opts);
        if (head.isFVar() && B.count(head.name())) {
            if (!an.dArgs.empty()) return "bound variable " + head.name() + " has dependent arguments: " + display(t);
            for (const auto& a : args) {
                std::string e = go(ctx, B, a);
                if (!e.empty()) return e;
            }
            return {};
        }
        for (const auto& d : an.dArgs)
            if (!disjoint(d, B)) return "dependent argument mentions a bound variable: " + display(t);
        for (const auto& a : an.lArgs) {
            std::string e = go(ctx, B, a);
            if (!e.empty()) return e;
        }
        return {};
    }
};

}  // namespace

std::string qMonoViolation(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts) {
    QMonoCheck c{tc, opts};
    return c.go(ctx, B, t);
}

bool qMono(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts) {
    return qMonoViolation(tc, ctx, B, t, opts).empty();
}

bool qMono(const Environment& env, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts) {
    TypeChecker tc(env);
    return qMono(tc, ctx, B, t, opts);
}

bool isTypeFormer(TypeChecker& tc, const Context& ctx, const Term& t) {
    Term T = tc.inferType(ctx, t);
    Context c = ctx;
    for (;;) {
        Term W = T.isPi() ? T : tc.whnf(T, Reducibility::Opaque);
        if (W.isSort()) return W.level() >= 1;
        if (!W.isPi()) return false;
        std::string x = freshLocal(c, W.binderName());
        c.push(x, W.binderType());
        T = instantiate(W.body(), Term::fvar(x));
    }
}

namespace {

struct InstCollector {
    TypeChecker& tc;
    DepOptions opts;
    std::vector<Term> out;
    std::unordered_map<Fingerprint, std::vector<std::size_t>> index;

    void add(const Term& c) {
        auto& bucket = index[fingerprint(c)];
        for (std::size_t i : bucket)
            if (out[i] == c || tc.isDefEq(out[i], c)) return;
        bucket.push_back(out.size());
        out.push_back(c);
    }

    void go(const Context& ctx, const NameSet& B, const Term& t) {
        switch (t.kind()) {
            case TermKind::App: {
                Term head = getAppFn(t);
                std::vector<Term> args = getAppArgs(t);
                bool logical = head.isConst() && isConnectiveConst(head.name());
                bool bound = head.isFVar() && B.count(head.name());
                if (logical || bound || !(head.isFVar() || head.isConst())) {
                    if (!head.isFVar() && !head.isConst()) go(ctx, B, head);
                    for (const auto& a : args) go(ctx, B, a);
                    return;
                }
                ArgAnalysis an = analyzeArgs(tc, ctx, head, args, opts);
                bool wanted = head.isConst() || !an.dArgs.empty();
                if (wanted && disjoint(an.lFun, B) && !isTypeFormer(tc, ctx, an.lFun)) add(an.lFun);
                for (const auto& a : an.lArgs) go(ctx, B, a);
                return;
            }
            case TermKind::Lam:
            case TermKind::Pi: {
                go(ctx, B, t.binderType());
                std::string x = freshLocal(ctx, t.binderName());
                Context inner = ctx.extended(x, t.binderType());
                NameSet B2 = B;
                B2.insert(x);
                go(inner, B2, instantiate(t.body(), Term::fvar(x)));
                return;
            }
            default:
                return;
        }
    }
};

}  // namespace

std::vector<Term> holInsts(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts) {
    InstCollector c{tc, opts, {}, {}};
    c.go(ctx, B, t);
    return c.out;
}

std::vector<Term> holInsts(const Environment& env, const Context& ctx, const NameSet& B, const Term& t,
                           DepOptions opts) {
    TypeChecker tc(env);
    return holInsts(tc, ctx, B, t, opts);
}

}  // namespace lapc
