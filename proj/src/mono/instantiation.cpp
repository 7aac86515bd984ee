#include "lapc/instantiation.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "lapc/error.hpp"

namespace lapc {

namespace {

// First-order unification with metavariables as free variables. Mismatches
// fall back to whnf on both sides and finally to isDefEq when no
// metavariable is left.
struct Unif {
    TypeChecker& tc;
    NameSet M;
    NameSet forbidden;  // may not appear in an assignment
    std::map<std::string, Term> sigma;
    Context ctx;
    std::size_t fresh = 0;

    Term inst(const Term& t) const { return sigma.empty() || !t.hasFVar() ? t : substExtend(sigma, t); }

    bool isMeta(const Term& t) const { return t.isFVar() && M.count(t.name()) && !sigma.count(t.name()); }

    bool hasMeta(const Term& t) const {
        if (!t.hasFVar()) return false;
        for (const auto& n : freeVars(t))
            if (M.count(n) && !sigma.count(n)) return true;
        return false;
    }

    bool assign(const std::string& x, const Term& v) {
        if (v.isFVar() && v.name() == x) return true;
        if (v.looseBound() != 0 || occursFVar(v, x)) return false;
        for (const auto& n : freeVars(v))
            if (forbidden.count(n)) return false;
        const LocalDecl* d = ctx.find(x);
        if (!d) return false;
        Term xt = d->type;
        Term vt;
        try {
            vt = tc.inferType(ctx, v);
        } catch (const Error&) {
            return false;
        }
        auto save = sigma;
        std::map<std::string, Term> one{{x, v}};
        for (auto& [k, val] : sigma) val = substExtend(one, val);
        sigma[x] = v;
        if (!uni(xt, vt)) {
            sigma = std::move(save);
            return false;
        }
        return true;
    }

    std::string local(const std::string& base) {
        std::string n;
        do n = "#u" + std::to_string(fresh++) + "." + base;
        while (ctx.contains(n));
        return n;
    }

    bool underBinder(const Term& ty, const Term& b1, const Term& b2, const std::string& name) {
        std::string x = local(name);
        Context saved = ctx;
        ctx.push(x, inst(ty));
        forbidden.insert(x);
        bool ok = uni(instantiate(b1, Term::fvar(x)), instantiate(b2, Term::fvar(x)));
        forbidden.erase(x);
        ctx = std::move(saved);
        return ok;
    }

    bool structural(const Term& a, const Term& b) {
        if (a.isApp() && b.isApp()) return uni(a.fn(), b.fn()) && uni(a.arg(), b.arg());
        if ((a.isPi() && b.isPi()) || (a.isLam() && b.isLam()))
            return uni(a.binderType(), b.binderType()) && underBinder(a.binderType(), a.body(), b.body(), a.binderName());
        if (a.isLam() != b.isLam()) {
            // η: compare λx. a x with b
            const Term& l = a.isLam() ? a : b;
            const Term& o = a.isLam() ? b : a;
            Term eta = Term::app(liftLoose(o, 1), Term::bvar(0));
            return a.isLam() ? underBinder(l.binderType(), l.body(), eta, l.binderName())
                             : underBinder(l.binderType(), eta, l.body(), l.binderName());
        }
        if (a.isSort() && b.isSort()) return a.level() == b.level();
        return false;
    }

    bool uni(const Term& a0, const Term& b0) {
        Term a = inst(a0), b = inst(b0);
        if (a == b) return true;
        if (isMeta(a)) return assign(a.name(), b);
        if (isMeta(b)) return assign(b.name(), a);
        auto save = sigma;
        if (a.kind() == b.kind() || a.isLam() || b.isLam()) {
            if (structural(a, b)) return true;
            sigma = save;
        }
        Term wa = tc.whnf(a), wb = tc.whnf(b);
        if (wa != a || wb != b) {
            if (uni(wa, wb)) return true;
            sigma = save;
        }
        if (!hasMeta(a) && !hasMeta(b)) return tc.isDefEq(a, b);
        return false;
    }
};

bool sameAssignment(const Unifier& x, const Unifier& y) {
    if (x.assignment.size() != y.assignment.size()) return false;
    for (const auto& [k, v] : x.assignment) {
        auto it = y.assignment.find(k);
        if (it == y.assignment.end() || it->second != v) return false;
    }
    return true;
}

void addUnique(std::vector<Unifier>& out, Unifier u) {
    for (const auto& o : out)
        if (sameAssignment(o, u)) return;
    out.push_back(std::move(u));
}

std::optional<Unifier> unifyOnce(TypeChecker& tc, const Context& ctx, const NameSet& M, const NameSet& forbidden,
                                 const Term& t1, const Term& t2, bool swap, bool unfoldFirst) {
    Unif u{tc, M, forbidden, {}, ctx};
    Term a = t1, b = t2;
    try {
        if (unfoldFirst) {
            a = tc.normalize(a, Reducibility::Default);
            b = tc.normalize(b, Reducibility::Default);
        }
        bool ok = swap ? u.uni(b, a) : u.uni(a, b);
        if (!ok) return std::nullopt;
        Unifier r;
        r.metaSet = M;
        r.assignment = u.sigma;
        r.domainCtx = ctx;
        // the triple must be well formed: Γ ⊢ σ(x) : σ̄(type x)
        for (const auto& [x, v] : r.assignment) {
            const LocalDecl* d = ctx.find(x);
            if (!d || !tc.isDefEq(tc.inferType(ctx, v), r.apply(d->type))) return std::nullopt;
        }
        if (!tc.isDefEq(r.apply(t1), r.apply(t2))) return std::nullopt;
        for (const auto& d : ctx)
            if (!r.assignment.count(d.name)) r.codomainCtx.push(d.name, r.apply(d.type), d.info);
        return r;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<Unifier> unifyWith(TypeChecker& tc, const Context& ctx, const NameSet& M, const NameSet& forbidden,
                               const Term& t1, const Term& t2, UnifyOptions opts) {
    std::vector<Unifier> out;
    std::size_t cap = std::clamp<std::size_t>(opts.maxAlternatives, 1, 4);
    static constexpr std::pair<bool, bool> variants[] = {{false, false}, {true, false}, {false, true}, {true, true}};
    for (std::size_t i = 0; i < (cap == 1 ? 1 : 4) && out.size() < cap; ++i) {
        auto r = unifyOnce(tc, ctx, M, forbidden, t1, t2, variants[i].first, variants[i].second);
        if (r) addUnique(out, std::move(*r));
    }
    return out;
}

}  // namespace

std::vector<Unifier> unify(TypeChecker& tc, const Context& ctx, const NameSet& M, const Term& t1, const Term& t2,
                           UnifyOptions opts) {
    return unifyWith(tc, ctx, M, {}, t1, t2, opts);
}

std::vector<Unifier> unify(const Environment& env, const Context& ctx, const NameSet& M, const Term& t1,
                           const Term& t2, UnifyOptions opts) {
    TypeChecker tc(env);
    return unify(tc, ctx, M, t1, t2, opts);
}

namespace {

struct Matcher {
    TypeChecker& tc;
    const NameSet& M;
    const Term& m;
    UnifyOptions opts;
    DepOptions dep;
    std::vector<Unifier> out;
    NameSet locals;
    std::size_t fresh = 0;

    void go(const Context& ctx, const Term& h) {
        switch (h.kind()) {
            case TermKind::App: {
                Term f = getAppFn(h);
                std::vector<Term> args = getAppArgs(h);
                for (const auto& a : args) go(ctx, a);
                if (f.isFVar() && M.count(f.name())) return;
                Term lf;
                try {
                    lf = analyzeArgs(tc, ctx, f, args, dep).lFun;
                } catch (const Error&) {
                    return;
                }
                for (auto& u : unifyWith(tc, ctx, M, locals, m, lf, opts)) addUnique(out, std::move(u));
                return;
            }
            case TermKind::Pi:
            case TermKind::Lam: {
                go(ctx, h.binderType());
                std::string x;
                do x = "#m" + std::to_string(fresh++);
                while (ctx.contains(x));
                locals.insert(x);
                go(ctx.extended(x, h.binderType()), instantiate(h.body(), Term::fvar(x)));
                locals.erase(x);
                return;
            }
            default:
                return;
        }
    }
};

void fvarsInOrder(const Term& t, std::vector<std::string>& out, const NameSet& want) {
    switch (t.kind()) {
        case TermKind::FVar:
            if (want.count(t.name()) && std::find(out.begin(), out.end(), t.name()) == out.end())
                out.push_back(t.name());
            return;
        case TermKind::App:
            fvarsInOrder(t.fn(), out, want);
            fvarsInOrder(t.arg(), out, want);
            return;
        case TermKind::Pi:
        case TermKind::Lam:
            fvarsInOrder(t.binderType(), out, want);
            fvarsInOrder(t.body(), out, want);
            return;
        default:
            return;
    }
}

struct Opened {
    Context ctx;
    std::vector<std::pair<std::string, Term>> vars;  // name, type
    Term body;
};

// Leading ∀ binders whose domain is not a proposition, as fresh free variables.
Opened openNonProp(TypeChecker& tc, const Context& ctx, const Term& h) {
    Opened o{ctx, {}, h};
    while (o.body.isPi()) {
        const Term& dom = o.body.binderType();
        if (tc.isProp(o.ctx, dom)) break;
        std::string x = o.ctx.freshName(o.body.binderName().empty() ? "x" : o.body.binderName());
        o.ctx.push(x, dom);
        o.vars.emplace_back(x, dom);
        o.body = instantiate(o.body.body(), Term::fvar(x));
    }
    return o;
}

}  // namespace

std::vector<Unifier> matchTerm(TypeChecker& tc, const Context& ctx, const NameSet& M, const Term& m, const Term& h,
                               UnifyOptions opts, DepOptions dep) {
    Matcher mt{tc, M, m, opts, dep, {}, {}};
    mt.go(ctx, h);
    return std::move(mt.out);
}

std::vector<Term> matchInst(TypeChecker& tc, const Context& ctx, const Term& m, const Term& h, UnifyOptions opts,
                            DepOptions dep) {
    std::vector<Term> out;
    try {
        Opened o = openNonProp(tc, ctx, h);
        NameSet M;
        for (const auto& v : o.vars) M.insert(v.first);
        for (const auto& u : matchTerm(tc, o.ctx, M, m, o.body, opts, dep)) {
            Term body = u.apply(o.body);
            NameSet rest;
            for (const auto& v : o.vars)
                if (!u.assignment.count(v.first)) rest.insert(v.first);
            // first occurrence in the instantiated body, then the vacuous ones
            std::vector<std::string> order;
            fvarsInOrder(body, order, rest);
            for (const auto& v : o.vars)
                if (rest.count(v.first) && std::find(order.begin(), order.end(), v.first) == order.end())
                    order.push_back(v.first);
            std::map<std::string, Term> types;
            for (const auto& v : o.vars)
                if (rest.count(v.first)) types[v.first] = u.apply(v.second);
            // a binder goes after the metavariables its type mentions
            std::vector<std::pair<std::string, Term>> binders;
            NameSet placed;
            while (binders.size() < order.size()) {
                bool progress = false;
                for (const auto& x : order) {
                    if (placed.count(x)) continue;
                    bool ready = true;
                    for (const auto& n : freeVars(types[x]))
                        if (rest.count(n) && !placed.count(n)) ready = false;
                    if (!ready) continue;
                    binders.emplace_back(x, types[x]);
                    placed.insert(x);
                    progress = true;
                    break;
                }
                if (!progress) break;
            }
            if (binders.size() != order.size()) continue;
            Term r = mkPiFVars(binders, body);
            if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
        }
    } catch (const Error&) {
    }
    return out;
}

std::vector<Term> matchInst(const Environment& env, const Context& ctx, const Term& m, const Term& h) {
    TypeChecker tc(env);
    return matchInst(tc, ctx, m, h);
}

bool isHypInstance(TypeChecker& tc, const Context& ctx, const Term& a, const Term& h) {
    try {
        Opened oh = openNonProp(tc, ctx, h);
        Opened oa = openNonProp(tc, oh.ctx, a);
        NameSet M;
        for (const auto& v : oh.vars) M.insert(v.first);
        return !unify(tc, oa.ctx, M, oh.body, oa.body).empty();
    } catch (const Error&) {
        return false;
    }
}

bool hypEquiv(TypeChecker& tc, const Context& ctx, const Term& t1, const Term& t2) {
    if (t1 == t2) return true;
    return isHypInstance(tc, ctx, t1, t2) && isHypInstance(tc, ctx, t2, t1);
}

bool hypEquiv(const Environment& env, const Context& ctx, const Term& t1, const Term& t2) {
    TypeChecker tc(env);
    return hypEquiv(tc, ctx, t1, t2);
}

bool hasDefinitionHead(TypeChecker& tc, const Term& c) {
    Term h = getAppFn(c);
    if (h.isLam()) h = getAppFn(tc.whnfCore(c));
    while (h.isLam()) h = getAppFn(h.body());
    if (!h.isConst()) return false;
    const ConstantInfo* ci = tc.env().find(h.name());
    return ci && ci->value;
}

std::optional<Term> genEqTheorems(TypeChecker& tc, const Context& ctx, const Term& c1, const Term& c2) {
    if (c1 == c2 || !hasDefinitionHead(tc, c1)) return std::nullopt;
    try {
        if (tc.isDefEq(c1, c2)) return std::nullopt;
        // c1 y1 … yl over its whole telescope
        Context inner = ctx;
        std::vector<std::pair<std::string, Term>> ys;
        Term lhs = c1;
        Term T = tc.inferType(ctx, c1);
        for (;;) {
            Term W = T.isPi() ? T : tc.whnf(T, Reducibility::Opaque);
            if (!W.isPi()) break;
            std::string y = inner.freshName(W.binderName().empty() ? "x" : W.binderName());
            inner.push(y, W.binderType());
            ys.emplace_back(y, W.binderType());
            lhs = Term::app(lhs, Term::fvar(y));
            T = instantiate(W.body(), Term::fvar(y));
        }
        Term core = tc.whnfCore(lhs);
        auto unfolded = tc.unfoldHead(core, Reducibility::Opaque);
        if (!unfolded) return std::nullopt;
        Term u = tc.normalize(*unfolded);

        // c2 applied to metavariables, longest spine first
        Context mctx = inner;
        NameSet M;
        std::vector<Term> zs;
        Term T2 = tc.inferType(inner, c2);
        for (;;) {
            Term W = T2.isPi() ? T2 : tc.whnf(T2, Reducibility::Opaque);
            if (!W.isPi()) break;
            std::string z = mctx.freshName("?" + (W.binderName().empty() ? std::string("z") : W.binderName()));
            mctx.push(z, W.binderType());
            M.insert(z);
            zs.push_back(Term::fvar(z));
            T2 = instantiate(W.body(), Term::fvar(z));
        }
        for (std::size_t n = zs.size() + 1; n-- > 0;) {
            std::vector<Term> used(zs.begin(), zs.begin() + static_cast<std::ptrdiff_t>(n));
            NameSet Mn;
            for (const auto& z : used) Mn.insert(z.name());
            auto us = unify(tc, mctx, Mn, mkAppN(c2, used), u);
            if (us.empty() || us.front().assignment.size() != Mn.size()) continue;
            Term rhs = us.front().apply(mkAppN(c2, used));
            Term ty = tc.inferType(inner, lhs);
            Level l = tc.sortLevel(inner, ty);
            if (l == 0) return std::nullopt;
            Term eqn = mkPiFVars(ys, mkAppN(Term::constant(eqName(l)), {ty, lhs, rhs}));
            if (!tc.isProp(ctx, eqn) || !tc.isDefEq(lhs, rhs)) return std::nullopt;
            return eqn;
        }
    } catch (const Error&) {
    }
    return std::nullopt;
}

std::optional<Term> genEqTheorems(const Environment& env, const Context& ctx, const Term& c1, const Term& c2) {
    TypeChecker tc(env);
    return genEqTheorems(tc, ctx, c1, c2);
}

namespace {

bool universeBinder(TypeChecker& tc, const Term& t) {
    switch (t.kind()) {
        case TermKind::App:
            return universeBinder(tc, t.fn()) || universeBinder(tc, t.arg());
        case TermKind::Pi:
        case TermKind::Lam: {
            Term ty = t.binderType().isSort() ? t.binderType() : tc.whnf(t.binderType());
            if (ty.isSort() && ty.level() >= 1) return true;
            return universeBinder(tc, t.binderType()) || universeBinder(tc, t.body());
        }
        default:
            return false;
    }
}

}  // namespace

bool abstractable(TypeChecker& tc, const Context& ctx, const Term& t, DepOptions dep) {
    try {
        return qMono(tc, ctx, {}, t, dep) && !universeBinder(tc, t);
    } catch (const Error&) {
        return false;
    }
}

namespace {

struct Saturation {
    TypeChecker& tc;
    const Context& ctx;
    const SaturateOptions& opts;
    std::vector<Term> hi, ci;
    std::unordered_map<Fingerprint, std::vector<std::size_t>> ciIndex;
    std::deque<std::pair<int, Term>> active;
    SaturateStats stats;

    bool overBudget() const { return hi.size() + ci.size() > opts.maxInsts; }

    bool inHi(const Term& t) {
        for (const auto& h : hi)
            if (h == t) return true;
        for (const auto& h : hi)
            if (hypEquiv(tc, ctx, h, t)) return true;
        return false;
    }

    std::optional<Fingerprint> ciKey(const Term& c) {
        try {
            return fingerprint(tc.normalize(c));
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    bool inCi(const Term& c, Fingerprint k) {
        auto it = ciIndex.find(k);
        if (it != ciIndex.end())
            for (std::size_t i : it->second)
                if (ci[i] == c || tc.isDefEq(ci[i], c)) return true;
        return false;
    }

    void addConst(const Term& c) {
        auto k = ciKey(c);
        if (!k || inCi(c, *k)) return;
        std::size_t idx = ci.size();
        ciIndex[*k].push_back(idx);
        ci.push_back(c);
        active.emplace_back(1, c);
        if (!opts.equationalTheorems) return;
        for (std::size_t i = 0; i < idx; ++i) {
            Term other = ci[i];
            for (auto e : {genEqTheorems(tc, ctx, c, other), genEqTheorems(tc, ctx, other, c)})
                if (e && addHyp(*e)) ++stats.eqTheorems;
        }
    }

    void addConstsOf(const Term& h) {
        std::vector<Term> cs;
        try {
            cs = holInsts(tc, ctx, {}, h, opts.dep);
        } catch (const Error&) {
            return;
        }
        for (const auto& c : cs) addConst(c);
    }

    bool addHyp(const Term& h) {
        if (inHi(h)) return false;
        hi.push_back(h);
        active.emplace_back(0, h);
        addConstsOf(h);
        return true;
    }

    void matchOnePair(const Term& c, const Term& h) {
        ++stats.pairs;
        std::size_t before = hi.size() + ci.size();
        for (const auto& nh : matchInst(tc, ctx, c, h, opts.unify, opts.dep)) addHyp(nh);
        stats.maxPairGrowth = std::max(stats.maxPairGrowth, hi.size() + ci.size() - before);
    }

    void run(const std::vector<Term>& H) {
        for (const auto& h : H) {
            if (inHi(h)) continue;
            hi.push_back(h);
            addConstsOf(h);
        }
        stats.seeded = hi.size() + ci.size();
        while (!active.empty()) {
            if (overBudget()) {
                stats.budgetHit = true;
                break;
            }
            auto [kind, front] = active.front();
            active.pop_front();
            ++stats.pops;
            // guard re-checked per pair so one pop cannot run far past maxInsts
            if (kind == 0) {
                std::vector<Term> prev = ci;
                for (const auto& c : prev) {
                    if (overBudget()) break;
                    matchOnePair(c, front);
                }
            } else {
                std::vector<Term> prev = hi;
                for (const auto& h : prev) {
                    if (overBudget()) break;
                    matchOnePair(front, h);
                }
            }
        }
        if (overBudget()) stats.budgetHit = true;
    }
};

}  // namespace

SaturateResult saturateFull(TypeChecker& tc, const Context& ctx, const std::vector<Term>& H,
                            const SaturateOptions& opts) {
    Saturation s{tc, ctx, opts, {}, {}, {}, {}, {}};
    s.run(H);
    SaturateResult r;
    for (const auto& h : s.hi) {
        if (abstractable(tc, ctx, h, opts.dep))
            r.output.push_back(h);
        else
            ++s.stats.filtered;
    }
    s.stats.hypInstances = s.hi.size();
    s.stats.constInstances = s.ci.size();
    r.hi = std::move(s.hi);
    r.ci = std::move(s.ci);
    r.stats = s.stats;
    return r;
}

std::vector<Term> saturate(const Environment& env, const Context& ctx, const std::vector<Term>& H,
                           std::size_t maxInsts) {
    TypeChecker tc(env);
    SaturateOptions o;
    o.maxInsts = maxInsts;
    return saturateFull(tc, ctx, H, o).output;
}

}  // namespace lapc
