#include "lapc/ulift.hpp"

#include <algorithm>
#include <set>

#include "lapc/error.hpp"

namespace lapc {

namespace {

void requireGLift(const TypeChecker& tc) {
    if (!tc.env().gliftEnabled()) throw ConfigError("universe lifting needs the GLift facility");
}

Level atomLevel(TypeChecker& tc, const Context& ctx, const Term& a, Level l) {
    Level lp = tc.sortLevel(ctx, a);
    if (lp > l + 1) throw LevelTooLow("U" + std::to_string(lp) + " is above the target level " + std::to_string(l));
    return lp;
}

Term codomain(const Term& s) { return lowerLoose(s.body(), 1); }

}  // namespace

Term upType(TypeChecker& tc, const Context& ctx, const Term& s, Level l) {
    requireGLift(tc);
    if (isArrow(s)) return mkArrow(upType(tc, ctx, s.binderType(), l), upType(tc, ctx, codomain(s), l));
    if (s.isPi()) throw UnsupportedType("dependent Π " + display(s) + " has no lifted type");
    return Term::app(Term::constant(gliftName(atomLevel(tc, ctx, s, l), l)), s);
}

Term mkUp(TypeChecker& tc, const Context& ctx, const Term& s, Level l) {
    requireGLift(tc);
    if (isArrow(s)) {
        const Term& a = s.binderType();
        Term b = codomain(s);
        Term f = Term::fvar("#f"), x = Term::fvar("#x");
        Term body = Term::app(mkUp(tc, ctx, b, l), Term::app(f, Term::app(mkDown(tc, ctx, a, l), x)));
        return mkLambdaFVars({{"#f", s}, {"#x", upType(tc, ctx, a, l)}}, body);
    }
    if (s.isPi()) throw UnsupportedType("dependent Π " + display(s) + " has no lifted type");
    return Term::app(Term::constant(gliftUpName(atomLevel(tc, ctx, s, l), l)), s);
}

Term mkDown(TypeChecker& tc, const Context& ctx, const Term& s, Level l) {
    requireGLift(tc);
    if (isArrow(s)) {
        const Term& a = s.binderType();
        Term b = codomain(s);
        Term f = Term::fvar("#f"), x = Term::fvar("#x");
        Term body = Term::app(mkDown(tc, ctx, b, l), Term::app(f, Term::app(mkUp(tc, ctx, a, l), x)));
        return mkLambdaFVars({{"#f", upType(tc, ctx, s, l)}, {"#x", a}}, body);
    }
    if (s.isPi()) throw UnsupportedType("dependent Π " + display(s) + " has no lifted type");
    return Term::app(Term::constant(gliftDownName(atomLevel(tc, ctx, s, l), l)), s);
}

namespace {

void levelsIn(const Term& t, Level& m) {
    switch (t.kind()) {
        case TermKind::Sort:
            m = std::max(m, t.level());
            return;
        case TermKind::App:
            levelsIn(t.fn(), m);
            levelsIn(t.arg(), m);
            return;
        case TermKind::Pi:
        case TermKind::Lam:
            levelsIn(t.binderType(), m);
            levelsIn(t.body(), m);
            return;
        default:
            return;
    }
}

struct Lifter {
    TypeChecker& tc;
    Level l;
    // opened original binder ↦ Down_s x′
    std::map<std::string, Term> down;
    std::map<std::string, std::string> renamed;
    std::size_t fresh = 0;

    Term atom(const Context& ctx, const Term& e) {
        Term s = tc.inferType(ctx, e);
        return Term::app(mkUp(tc, ctx, s, l), down.empty() ? e : substExtend(down, e));
    }

    Term go(const Context& ctx, const Term& t) {
        switch (t.kind()) {
            case TermKind::FVar: {
                auto it = renamed.find(t.name());
                if (it != renamed.end()) return Term::fvar(it->second);
                return atom(ctx, t);
            }
            case TermKind::App:
                return Term::app(go(ctx, t.fn()), go(ctx, t.arg()));
            case TermKind::Lam: {
                const Term& s = t.binderType();
                std::string x = "#o" + std::to_string(fresh), xp = "#l" + std::to_string(fresh);
                ++fresh;
                Term lifted = upType(tc, ctx, s, l);
                Context inner = ctx.extended(x, s);
                down[x] = Term::app(mkDown(tc, ctx, s, l), Term::fvar(xp));
                renamed[x] = xp;
                Term body = go(inner, instantiate(t.body(), Term::fvar(x)));
                down.erase(x);
                renamed.erase(x);
                return Term::lam(t.binderName(), lifted, abstractFVar(body, xp), t.binderInfo());
            }
            default:
                return atom(ctx, t);
        }
    }
};

}  // namespace

Level maxLevel(const Context& ctx, const Term& t) {
    Level m = 0;
    levelsIn(t, m);
    std::set<std::string> seen;
    std::vector<std::string> todo;
    for (const auto& n : freeVars(t)) todo.push_back(n);
    while (!todo.empty()) {
        std::string n = todo.back();
        todo.pop_back();
        if (!seen.insert(n).second) continue;
        if (const LocalDecl* d = ctx.find(n)) {
            levelsIn(d->type, m);
            for (const auto& k : freeVars(d->type)) todo.push_back(k);
        }
    }
    return m;
}

Term uliftTrans(TypeChecker& tc, const Context& ctx, const Term& t, Level l) {
    requireGLift(tc);
    Level m = maxLevel(ctx, t);
    if (l <= m)
        throw LevelTooLow("lifting level " + std::to_string(l) + " does not exceed U" + std::to_string(m));
    Lifter lf{tc, l, {}, {}};
    return lf.go(ctx, t);
}

Term uliftTrans(const Environment& env, const Context& ctx, const Term& t, Level l) {
    TypeChecker tc(env);
    return uliftTrans(tc, ctx, t, l);
}

Term piL(Level l, const HTerm& t) { return piStar(rhoL(l, t)); }

}  // namespace lapc
