#include <algorithm>
#include <functional>

#include "lapc/error.hpp"
#include "lapc/hol.hpp"

namespace lapc {

namespace {

struct HChecker {
    HMode mode;

    void checkLevel(Level l, const char* rule) const {
        if (l == 0) throw TypeError(std::string(rule) + ": universe level 0 does not exist in λ→*");
        if (mode == HMode::HOL && l != 1)
            throw TypeError(std::string(rule) + ": universe level " + std::to_string(l) + " outside λ→");
    }

    Level typeLevel(const HContext& ctx, const HTerm& s) {
        HTerm k = infer(ctx, s);
        if (!k.is(HKind::SortU)) throw TypeError("type expected: " + hDisplay(s) + " has type " + hDisplay(k));
        return k.level();
    }

    HTerm infer(const HContext& ctx, const HTerm& t) {
        switch (t.kind()) {
            case HKind::BVar:
                throw TypeError("loose bound variable #" + std::to_string(t.index()));
            case HKind::FVar: {
                const HDecl* d = ctx.find(t.name());
                if (!d) throw TypeError("start rule: unknown variable " + t.name());
                return d->type;
            }
            case HKind::SortU:
                checkLevel(t.level(), "axiom rule");
                return HTerm::sortUPrime(t.level());
            case HKind::SortUPrime:
                throw TypeError("axiom rule: U" + std::to_string(t.level()) + "′ has no type");
            case HKind::Bool:
                return HTerm::sortU(1);
            case HKind::Bot:
                return HTerm::boolean();
            case HKind::Imp:
                return HTerm::arrow(HTerm::boolean(), HTerm::arrow(HTerm::boolean(), HTerm::boolean()));
            case HKind::Forall:
                typeLevel(ctx, t.sort());
                return HTerm::arrow(HTerm::arrow(t.sort(), HTerm::boolean()), HTerm::boolean());
            case HKind::App: {
                HTerm ft = infer(ctx, t.fn());
                if (!ft.is(HKind::Arrow))
                    throw TypeError("application rule: " + hDisplay(t.fn()) + " has non-function type " + hDisplay(ft));
                HTerm at = infer(ctx, t.arg());
                if (at != ft.dom())
                    throw TypeError("application rule: argument " + hDisplay(t.arg()) + " has type " + hDisplay(at) +
                                    ", expected " + hDisplay(ft.dom()));
                return ft.cod();
            }
            case HKind::Lam: {
                typeLevel(ctx, t.binderType());
                std::string x = ctx.freshName(t.name().empty() ? "x" : t.name());
                HContext inner = ctx;
                inner.push(x, t.binderType());
                HTerm bt = infer(inner, hInstantiate(t.body(), HTerm::fvar(x)));
                // types never mention term variables, but be strict
                if (hFreeVars(bt).count(x)) throw TypeError("abstraction rule: body type depends on " + x);
                typeLevel(ctx, bt);
                return HTerm::arrow(t.binderType(), bt);
            }
            case HKind::Arrow: {
                Level l = typeLevel(ctx, t.dom());
                Level m = typeLevel(ctx, t.cod());
                return HTerm::sortU(std::max(l, m));
            }
        }
        throw TypeError("unreachable");
    }
};

}  // namespace

HTerm holInferType(HMode mode, const HContext& ctx, const HTerm& t) {
    HChecker c{mode};
    return c.infer(ctx, t);
}

Level holTypeLevel(HMode mode, const HContext& ctx, const HTerm& s) {
    HChecker c{mode};
    return c.typeLevel(ctx, s);
}

void holCheckContext(HMode mode, const HContext& ctx) {
    HChecker c{mode};
    HContext prefix;
    for (const auto& d : ctx) {
        if (prefix.find(d.name)) throw TypeError("duplicate HOL variable " + d.name);
        if (d.type.is(HKind::SortU))
            c.checkLevel(d.type.level(), "context");
        else
            c.typeLevel(prefix, d.type);
        prefix.push(d.name, d.type);
    }
}

// ---------------------------------------------------------------------------

HTerm holDerivedSymbol(HDerived which, const HTerm& s) {
    bool needsSort = which == HDerived::Eq || which == HDerived::Exists;
    if (needsSort != static_cast<bool>(s))
        throw std::invalid_argument("holDerivedSymbol: sort argument required exactly for =′ and ∃′");
    // Internal names cannot clash with variables inside s.
    auto v = [](const char* n) { return HTerm::fvar(std::string("#") + n); };
    auto lam = [](const char* n, const HTerm& ty, const HTerm& body) {
        return HTerm::lam(n, ty, hAbstract(body, std::string("#") + n));
    };
    auto all = [&](const char* n, const HTerm& ty, const HTerm& body) { return HTerm::app(HTerm::forall(ty), lam(n, ty, body)); };
    auto ap = [](const HTerm& f, const HTerm& a) { return HTerm::app(f, a); };
    auto ap2 = [](const HTerm& f, const HTerm& a, const HTerm& b) { return HTerm::app(HTerm::app(f, a), b); };
    const HTerm B = HTerm::boolean();
    const HTerm p = v("p"), q = v("q"), r = v("r"), x = v("x"), y = v("y");
    switch (which) {
        case HDerived::Not:
            return lam("p", B, hImp(p, HTerm::bot()));
        case HDerived::And:
            return lam("p", B, lam("q", B, all("r", B, hImp(hImp(p, hImp(q, r)), r))));
        case HDerived::Or:
            return lam("p", B, lam("q", B, all("r", B, hImp(hImp(p, r), hImp(hImp(q, r), r)))));
        case HDerived::Iff:
            return lam("p", B, lam("q", B, ap2(holDerivedSymbol(HDerived::And), hImp(p, q), hImp(q, p))));
        case HDerived::Eq:
            return lam("x", s, lam("y", s, all("p", HTerm::arrow(s, B), ap2(holDerivedSymbol(HDerived::Iff), ap(p, x), ap(p, y)))));
        case HDerived::Exists:
            return lam("p", HTerm::arrow(s, B), all("q", B, hImp(all("x", s, hImp(ap(p, x), q)), q)));
    }
    throw std::invalid_argument("holDerivedSymbol");
}

// ---------------------------------------------------------------------------

namespace {

HTerm mapLevels(const HTerm& t, const std::function<Level(Level)>& f) {
    switch (t.kind()) {
        case HKind::SortU:
            return HTerm::sortU(f(t.level()));
        case HKind::SortUPrime:
            return HTerm::sortUPrime(f(t.level()));
        case HKind::Forall:
            return HTerm::forall(mapLevels(t.sort(), f));
        case HKind::App:
            return HTerm::app(mapLevels(t.fn(), f), mapLevels(t.arg(), f));
        case HKind::Lam:
            return HTerm::lam(t.name(), mapLevels(t.binderType(), f), mapLevels(t.body(), f));
        case HKind::Arrow:
            return HTerm::arrow(mapLevels(t.dom(), f), mapLevels(t.cod(), f));
        default:
            return t;
    }
}

HContext mapCtx(const HContext& ctx, const std::function<HTerm(const HTerm&)>& f) {
    HContext out;
    for (const auto& d : ctx) out.push(d.name, f(d.type));
    return out;
}

}  // namespace

HTerm rhoStar(const HTerm& t) {
    return mapLevels(t, [](Level) { return Level{1}; });
}

HContext rhoStar(const HContext& ctx) {
    return mapCtx(ctx, [](const HTerm& t) { return rhoStar(t); });
}

HTerm rhoL(Level l, const HTerm& t) {
    if (l == 0) throw std::invalid_argument("rhoL: level must be at least 1");
    return mapLevels(t, [l](Level) { return l; });
}

HContext rhoL(Level l, const HContext& ctx) {
    return mapCtx(ctx, [l](const HTerm& t) { return rhoL(l, t); });
}

}  // namespace lapc
