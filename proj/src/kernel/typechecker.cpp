#include "lapc/typechecker.hpp"

#include "lapc/error.hpp"

namespace lapc {

struct TypeChecker::Entry {
    TypeChecker& tc;
    explicit Entry(TypeChecker& t) : tc(t) {
        if (tc.depth_ == 0) tc.steps_ = 0;
        ++tc.depth_;
    }
    ~Entry() { --tc.depth_; }
};

TypeChecker::TypeChecker(const Environment& env, KernelConfig cfg) : env_(env), cfg_(cfg) {}

void TypeChecker::tick(std::uint64_t n) {
    steps_ += n;
    if (steps_ > cfg_.maxSteps)
        throw ReductionBudgetError("reduction step budget of " + std::to_string(cfg_.maxSteps) + " exceeded");
}

// ---------------------------------------------------------------------------
// reduction

std::optional<Term> TypeChecker::unfoldHead(const Term& t, Reducibility level) const {
    Term head = getAppFn(t);
    if (!head.isConst()) return std::nullopt;
    const ConstantInfo* ci = env_.find(head.name());
    if (!ci || !ci->value || ci->reducibility > level) return std::nullopt;
    return mkAppN(*ci->value, getAppArgs(t));
}

Term TypeChecker::whnfCoreImpl(const Term& t0, std::optional<Reducibility> level) {
    Term t = t0;
    for (;;) {
        if (!t.isApp()) return t;
        Term head = getAppFn(t);
        if (head.isLam()) {
            std::vector<Term> args = getAppArgs(t);
            Term r = head;
            std::size_t i = 0;
            while (r.isLam() && i < args.size()) {
                r = instantiate(r.body(), args[i++]);
                tick();
            }
            t = mkAppN(r, std::vector<Term>(args.begin() + static_cast<std::ptrdiff_t>(i), args.end()));
            continue;
        }
        if (head.isConst() && env_.gliftEnabled()) {
            auto b = parseBuiltinName(head.name());
            if (b && (b->family == "GLift.up" || b->family == "GLift.down")) {
                std::vector<Term> args = getAppArgs(t);
                if (args.size() >= 2) {
                    Term inner = level ? whnfImpl(args[1], *level) : whnfCoreImpl(args[1], std::nullopt);
                    std::string opposite = b->family == "GLift.up" ? gliftDownName(b->levels[0], b->levels[1])
                                                                   : gliftUpName(b->levels[0], b->levels[1]);
                    Term ih = getAppFn(inner);
                    std::vector<Term> iargs = getAppArgs(inner);
                    if (ih.isConst() && ih.name() == opposite && iargs.size() == 2) {
                        tick();
                        t = mkAppN(iargs[1], std::vector<Term>(args.begin() + 2, args.end()));
                        continue;
                    }
                }
            }
        }
        return t;
    }
}

Term TypeChecker::whnfImpl(const Term& t0, Reducibility level) {
    Term t = t0;
    for (;;) {
        t = whnfCoreImpl(t, level);
        auto u = unfoldHead(t, level);
        if (!u) return t;
        tick();
        t = *u;
    }
}

Term TypeChecker::whnfCore(const Term& t) {
    Entry e(*this);
    return whnfCoreImpl(t, std::nullopt);
}

Term TypeChecker::whnf(const Term& t, Reducibility unfoldLevel) {
    Entry e(*this);
    return whnfImpl(t, unfoldLevel);
}

Term TypeChecker::nf(const Term& t0, std::optional<Reducibility> delta) {
    tick();
    Term t = delta ? whnfImpl(t0, *delta) : whnfCoreImpl(t0, std::nullopt);
    switch (t.kind()) {
        case TermKind::App: {
            Term head = getAppFn(t);
            std::vector<Term> args = getAppArgs(t);
            for (auto& a : args) a = nf(a, delta);
            return mkAppN(head.isBinder() ? nf(head, delta) : head, args);
        }
        case TermKind::Lam: {
            Term ty = nf(t.binderType(), delta);
            Term body = nf(t.body(), delta);
            if (body.isApp() && body.arg().isBVar() && body.arg().bvarIndex() == 0 &&
                !hasLooseBVar(body.fn(), 0))
                return lowerLoose(body.fn(), 1);
            return Term::lam(t.binderName(), ty, body, t.binderInfo());
        }
        case TermKind::Pi:
            return Term::pi(t.binderName(), nf(t.binderType(), delta), nf(t.body(), delta), t.binderInfo());
        default:
            return t;
    }
}

Term TypeChecker::normalize(const Term& t, std::optional<Reducibility> delta) {
    Entry e(*this);
    return nf(t, delta);
}

// ---------------------------------------------------------------------------
// conversion

static bool sameRigidHead(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::Const:
        case TermKind::FVar:
            return a.name() == b.name();
        case TermKind::BVar:
            return a.bvarIndex() == b.bvarIndex();
        case TermKind::Sort:
            return a.level() == b.level();
        default:
            return false;
    }
}

bool TypeChecker::argsDefEq(const Term& a, const Term& b, Reducibility level) {
    Term x = a, y = b;
    while (x.isApp() && y.isApp()) {
        if (!defEq(x.arg(), y.arg(), level)) return false;
        x = x.fn();
        y = y.fn();
    }
    return !x.isApp() && !y.isApp();
}

bool TypeChecker::defEq(const Term& a0, const Term& b0, Reducibility level) {
    if (a0.samePtr(b0) || a0 == b0) return true;
    tick();
    Term a = whnfCoreImpl(a0, level);
    Term b = whnfCoreImpl(b0, level);
    if (a == b) return true;
    if (a.isSort() && b.isSort()) return a.level() == b.level();
    if (a.kind() == b.kind() && a.isBinder())
        return defEq(a.binderType(), b.binderType(), level) && defEq(a.body(), b.body(), level);
    if (a.isLam() && !b.isLam()) return defEq(a.body(), Term::app(liftLoose(b, 1), Term::bvar(0)), level);
    if (b.isLam() && !a.isLam()) return defEq(Term::app(liftLoose(a, 1), Term::bvar(0)), b.body(), level);
    return lazyDelta(a, b, level);
}

bool TypeChecker::lazyDelta(Term a, Term b, Reducibility level) {
    Term ha = getAppFn(a), hb = getAppFn(b);
    if (sameRigidHead(ha, hb) && argsDefEq(a, b, level)) return true;
    const ConstantInfo* da = nullptr;
    const ConstantInfo* db = nullptr;
    if (ha.isConst()) {
        da = env_.find(ha.name());
        if (da && (!da->value || da->reducibility > level)) da = nullptr;
    }
    if (hb.isConst()) {
        db = env_.find(hb.name());
        if (db && (!db->value || db->reducibility > level)) db = nullptr;
    }
    if (!da && !db) return false;
    if (da && db && da->height == db->height) {
        a = *unfoldHead(a, level);
        b = *unfoldHead(b, level);
    } else if (da && (!db || da->height > db->height)) {
        a = *unfoldHead(a, level);
    } else {
        b = *unfoldHead(b, level);
    }
    tick();
    return defEq(a, b, level);
}

bool TypeChecker::isDefEqAt(const Term& a, const Term& b, Reducibility level) {
    Entry e(*this);
    try {
        return defEq(a, b, level);
    } catch (const ReductionBudgetError&) {
        if (depth_ > 1) throw;
        exhausted_ = true;
        return false;
    }
}

bool TypeChecker::isDefEq(const Term& a, const Term& b) { return isDefEqAt(a, b, Reducibility::Default); }

// ---------------------------------------------------------------------------
// typing

Term TypeChecker::ensurePi(const Term& t) {
    Term w = whnfImpl(t, Reducibility::Opaque);
    if (!w.isPi()) throw TypeError("function type expected, found " + display(t));
    return w;
}

Level TypeChecker::ensureSort(const Term& t, const Term& origin) {
    Term w = whnfImpl(t, Reducibility::Opaque);
    if (!w.isSort()) throw TypeError("type expected: " + display(origin) + " has type " + display(t));
    return w.level();
}

Term TypeChecker::infer(const Context& ctx, const Term& t) {
    tick();
    switch (t.kind()) {
        case TermKind::BVar:
            throw TypeError("loose bound variable #" + std::to_string(t.bvarIndex()));
        case TermKind::FVar: {
            const LocalDecl* d = ctx.find(t.name());
            if (!d) throw TypeError("unknown variable " + t.name());
            return d->type;
        }
        case TermKind::Const: {
            const ConstantInfo* ci = env_.find(t.name());
            if (!ci) throw TypeError("unknown constant " + t.name());
            return ci->type;
        }
        case TermKind::Sort:
            return Term::sort(t.level() + 1);
        case TermKind::App: {
            Term head = getAppFn(t);
            std::vector<Term> args = getAppArgs(t);
            Term ft = infer(ctx, head);
            for (const auto& a : args) {
                Term pi = ensurePi(ft);
                Term at = infer(ctx, a);
                if (!defEq(at, pi.binderType(), Reducibility::Opaque))
                    throw TypeError("application rule: argument " + display(a) + " has type " + display(at) +
                                    " but " + display(head) + " expects " + display(pi.binderType()));
                ft = instantiate(pi.body(), a);
            }
            return ft;
        }
        case TermKind::Lam: {
            ensureSort(infer(ctx, t.binderType()), t.binderType());
            std::string x = ctx.freshName(t.binderName());
            Context inner = ctx.extended(x, t.binderType());
            Term bt = infer(inner, instantiate(t.body(), Term::fvar(x)));
            return Term::pi(t.binderName(), t.binderType(), abstractFVar(bt, x), t.binderInfo());
        }
        case TermKind::Pi: {
            Level l1 = ensureSort(infer(ctx, t.binderType()), t.binderType());
            std::string x = ctx.freshName(t.binderName());
            Context inner = ctx.extended(x, t.binderType());
            Term body = instantiate(t.body(), Term::fvar(x));
            Level l2 = ensureSort(infer(inner, body), body);
            return Term::sort(imax(l1, l2));
        }
    }
    throw TypeError("unreachable");
}

Term TypeChecker::inferTypeRaw(const Context& ctx, const Term& t) {
    Entry e(*this);
    return infer(ctx, t);
}

Term TypeChecker::inferType(const Context& ctx, const Term& t) {
    Entry e(*this);
    return nf(infer(ctx, t), std::nullopt);
}

Level TypeChecker::sortLevel(const Context& ctx, const Term& type) {
    Entry e(*this);
    return ensureSort(infer(ctx, type), type);
}

bool TypeChecker::isProp(const Context& ctx, const Term& t) {
    Entry e(*this);
    Term w = whnfImpl(infer(ctx, t), Reducibility::Opaque);
    return w.isSort() && w.level() == 0;
}

bool TypeChecker::isProof(const Context& ctx, const Term& t) {
    Entry e(*this);
    Term ty = infer(ctx, t);
    Term w = whnfImpl(infer(ctx, ty), Reducibility::Opaque);
    return w.isSort() && w.level() == 0;
}

Term inferType(const Environment& env, const Context& ctx, const Term& t) {
    TypeChecker tc(env);
    return tc.inferType(ctx, t);
}

Term whnf(const Environment& env, const Term& t, Reducibility unfoldLevel) {
    TypeChecker tc(env);
    return tc.whnf(t, unfoldLevel);
}

Term normalize(const Environment& env, const Term& t) {
    TypeChecker tc(env);
    return tc.normalize(t);
}

bool isDefEq(const Environment& env, const Context&, const Term& a, const Term& b) {
    TypeChecker tc(env);
    return tc.isDefEq(a, b);
}

}  // namespace lapc
