#include "lapc/abstraction.hpp"

#include "lapc/error.hpp"

namespace lapc {

const AbstractionState::Entry* AbstractionState::byName(const std::string& name) const {
    for (const auto& e : types_)
        if (e.name == name) return &e;
    for (const auto& e : terms_)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

Fingerprint normalKey(TypeChecker& tc, const Term& t) { return fingerprint(tc.normalize(t)); }

const AbstractionState::Entry* lookup(TypeChecker& tc, const std::vector<AbstractionState::Entry>& v,
                                      const std::unordered_map<Fingerprint, std::vector<std::size_t>>& index,
                                      const Term& t) {
    auto it = index.find(normalKey(tc, t));
    if (it == index.end()) return nullptr;
    for (std::size_t i : it->second)
        if (v[i].term == t) return &v[i];
    for (std::size_t i : it->second)
        if (tc.isDefEq(v[i].term, t)) return &v[i];
    return nullptr;
}

}  // namespace

const AbstractionState::Entry* AbstractionState::lookupTerm(TypeChecker& tc, const Term& t) const {
    return lookup(tc, terms_, termIndex_, t);
}

const AbstractionState::Entry* AbstractionState::lookupType(TypeChecker& tc, const Term& t) const {
    return lookup(tc, types_, typeIndex_, t);
}

const AbstractionState::Entry& AbstractionState::addTerm(TypeChecker& tc, const Term& t, const HTerm& type) {
    Fingerprint k = normalKey(tc, t);
    termIndex_[k].push_back(terms_.size());
    terms_.push_back({t, "v" + std::to_string(terms_.size()), type, k});
    return terms_.back();
}

const AbstractionState::Entry& AbstractionState::addType(TypeChecker& tc, const Term& t, Level level) {
    Fingerprint k = normalKey(tc, t);
    typeIndex_[k].push_back(types_.size());
    types_.push_back({t, "t" + std::to_string(types_.size()), HTerm::sortU(level), k});
    return types_.back();
}

HTerm abstractType(TypeChecker& tc, const Context& ctx, const Term& s0, AbstractionState& st) {
    Term s = s0;
    if (!s.isPi() && !s.isSort()) {
        Term w = tc.whnf(s, Reducibility::Default);
        if (w.isPi() || w.isSort()) s = tc.normalize(w);
    }
    if (s.isSort()) {
        if (s.level() == 0) return HTerm::boolean();
        throw NotQuasiMono("universe U" + std::to_string(s.level()) + " used as a HOL* type");
    }
    if (isArrow(s)) {
        Term cod = lowerLoose(s.body(), 1);
        return HTerm::arrow(abstractType(tc, ctx, s.binderType(), st), abstractType(tc, ctx, cod, st));
    }
    if (const auto* e = st.lookupType(tc, s0)) return HTerm::fvar(e->name);
    Level l = tc.sortLevel(ctx, s0);
    if (l == 0) throw NotQuasiMono("proposition " + display(s0) + " used as a HOL* type");
    return HTerm::fvar(st.addType(tc, s0, l).name);
}

std::string getLVarName(TypeChecker& tc, const Context& ctx, const Term& t, AbstractionState& st) {
    if (const auto* e = st.lookupTerm(tc, t)) return e->name;
    HTerm ty = abstractType(tc, ctx, tc.inferType(ctx, t), st);
    return st.addTerm(tc, t, ty).name;
}

namespace {

struct Abstractor {
    TypeChecker& tc;
    AbstractionState& st;

    HTerm go(const Context& ctx, const NameSet& B, const Term& t) {
        switch (t.kind()) {
            case TermKind::FVar:
            case TermKind::Const:
            case TermKind::App:
                return app(ctx, B, t);
            case TermKind::Pi: {
                const Term& a = t.binderType();
                if (tc.isProp(ctx, a) && !hasLooseBVar(t.body(), 0))
                    return hImp(go(ctx, B, a), go(ctx, B, lowerLoose(t.body(), 1)));
                HTerm ha = abstractType(tc, ctx, a, st);
                auto [x, inner, B2] = bind(ctx, B, t);
                HTerm body = go(inner, B2, instantiate(t.body(), Term::fvar(x)));
                return HTerm::app(HTerm::forall(ha), HTerm::lam(t.binderName(), ha, hAbstract(body, x)));
            }
            case TermKind::Lam: {
                HTerm ha = abstractType(tc, ctx, t.binderType(), st);
                auto [x, inner, B2] = bind(ctx, B, t);
                HTerm body = go(inner, B2, instantiate(t.body(), Term::fvar(x)));
                return HTerm::lam(t.binderName(), ha, hAbstract(body, x));
            }
            default:
                throw NotQuasiMono("cannot abstract " + display(t));
        }
    }

    std::tuple<std::string, Context, NameSet> bind(const Context& ctx, const NameSet& B, const Term& t) {
        std::string x = st.freshBound();
        NameSet B2 = B;
        B2.insert(x);
        return {x, ctx.extended(x, t.binderType()), B2};
    }

    HTerm connective(const std::string& name) {
        if (name == "False") return HTerm::bot();
        if (name == "Not") return holDerivedSymbol(HDerived::Not);
        if (name == "And") return holDerivedSymbol(HDerived::And);
        if (name == "Or") return holDerivedSymbol(HDerived::Or);
        return holDerivedSymbol(HDerived::Iff);
    }

    HTerm app(const Context& ctx, const NameSet& B, const Term& t) {
        Term head = getAppFn(t);
        std::vector<Term> args = getAppArgs(t);
        std::vector<HTerm> out;
        if (head.isFVar() && B.count(head.name())) {
            for (const auto& a : args) out.push_back(go(ctx, B, a));
            return hMkAppN(HTerm::fvar(head.name()), out);
        }
        if (head.isConst() && isConnectiveConst(head.name())) {
            for (const auto& a : args) out.push_back(go(ctx, B, a));
            return hMkAppN(connective(head.name()), out);
        }
        if (!head.isFVar() && !head.isConst()) throw NotQuasiMono("application head is not a variable: " + display(t));
        ArgAnalysis an = analyzeArgs(tc, ctx, head, args, st.opts);
        std::string v = getLVarName(tc, ctx, an.lFun, st);
        for (const auto& a : an.lArgs) out.push_back(go(ctx, B, a));
        return hMkAppN(HTerm::fvar(v), out);
    }
};

}  // namespace

HTerm lamAbst(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, AbstractionState& st) {
    std::string why = qMonoViolation(tc, ctx, B, t, st.opts);
    if (!why.empty()) throw NotQuasiMono(why);
    Abstractor a{tc, st};
    return a.go(ctx, B, t);
}

HTerm lamAbst(const Environment& env, const Context& ctx, const Term& t, AbstractionState& st) {
    TypeChecker tc(env);
    return lamAbst(tc, ctx, {}, t, st);
}

Substitution extractSubstitution(TypeChecker& tc, const AbstractionState& st, const Context& ctx) {
    Substitution s;
    s.lcCtx = ctx;
    for (const auto& e : st.types()) {
        s.holCtx.push(e.name, e.type);
        s.sigma[e.name] = e.term;
    }
    for (const auto& e : st.terms()) {
        s.holCtx.push(e.name, e.type);
        s.sigma[e.name] = e.term;
    }
    for (const auto& d : s.holCtx) {
        Term expected = substExtend(s.sigma, piStar(d.type));
        const Term& value = s.sigma.at(d.name);
        Term actual;
        try {
            actual = tc.inferType(ctx, value);
        } catch (const Error& e) {
            throw SubstitutionIllFormed(d.name + " ↦ " + display(value) + " does not typecheck: " + e.what());
        }
        if (!tc.isDefEq(actual, expected))
            throw SubstitutionIllFormed(d.name + " ↦ " + display(value) + " has type " + display(actual) +
                                        ", expected " + display(expected));
    }
    return s;
}

Substitution extractSubstitution(const Environment& env, const AbstractionState& st, const Context& ctx) {
    TypeChecker tc(env);
    return extractSubstitution(tc, st, ctx);
}

bool ehopWitness(TypeChecker& tc, const Substitution& s, const HTerm& h, const Term& t) {
    return tc.isDefEq(substExtend(s.sigma, piStar(h)), t);
}

}  // namespace lapc
