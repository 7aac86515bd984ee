#include "spine.hpp"

namespace lapc::emitdetail {

SpineView::SpineView(const EmitPlan& plan)
    : not_(holDerivedSymbol(HDerived::Not)),
      and_(holDerivedSymbol(HDerived::And)),
      or_(holDerivedSymbol(HDerived::Or)),
      iff_(holDerivedSymbol(HDerived::Iff)) {
    for (const auto& s : plan.symbolDecls) symbols_[s.name] = &s;
}

Spine SpineView::view(HTerm t) const {
    for (;;) {
        Spine s;
        s.fn = hGetAppFn(t);
        s.args = hGetAppArgs(t);
        const HTerm& f = s.fn;
        if (f == not_) s.head = Head::Not;
        else if (f == and_) s.head = Head::And;
        else if (f == or_) s.head = Head::Or;
        else if (f == iff_) s.head = Head::Iff;
        else if (f.is(HKind::Bot)) s.head = Head::Bot;
        else if (f.is(HKind::Imp)) s.head = Head::Imp;
        else if (f.is(HKind::Forall)) {
            s.head = Head::Forall;
            s.sort = f.sort();
        } else if (f.is(HKind::Lam)) {
            if (s.args.empty()) {
                s.head = Head::Lam;
                return s;
            }
            std::vector<HTerm> rest(s.args.begin() + 1, s.args.end());
            t = hMkAppN(hInstantiate(f.body(), s.args[0]), rest);
            continue;
        } else if (f.is(HKind::FVar)) {
            s.head = Head::Var;
            if (const PlanSymbol* p = symbol(f.name())) {
                if (p->role == SymbolRole::Eq) {
                    s.head = Head::Eq;
                    s.sort = p->type.dom();
                } else if (p->role == SymbolRole::Exists) {
                    s.head = Head::Exists;
                    s.sort = p->type.dom().dom();
                }
            }
        } else {
            s.head = Head::Var;
        }
        return s;
    }
}

std::vector<HTerm> argTypes(HTerm ty) {
    std::vector<HTerm> out;
    while (ty.is(HKind::Arrow)) {
        out.push_back(ty.dom());
        ty = ty.cod();
    }
    return out;
}

HTerm resultType(HTerm ty) {
    while (ty.is(HKind::Arrow)) ty = ty.cod();
    return ty;
}

namespace {

std::vector<HTerm> fullArgs(const Spine& s, const HTerm& varType) {
    const HTerm B = HTerm::boolean();
    switch (s.head) {
        case Head::Bot:
        case Head::Lam:
            return {};
        case Head::Not:
            return {B};
        case Head::Imp:
        case Head::And:
        case Head::Or:
        case Head::Iff:
            return {B, B};
        case Head::Forall:
        case Head::Exists:
            return {HTerm::arrow(s.sort, B)};
        case Head::Eq:
            return {s.sort, s.sort};
        case Head::Var:
            return argTypes(varType);
    }
    return {};
}

}  // namespace

std::size_t SpineView::arity(const Spine& s, const HTerm& varType) const { return fullArgs(s, varType).size(); }

std::vector<HTerm> SpineView::missing(const Spine& s, const HTerm& varType) const {
    std::vector<HTerm> all = fullArgs(s, varType);
    if (s.args.size() >= all.size()) return {};
    return {all.begin() + static_cast<std::ptrdiff_t>(s.args.size()), all.end()};
}

}  // namespace lapc::emitdetail
