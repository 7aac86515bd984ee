#pragma once

#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>

#include "lapc/environment.hpp"
#include "lapc/term.hpp"
#include "lapc/typechecker.hpp"

namespace lapc {
inline void PrintTo(const Term& t, std::ostream* os) { *os << display(t); }
}  // namespace lapc

namespace lapc::test {

inline Term U(Level l) { return Term::sort(l); }
inline Term fv(const std::string& n) { return Term::fvar(n); }
inline Term cst(const std::string& n) { return Term::constant(n); }

inline Term ap(const Term& f, std::initializer_list<Term> args) {
    Term r = f;
    for (const auto& a : args) r = Term::app(r, a);
    return r;
}

inline Term arr(const Term& a, const Term& b) { return mkArrow(a, b); }

// Binders written with a free variable standing for the bound one.
inline Term piF(const std::string& x, const Term& ty, const std::function<Term(Term)>& body) {
    return Term::pi(x, ty, abstractFVar(body(fv(x)), x));
}
inline Term lamF(const std::string& x, const Term& ty, const std::function<Term(Term)>& body) {
    return Term::lam(x, ty, abstractFVar(body(fv(x)), x));
}

inline void axiom(Environment& env, const std::string& name, const Term& type) {
    ConstantInfo ci;
    ci.name = name;
    ci.type = type;
    ci.reducibility = Reducibility::Opaque;
    env.add(ci);
}

inline void define(Environment& env, const std::string& name, const Term& type, const Term& value,
                   Reducibility r = Reducibility::Default) {
    ConstantInfo ci;
    ci.name = name;
    ci.type = type;
    ci.value = value;
    ci.reducibility = r;
    env.add(ci);
}

inline Term eq(Level l, const Term& ty, const Term& a, const Term& b) {
    return ap(cst(eqName(l)), {ty, a, b});
}
inline Term neg(const Term& p) { return ap(cst("Not"), {p}); }

// List / reverse / map after goal introduction and contradiction.
struct ListFixture {
    Environment env;
    Context ctx;
    Term mapReverse, reverseReverse, negGoal;
};

inline ListFixture listFixture() {
    ListFixture fx;
    auto List = [](Term a) { return ap(cst("List"), {a}); };
    axiom(fx.env, "List", arr(U(1), U(1)));
    axiom(fx.env, "reverse", piF("α", U(1), [&](Term a) { return arr(List(a), List(a)); }));
    axiom(fx.env, "map", piF("α", U(1), [&](Term a) {
              return piF("β", U(1), [&](Term b) { return arr(arr(a, b), arr(List(a), List(b))); });
          }));
    auto rev = [](Term a, Term x) { return ap(cst("reverse"), {a, x}); };
    auto map = [](Term a, Term b, Term f, Term x) { return ap(cst("map"), {a, b, f, x}); };
    fx.mapReverse = piF("α", U(1), [&](Term a) {
        return piF("β", U(1), [&](Term b) {
            return piF("f", arr(a, b), [&](Term f) {
                return piF("xs", List(a), [&](Term xs) {
                    return eq(1, List(b), rev(b, map(a, b, f, xs)), map(a, b, f, rev(a, xs)));
                });
            });
        });
    });
    fx.reverseReverse = piF("α", U(1), [&](Term a) {
        return piF("xs", List(a), [&](Term xs) { return eq(1, List(a), rev(a, rev(a, xs)), xs); });
    });
    fx.ctx.push("A", U(1));
    fx.ctx.push("B", U(1));
    fx.ctx.push("f", arr(fv("A"), fv("B")));
    fx.ctx.push("xs", List(fv("A")));
    Term A = fv("A"), B = fv("B"), f = fv("f"), xs = fv("xs");
    fx.negGoal = neg(eq(1, List(B), rev(B, map(A, B, f, rev(A, xs))), map(A, B, f, xs)));
    return fx;
}

// ℕ, Fin, add and a fixed k.
struct FinFixture {
    Environment env;
    Context ctx;
};

inline FinFixture finFixture() {
    FinFixture fx;
    fx.ctx.push("ℕ", U(1));
    fx.ctx.push("Fin", arr(fv("ℕ"), U(1)));
    fx.ctx.push("add", piF("n", fv("ℕ"), [](Term n) {
                    Term F = ap(fv("Fin"), {n});
                    return arr(F, arr(F, F));
                }));
    fx.ctx.push("k", fv("ℕ"));
    return fx;
}

}  // namespace lapc::test
