#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "lapc/error.hpp"
#include "lapc/instantiation.hpp"

using namespace lapc;
using namespace lapc::test;

namespace {

Term List(const Term& a) { return ap(cst("List"), {a}); }
Term rev(const Term& a, const Term& x) { return ap(cst("reverse"), {a, x}); }
Term mapT(const Term& a, const Term& b, const Term& f, const Term& x) { return ap(cst("map"), {a, b, f, x}); }

// ∀ (f : α → β) (xs : List α), reverse β (map α β f xs) = map α β f (reverse α xs)
Term mapReverseAt(const Term& a, const Term& b) {
    return piF("f", arr(a, b), [&](Term f) {
        return piF("xs", List(a), [&](Term xs) { return eq(1, List(b), rev(b, mapT(a, b, f, xs)), mapT(a, b, f, rev(a, xs))); });
    });
}

Term reverseReverseAt(const Term& a) {
    return piF("xs", List(a), [&](Term xs) { return eq(1, List(a), rev(a, rev(a, xs)), xs); });
}

bool containsEquiv(TypeChecker& tc, const Context& ctx, const std::vector<Term>& v, const Term& t) {
    return std::any_of(v.begin(), v.end(), [&](const Term& x) { return hypEquiv(tc, ctx, x, t); });
}

}  // namespace

TEST(Unify, ListTypeArgument) {
    auto fx = listFixture();
    Context ctx = fx.ctx;
    ctx.push("α", U(1));
    auto us = unify(fx.env, ctx, {"α"}, ap(cst(eqName(1)), {List(fv("α"))}), ap(cst(eqName(1)), {List(fv("B"))}));
    ASSERT_EQ(us.size(), 1u);
    EXPECT_EQ(us[0].assignment.at("α"), fv("B"));
    EXPECT_FALSE(us[0].codomainCtx.contains("α"));
}

TEST(Unify, IdentityAndOccursCheck) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("g", arr(fv("N"), fv("N")));
    ctx.push("a", fv("N"));
    auto id = unify(env, ctx, {}, ap(fv("g"), {fv("a")}), ap(fv("g"), {fv("a")}));
    ASSERT_EQ(id.size(), 1u);
    EXPECT_TRUE(id[0].assignment.empty());
    ctx.push("x", fv("N"));
    EXPECT_TRUE(unify(env, ctx, {"x"}, fv("x"), ap(fv("g"), {fv("x")})).empty());
}

TEST(Unify, TypeOfAssignmentMustAgree) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("M", U(1));
    ctx.push("b", fv("M"));
    ctx.push("x", fv("N"));
    EXPECT_TRUE(unify(env, ctx, {"x"}, fv("x"), fv("b")).empty());
    // the type metavariable follows the term one
    Context c2;
    c2.push("M", U(1));
    c2.push("b", fv("M"));
    c2.push("α", U(1));
    c2.push("y", fv("α"));
    auto us = unify(env, c2, {"α", "y"}, fv("y"), fv("b"));
    ASSERT_EQ(us.size(), 1u);
    EXPECT_EQ(us[0].assignment.at("α"), fv("M"));
}

TEST(Unify, DeltaAtMismatch) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("g", arr(fv("N"), arr(fv("N"), fv("N"))));
    define(env, "twice", arr(fv("N"), fv("N")), lamF("x", fv("N"), [](Term x) { return ap(fv("g"), {x, x}); }));
    ctx.push("a", fv("N"));
    ctx.push("y", fv("N"));
    auto us = unify(env, ctx, {"y"}, ap(cst("twice"), {fv("a")}), ap(fv("g"), {fv("y"), fv("a")}));
    ASSERT_EQ(us.size(), 1u);
    EXPECT_EQ(us[0].assignment.at("y"), fv("a"));
}

TEST(Unify, AlternativesBounded) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("a", fv("N"));
    ctx.push("y", fv("N"));
    auto us = unify(env, ctx, {"y"}, fv("y"), fv("a"), {4});
    EXPECT_GE(us.size(), 1u);
    EXPECT_LE(us.size(), 4u);
}

TEST(MatchTerm, ReverseAgainstMapReverse) {
    auto fx = listFixture();
    TypeChecker tc(fx.env);
    Context ctx = fx.ctx;
    ctx.push("α", U(1));
    ctx.push("β", U(1));
    Term body = mapReverseAt(fv("α"), fv("β"));
    auto us = matchTerm(tc, ctx, {"α", "β"}, ap(cst("reverse"), {fv("A")}), body);
    bool alphaA = false, betaA = false;
    for (const auto& u : us) {
        if (u.assignment.count("α") && u.assignment.at("α") == fv("A")) alphaA = true;
        if (u.assignment.count("β") && u.assignment.at("β") == fv("A")) betaA = true;
    }
    EXPECT_TRUE(alphaA);
    EXPECT_TRUE(betaA);
    EXPECT_TRUE(matchTerm(tc, ctx, {"α", "β"}, ap(cst("List"), {fv("A")}), ap(fv("f"), {fv("x0")})).empty());
}

TEST(MatchTerm, MetaHeadSkipped) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("c", arr(fv("N"), fv("N")));
    ctx.push("a", fv("N"));
    ctx.push("h", arr(fv("N"), fv("N")));
    TypeChecker tc(env);
    EXPECT_TRUE(matchTerm(tc, ctx, {"h"}, fv("c"), ap(fv("h"), {fv("a")})).empty());
}

TEST(MatchInst, WorkedMatchings) {
    auto fx = listFixture();
    TypeChecker tc(fx.env);
    Term A = fv("A"), B = fv("B");
    auto r = matchInst(tc, fx.ctx, ap(cst("map"), {A, B}), fx.mapReverse);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0], mapReverseAt(A, B));

    auto r2 = matchInst(tc, fx.ctx, ap(cst("reverse"), {B}), fx.reverseReverse);
    ASSERT_EQ(r2.size(), 1u);
    EXPECT_EQ(r2[0], reverseReverseAt(B));

    // Eq (List B) fixes only β: fun α => @map_reverse α B, re-generalized
    auto r3 = matchInst(tc, fx.ctx, ap(cst(eqName(1)), {List(B)}), fx.mapReverse);
    ASSERT_EQ(r3.size(), 1u);
    Term expect = piF("α", U(1), [&](Term a) { return mapReverseAt(a, B); });
    EXPECT_EQ(r3[0], expect);

    EXPECT_TRUE(matchInst(tc, fx.ctx, fv("f"), fx.reverseReverse).empty());
}

TEST(MatchInst, OutputsAreHypothesisInstances) {
    auto fx = listFixture();
    TypeChecker tc(fx.env);
    for (const Term& m : {ap(cst("map"), {fv("A"), fv("B")}), ap(cst("reverse"), {fv("A")}),
                          ap(cst(eqName(1)), {List(fv("B"))})}) {
        for (const Term& h : {fx.mapReverse, fx.reverseReverse}) {
            for (const auto& r : matchInst(tc, fx.ctx, m, h)) {
                EXPECT_TRUE(tc.isProp(fx.ctx, r)) << display(r);
                EXPECT_TRUE(isHypInstance(tc, fx.ctx, r, h)) << display(r);
            }
        }
    }
}

TEST(MatchInst, StopsAtPropositionBinder) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("P", arr(fv("N"), U(0)));
    ctx.push("Q", U(0));
    ctx.push("c", fv("N"));
    // ∀ (h : Q) (x : N), P x: the proof binder blocks stripping
    Term h = arr(fv("Q"), piF("x", fv("N"), [](Term x) { return ap(fv("P"), {x}); }));
    TypeChecker tc(env);
    auto r = matchInst(tc, ctx, ap(fv("P"), {fv("c")}).fn(), h);
    for (const auto& t : r) EXPECT_EQ(t, h);
}

TEST(HypEquiv, Examples) {
    Environment env;
    Context ctx;
    ctx.push("α", U(1));
    ctx.push("p", arr(fv("α"), U(0)));
    ctx.push("a", fv("α"));
    TypeChecker tc(env);
    Term px = piF("x", fv("α"), [](Term x) { return ap(fv("p"), {x}); });
    Term py = piF("y", fv("α"), [](Term y) { return ap(fv("p"), {y}); });
    Term pa = ap(fv("p"), {fv("a")});
    EXPECT_TRUE(hypEquiv(tc, ctx, pa, pa));
    EXPECT_TRUE(hypEquiv(tc, ctx, px, py));
    EXPECT_TRUE(isHypInstance(tc, ctx, pa, px));
    EXPECT_FALSE(isHypInstance(tc, ctx, px, pa));
    EXPECT_FALSE(hypEquiv(tc, ctx, px, pa));
}

TEST(HypEquiv, BinderOrderIrrelevant) {
    Environment env;
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("r", arr(fv("N"), arr(fv("N"), U(0))));
    Term xy = piF("x", fv("N"), [](Term x) { return piF("y", fv("N"), [&](Term y) { return ap(fv("r"), {x, y}); }); });
    Term yx = piF("y", fv("N"), [](Term y) { return piF("x", fv("N"), [&](Term x) { return ap(fv("r"), {x, y}); }); });
    EXPECT_TRUE(hypEquiv(env, ctx, xy, yx));
}

TEST(GenEqTheorems, UnfoldOneLayer) {
    Environment env;
    axiom(env, "ℕ", U(1));
    Term N = cst("ℕ");
    axiom(env, "g", arr(N, arr(N, N)));
    define(env, "f", arr(N, N), lamF("x", N, [](Term x) { return ap(cst("g"), {x, x}); }));
    auto e = genEqTheorems(env, {}, cst("f"), cst("g"));
    ASSERT_TRUE(e.has_value());
    Term expect = piF("x", N, [&](Term x) { return eq(1, N, ap(cst("f"), {x}), ap(cst("g"), {x, x})); });
    EXPECT_EQ(*e, expect);
    EXPECT_EQ(inferType(env, {}, *e), U(0));
    EXPECT_FALSE(genEqTheorems(env, {}, cst("g"), cst("f")).has_value());
    EXPECT_FALSE(genEqTheorems(env, {}, cst("f"), cst("f")).has_value());
    axiom(env, "h", arr(N, N));
    EXPECT_FALSE(genEqTheorems(env, {}, cst("f"), cst("h")).has_value());
}

TEST(Saturate, WorkedExample) {
    auto fx = listFixture();
    TypeChecker tc(fx.env);
    auto r = saturateFull(tc, fx.ctx, {fx.mapReverse, fx.reverseReverse, fx.negGoal});
    Term A = fv("A"), B = fv("B");
    EXPECT_TRUE(containsEquiv(tc, fx.ctx, r.output, mapReverseAt(A, B)));
    EXPECT_TRUE(containsEquiv(tc, fx.ctx, r.output, reverseReverseAt(A)));
    EXPECT_TRUE(containsEquiv(tc, fx.ctx, r.output, reverseReverseAt(B)));
    EXPECT_TRUE(containsEquiv(tc, fx.ctx, r.output, fx.negGoal));
    EXPECT_FALSE(r.stats.budgetHit);
    for (const auto& h : r.output) {
        EXPECT_TRUE(abstractable(tc, fx.ctx, h)) << display(h);
        EXPECT_TRUE(tc.isProp(fx.ctx, h));
    }
}

TEST(Saturate, EmptyInput) {
    Environment env;
    EXPECT_TRUE(saturate(env, {}, {}).empty());
}

TEST(Saturate, FinCommutativityAtK) {
    auto fx = finFixture();
    Term comm = piF("n", fv("ℕ"), [](Term n) {
        Term Fn = ap(fv("Fin"), {n});
        return piF("u", Fn, [&](Term u) {
            return piF("v", Fn, [&](Term v) { return eq(1, Fn, ap(fv("add"), {n, u, v}), ap(fv("add"), {n, v, u})); });
        });
    });
    Context ctx = fx.ctx;
    Term Fk = ap(fv("Fin"), {fv("k")});
    ctx.push("a", Fk);
    ctx.push("b", Fk);
    Term goal = neg(eq(1, Fk, ap(fv("add"), {fv("k"), fv("a"), fv("b")}), ap(fv("add"), {fv("k"), fv("b"), fv("a")})));
    TypeChecker tc(fx.env);
    auto r = saturateFull(tc, ctx, {comm, goal});
    Term atK = piF("u", Fk, [&](Term u) {
        return piF("v", Fk, [&](Term v) { return eq(1, Fk, ap(fv("add"), {fv("k"), u, v}), ap(fv("add"), {fv("k"), v, u})); });
    });
    EXPECT_TRUE(containsEquiv(tc, ctx, r.output, atK));
    EXPECT_FALSE(containsEquiv(tc, ctx, r.output, comm));
}

TEST(Saturate, BudgetAndDeterminism) {
    // every instance at α mentions c (W α), which matches again at W α
    Environment env;
    axiom(env, "W", arr(U(1), U(1)));
    axiom(env, "c", piF("α", U(1), [](Term a) { return arr(a, a); }));
    axiom(env, "d", piF("α", U(1), [](Term a) { return arr(a, ap(cst("W"), {a})); }));
    auto c = [](Term a, Term x) { return ap(cst("c"), {a, x}); };
    auto d = [](Term a, Term x) { return ap(cst("d"), {a, x}); };
    Term feed = piF("α", U(1), [&](Term a) {
        return piF("x", a, [&](Term x) {
            Term Wa = ap(cst("W"), {a});
            return eq(1, Wa, c(Wa, d(a, x)), d(a, c(a, x)));
        });
    });
    Context ctx;
    ctx.push("N", U(1));
    ctx.push("n", fv("N"));
    Term seed = neg(eq(1, fv("N"), c(fv("N"), fv("n")), fv("n")));
    std::vector<std::string> first;
    for (int run = 0; run < 5; ++run) {
        TypeChecker tc(env);
        SaturateOptions o;
        o.maxInsts = 8;
        auto r = saturateFull(tc, ctx, {feed, seed}, o);
        EXPECT_TRUE(r.stats.budgetHit);
        std::vector<std::string> out;
        for (const auto& h : r.hi) out.push_back(display(h));
        for (const auto& k : r.ci) out.push_back(display(k));
        if (run == 0) first = out;
        EXPECT_EQ(out, first);
        // one matchOnePair adds at most one hypothesis instance and its three constants here
        EXPECT_LE(r.hi.size() + r.ci.size(), 8u + 4u);
    }
    TypeChecker tc(env);
    SaturateOptions big;
    big.maxInsts = 40;
    EXPECT_GT(saturateFull(tc, ctx, {feed, seed}, big).hi.size(), 5u);
}
