#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lapc/error.hpp"
#include "lapc/frontend.hpp"

using namespace lapc;
using namespace lapc::test;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> lapFiles(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".lap") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

const fs::path corpus = LAPC_CORPUS_DIR;

}  // namespace

TEST(Parse, SortBaseCase) {
    Expr e = parseExpr("(sort 0)");
    EXPECT_EQ(e.kind, Expr::Kind::Sort);
    EXPECT_EQ(e.level, 0u);
    EXPECT_EQ(elaborateExpr({}, {}, e), U(0));
    EXPECT_EQ(elaborateExpr({}, {}, parseExpr("U3")), U(3));
    EXPECT_EQ(elaborateExpr({}, {}, parseExpr("Prop")), U(0));
}

TEST(Parse, ErrorsCarryPositions) {
    try {
        parse("(axiom N U1)\n(goal (Eq N a a)\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 1u);
        EXPECT_EQ(e.expected(), "')'");
    }
    try {
        parse("(goal False))");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.column(), 13u);
    }
    try {
        parse("(axiom  forall U1)\n(goal False)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 9u);
        EXPECT_EQ(e.expected(), "identifier");
    }
    // columns count bytes
    try {
        parse("(axiom ℕ U1 x)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 15u);
    }
    EXPECT_THROW(parse("(axiom N U1)"), ParseError);
    EXPECT_THROW(parse("(goal False) (goal False)"), ParseError);
    EXPECT_THROW(parse("(frobnicate)\n(goal False)"), ParseError);
    EXPECT_THROW(parseExpr("(forall (x) x)"), ParseError);
    EXPECT_THROW(parseExpr("(f)"), ParseError);
}

TEST(Parse, AsciiAndUnicodeAgree) {
    Expr a = parseExpr("(forall (x : A) (-> (P x) (fun (y : A) y)))");
    Expr b = parseExpr("(∀ (x : A) (→ (P x) (λ (y : A) y)))");
    EXPECT_EQ(a, b);
}

TEST(Elaborate, EmptyFileWithBotGoal) {
    Problem p = elaborate(parse("(goal False)"));
    EXPECT_EQ(p.goal, cst("False"));
    EXPECT_TRUE(p.premises.empty());
    EXPECT_TRUE(p.ctx.empty());
}

TEST(Elaborate, ListReverseMapPremises) {
    Problem p = loadProblem(corpus / "list_reverse_map.lap");
    auto fx = listFixture();
    ASSERT_EQ(p.premises.size(), 2u);
    EXPECT_EQ(p.premises[0].name, "map_reverse");
    EXPECT_EQ(p.premises[0].type, fx.mapReverse);
    EXPECT_EQ(p.premises[1].type, fx.reverseReverse);
    EXPECT_EQ(p.name, "list_reverse_map");
    ASSERT_NE(p.env.findInductive("List"), nullptr);
    EXPECT_EQ(p.env.findInductive("List")->ctors.size(), 2u);
    EXPECT_EQ(prettyPrint(p.premises[1].type),
              "(forall (α : U1) (xs : (List α)) (Eq.{1} (List α) (reverse α (reverse α xs)) xs))");
}

TEST(Elaborate, FinAddExample) {
    Problem p = loadProblem(corpus / "fin_add_comm3.lap");
    auto fx = finFixture();
    ASSERT_EQ(p.ctx.size(), 4u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.ctx[i].type, fx.ctx[i].type);
    EXPECT_EQ(p.ctx[3].name, "n");
    Term Fn = ap(fv("Fin"), {fv("n")});
    auto add = [](Term x, Term y) { return ap(fv("add"), {fv("n"), x, y}); };
    Term comm = piF("u", Fn, [&](Term u) { return piF("v", Fn, [&](Term v) { return eq(1, Fn, add(u, v), add(v, u)); }); });
    Term concl = piF("u", Fn, [&](Term u) {
        return piF("v", Fn, [&](Term v) {
            return piF("w", Fn, [&](Term w) { return eq(1, Fn, add(add(u, v), w), add(w, add(v, u))); });
        });
    });
    EXPECT_EQ(p.goal, arr(comm, concl));
}

TEST(Elaborate, InstanceBindersAndOptions) {
    Problem p = loadProblem(corpus / "tc_add_comm.lap");
    const ConstantInfo* h = p.env.find("HAdd.hAdd");
    ASSERT_NE(h, nullptr);
    Term t = h->type;
    for (int i = 0; i < 3; ++i) t = t.body();
    EXPECT_EQ(t.binderInfo(), BinderInfo::Inst);
    EXPECT_EQ(p.options.at("absorb-instances"), "true");
}

TEST(Elaborate, EqNeedsItsType) {
    EXPECT_THROW(elaborate(parse("(axiom N U1) (var a N) (goal (Eq a a))")), TypeError);
    EXPECT_THROW(elaborate(parse("(axiom N U1) (axiom r (-> N Prop)) (def r2 (-> N Prop) r reducible) (goal (r2 r))")),
                 TypeError);
}

TEST(Elaborate, ShadowingAndScopes) {
    // a binder named like a constant shadows it inside its scope only
    Problem p = elaborate(parse("(axiom N U1) (axiom x N) (var P (-> N Prop))"
                                "(goal (-> (forall (x : N) (P x)) (P x)))"));
    Term expect = arr(piF("x", cst("N"), [](Term x) { return ap(fv("P"), {x}); }), ap(fv("P"), {cst("x")}));
    EXPECT_EQ(p.goal, expect);
}

TEST(PrettyPrint, Conventions) {
    Term lam = lamF("x", fv("α"), [](Term x) { return lamF("y", fv("α"), [&](Term) { return x; }); });
    EXPECT_EQ(prettyPrint(lam), "(fun (x y : α) x)");
    Term pi = piF("x", fv("α"), [](Term x) { return arr(ap(fv("β"), {x}), fv("γ")); });
    EXPECT_EQ(prettyPrint(pi), "(forall (x : α) (-> (β x) γ))");
    EXPECT_EQ(prettyPrint(pi, {true}), "(∀ (x : α) (→ (β x) γ))");
    // f x y is one flat spine; (→ a (→ b c)) is one n-ary arrow
    EXPECT_EQ(prettyPrint(ap(fv("f"), {fv("x"), fv("y")})), "(f x y)");
    EXPECT_EQ(prettyPrint(arr(fv("a"), arr(fv("b"), fv("c")))), "(-> a b c)");
    EXPECT_EQ(prettyPrint(arr(arr(fv("a"), fv("b")), fv("c"))), "(-> (-> a b) c)");
    // capture: the binder is renamed away from the free x
    Term cap = Term::lam("x", fv("α"), ap(fv("x"), {Term::bvar(0)}));
    EXPECT_EQ(prettyPrint(cap), "(fun (x1 : α) (x x1))");
    Term inst = Term::pi("i", fv("C"), fv("D"), BinderInfo::Inst);
    EXPECT_EQ(prettyPrint(inst), "(-> C D)");
    Term instDep = Term::pi("i", fv("C"), ap(fv("D"), {Term::bvar(0)}), BinderInfo::Inst);
    EXPECT_EQ(prettyPrint(instDep), "(forall [i : C] (D i))");
}

TEST(PrettyPrint, HolTerms) {
    HTerm a = HTerm::fvar("t0");
    HTerm t = HTerm::lam("x", a, HTerm::app(HTerm::fvar("p"), HTerm::bvar(0)));
    EXPECT_EQ(prettyPrint(t), "(fun (x : t0) (p x))");
    EXPECT_EQ(prettyPrint(HTerm::arrow(a, HTerm::arrow(a, HTerm::boolean()))), "(-> t0 t0 Bool)");
}

TEST(RoundTrip, CorpusSourceAndTerms) {
    auto files = lapFiles(corpus);
    ASSERT_EQ(files.size(), 25u);
    for (const auto& f : files) {
        SCOPED_TRACE(f.filename().string());
        SourceFile sf = parse(slurp(f));
        SourceFile again = parse(printSource(sf));
        EXPECT_TRUE(again == sf);
        EXPECT_EQ(printSource(again), printSource(sf));

        Problem p = elaborate(sf);
        Problem q = elaborate(parse(printProblem(p)));
        ASSERT_EQ(q.premises.size(), p.premises.size());
        for (std::size_t i = 0; i < p.premises.size(); ++i) EXPECT_EQ(q.premises[i].type, p.premises[i].type);
        EXPECT_EQ(q.goal, p.goal);
        ASSERT_EQ(q.ctx.size(), p.ctx.size());
        for (std::size_t i = 0; i < p.ctx.size(); ++i) EXPECT_EQ(q.ctx[i].type, p.ctx[i].type);
        EXPECT_EQ(q.env.order(), p.env.order());
        EXPECT_EQ(q.instructions.unfold, p.instructions.unfold);

        // every premise reads back through prettyPrint alone
        for (const auto& pr : p.premises)
            EXPECT_EQ(elaborateExpr(p.env, p.ctx, parseExpr(prettyPrint(pr.type))), pr.type);
    }
}

TEST(RoundTrip, MutualDefinitions) {
    Problem p = elaborate(parse("(axiom N U1) (mutual (def f (-> N N) (fun (x : N) (g x))) (def g (-> N N) (fun (x : N) (f x))))"
                                "(axiom h N) (goal False)"));
    Problem q = elaborate(parse(printProblem(p)));
    EXPECT_EQ(q.env.find("f")->value, p.env.find("f")->value);
    EXPECT_EQ(q.env.find("g")->value, p.env.find("g")->value);
}

TEST(Negative, EachFileRaisesItsClass) {
    auto files = lapFiles(corpus / "negative");
    ASSERT_GE(files.size(), 5u);
    for (const auto& f : files) {
        SCOPED_TRACE(f.filename().string());
        std::string text = slurp(f);
        const std::string tag = "; expect: ";
        ASSERT_EQ(text.rfind(tag, 0), 0u);
        std::string want = text.substr(tag.size(), text.find('\n') - tag.size());
        try {
            loadProblem(f);
            ADD_FAILURE() << "accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), want) << e.what();
        }
    }
}
