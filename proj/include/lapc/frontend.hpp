#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lapc/hol.hpp"
#include "lapc/problem.hpp"

namespace lapc {

struct Expr;

struct Binder {
    std::vector<std::string> names;
    bool inst = false;
    std::vector<Expr> typeBox;  // exactly one element
    const Expr& type() const { return typeBox.front(); }
};

// Surface expression. Positions are 1-based, columns count bytes.
struct Expr {
    enum class Kind { Ident, Sort, App, Forall, Fun, Arrow };
    Kind kind = Kind::Ident;
    std::string name;
    Level level = 0;
    std::vector<Binder> binders;
    std::vector<Expr> args;  // App: head then arguments; Forall/Fun: body; Arrow: domains then codomain
    std::size_t line = 0, column = 0;

    bool operator==(const Expr& o) const;
};

struct CtorDecl {
    std::string name;
    Expr type;
    bool operator==(const CtorDecl& o) const { return name == o.name && type == o.type; }
};

struct Decl {
    enum class Kind { Axiom, Def, Var, Inductive, Mutual, Premise, Goal, Unfold, Defeq, Option };
    Kind kind = Kind::Goal;
    std::string name;              // axiom/def/var/inductive/premise name, option key
    std::vector<Binder> binders;   // var groups, inductive parameters
    std::vector<Expr> exprs;       // type [value] / inductive sort / goal
    std::string attr;              // def reducibility, option value
    std::vector<std::string> names;  // unfold/defeq targets
    std::vector<CtorDecl> ctors;
    std::vector<Decl> block;       // mutual members
    std::size_t line = 0, column = 0;

    bool operator==(const Decl& o) const;
};

struct SourceFile {
    std::vector<Decl> declarations;
    bool operator==(const SourceFile& o) const { return declarations == o.declarations; }
};

SourceFile parse(std::string_view text);
Expr parseExpr(std::string_view text);

// Builds the environment and problem, typechecking each declaration in order.
Problem elaborate(const SourceFile& sf, const std::string& name = "");
Problem loadProblem(const std::filesystem::path& file);
// Expression against an elaborated environment and context.
Term elaborateExpr(const Environment& env, const Context& ctx, const Expr& e);

struct PrintOptions {
    bool unicode = false;
};

std::string prettyPrint(const Term& t, PrintOptions opts = {});
std::string prettyPrint(const HTerm& t);
std::string printSource(const SourceFile& sf);
// Source text that elaborates back to an equivalent problem.
std::string printProblem(const Problem& p);

}  // namespace lapc
