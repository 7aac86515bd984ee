#include <fstream>
#include <set>
#include <sstream>

#include "lapc/error.hpp"
#include "lapc/frontend.hpp"
#include "lapc/preprocess.hpp"
#include "lapc/typechecker.hpp"

namespace lapc {

namespace {

std::string at(std::size_t line, std::size_t col) { return std::to_string(line) + ":" + std::to_string(col) + ": "; }

[[noreturn]] void rethrowAt(const Error& e, std::size_t line, std::size_t col) {
    std::string m = at(line, col) + e.what();
    const std::string& k = e.kind();
    if (k == "TypeError") throw TypeError(m);
    if (k == "UnknownConstant") throw UnknownConstant(m);
    if (k == "DuplicateName") throw DuplicateName(m);
    if (k == "UnsupportedInductive") throw UnsupportedInductive(m);
    if (k == "ReductionBudgetError") throw ReductionBudgetError(m);
    if (k == "ConfigError") throw ConfigError(m);
    throw;
}

// Expression elaboration in a working context; surface binders become fresh
// free variables of `lctx` and are abstracted on the way out.
struct ExprElab {
    const Environment& env;
    const Context* vars;  // problem context visible to the expression, or null for constants
    Context lctx;
    std::vector<std::pair<std::string, std::string>> scope;

    Term resolve(const Expr& e) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == e.name) return Term::fvar(it->second);
        if (vars && vars->contains(e.name)) return Term::fvar(e.name);
        if (env.contains(e.name)) return Term::constant(e.name);
        if (e.name == "Eq" || e.name == "Exists")
            throw TypeError(at(e.line, e.column) + e.name + " needs its type argument");
        throw UnknownConstant(at(e.line, e.column) + "unknown identifier " + e.name);
    }

    bool bound(const std::string& n) const {
        for (const auto& s : scope)
            if (s.first == n) return true;
        return vars && vars->contains(n);
    }

    std::vector<std::pair<std::string, Term>> open(const std::vector<Binder>& bs, std::vector<BinderInfo>& infos) {
        std::vector<std::pair<std::string, Term>> out;
        for (const auto& b : bs) {
            for (const auto& n : b.names) {
                Term ty = go(b.type());
                std::string x = lctx.freshName(n);
                while (env.contains(x)) x = lctx.freshName(x + "'");
                lctx.push(x, ty, b.inst ? BinderInfo::Inst : BinderInfo::Default);
                scope.emplace_back(n, x);
                out.emplace_back(x, ty);
                infos.push_back(b.inst ? BinderInfo::Inst : BinderInfo::Default);
            }
        }
        return out;
    }

    Term close(bool pi, const std::vector<std::pair<std::string, Term>>& xs, const std::vector<BinderInfo>& infos,
               const std::vector<std::string>& surface, Term body) {
        for (std::size_t i = xs.size(); i-- > 0;) {
            Term b = abstractFVar(body, xs[i].first);
            body = pi ? Term::pi(surface[i], xs[i].second, b, infos[i]) : Term::lam(surface[i], xs[i].second, b, infos[i]);
        }
        return body;
    }

    Term go(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Ident:
                return resolve(e);
            case Expr::Kind::Sort:
                return Term::sort(e.level);
            case Expr::Kind::Arrow: {
                Term r = go(e.args.back());
                for (std::size_t i = e.args.size() - 1; i-- > 0;) r = mkArrow(go(e.args[i]), r);
                return r;
            }
            case Expr::Kind::App: {
                const Expr& h = e.args.front();
                Term f;
                std::size_t first = 1;
                if (h.kind == Expr::Kind::Ident && (h.name == "Eq" || h.name == "Exists") && !bound(h.name) &&
                    !env.contains(h.name)) {
                    Term ty = go(e.args[1]);
                    TypeChecker tc(env);
                    Level l;
                    try {
                        l = tc.sortLevel(lctx, ty);
                    } catch (const Error& err) {
                        rethrowAt(err, e.args[1].line, e.args[1].column);
                    }
                    f = Term::app(Term::constant(h.name == "Eq" ? eqName(l) : existsName(l)), ty);
                    first = 2;
                } else {
                    f = go(h);
                }
                for (std::size_t i = first; i < e.args.size(); ++i) f = Term::app(f, go(e.args[i]));
                return f;
            }
            case Expr::Kind::Forall:
            case Expr::Kind::Fun: {
                std::size_t mark = scope.size();
                std::vector<BinderInfo> infos;
                auto xs = open(e.binders, infos);
                std::vector<std::string> surface;
                for (std::size_t i = mark; i < scope.size(); ++i) surface.push_back(scope[i].first);
                Term body = go(e.args.front());
                scope.resize(mark);
                return close(e.kind == Expr::Kind::Forall, xs, infos, surface, body);
            }
        }
        return {};
    }
};

struct FileElab {
    Problem p;
    std::set<std::string> premiseNames;

    Term expr(const Expr& e, bool withVars) {
        ExprElab el{p.env, withVars ? &p.ctx : nullptr, withVars ? p.ctx : Context{}, {}};
        return el.go(e);
    }

    Term checked(const Expr& e, bool withVars) {
        Term t = expr(e, withVars);
        TypeChecker tc(p.env);
        try {
            tc.inferType(withVars ? p.ctx : Context{}, t);
        } catch (const Error& err) {
            rethrowAt(err, e.line, e.column);
        }
        return t;
    }

    void fresh(const std::string& name, const Decl& d) {
        if (p.env.contains(name) || p.ctx.contains(name) || isReservedName(name))
            throw DuplicateName(at(d.line, d.column) + "name already declared: " + name);
    }

    void requireType(const Term& t, const Context& ctx, const Expr& e, const std::string& what) {
        TypeChecker tc(p.env);
        try {
            tc.sortLevel(ctx, t);
        } catch (const Error& err) {
            throw TypeError(at(e.line, e.column) + what + " is not a type: " + err.what());
        }
    }

    void requireProp(const Term& t, const Expr& e, const std::string& what) {
        TypeChecker tc(p.env);
        bool ok = false;
        try {
            ok = tc.isProp(p.ctx, t);
        } catch (const Error& err) {
            rethrowAt(err, e.line, e.column);
        }
        if (!ok) throw TypeError(at(e.line, e.column) + what + " is not a proposition: " + display(t));
    }

    void constant(const Decl& d) {
        fresh(d.name, d);
        ConstantInfo ci;
        ci.name = d.name;
        ci.type = checked(d.exprs[0], false);
        requireType(ci.type, {}, d.exprs[0], "type of " + d.name);
        if (d.kind == Decl::Kind::Def) {
            Term v = checked(d.exprs[1], false);
            TypeChecker tc(p.env);
            Term vt = tc.inferType({}, v);
            if (!tc.isDefEq(vt, ci.type))
                throw TypeError(at(d.exprs[1].line, d.exprs[1].column) + "value of " + d.name + " has type " +
                                display(vt) + ", expected " + display(ci.type));
            ci.value = v;
            ci.reducibility = d.attr == "reducible" ? Reducibility::Reducible
                              : d.attr == "opaque"  ? Reducibility::Opaque
                                                    : Reducibility::Default;
        } else {
            ci.reducibility = Reducibility::Opaque;
        }
        p.env.add(ci);
    }

    // Types first, then every value against an environment declaring the whole block.
    void mutualDefs(const Decl& d) {
        Environment trial = p.env;
        std::vector<ConstantInfo> out;
        for (const auto& m : d.block) {
            fresh(m.name, m);
            if (trial.contains(m.name)) throw DuplicateName(at(m.line, m.column) + "name already declared: " + m.name);
            ConstantInfo ci;
            ci.name = m.name;
            ci.type = ExprElab{trial, nullptr, {}, {}}.go(m.exprs[0]);
            TypeChecker tc(trial);
            try {
                tc.sortLevel({}, ci.type);
            } catch (const Error& err) {
                rethrowAt(err, m.exprs[0].line, m.exprs[0].column);
            }
            ci.reducibility = Reducibility::Opaque;
            trial.add(ci);
            out.push_back(ci);
        }
        for (std::size_t i = 0; i < d.block.size(); ++i) {
            const Decl& m = d.block[i];
            Term v = ExprElab{trial, nullptr, {}, {}}.go(m.exprs[1]);
            TypeChecker tc(trial);
            try {
                Term vt = tc.inferType({}, v);
                if (!tc.isDefEq(vt, out[i].type))
                    throw TypeError("value of " + m.name + " has type " + display(vt) + ", expected " +
                                    display(out[i].type));
            } catch (const Error& err) {
                rethrowAt(err, m.exprs[1].line, m.exprs[1].column);
            }
            out[i].value = v;
            out[i].reducibility = m.attr == "reducible" ? Reducibility::Reducible
                                  : m.attr == "opaque"  ? Reducibility::Opaque
                                                        : Reducibility::Default;
        }
        for (auto& ci : out) p.env.add(ci);
    }

    void inductive(const Decl& d) {
        fresh(d.name, d);
        ExprElab el{p.env, nullptr, {}, {}};
        std::vector<BinderInfo> infos;
        auto params = el.open(d.binders, infos);
        Term sort = el.go(d.exprs[0]);
        if (sort.isPi())
            throw UnsupportedInductive(at(d.exprs[0].line, d.exprs[0].column) + d.name +
                                       " is an indexed family; only parameters are supported");
        if (!sort.isSort() || sort.level() == 0)
            throw UnsupportedInductive(at(d.exprs[0].line, d.exprs[0].column) + d.name +
                                       " must live in U1 or above");
        ConstantInfo former;
        former.name = d.name;
        former.type = mkPiFVars(params, sort);
        former.reducibility = Reducibility::Opaque;
        {
            TypeChecker tc(p.env);
            try {
                tc.sortLevel({}, former.type);
            } catch (const Error& err) {
                rethrowAt(err, d.line, d.column);
            }
        }
        Environment trial = p.env;
        trial.add(former);
        InductiveDecl decl;
        decl.name = d.name;
        decl.level = sort.level();
        for (std::size_t i = 0; i < params.size(); ++i) decl.params.emplace_back(el.scope[i].first, params[i].second);
        std::vector<ConstantInfo> ctors;
        for (const auto& c : d.ctors) {
            if (trial.contains(c.name) || p.ctx.contains(c.name) || isReservedName(c.name))
                throw DuplicateName(at(c.type.line, c.type.column) + "name already declared: " + c.name);
            ExprElab ce{trial, nullptr, el.lctx, el.scope};
            Term body = ce.go(c.type);
            ConstantInfo ci;
            ci.name = c.name;
            ci.type = mkPiFVars(params, body);
            ci.reducibility = Reducibility::Opaque;
            TypeChecker tc(trial);
            try {
                tc.sortLevel({}, ci.type);
            } catch (const Error& err) {
                rethrowAt(err, c.type.line, c.type.column);
            }
            decl.ctors.push_back({c.name, ci.type});
            ctors.push_back(ci);
            trial.add(ci);
        }
        try {
            validateInductive(trial, decl);
        } catch (const Error& err) {
            rethrowAt(err, d.line, d.column);
        }
        p.env.add(former);
        for (auto& c : ctors) p.env.add(c);
        p.env.addInductive(decl);
    }

    void var(const Decl& d) {
        for (const auto& b : d.binders)
            for (const auto& n : b.names) {
                fresh(n, d);
                Term t = checked(b.type(), true);
                requireType(t, p.ctx, b.type(), "type of " + n);
                p.ctx.push(n, t, b.inst ? BinderInfo::Inst : BinderInfo::Default);
            }
    }

    void names(const Decl& d, std::vector<std::string>& out) {
        for (const auto& n : d.names) {
            if (!p.env.contains(n)) throw UnknownConstant(at(d.line, d.column) + "unknown constant " + n);
            out.push_back(n);
        }
    }

    void run(const Decl& d) {
        switch (d.kind) {
            case Decl::Kind::Axiom:
            case Decl::Kind::Def:
                constant(d);
                break;
            case Decl::Kind::Inductive:
                inductive(d);
                break;
            case Decl::Kind::Mutual:
                if (d.block.front().kind == Decl::Kind::Inductive)
                    throw UnsupportedInductive(at(d.line, d.column) + "mutual inductive declarations are not supported");
                mutualDefs(d);
                break;
            case Decl::Kind::Var:
                var(d);
                break;
            case Decl::Kind::Premise: {
                if (!premiseNames.insert(d.name).second)
                    throw DuplicateName(at(d.line, d.column) + "duplicate premise " + d.name);
                Term t = checked(d.exprs[0], true);
                requireProp(t, d.exprs[0], "premise " + d.name);
                p.premises.push_back({d.name, t});
                break;
            }
            case Decl::Kind::Goal: {
                Term t = checked(d.exprs[0], true);
                requireProp(t, d.exprs[0], "goal");
                p.goal = t;
                break;
            }
            case Decl::Kind::Unfold:
                names(d, p.instructions.unfold);
                break;
            case Decl::Kind::Defeq:
                names(d, p.instructions.defeq);
                break;
            case Decl::Kind::Option:
                if (d.name == "glift" && d.attr == "true") p.env.enableGLift();
                p.options[d.name] = d.attr;
                break;
        }
    }
};

}  // namespace

Problem elaborate(const SourceFile& sf, const std::string& name) {
    FileElab fe;
    fe.p.name = name;
    for (const auto& d : sf.declarations) fe.run(d);
    if (!fe.p.goal) throw TypeError("problem has no goal");
    unfoldOrder(fe.p.env, fe.p.instructions.unfold);
    return std::move(fe.p);
}

Term elaborateExpr(const Environment& env, const Context& ctx, const Expr& e) {
    ExprElab el{env, &ctx, ctx, {}};
    return el.go(e);
}

Problem loadProblem(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return elaborate(parse(ss.str()), file.stem().string());
}

}  // namespace lapc
