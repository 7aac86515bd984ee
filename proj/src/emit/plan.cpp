#include <set>
#include <unordered_set>

#include "lapc/emit.hpp"
#include "lapc/error.hpp"
#include "lapc/frontend.hpp"

namespace lapc {

std::vector<PlanDatatype> bindDatatypes(TypeChecker& tc, const Context& ctx, const std::vector<DatatypeInstance>& dts,
                                        AbstractionState& st) {
    std::vector<PlanDatatype> out;
    for (const auto& d : dts) {
        HTerm sort = abstractType(tc, ctx, d.type, st);
        if (!sort.is(HKind::FVar)) throw UnsupportedInEmission("datatype " + display(d.type) + " is not a type instance");
        PlanDatatype pd{sort.name(), prettyPrint(d.type), {}};
        for (const auto& c : d.constructors) {
            PlanCtor pc{getLVarName(tc, ctx, c.fn, st), c.name, {}};
            for (const auto& a : c.argTypes) pc.args.push_back(abstractType(tc, ctx, a, st));
            pd.ctors.push_back(std::move(pc));
        }
        out.push_back(std::move(pd));
    }
    return out;
}

namespace {

// Eq.{l} T or Exists.{l} T
SymbolRole roleOf(const Term& t) {
    if (!t.isApp() || !t.fn().isConst()) return SymbolRole::Plain;
    auto b = parseBuiltinName(t.fn().name());
    if (!b) return SymbolRole::Plain;
    if (b->family == "Eq") return SymbolRole::Eq;
    if (b->family == "Exists") return SymbolRole::Exists;
    return SymbolRole::Plain;
}

std::vector<PlanCtor> rhoCtors(std::vector<PlanCtor> cs) {
    for (auto& c : cs)
        for (auto& a : c.args) a = rhoStar(a);
    return cs;
}

}  // namespace

EmitPlan buildEmitPlan(const std::string& problem, const Substitution& s, const std::vector<PlanAxiom>& axioms,
                       const std::vector<PlanDatatype>& datatypes) {
    EmitPlan plan;
    plan.problem = problem;
    for (const auto& d : s.holCtx) {
        const Term& image = s.sigma.at(d.name);
        std::string src = prettyPrint(image);
        plan.provenance.push_back(d.name + " := " + src);
        if (d.type.is(HKind::SortU)) {
            plan.typeDecls.push_back({d.name, src});
            continue;
        }
        plan.symbolDecls.push_back({d.name, rhoStar(d.type), roleOf(image), src});
    }
    for (const auto& a : axioms) plan.axioms.push_back({a.label, rhoStar(a.formula)});
    for (const auto& d : datatypes) plan.datatypes.push_back({d.sort, d.source, rhoCtors(d.ctors)});
    return plan;
}

namespace {

void requireType(const HTerm& ty, const std::set<std::string>& types, const std::string& what) {
    switch (ty.kind()) {
        case HKind::Bool:
            return;
        case HKind::FVar:
            if (types.count(ty.name())) return;
            break;
        case HKind::Arrow:
            requireType(ty.dom(), types, what);
            requireType(ty.cod(), types, what);
            return;
        default:
            break;
    }
    throw UnsupportedInEmission(what + ": " + hDisplay(ty) + " is not a first-order-sorted HOL type");
}

HTerm finalCod(HTerm ty) {
    while (ty.is(HKind::Arrow)) ty = ty.cod();
    return ty;
}

}  // namespace

void checkPlan(const EmitPlan& plan) {
    HContext ctx;
    std::set<std::string> types, seen;
    auto fresh = [&](const std::string& n) {
        if (!seen.insert(n).second) throw UnsupportedInEmission("name declared twice: " + n);
    };
    for (const auto& t : plan.typeDecls) {
        fresh(t.name);
        types.insert(t.name);
        ctx.push(t.name, HTerm::sortU(1));
    }
    for (const auto& s : plan.symbolDecls) {
        fresh(s.name);
        requireType(s.type, types, s.name);
        if (s.role == SymbolRole::Eq) {
            const HTerm& ty = s.type;
            if (!ty.is(HKind::Arrow) || !ty.cod().is(HKind::Arrow) || ty.cod().dom() != ty.dom() ||
                !ty.cod().cod().is(HKind::Bool))
                throw UnsupportedInEmission(s.name + " is not an equality");
        } else if (s.role == SymbolRole::Exists) {
            const HTerm& ty = s.type;
            if (!ty.is(HKind::Arrow) || !ty.dom().is(HKind::Arrow) || !ty.dom().cod().is(HKind::Bool) ||
                !ty.cod().is(HKind::Bool))
                throw UnsupportedInEmission(s.name + " is not an existential");
        }
        ctx.push(s.name, s.type);
    }
    auto boolean = [&](const HTerm& f, const std::string& label) {
        HTerm ty;
        try {
            ty = holInferType(HMode::HOL, ctx, f);
        } catch (const Error& e) {
            throw UnsupportedInEmission(label + ": " + e.what());
        }
        if (!ty.is(HKind::Bool)) throw UnsupportedInEmission(label + " is not a formula");
    };
    std::set<std::string> labels;
    for (const auto& a : plan.axioms) {
        if (!labels.insert(a.label).second) throw UnsupportedInEmission("duplicate axiom label " + a.label);
        boolean(a.formula, a.label);
    }
    boolean(plan.conjecture, "conjecture");
    std::set<std::string> dtSorts;
    for (const auto& d : plan.datatypes) {
        if (!types.count(d.sort) || !dtSorts.insert(d.sort).second)
            throw UnsupportedInEmission("datatype sort " + d.sort);
        for (const auto& c : d.ctors) {
            const HDecl* decl = ctx.find(c.symbol);
            if (!decl || types.count(c.symbol)) throw UnsupportedInEmission("constructor " + c.symbol + " undeclared");
            HTerm expect = HTerm::fvar(d.sort);
            for (auto it = c.args.rbegin(); it != c.args.rend(); ++it) expect = HTerm::arrow(*it, expect);
            if (decl->type != expect || finalCod(decl->type) != HTerm::fvar(d.sort))
                throw UnsupportedInEmission("constructor " + c.symbol + " has type " + hDisplay(decl->type));
        }
    }
}

namespace {

const std::unordered_set<std::string>& smtReserved() {
    static const std::unordered_set<std::string> words = {
        "par", "as", "let", "forall", "exists", "match", "lambda", "assert", "check", "declare", "define",
        "push", "pop", "exit", "echo", "reset", "true", "false", "not", "and", "or", "xor", "ite", "distinct",
        "apply", "select", "store", "abs", "div", "mod"};
    return words;
}

bool plainName(const std::string& n) {
    if (n.empty() || n[0] < 'a' || n[0] > 'z') return false;
    for (char c : n)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
    return true;
}

}  // namespace

std::string sanitizeName(const std::string& name, Target target) {
    bool reserved = target == Target::SMT && smtReserved().count(name);
    if (plainName(name) && !reserved) return name;
    static const char* hex = "0123456789abcdef";
    std::string out = "z_";
    for (unsigned char c : name) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            out += static_cast<char>(c);
        } else {
            out += '_';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

std::uint64_t sizeOf(const Term& t) { return t.size(); }
std::uint64_t sizeOf(const HTerm& t) { return t.size(); }

std::uint64_t problemSize(const Problem& p) {
    std::uint64_t n = p.goal ? sizeOf(p.goal) : 0;
    for (const auto& h : p.premises) n += sizeOf(h.type);
    return n;
}

}  // namespace lapc
