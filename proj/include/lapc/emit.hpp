#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lapc/abstraction.hpp"
#include "lapc/problem.hpp"

namespace lapc {

// How a HOL variable is printed. Eq/Exists variables are those whose
// σ-image is Eq.{l} T / Exists.{l} T and become the target's own = and ∃.
enum class SymbolRole { Plain, Eq, Exists };

struct PlanType {
    std::string name;
    std::string provenance;  // printed λC instance
};

struct PlanSymbol {
    std::string name;
    HTerm type;
    SymbolRole role = SymbolRole::Plain;
    std::string provenance;
};

struct PlanCtor {
    std::string symbol;  // a declared symbol
    std::string source;  // λC constructor name
    std::vector<HTerm> args;
};

struct PlanDatatype {
    std::string sort;  // a declared type
    std::string source;
    std::vector<PlanCtor> ctors;
};

struct PlanAxiom {
    std::string label;
    HTerm formula;
};

// Level-1 HOL problem: the axioms together are contradictory iff the goal
// was provable, so the conjecture is ⊥.
struct EmitPlan {
    std::string problem;
    std::vector<PlanType> typeDecls;
    std::vector<PlanSymbol> symbolDecls;
    std::vector<PlanAxiom> axioms;
    HTerm conjecture = HTerm::bot();
    std::vector<PlanDatatype> datatypes;
    std::vector<std::string> provenance;
};

// Registers each datatype's sort and constructors as abstraction variables,
// so that they appear in the substitution like any other instance.
std::vector<PlanDatatype> bindDatatypes(TypeChecker& tc, const Context& ctx, const std::vector<DatatypeInstance>& dts,
                                        AbstractionState& st);

// axioms are HOL* terms; everything is sent through ρ*.
EmitPlan buildEmitPlan(const std::string& problem, const Substitution& s, const std::vector<PlanAxiom>& axioms,
                       const std::vector<PlanDatatype>& datatypes);

// Declarations are level-1 types, symbols are used as declared, every
// axiom is a Bool. UnsupportedInEmission otherwise.
void checkPlan(const EmitPlan& plan);

enum class Target { TH0, SMT };
// Identity on [a-z][a-z0-9]* (minus SMT-LIB reserved words); everything else
// becomes z_ followed by the name with each other byte written _hh.
std::string sanitizeName(const std::string& name, Target target);

struct Th0Options {
    // Distinctness and injectivity axioms for datatype constructors.
    bool freeConstructors = false;
};
std::string emitTH0(const EmitPlan& plan, Th0Options opts = {});

enum class SmtEncoding { Applicative, HO };
struct SmtOptions {
    SmtEncoding encoding = SmtEncoding::Applicative;
};
std::string emitSMT(const EmitPlan& plan, SmtOptions opts = {});

std::uint64_t sizeOf(const Term& t);
std::uint64_t sizeOf(const HTerm& t);
// Premises plus goal.
std::uint64_t problemSize(const Problem& p);

}  // namespace lapc
