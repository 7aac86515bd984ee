#pragma once

#include <set>
#include <string>
#include <vector>

#include "lapc/environment.hpp"
#include "lapc/term.hpp"
#include "lapc/typechecker.hpp"

namespace lapc {

struct DepOptions {
    // Instance-implicit binder positions count as dependent, so typeclass
    // arguments are carried inside the HOL* instance.
    bool absorbInstances = false;
};

struct ArgAnalysis {
    Term head;
    std::vector<Term> args;
    std::set<std::size_t> depIndices;  // 1-based
    Term lFun;
    std::vector<Term> lArgs;
    std::vector<Term> dArgs;
};

using NameSet = std::set<std::string>;

// s = ∀ (x : s1). s2 with x occurring in s2.
bool isLADT(const Term& s);

ArgAnalysis analyzeArgs(TypeChecker& tc, const Context& ctx, const Term& head, const std::vector<Term>& args,
                        DepOptions opts = {});
ArgAnalysis analyzeArgs(const Environment& env, const Context& ctx, const Term& head,
                        const std::vector<Term>& args, DepOptions opts = {});

bool qMono(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts = {});
bool qMono(const Environment& env, const Context& ctx, const NameSet& B, const Term& t, DepOptions opts = {});

// Which clause rejected t, or empty when qMono holds.
std::string qMonoViolation(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t,
                           DepOptions opts = {});

// HOL* instances of t in first-occurrence order, deduplicated by
// fingerprint, then isDefEq.
std::vector<Term> holInsts(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t,
                           DepOptions opts = {});
std::vector<Term> holInsts(const Environment& env, const Context& ctx, const NameSet& B, const Term& t,
                           DepOptions opts = {});

// Does the type of t end in a universe U_l with l ≥ 1 (List, Fin n, ...)?
bool isTypeFormer(TypeChecker& tc, const Context& ctx, const Term& t);

// Fresh name not in ctx and not among `avoid`.
std::string freshLocal(const Context& ctx, const std::string& base, const NameSet& avoid = {});

// Strip trailing λ x. f x layers.
Term etaOuter(const Term& t);

}  // namespace lapc
