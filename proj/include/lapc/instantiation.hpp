#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lapc/depanalysis.hpp"

namespace lapc {

// M-unifier. Metavariables are free variables of domainCtx listed in metaSet;
// assignment is idempotent and identity off metaSet. codomainCtx drops the
// assigned metavariables.
struct Unifier {
    NameSet metaSet;
    std::map<std::string, Term> assignment;
    Context domainCtx;
    Context codomainCtx;

    Term apply(const Term& t) const { return substExtend(assignment, t); }
};

struct UnifyOptions {
    // 1 = single unifier; up to 4 with the unfold-first alternative.
    std::size_t maxAlternatives = 1;
};

// ctx declares the metavariables. Failure is an empty list.
std::vector<Unifier> unify(TypeChecker& tc, const Context& ctx, const NameSet& M, const Term& t1, const Term& t2,
                           UnifyOptions opts = {});
std::vector<Unifier> unify(const Environment& env, const Context& ctx, const NameSet& M, const Term& t1,
                           const Term& t2, UnifyOptions opts = {});

// Unifiers between m and the LFun of each application subterm of h.
// Applications headed by a metavariable are not unified against.
std::vector<Unifier> matchTerm(TypeChecker& tc, const Context& ctx, const NameSet& M, const Term& m, const Term& h,
                               UnifyOptions opts = {}, DepOptions dep = {});

// Instances of hypothesis h having a subterm whose LFun unifies with m.
std::vector<Term> matchInst(TypeChecker& tc, const Context& ctx, const Term& m, const Term& h,
                            UnifyOptions opts = {}, DepOptions dep = {});
std::vector<Term> matchInst(const Environment& env, const Context& ctx, const Term& m, const Term& h);

// a is σ̄ of h's body, re-generalized.
bool isHypInstance(TypeChecker& tc, const Context& ctx, const Term& a, const Term& h);
bool hypEquiv(TypeChecker& tc, const Context& ctx, const Term& t1, const Term& t2);
bool hypEquiv(const Environment& env, const Context& ctx, const Term& t1, const Term& t2);

// Head constant of c (under leading λs) carries a definition.
bool hasDefinitionHead(TypeChecker& tc, const Term& c);

// ∀ ys. c1 ys = c2 ts after unfolding c1's head once.
std::optional<Term> genEqTheorems(TypeChecker& tc, const Context& ctx, const Term& c1, const Term& c2);
std::optional<Term> genEqTheorems(const Environment& env, const Context& ctx, const Term& c1, const Term& c2);

struct SaturateOptions {
    std::size_t maxInsts = 256;
    UnifyOptions unify;
    DepOptions dep;
    bool equationalTheorems = true;
};

struct SaturateStats {
    std::size_t pops = 0;
    std::size_t pairs = 0;           // matchOnePair calls
    std::size_t hypInstances = 0;    // |hi| at exit
    std::size_t constInstances = 0;  // |ci| at exit
    std::size_t eqTheorems = 0;
    std::size_t filtered = 0;        // members of hi dropped by the QMono filter
    std::size_t seeded = 0;          // |hi| + |ci| before the first pop
    std::size_t maxPairGrowth = 0;   // largest |hi| + |ci| increase from one matchOnePair
    bool budgetHit = false;
};

struct SaturateResult {
    std::vector<Term> output;
    std::vector<Term> hi, ci;
    SaturateStats stats;
};

SaturateResult saturateFull(TypeChecker& tc, const Context& ctx, const std::vector<Term>& H,
                            const SaturateOptions& opts = {});
std::vector<Term> saturate(const Environment& env, const Context& ctx, const std::vector<Term>& H,
                           std::size_t maxInsts = 256);

// QMono with B = ∅ and no binder over a universe; what lamAbst accepts.
bool abstractable(TypeChecker& tc, const Context& ctx, const Term& t, DepOptions dep = {});

}  // namespace lapc
