#pragma once

#include <cstddef>
#include <optional>

#include "lapc/problem.hpp"
#include "lapc/typechecker.hpp"

namespace lapc {

Problem introForalls(const Problem& p);
Problem byContradiction(const Problem& p);

// Listed constants sorted so that each comes before the listed constants
// its definition mentions. CyclicUnfold names the cycle.
std::vector<std::string> unfoldOrder(const Environment& env, const std::vector<std::string>& names);
Problem applyUnfoldInstruction(const Problem& p);
Problem applyDefeqInstruction(const Problem& p);

// ∀ ys. g ys = (unfolded g) ys over g's whole telescope; nothing when g has
// no definition or returns a proof.
std::optional<Term> definitionEquation(TypeChecker& tc, const Context& ctx, const std::string& g);

struct SubexprStats {
    std::size_t candidates = 0;
    std::size_t pairs = 0;
    std::size_t added = 0;
    bool truncated = false;
};

// Closed logic-free subterms (and the heads of the applications inside them).
std::vector<Term> logicFreeSubterms(const Term& t);
Problem subexprEqTheorems(const Problem& p, std::size_t pairBudget = 64, SubexprStats* stats = nullptr);

// Rejects mutual, nested and indexed shapes with UnsupportedInductive.
void validateInductive(const Environment& env, const InductiveDecl& d);
// Dependencies first.
std::vector<DatatypeInstance> collectInductiveInstances(const Problem& p);

struct PreprocessResult {
    Problem problem;
    std::vector<DatatypeInstance> datatypes;
    SubexprStats subexpr;
};

struct PreprocessOptions {
    std::size_t pairBudget = 64;
    bool subexprEquations = true;
};

// unfold → defeq → intro → contradiction → subexpr → inductives
PreprocessResult preprocess(const Problem& p, const PreprocessOptions& opts = {});

}  // namespace lapc
