#pragma once

#include <cstdint>
#include <optional>

#include "lapc/environment.hpp"
#include "lapc/term.hpp"

namespace lapc {

struct KernelConfig {
    std::uint64_t maxSteps = 1'000'000;
};

// Typechecking, reduction and conversion over one environment. Each public
// call runs under a fresh step budget; nested calls share the caller's.
class TypeChecker {
public:
    explicit TypeChecker(const Environment& env, KernelConfig cfg = {});

    const Environment& env() const { return env_; }
    const KernelConfig& config() const { return cfg_; }

    // βη-normal type of t.
    Term inferType(const Context& ctx, const Term& t);
    // Type of t as produced by the PTS rules, without the final normalization.
    Term inferTypeRaw(const Context& ctx, const Term& t);

    Term whnfCore(const Term& t);
    Term whnf(const Term& t, Reducibility unfoldLevel = Reducibility::Default);
    Term normalize(const Term& t, std::optional<Reducibility> delta = std::nullopt);
    bool isDefEq(const Term& a, const Term& b);
    bool isDefEqAt(const Term& a, const Term& b, Reducibility unfoldLevel);

    // Level ℓ with ctx ⊢ type : U_ℓ; TypeError when `type` is not a type.
    Level sortLevel(const Context& ctx, const Term& type);
    // ctx ⊢ t : U0, i.e. t is a proposition.
    bool isProp(const Context& ctx, const Term& t);
    // ctx ⊢ t : p with p : U0, i.e. t is a proof.
    bool isProof(const Context& ctx, const Term& t);

    bool budgetExhausted() const { return exhausted_; }
    std::uint64_t stepsUsed() const { return steps_; }

    // δ-unfold the head constant of t once (no further reduction), if it has a value.
    std::optional<Term> unfoldHead(const Term& t, Reducibility level) const;

private:
    struct Entry;
    friend struct Entry;

    void tick(std::uint64_t n = 1);
    Term infer(const Context& ctx, const Term& t);
    Term whnfCoreImpl(const Term& t, std::optional<Reducibility> level);
    Term whnfImpl(const Term& t, Reducibility level);
    Term nf(const Term& t, std::optional<Reducibility> delta);
    bool defEq(const Term& a, const Term& b, Reducibility level);
    bool lazyDelta(Term a, Term b, Reducibility level);
    bool argsDefEq(const Term& a, const Term& b, Reducibility level);
    Term ensurePi(const Term& t);
    Level ensureSort(const Term& t, const Term& origin);

    const Environment& env_;
    KernelConfig cfg_;
    std::uint64_t steps_ = 0;
    int depth_ = 0;
    bool exhausted_ = false;
};

// Free-function forms.
Term inferType(const Environment& env, const Context& ctx, const Term& t);
Term whnf(const Environment& env, const Term& t, Reducibility unfoldLevel = Reducibility::Default);
Term normalize(const Environment& env, const Term& t);
bool isDefEq(const Environment& env, const Context& ctx, const Term& a, const Term& b);

}  // namespace lapc
