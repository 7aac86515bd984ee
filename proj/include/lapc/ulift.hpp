#pragma once

#include "lapc/hol.hpp"
#include "lapc/typechecker.hpp"

namespace lapc {

// All operations need env.gliftEnabled(); otherwise ConfigError.
// s ranges over atoms and non-dependent arrows; a dependent Π is
// UnsupportedType. An atom a : U_l' is lifted to GLift.{l',l} a.
Term upType(TypeChecker& tc, const Context& ctx, const Term& s, Level l);
// Up_s : s → UpType s and Down_s : UpType s → s.
Term mkUp(TypeChecker& tc, const Context& ctx, const Term& s, Level l);
Term mkDown(TypeChecker& tc, const Context& ctx, const Term& s, Level l);

// Translation of a canonical-embedding term into the l-embedding. Free
// variables, constants and Π/sort subterms are atoms e : s and become
// Up_s e (bound variables inside an atom read through Down). LevelTooLow
// unless l exceeds every universe level met.
Term uliftTrans(TypeChecker& tc, const Context& ctx, const Term& t, Level l);
Term uliftTrans(const Environment& env, const Context& ctx, const Term& t, Level l);

// π_l = π* ∘ ρ_l
Term piL(Level l, const HTerm& t);

// Largest sort level in t or, transitively, in the types of its free variables.
Level maxLevel(const Context& ctx, const Term& t);

}  // namespace lapc
