#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lapc/depanalysis.hpp"
#include "lapc/hol.hpp"

namespace lapc {

// H: λC instances ↔ HOL* variables. Terms get v{n}, type instances t{n},
// numbered by first occurrence.
class AbstractionState {
public:
    struct Entry {
        Term term;         // λC instance
        std::string name;  // HOL* variable
        HTerm type;        // its HOL* type (U_l for type variables)
        Fingerprint key;   // fingerprint of the βη-normal form
    };

    DepOptions opts;

    const std::vector<Entry>& terms() const { return terms_; }
    const std::vector<Entry>& types() const { return types_; }
    bool empty() const { return terms_.empty() && types_.empty(); }
    const Entry* byName(const std::string& name) const;

    // Existing entry definitionally equal to t, if any. Candidates are those
    // whose βη-normal fingerprint matches, confirmed by isDefEq.
    const Entry* lookupTerm(TypeChecker& tc, const Term& t) const;
    const Entry* lookupType(TypeChecker& tc, const Term& t) const;
    const Entry& addTerm(TypeChecker& tc, const Term& t, const HTerm& type);
    const Entry& addType(TypeChecker& tc, const Term& t, Level level);

    std::string freshBound() { return "#b" + std::to_string(bound_++); }

private:
    std::vector<Entry> terms_, types_;
    std::unordered_map<Fingerprint, std::vector<std::size_t>> termIndex_, typeIndex_;
    std::size_t bound_ = 0;
};

// Requires qMono(ctx, B, t); otherwise NotQuasiMono naming the clause.
HTerm lamAbst(TypeChecker& tc, const Context& ctx, const NameSet& B, const Term& t, AbstractionState& st);
HTerm lamAbst(const Environment& env, const Context& ctx, const Term& t, AbstractionState& st);

std::string getLVarName(TypeChecker& tc, const Context& ctx, const Term& t, AbstractionState& st);
HTerm abstractType(TypeChecker& tc, const Context& ctx, const Term& s, AbstractionState& st);

struct Substitution {
    HContext holCtx;                     // Γ′
    Context lcCtx;                       // Γ
    std::map<std::string, Term> sigma;   // HOL* variable ↦ λC term
};

// Inverts the tables. SubstitutionIllFormed when some u : τ in π*(Γ′) has
// Γ ⊬ σ(u) : σ̄(π*(τ)).
Substitution extractSubstitution(TypeChecker& tc, const AbstractionState& st, const Context& ctx);
Substitution extractSubstitution(const Environment& env, const AbstractionState& st, const Context& ctx);

// σ̄(π*(h)) ≅ t
bool ehopWitness(TypeChecker& tc, const Substitution& s, const HTerm& h, const Term& t);

}  // namespace lapc
