#pragma once

// Shared by the TH0 and SMT printers: an application spine classified by
// what its head means in the target.

#include <map>
#include <string>
#include <vector>

#include "lapc/emit.hpp"

namespace lapc::emitdetail {

enum class Head { Bot, Imp, Not, And, Or, Iff, Forall, Eq, Exists, Lam, Var };

struct Spine {
    Head head = Head::Var;
    HTerm fn;
    std::vector<HTerm> args;
    HTerm sort;  // Forall domain; Eq/Exists element type
};

class SpineView {
public:
    explicit SpineView(const EmitPlan& plan);

    // Redexes with a λ head are contracted until the head is something else
    // (or the spine has no arguments left).
    Spine view(HTerm t) const;

    // Argument count at which the head is fully applied. Var: number of
    // arrows in its declared or bound type.
    std::size_t arity(const Spine& s, const HTerm& varType = HTerm()) const;
    // Types of the arguments from position s.args.size() up to arity.
    std::vector<HTerm> missing(const Spine& s, const HTerm& varType = HTerm()) const;

    const PlanSymbol* symbol(const std::string& name) const {
        auto it = symbols_.find(name);
        return it == symbols_.end() ? nullptr : it->second;
    }

private:
    HTerm not_, and_, or_, iff_;
    std::map<std::string, const PlanSymbol*> symbols_;
};

std::vector<HTerm> argTypes(HTerm ty);
HTerm resultType(HTerm ty);

}  // namespace lapc::emitdetail
