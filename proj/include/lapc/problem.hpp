#pragma once

#include <map>
#include <string>
#include <vector>

#include "lapc/environment.hpp"
#include "lapc/term.hpp"

namespace lapc {

struct Premise {
    std::string name;
    Term type;
};

struct Instructions {
    std::vector<std::string> unfold;  // u[f1, …, fn]
    std::vector<std::string> defeq;   // d[g1, …, gn]
};

// Γ ⊢? goal with named premises. Options come from set-option lines and
// are read by the pipeline.
struct Problem {
    std::string name;
    Environment env;
    Context ctx;
    std::vector<Premise> premises;
    Term goal;
    Instructions instructions;
    std::map<std::string, std::string> options;
    std::vector<std::string> warnings;
};

struct DatatypeInstance {
    std::string baseName;
    std::vector<Term> typeArgs;
    Term type;  // baseName typeArgs
    struct Ctor {
        std::string name;
        Term fn;  // ctor typeArgs
        std::vector<Term> argTypes;
    };
    std::vector<Ctor> constructors;
};

}  // namespace lapc
