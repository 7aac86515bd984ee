#include "lapc/logic.hpp"

#include <stdexcept>

namespace lapc {

namespace {

Term U0() { return Term::sort(0); }
Term fv(const char* n) { return Term::fvar(n); }

// ∀ r:U0. (p → q → r) → r
Term andBody(const Term& p, const Term& q) {
    Term r = fv("r");
    return mkPiFVars({{"r", U0()}}, mkImp(mkImp(p, mkImp(q, r)), r));
}

// ∀ r:U0. (p → r) → (q → r) → r
Term orBody(const Term& p, const Term& q) {
    Term r = fv("r");
    return mkPiFVars({{"r", U0()}}, mkImp(mkImp(p, r), mkImp(mkImp(q, r), r)));
}

Term iffBody(const Term& p, const Term& q) { return andBody(mkImp(p, q), mkImp(q, p)); }

Level need(std::optional<Level> l, const char* what) {
    if (!l) throw std::invalid_argument(std::string(what) + " needs a universe level");
    return *l;
}

}  // namespace

Term mkBotTerm() { return Term::pi("p", U0(), Term::bvar(0)); }

Term mkImp(const Term& p, const Term& q) { return mkArrow(p, q); }

Term logicalSymbol(LogicalSymbol which, std::optional<Level> level) {
    Term p = fv("p"), q = fv("q");
    switch (which) {
        case LogicalSymbol::Bot:
            return mkBotTerm();
        case LogicalSymbol::Not:
            return mkLambdaFVars({{"p", U0()}}, mkImp(p, mkBotTerm()));
        case LogicalSymbol::And:
            return mkLambdaFVars({{"p", U0()}, {"q", U0()}}, andBody(p, q));
        case LogicalSymbol::Or:
            return mkLambdaFVars({{"p", U0()}, {"q", U0()}}, orBody(p, q));
        case LogicalSymbol::Iff:
            return mkLambdaFVars({{"p", U0()}, {"q", U0()}}, iffBody(p, q));
        case LogicalSymbol::Eq: {
            Level l = need(level, "Eq");
            Term a = fv("α"), x = fv("x"), y = fv("y"), pr = fv("p");
            Term body = mkPiFVars({{"p", mkArrow(a, U0())}},
                                  iffBody(Term::app(pr, x), Term::app(pr, y)));
            return mkLambdaFVars({{"α", Term::sort(l)}, {"x", a}, {"y", a}}, body);
        }
        case LogicalSymbol::Exists: {
            Level l = need(level, "Exists");
            Term a = fv("α"), pr = fv("p"), qq = fv("q"), x = fv("x");
            Term inner = mkPiFVars({{"x", a}}, mkImp(Term::app(pr, x), qq));
            Term body = mkPiFVars({{"q", U0()}}, mkImp(inner, qq));
            return mkLambdaFVars({{"α", Term::sort(l)}, {"p", mkArrow(a, U0())}}, body);
        }
    }
    throw std::invalid_argument("unknown logical symbol");
}

Term logicalSymbolType(LogicalSymbol which, std::optional<Level> level) {
    switch (which) {
        case LogicalSymbol::Bot:
            return U0();
        case LogicalSymbol::Not:
            return mkArrow(U0(), U0());
        case LogicalSymbol::And:
        case LogicalSymbol::Or:
        case LogicalSymbol::Iff:
            return mkArrow(U0(), mkArrow(U0(), U0()));
        case LogicalSymbol::Eq: {
            Level l = need(level, "Eq");
            Term a = fv("α");
            return mkPiFVars({{"α", Term::sort(l)}}, mkArrow(a, mkArrow(a, U0())));
        }
        case LogicalSymbol::Exists: {
            Level l = need(level, "Exists");
            Term a = fv("α");
            return mkPiFVars({{"α", Term::sort(l)}}, mkArrow(mkArrow(a, U0()), U0()));
        }
    }
    throw std::invalid_argument("unknown logical symbol");
}

}  // namespace lapc
