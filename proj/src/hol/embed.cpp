#include "lapc/hol.hpp"

namespace lapc {

namespace {

Term botImage() { return Term::pi("α", Term::sort(0), Term::bvar(0)); }

// λ (p q : U0). p → q
Term impImage() {
    return Term::lam("p", Term::sort(0), Term::lam("q", Term::sort(0), mkArrow(Term::bvar(1), Term::bvar(0))));
}

// λ (p : S → U0). ∀ (x : S). p x
Term forallImage(const Term& s) {
    Term pty = mkArrow(s, Term::sort(0));
    Term body = Term::pi("x", liftLoose(s, 1), Term::app(Term::bvar(1), Term::bvar(0)));
    return Term::lam("p", pty, body);
}

Term betaHead(Term f, const std::vector<Term>& args) {
    std::size_t i = 0;
    while (f.isLam() && i < args.size()) f = instantiate(f.body(), args[i++]);
    for (; i < args.size(); ++i) f = Term::app(f, args[i]);
    return f;
}

struct Embed {
    PiStarOptions opts;

    Term go(const HTerm& t) {
        switch (t.kind()) {
            case HKind::BVar:
                return Term::bvar(t.index());
            case HKind::FVar:
                return Term::fvar(t.name());
            case HKind::SortU:
                return Term::sort(t.level());
            case HKind::SortUPrime:
                return Term::sort(t.level() + 1);
            case HKind::Bool:
                return Term::sort(0);
            case HKind::Bot:
                return botImage();
            case HKind::Imp:
                return impImage();
            case HKind::Forall:
                return forallImage(go(t.sort()));
            case HKind::Lam:
                return Term::lam(t.name(), go(t.binderType()), go(t.body()));
            case HKind::Arrow:
                return mkArrow(go(t.dom()), go(t.cod()));
            case HKind::App:
                return app(t);
        }
        return Term();
    }

    Term app(const HTerm& t) {
        HTerm head = hGetAppFn(t);
        std::vector<HTerm> hargs = hGetAppArgs(t);
        if (opts.reduceApplied && head.is(HKind::Forall) && hargs[0].is(HKind::Lam)) {
            // ∀′ₛ (λ x. b) reads as ∀ (x : π*(s)). π*(b)
            const HTerm& l = hargs[0];
            Term r = Term::pi(l.name(), go(head.sort()), go(l.body()));
            std::vector<Term> rest;
            for (std::size_t i = 1; i < hargs.size(); ++i) rest.push_back(go(hargs[i]));
            return mkAppN(r, rest);
        }
        std::vector<Term> args;
        args.reserve(hargs.size());
        for (const auto& a : hargs) args.push_back(go(a));
        bool logical = head.is(HKind::Imp) || head.is(HKind::Forall);
        if (opts.reduceApplied && logical) return betaHead(go(head), args);
        return mkAppN(go(head), args);
    }
};

}  // namespace

Term piStar(const HTerm& t, PiStarOptions opts) {
    Embed e{opts};
    return e.go(t);
}

Context piStar(const HContext& ctx, PiStarOptions opts) {
    Context out;
    for (const auto& d : ctx) out.push(d.name, piStar(d.type, opts));
    return out;
}

}  // namespace lapc
