#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lapc/error.hpp"
#include "lapc/frontend.hpp"

namespace lapc {

namespace {

bool validIdent(const std::string& s) {
    if (s.empty() || s == "_") return false;
    for (char c : s)
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == ';' || c == ':' || c == ' ' || c == '\t' ||
            c == '\n' || c == '\r')
            return false;
    try {
        Expr e = parseExpr(s);
        return e.kind == Expr::Kind::Ident;
    } catch (const Error&) {
        return false;
    }
}

void printExpr(std::ostream& os, const Expr& e, bool uni);

void printBinder(std::ostream& os, const Binder& b, bool uni) {
    os << (b.inst ? '[' : '(');
    for (const auto& n : b.names) os << n << ' ';
    os << ": ";
    printExpr(os, b.type(), uni);
    os << (b.inst ? ']' : ')');
}

void printExpr(std::ostream& os, const Expr& e, bool uni) {
    switch (e.kind) {
        case Expr::Kind::Ident:
            os << e.name;
            return;
        case Expr::Kind::Sort:
            os << 'U' << e.level;
            return;
        case Expr::Kind::App:
        case Expr::Kind::Arrow: {
            os << '(';
            if (e.kind == Expr::Kind::Arrow) os << (uni ? "→ " : "-> ");
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) os << ' ';
                printExpr(os, e.args[i], uni);
            }
            os << ')';
            return;
        }
        case Expr::Kind::Forall:
        case Expr::Kind::Fun:
            os << '(' << (e.kind == Expr::Kind::Forall ? (uni ? "∀" : "forall") : (uni ? "λ" : "fun"));
            for (const auto& b : e.binders) {
                os << ' ';
                printBinder(os, b, uni);
            }
            os << ' ';
            printExpr(os, e.args.front(), uni);
            os << ')';
            return;
    }
}

Expr ident(const std::string& n) {
    Expr e;
    e.name = n;
    return e;
}

// Term → surface syntax: merged binder groups, n-ary arrows, flattened spines.
struct Resugar {
    std::set<std::string> avoid;
    std::vector<std::string> names;

    std::string pick(const std::string& base0) {
        std::string base = validIdent(base0) ? base0 : "x";
        auto taken = [&](const std::string& s) {
            if (avoid.count(s)) return true;
            for (const auto& n : names)
                if (n == s) return true;
            return false;
        };
        if (!taken(base)) return base;
        for (std::size_t i = 1;; ++i) {
            std::string s = base + std::to_string(i);
            if (!taken(s)) return s;
        }
    }

    Expr go(const Term& t) {
        switch (t.kind()) {
            case TermKind::BVar: {
                std::uint32_t i = t.bvarIndex();
                return ident(i < names.size() ? names[names.size() - 1 - i] : "#" + std::to_string(i));
            }
            case TermKind::FVar:
            case TermKind::Const:
                return ident(t.name());
            case TermKind::Sort: {
                Expr e;
                e.kind = Expr::Kind::Sort;
                e.level = t.level();
                return e;
            }
            case TermKind::App: {
                Expr e;
                e.kind = Expr::Kind::App;
                e.args.push_back(go(getAppFn(t)));
                for (const auto& a : getAppArgs(t)) e.args.push_back(go(a));
                return e;
            }
            case TermKind::Pi:
                if (isArrow(t)) {
                    Expr e;
                    e.kind = Expr::Kind::Arrow;
                    Term cur = t;
                    while (isArrow(cur)) {
                        e.args.push_back(go(cur.binderType()));
                        cur = lowerLoose(cur.body(), 1);
                    }
                    e.args.push_back(go(cur));
                    return e;
                }
                return binders(t);
            case TermKind::Lam:
                return binders(t);
        }
        return {};
    }

    Expr binders(const Term& t) {
        bool pi = t.isPi();
        Expr e;
        e.kind = pi ? Expr::Kind::Forall : Expr::Kind::Fun;
        std::size_t mark = names.size();
        Term cur = t;
        auto same = [&](const Term& c) { return pi ? c.isPi() && !isArrow(c) : c.isLam(); };
        while (same(cur)) {
            Binder b;
            b.inst = cur.binderInfo() == BinderInfo::Inst;
            Term ty0 = cur.binderType();
            b.typeBox.push_back(go(ty0));
            std::uint32_t k = 0;
            do {
                std::string n = pick(cur.binderName());
                b.names.push_back(n);
                names.push_back(n);
                cur = cur.body();
                ++k;
            } while (same(cur) && (cur.binderInfo() == BinderInfo::Inst) == b.inst &&
                     cur.binderType() == liftLoose(ty0, k));
            e.binders.push_back(std::move(b));
        }
        e.args.push_back(go(cur));
        names.resize(mark);
        return e;
    }
};

void collectNames(const Term& t, std::set<std::string>& out) {
    for (const auto& n : freeVars(t)) out.insert(n);
    for (const auto& n : constantsOf(t)) out.insert(n);
}

Expr resugar(const Term& t, std::set<std::string> avoid = {}, std::vector<std::string> names = {}) {
    collectNames(t, avoid);
    Resugar r{std::move(avoid), std::move(names)};
    return r.go(t);
}

std::string str(const Expr& e) {
    std::ostringstream os;
    printExpr(os, e, false);
    return os.str();
}

void printDecl(std::ostream& os, const Decl& d) {
    switch (d.kind) {
        case Decl::Kind::Axiom:
            os << "(axiom " << d.name << ' ' << str(d.exprs[0]) << ')';
            break;
        case Decl::Kind::Def:
            os << "(def " << d.name << ' ' << str(d.exprs[0]) << "\n  " << str(d.exprs[1]);
            if (!d.attr.empty()) os << ' ' << d.attr;
            os << ')';
            break;
        case Decl::Kind::Var:
            os << "(var";
            for (const auto& b : d.binders) {
                os << ' ';
                printBinder(os, b, false);
            }
            os << ')';
            break;
        case Decl::Kind::Inductive:
            os << "(inductive " << d.name;
            for (const auto& b : d.binders) {
                os << ' ';
                printBinder(os, b, false);
            }
            os << " : " << str(d.exprs[0]);
            for (const auto& c : d.ctors) os << "\n  (" << c.name << " : " << str(c.type) << ')';
            os << ')';
            break;
        case Decl::Kind::Mutual:
            os << "(mutual";
            for (const auto& m : d.block) {
                os << "\n  ";
                printDecl(os, m);
            }
            os << ')';
            break;
        case Decl::Kind::Premise:
            os << "(premise " << d.name << ' ' << str(d.exprs[0]) << ')';
            break;
        case Decl::Kind::Goal:
            os << "(goal " << str(d.exprs[0]) << ')';
            break;
        case Decl::Kind::Unfold:
        case Decl::Kind::Defeq:
            os << (d.kind == Decl::Kind::Unfold ? "(unfold" : "(defeq");
            for (const auto& n : d.names) os << ' ' << n;
            os << ')';
            break;
        case Decl::Kind::Option:
            os << "(set-option " << d.name << ' ' << d.attr << ')';
            break;
    }
}

// hterm display with binder names recovered from the λ nodes
struct HPrinter {
    std::vector<std::string> names;
    std::ostringstream os;

    void go(const HTerm& t) {
        switch (t.kind()) {
            case HKind::BVar: {
                std::uint32_t i = t.index();
                os << (i < names.size() ? names[names.size() - 1 - i] : "#" + std::to_string(i));
                return;
            }
            case HKind::FVar:
                os << t.name();
                return;
            case HKind::SortU:
                os << 'U' << t.level();
                return;
            case HKind::SortUPrime:
                os << "U'" << t.level();
                return;
            case HKind::Bool:
                os << "Bool";
                return;
            case HKind::Bot:
                os << "bot";
                return;
            case HKind::Imp:
                os << "imp";
                return;
            case HKind::Forall:
                os << "(forall' ";
                go(t.sort());
                os << ')';
                return;
            case HKind::App: {
                os << '(';
                go(hGetAppFn(t));
                for (const auto& a : hGetAppArgs(t)) {
                    os << ' ';
                    go(a);
                }
                os << ')';
                return;
            }
            case HKind::Lam: {
                std::string n = t.name().empty() ? "x" : t.name();
                for (std::size_t k = 1; std::find(names.begin(), names.end(), n) != names.end(); ++k)
                    n = t.name() + std::to_string(k);
                os << "(fun (" << n << " : ";
                go(t.binderType());
                os << ") ";
                names.push_back(n);
                go(t.body());
                names.pop_back();
                os << ')';
                return;
            }
            case HKind::Arrow: {
                os << "(->";
                HTerm cur = t;
                while (cur.is(HKind::Arrow)) {
                    os << ' ';
                    go(cur.dom());
                    cur = cur.cod();
                }
                os << ' ';
                go(cur);
                os << ')';
                return;
            }
        }
    }
};

}  // namespace

std::string prettyPrint(const Term& t, PrintOptions opts) {
    std::ostringstream os;
    printExpr(os, resugar(t), opts.unicode);
    return os.str();
}

std::string prettyPrint(const HTerm& t) {
    HPrinter p;
    p.go(t);
    return p.os.str();
}

std::string printSource(const SourceFile& sf) {
    std::ostringstream os;
    for (const auto& d : sf.declarations) {
        printDecl(os, d);
        os << '\n';
    }
    return os.str();
}

std::string printProblem(const Problem& p) {
    std::ostringstream os;
    for (const auto& [k, v] : p.options) os << "(set-option " << k << ' ' << v << ")\n";
    std::set<std::string> ctorNames;
    for (const auto& [n, d] : p.env.inductives())
        for (const auto& c : d.ctors) ctorNames.insert(c.name);
    std::set<std::string> globals;
    for (const auto& n : p.env.order()) globals.insert(n);
    for (const auto& d : p.ctx) globals.insert(d.name);

    // definitions reaching forward (or to themselves) go out as one mutual block,
    // placed at its last member
    const auto& order = p.env.order();
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::set<std::string> block;
    {
        for (std::size_t i = 0; i < order.size(); ++i) {
            const ConstantInfo* ci = p.env.find(order[i]);
            if (!ci->value) continue;
            for (const auto& c : constantsOf(*ci->value)) {
                auto it = pos.find(c);
                if (it == pos.end() || it->second < i) continue;
                block.insert(order[i]);
                block.insert(c);
            }
        }
    }
    std::size_t lastMember = 0;
    for (const auto& b : block) lastMember = std::max(lastMember, pos[b]);
    auto defDecl = [&](const std::string& n, const ConstantInfo* ci) {
        Decl d;
        d.kind = Decl::Kind::Def;
        d.name = n;
        d.exprs = {resugar(ci->type, globals), resugar(*ci->value, globals)};
        if (ci->reducibility != Reducibility::Default) d.attr = toString(ci->reducibility);
        return d;
    };

    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const std::string& n = order[idx];
        if (ctorNames.count(n)) continue;
        const ConstantInfo* ci = p.env.find(n);
        if (block.count(n)) {
            if (idx != lastMember) continue;
            Decl m;
            m.kind = Decl::Kind::Mutual;
            for (const auto& o : order)
                if (block.count(o)) m.block.push_back(defDecl(o, p.env.find(o)));
            printDecl(os, m);
            os << '\n';
            continue;
        }
        if (const InductiveDecl* ind = p.env.findInductive(n)) {
            Decl d;
            d.kind = Decl::Kind::Inductive;
            d.name = n;
            Term ft = ci->type;
            std::vector<std::string> pnames;
            Resugar r{globals, {}};
            std::vector<std::pair<std::string, Term>> opened;
            for (std::size_t i = 0; i < ind->params.size(); ++i) {
                Binder b;
                b.typeBox.push_back(r.go(ft.binderType()));
                std::string pn = r.pick(ft.binderName());
                b.names.push_back(pn);
                r.names.push_back(pn);
                d.binders.push_back(std::move(b));
                ft = ft.body();
            }
            d.exprs.push_back(r.go(ft));
            for (const auto& c : ind->ctors) {
                Term ct = c.type;
                for (std::size_t i = 0; i < ind->params.size(); ++i) ct = ct.body();
                d.ctors.push_back({c.name, r.go(ct)});
            }
            printDecl(os, d);
        } else if (ci->value) {
            printDecl(os, defDecl(n, ci));
        } else {
            os << "(axiom " << n << ' ' << str(resugar(ci->type, globals)) << ')';
        }
        os << '\n';
    }
    for (const auto& v : p.ctx) {
        Binder b;
        b.names.push_back(v.name);
        b.inst = v.info == BinderInfo::Inst;
        b.typeBox.push_back(resugar(v.type, globals));
        os << "(var ";
        printBinder(os, b, false);
        os << ")\n";
    }
    for (const auto& pr : p.premises) os << "(premise " << pr.name << ' ' << str(resugar(pr.type, globals)) << ")\n";
    if (!p.instructions.unfold.empty()) {
        os << "(unfold";
        for (const auto& n : p.instructions.unfold) os << ' ' << n;
        os << ")\n";
    }
    if (!p.instructions.defeq.empty()) {
        os << "(defeq";
        for (const auto& n : p.instructions.defeq) os << ' ' << n;
        os << ")\n";
    }
    if (p.goal) os << "(goal " << str(resugar(p.goal, globals)) << ")\n";
    return os.str();
}

}  // namespace lapc
