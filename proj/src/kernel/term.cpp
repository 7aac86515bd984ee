#include "lapc/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace lapc {

Level imax(Level m, Level n) { return n == 0 ? 0 : std::max(m, n); }

namespace {

constexpr std::uint64_t kSeed = 0x4c41504346505231ULL;  // "LAPCFPR1"

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix(h * 0x100000001b3ULL ^ mix(v)); }

std::uint64_t nameHash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t kindTag(TermKind k) { return mix(kSeed + static_cast<std::uint64_t>(k) + 1); }

}  // namespace

Term Term::bvar(std::uint32_t index) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::BVar;
    n->num = index;
    n->hash = combine(kindTag(n->kind), index);
    n->loose = index + 1;
    return Term(std::move(n));
}

Term Term::fvar(const std::string& name) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::FVar;
    n->name = name;
    n->hash = combine(kindTag(n->kind), nameHash(name));
    n->hasFVar = true;
    return Term(std::move(n));
}

Term Term::constant(const std::string& name) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Const;
    n->name = name;
    n->hash = combine(kindTag(n->kind), nameHash(name));
    return Term(std::move(n));
}

Term Term::sort(Level level) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Sort;
    n->num = level;
    n->hash = combine(kindTag(n->kind), level);
    return Term(std::move(n));
}

Term Term::app(const Term& fn, const Term& arg) {
    if (!fn || !arg) throw std::invalid_argument("Term::app on null term");
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::App;
    n->a = fn;
    n->b = arg;
    n->hash = combine(combine(kindTag(n->kind), fn.hash()), arg.hash());
    n->size = 1 + fn.size() + arg.size();
    n->loose = std::max(fn.looseBound(), arg.looseBound());
    n->hasFVar = fn.hasFVar() || arg.hasFVar();
    return Term(std::move(n));
}

Term Term::binder(TermKind k, const std::string& name, const Term& type, const Term& body,
                     BinderInfo info) {
    if (!type || !body) throw std::invalid_argument("binder on null term");
    auto n = std::make_shared<TermNode>();
    n->kind = k;
    n->info = info;
    n->name = name;
    n->a = type;
    n->b = body;
    n->hash = combine(combine(kindTag(k), type.hash()), body.hash());
    n->size = 1 + type.size() + body.size();
    std::uint32_t bl = body.looseBound();
    n->loose = std::max(type.looseBound(), bl > 0 ? bl - 1 : 0);
    n->hasFVar = type.hasFVar() || body.hasFVar();
    return Term(std::move(n));
}

Term Term::lam(const std::string& name, const Term& type, const Term& body, BinderInfo info) {
    return binder(TermKind::Lam, name, type, body, info);
}

Term Term::pi(const std::string& name, const Term& type, const Term& body, BinderInfo info) {
    return binder(TermKind::Pi, name, type, body, info);
}

TermKind Term::kind() const { return node_->kind; }
std::uint32_t Term::bvarIndex() const { return node_->num; }
const std::string& Term::name() const { return node_->name; }
Level Term::level() const { return node_->num; }
const Term& Term::fn() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const std::string& Term::binderName() const { return node_->name; }
const Term& Term::binderType() const { return node_->a; }
const Term& Term::body() const { return node_->b; }
BinderInfo Term::binderInfo() const { return node_->info; }
std::uint64_t Term::hash() const { return node_->hash; }
std::uint32_t Term::looseBound() const { return node_->loose; }
bool Term::hasFVar() const { return node_->hasFVar; }
std::uint64_t Term::size() const { return node_->size; }

bool Term::operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash || node_->kind != o.node_->kind) return false;
    switch (node_->kind) {
        case TermKind::BVar:
        case TermKind::Sort:
            return node_->num == o.node_->num;
        case TermKind::FVar:
        case TermKind::Const:
            return node_->name == o.node_->name;
        default:
            return node_->a == o.node_->a && node_->b == o.node_->b;
    }
}

Fingerprint fingerprint(const Term& t) { return t.hash(); }

Term getAppFn(const Term& t) {
    Term r = t;
    while (r.isApp()) r = r.fn();
    return r;
}

std::vector<Term> getAppArgs(const Term& t) {
    std::vector<Term> args;
    Term r = t;
    while (r.isApp()) {
        args.push_back(r.arg());
        r = r.fn();
    }
    std::reverse(args.begin(), args.end());
    return args;
}

Term mkAppN(const Term& fn, const std::vector<Term>& args) {
    Term r = fn;
    for (const auto& a : args) r = Term::app(r, a);
    return r;
}

Term mkArrow(const Term& dom, const Term& cod) { return Term::pi("_", dom, liftLoose(cod, 1)); }

bool isArrow(const Term& t) { return t.isPi() && !hasLooseBVar(t.body(), 0); }

Term liftLoose(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
    if (by == 0 || t.looseBound() <= cutoff) return t;
    switch (t.kind()) {
        case TermKind::BVar:
            return t.bvarIndex() >= cutoff ? Term::bvar(t.bvarIndex() + by) : t;
        case TermKind::App:
            return Term::app(liftLoose(t.fn(), by, cutoff), liftLoose(t.arg(), by, cutoff));
        case TermKind::Lam:
            return Term::lam(t.binderName(), liftLoose(t.binderType(), by, cutoff),
                             liftLoose(t.body(), by, cutoff + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), liftLoose(t.binderType(), by, cutoff),
                            liftLoose(t.body(), by, cutoff + 1), t.binderInfo());
        default:
            return t;
    }
}

Term lowerLoose(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
    if (by == 0 || t.looseBound() <= cutoff) return t;
    switch (t.kind()) {
        case TermKind::BVar:
            if (t.bvarIndex() < cutoff) return t;
            if (t.bvarIndex() < cutoff + by) throw std::logic_error("lowerLoose: variable in dropped range");
            return Term::bvar(t.bvarIndex() - by);
        case TermKind::App:
            return Term::app(lowerLoose(t.fn(), by, cutoff), lowerLoose(t.arg(), by, cutoff));
        case TermKind::Lam:
            return Term::lam(t.binderName(), lowerLoose(t.binderType(), by, cutoff),
                             lowerLoose(t.body(), by, cutoff + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), lowerLoose(t.binderType(), by, cutoff),
                            lowerLoose(t.body(), by, cutoff + 1), t.binderInfo());
        default:
            return t;
    }
}

bool hasLooseBVar(const Term& t, std::uint32_t index) {
    if (t.looseBound() <= index) return false;
    switch (t.kind()) {
        case TermKind::BVar:
            return t.bvarIndex() == index;
        case TermKind::App:
            return hasLooseBVar(t.fn(), index) || hasLooseBVar(t.arg(), index);
        case TermKind::Lam:
        case TermKind::Pi:
            return hasLooseBVar(t.binderType(), index) || hasLooseBVar(t.body(), index + 1);
        default:
            return false;
    }
}

static Term instantiateAt(const Term& t, const Term& value, std::uint32_t depth) {
    if (t.looseBound() <= depth) return t;
    switch (t.kind()) {
        case TermKind::BVar:
            if (t.bvarIndex() == depth) return liftLoose(value, depth);
            return Term::bvar(t.bvarIndex() - 1);
        case TermKind::App:
            return Term::app(instantiateAt(t.fn(), value, depth), instantiateAt(t.arg(), value, depth));
        case TermKind::Lam:
            return Term::lam(t.binderName(), instantiateAt(t.binderType(), value, depth),
                             instantiateAt(t.body(), value, depth + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), instantiateAt(t.binderType(), value, depth),
                            instantiateAt(t.body(), value, depth + 1), t.binderInfo());
        default:
            return t;
    }
}

Term instantiate(const Term& body, const Term& value) { return instantiateAt(body, value, 0); }

static Term abstractAt(const Term& t, const std::vector<std::string>& names, std::uint32_t depth) {
    if (!t.hasFVar()) return t;
    switch (t.kind()) {
        case TermKind::FVar: {
            // names.back() becomes index `depth`, names.front() the outermost.
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (names[names.size() - 1 - i] == t.name())
                    return Term::bvar(depth + static_cast<std::uint32_t>(i));
            }
            return t;
        }
        case TermKind::App:
            return Term::app(abstractAt(t.fn(), names, depth), abstractAt(t.arg(), names, depth));
        case TermKind::Lam:
            return Term::lam(t.binderName(), abstractAt(t.binderType(), names, depth),
                             abstractAt(t.body(), names, depth + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), abstractAt(t.binderType(), names, depth),
                            abstractAt(t.body(), names, depth + 1), t.binderInfo());
        default:
            return t;
    }
}

Term abstractFVar(const Term& t, const std::string& name) { return abstractAt(t, {name}, 0); }

Term abstractFVars(const Term& t, const std::vector<std::string>& names) { return abstractAt(t, names, 0); }

Term mkLambdaFVars(const std::vector<std::pair<std::string, Term>>& binders, const Term& body) {
    Term r = body;
    for (std::size_t i = binders.size(); i-- > 0;) {
        r = Term::lam(binders[i].first, binders[i].second, abstractFVar(r, binders[i].first));
    }
    return r;
}

Term mkPiFVars(const std::vector<std::pair<std::string, Term>>& binders, const Term& body) {
    Term r = body;
    for (std::size_t i = binders.size(); i-- > 0;) {
        r = Term::pi(binders[i].first, binders[i].second, abstractFVar(r, binders[i].first));
    }
    return r;
}

static void collectFVars(const Term& t, std::set<std::string>& out) {
    if (!t.hasFVar()) return;
    switch (t.kind()) {
        case TermKind::FVar:
            out.insert(t.name());
            break;
        case TermKind::App:
        case TermKind::Lam:
        case TermKind::Pi:
            collectFVars(t.isApp() ? t.fn() : t.binderType(), out);
            collectFVars(t.isApp() ? t.arg() : t.body(), out);
            break;
        default:
            break;
    }
}

std::set<std::string> freeVars(const Term& t) {
    std::set<std::string> out;
    collectFVars(t, out);
    return out;
}

bool occursFVar(const Term& t, const std::string& name) {
    if (!t.hasFVar()) return false;
    switch (t.kind()) {
        case TermKind::FVar:
            return t.name() == name;
        case TermKind::App:
            return occursFVar(t.fn(), name) || occursFVar(t.arg(), name);
        case TermKind::Lam:
        case TermKind::Pi:
            return occursFVar(t.binderType(), name) || occursFVar(t.body(), name);
        default:
            return false;
    }
}

static void collectConsts(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Const:
            out.insert(t.name());
            break;
        case TermKind::App:
            collectConsts(t.fn(), out);
            collectConsts(t.arg(), out);
            break;
        case TermKind::Lam:
        case TermKind::Pi:
            collectConsts(t.binderType(), out);
            collectConsts(t.body(), out);
            break;
        default:
            break;
    }
}

std::set<std::string> constantsOf(const Term& t) {
    std::set<std::string> out;
    collectConsts(t, out);
    return out;
}

static Term substAt(const std::map<std::string, Term>& sigma, const Term& t, std::uint32_t depth) {
    if (!t.hasFVar()) return t;
    switch (t.kind()) {
        case TermKind::FVar: {
            auto it = sigma.find(t.name());
            return it == sigma.end() ? t : liftLoose(it->second, depth);
        }
        case TermKind::App:
            return Term::app(substAt(sigma, t.fn(), depth), substAt(sigma, t.arg(), depth));
        case TermKind::Lam:
            return Term::lam(t.binderName(), substAt(sigma, t.binderType(), depth),
                             substAt(sigma, t.body(), depth + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), substAt(sigma, t.binderType(), depth),
                            substAt(sigma, t.body(), depth + 1), t.binderInfo());
        default:
            return t;
    }
}

Term substExtend(const std::map<std::string, Term>& sigma, const Term& t) {
    if (sigma.empty()) return t;
    return substAt(sigma, t, 0);
}

static Term replaceConstAt(const Term& t, const std::string& name, const Term& value, std::uint32_t depth) {
    switch (t.kind()) {
        case TermKind::Const:
            return t.name() == name ? liftLoose(value, depth) : t;
        case TermKind::App:
            return Term::app(replaceConstAt(t.fn(), name, value, depth),
                             replaceConstAt(t.arg(), name, value, depth));
        case TermKind::Lam:
            return Term::lam(t.binderName(), replaceConstAt(t.binderType(), name, value, depth),
                             replaceConstAt(t.body(), name, value, depth + 1), t.binderInfo());
        case TermKind::Pi:
            return Term::pi(t.binderName(), replaceConstAt(t.binderType(), name, value, depth),
                            replaceConstAt(t.body(), name, value, depth + 1), t.binderInfo());
        default:
            return t;
    }
}

Term replaceConst(const Term& t, const std::string& name, const Term& value) {
    return replaceConstAt(t, name, value, 0);
}

// ---------------------------------------------------------------------------
// display

namespace {

struct Displayer {
    std::vector<std::string> names;
    std::set<std::string> freeNames;

    std::string fresh(const std::string& base) {
        std::string b = (base.empty() || base == "_") ? "x" : base;
        std::string n = b;
        int k = 1;
        while (std::find(names.begin(), names.end(), n) != names.end() || freeNames.count(n))
            n = b + std::to_string(k++);
        return n;
    }

    static bool atomic(const Term& t) {
        return t.isBVar() || t.isFVar() || t.isConst() || t.isSort();
    }

    std::string paren(const Term& t) {
        std::string s = go(t);
        return atomic(t) ? s : "(" + s + ")";
    }

    std::string go(const Term& t) {
        switch (t.kind()) {
            case TermKind::BVar: {
                std::uint32_t i = t.bvarIndex();
                if (i < names.size()) return names[names.size() - 1 - i];
                return "#" + std::to_string(i - names.size());
            }
            case TermKind::FVar:
            case TermKind::Const:
                return t.name();
            case TermKind::Sort:
                return "U" + std::to_string(t.level());
            case TermKind::App: {
                std::string s = paren(getAppFn(t));
                for (const auto& a : getAppArgs(t)) s += " " + paren(a);
                return s;
            }
            case TermKind::Pi:
                if (isArrow(t)) {
                    std::string dom = t.binderType().isPi() || t.binderType().isLam()
                                          ? "(" + go(t.binderType()) + ")"
                                          : go(t.binderType());
                    names.push_back("_");
                    std::string cod = go(t.body());
                    names.pop_back();
                    return dom + " → " + cod;
                }
                return binders(t, "∀", ", ");
            case TermKind::Lam:
                return binders(t, "fun", " => ");
        }
        return "?";
    }

    // Merges consecutive binders of the same kind and type into one group.
    std::string binders(const Term& t, const char* head, const char* sep) {
        std::string out = head;
        Term cur = t;
        std::size_t pushed = 0;
        TermKind k = t.kind();
        while (cur.kind() == k && !(k == TermKind::Pi && isArrow(cur))) {
            Term ty = cur.binderType();
            BinderInfo info = cur.binderInfo();
            std::string tyStr = go(ty);
            std::vector<std::string> group;
            // Types are compared after accounting for the binders pushed in the group.
            while (cur.kind() == k && !(k == TermKind::Pi && isArrow(cur)) && cur.binderInfo() == info &&
                   cur.binderType() == liftLoose(ty, static_cast<std::uint32_t>(group.size()))) {
                std::string n = fresh(cur.binderName());
                names.push_back(n);
                ++pushed;
                group.push_back(n);
                cur = cur.body();
            }
            std::string g;
            for (const auto& n : group) g += (g.empty() ? "" : " ") + n;
            out += info == BinderInfo::Inst ? " [" + g + " : " + tyStr + "]" : " (" + g + " : " + tyStr + ")";
        }
        out += sep + go(cur);
        names.resize(names.size() - pushed);
        return out;
    }
};

}  // namespace

std::string display(const Term& t) {
    if (!t) return "<null>";
    Displayer d;
    d.freeNames = freeVars(t);
    return d.go(t);
}

}  // namespace lapc
