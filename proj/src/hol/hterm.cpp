#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lapc/hol.hpp"

namespace lapc {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix(h * 0x100000001b3ULL ^ mix(v)); }

}  // namespace

HTerm HTerm::make(HNode n) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(n.kind) + 0x484f4cULL);
    h = combine(h, n.num);
    if (n.kind == HKind::FVar) h = combine(h, std::hash<std::string>{}(n.name));
    n.size = 1;
    n.loose = n.kind == HKind::BVar ? n.num + 1 : 0;
    if (n.a) {
        h = combine(h, n.a.hash());
        n.size += n.a.size();
        n.loose = std::max(n.loose, n.a.looseBound());
    }
    if (n.b) {
        h = combine(h, n.b.hash());
        n.size += n.b.size();
        std::uint32_t lb = n.b.looseBound();
        if (n.kind == HKind::Lam) lb = lb > 0 ? lb - 1 : 0;
        n.loose = std::max(n.loose, lb);
    }
    n.hash = h;
    return HTerm(std::make_shared<const HNode>(std::move(n)));
}

HTerm HTerm::bvar(std::uint32_t i) { return make({HKind::BVar, i, {}, {}, {}}); }
HTerm HTerm::fvar(const std::string& name) { return make({HKind::FVar, 0, name, {}, {}}); }
HTerm HTerm::sortU(Level l) { return make({HKind::SortU, l, {}, {}, {}}); }
HTerm HTerm::sortUPrime(Level l) { return make({HKind::SortUPrime, l, {}, {}, {}}); }
HTerm HTerm::boolean() { return make({HKind::Bool, 0, {}, {}, {}}); }
HTerm HTerm::bot() { return make({HKind::Bot, 0, {}, {}, {}}); }
HTerm HTerm::imp() { return make({HKind::Imp, 0, {}, {}, {}}); }

HTerm HTerm::forall(const HTerm& s) {
    if (!s) throw std::invalid_argument("HTerm::forall on null sort");
    return make({HKind::Forall, 0, {}, s, {}});
}

HTerm HTerm::app(const HTerm& f, const HTerm& a) {
    if (!f || !a) throw std::invalid_argument("HTerm::app on null term");
    return make({HKind::App, 0, {}, f, a});
}

HTerm HTerm::lam(const std::string& name, const HTerm& type, const HTerm& body) {
    if (!type || !body) throw std::invalid_argument("HTerm::lam on null term");
    return make({HKind::Lam, 0, name, type, body});
}

HTerm HTerm::arrow(const HTerm& dom, const HTerm& cod) {
    if (!dom || !cod) throw std::invalid_argument("HTerm::arrow on null term");
    return make({HKind::Arrow, 0, {}, dom, cod});
}

HKind HTerm::kind() const { return node_->kind; }
std::uint32_t HTerm::index() const { return node_->num; }
const std::string& HTerm::name() const { return node_->name; }
Level HTerm::level() const { return node_->num; }
const HTerm& HTerm::fn() const { return node_->a; }
const HTerm& HTerm::arg() const { return node_->b; }
const HTerm& HTerm::sort() const { return node_->a; }
const HTerm& HTerm::binderType() const { return node_->a; }
const HTerm& HTerm::body() const { return node_->b; }
const HTerm& HTerm::dom() const { return node_->a; }
const HTerm& HTerm::cod() const { return node_->b; }
std::uint64_t HTerm::hash() const { return node_ ? node_->hash : 0; }
std::uint32_t HTerm::looseBound() const { return node_ ? node_->loose : 0; }
std::uint64_t HTerm::size() const { return node_ ? node_->size : 0; }

bool HTerm::operator==(const HTerm& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash || node_->kind != o.node_->kind || node_->num != o.node_->num) return false;
    if (node_->kind == HKind::FVar && node_->name != o.node_->name) return false;
    return node_->a == o.node_->a && node_->b == o.node_->b;
}

// ---------------------------------------------------------------------------

HTerm hGetAppFn(const HTerm& t) {
    HTerm r = t;
    while (r.is(HKind::App)) r = r.fn();
    return r;
}

std::vector<HTerm> hGetAppArgs(const HTerm& t) {
    std::vector<HTerm> args;
    HTerm r = t;
    while (r.is(HKind::App)) {
        args.push_back(r.arg());
        r = r.fn();
    }
    std::reverse(args.begin(), args.end());
    return args;
}

HTerm hMkAppN(const HTerm& f, const std::vector<HTerm>& args) {
    HTerm r = f;
    for (const auto& a : args) r = HTerm::app(r, a);
    return r;
}

HTerm hImp(const HTerm& p, const HTerm& q) { return HTerm::app(HTerm::app(HTerm::imp(), p), q); }

HTerm hLamF(const std::string& x, const HTerm& s, const HTerm& body) {
    return HTerm::lam(x, s, hAbstract(body, x));
}

HTerm hForallLam(const std::string& x, const HTerm& s, const HTerm& body) {
    return HTerm::app(HTerm::forall(s), hLamF(x, s, body));
}

namespace {

// Replace loose index `depth` by `value` (closed w.r.t. bound vars) and lower the rest.
HTerm instAt(const HTerm& t, std::uint32_t depth, const HTerm& value) {
    if (t.looseBound() <= depth) return t;
    switch (t.kind()) {
        case HKind::BVar:
            if (t.index() == depth) return value;
            return t.index() > depth ? HTerm::bvar(t.index() - 1) : t;
        case HKind::App:
            return HTerm::app(instAt(t.fn(), depth, value), instAt(t.arg(), depth, value));
        case HKind::Lam:
            return HTerm::lam(t.name(), instAt(t.binderType(), depth, value), instAt(t.body(), depth + 1, value));
        case HKind::Arrow:
            return HTerm::arrow(instAt(t.dom(), depth, value), instAt(t.cod(), depth, value));
        case HKind::Forall:
            return HTerm::forall(instAt(t.sort(), depth, value));
        default:
            return t;
    }
}

HTerm abstractAt(const HTerm& t, std::uint32_t depth, const std::string& name) {
    switch (t.kind()) {
        case HKind::FVar:
            return t.name() == name ? HTerm::bvar(depth) : t;
        case HKind::App:
            return HTerm::app(abstractAt(t.fn(), depth, name), abstractAt(t.arg(), depth, name));
        case HKind::Lam:
            return HTerm::lam(t.name(), abstractAt(t.binderType(), depth, name), abstractAt(t.body(), depth + 1, name));
        case HKind::Arrow:
            return HTerm::arrow(abstractAt(t.dom(), depth, name), abstractAt(t.cod(), depth, name));
        case HKind::Forall:
            return HTerm::forall(abstractAt(t.sort(), depth, name));
        default:
            return t;
    }
}

}  // namespace

// HOL values substituted here never carry loose bound variables, so no lifting.
HTerm hInstantiate(const HTerm& body, const HTerm& value) { return instAt(body, 0, value); }

HTerm hAbstract(const HTerm& t, const std::string& name) { return abstractAt(t, 0, name); }

HTerm hSubst(const HTerm& t, const std::string& name, const HTerm& value) {
    return hInstantiate(hAbstract(t, name), value);
}

std::set<std::string> hFreeVars(const HTerm& t) {
    std::set<std::string> out;
    std::function<void(const HTerm&)> go = [&](const HTerm& u) {
        switch (u.kind()) {
            case HKind::FVar:
                out.insert(u.name());
                break;
            case HKind::App:
            case HKind::Lam:
            case HKind::Arrow:
                go(u.fn());
                go(u.arg());
                break;
            case HKind::Forall:
                go(u.sort());
                break;
            default:
                break;
        }
    };
    go(t);
    return out;
}

namespace {

void disp(std::ostream& os, const HTerm& t, std::vector<std::string>& names, int prec);

void dispArgs(std::ostream& os, const HTerm& t, std::vector<std::string>& names) {
    HTerm head = hGetAppFn(t);
    auto args = hGetAppArgs(t);
    if (head.is(HKind::Imp) && args.size() == 2) {
        disp(os, args[0], names, 2);
        os << " →′ ";
        disp(os, args[1], names, 1);
        return;
    }
    if (head.is(HKind::Forall) && args.size() == 1 && args[0].is(HKind::Lam)) {
        const HTerm& l = args[0];
        os << "∀′ (" << l.name() << " : ";
        disp(os, l.binderType(), names, 0);
        os << "), ";
        names.push_back(l.name());
        disp(os, l.body(), names, 0);
        names.pop_back();
        return;
    }
    disp(os, head, names, 3);
    for (const auto& a : args) {
        os << ' ';
        disp(os, a, names, 4);
    }
}

void disp(std::ostream& os, const HTerm& t, std::vector<std::string>& names, int prec) {
    switch (t.kind()) {
        case HKind::BVar:
            if (t.index() < names.size())
                os << names[names.size() - 1 - t.index()];
            else
                os << "#" << t.index();
            return;
        case HKind::FVar:
            os << t.name();
            return;
        case HKind::SortU:
            os << "U" << t.level();
            return;
        case HKind::SortUPrime:
            os << "U" << t.level() << "′";
            return;
        case HKind::Bool:
            os << "Bool";
            return;
        case HKind::Bot:
            os << "⊥′";
            return;
        case HKind::Imp:
            os << "(→′)";
            return;
        case HKind::Forall:
            os << "∀′[";
            disp(os, t.sort(), names, 0);
            os << "]";
            return;
        case HKind::App: {
            HTerm head = hGetAppFn(t);
            auto args = hGetAppArgs(t);
            bool infix = (head.is(HKind::Imp) && args.size() == 2) ||
                         (head.is(HKind::Forall) && args.size() == 1 && args[0].is(HKind::Lam));
            int my = infix ? (head.is(HKind::Imp) ? 1 : 0) : 3;
            if (prec > my) os << "(";
            dispArgs(os, t, names);
            if (prec > my) os << ")";
            return;
        }
        case HKind::Lam:
            if (prec > 0) os << "(";
            os << "λ (" << t.name() << " : ";
            disp(os, t.binderType(), names, 0);
            os << "), ";
            names.push_back(t.name());
            disp(os, t.body(), names, 0);
            names.pop_back();
            if (prec > 0) os << ")";
            return;
        case HKind::Arrow:
            if (prec > 1) os << "(";
            disp(os, t.dom(), names, 2);
            os << " → ";
            disp(os, t.cod(), names, 1);
            if (prec > 1) os << ")";
            return;
    }
}

}  // namespace

std::string hDisplay(const HTerm& t) {
    if (!t) return "<null>";
    std::ostringstream os;
    std::vector<std::string> names;
    disp(os, t, names, 0);
    return os.str();
}

const HDecl* HContext::find(const std::string& name) const {
    for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
        if (it->name == name) return &*it;
    return nullptr;
}

std::string HContext::freshName(const std::string& base) const {
    if (!find(base)) return base;
    for (std::size_t i = 1;; ++i) {
        std::string c = base + "_" + std::to_string(i);
        if (!find(c)) return c;
    }
}

}  // namespace lapc
