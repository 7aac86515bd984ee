#include "lapc/environment.hpp"

#include <algorithm>

#include "lapc/error.hpp"
#include "lapc/logic.hpp"

namespace lapc {

const char* toString(Reducibility r) {
    switch (r) {
        case Reducibility::Reducible:
            return "reducible";
        case Reducibility::Default:
            return "default";
        case Reducibility::Opaque:
            return "opaque";
    }
    return "?";
}

const LocalDecl* Context::find(const std::string& name) const {
    for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
        if (it->name == name) return &*it;
    return nullptr;
}

void Context::push(const std::string& name, const Term& type, BinderInfo info) {
    decls_.push_back({name, type, info});
}

Context Context::extended(const std::string& name, const Term& type) const {
    Context c = *this;
    c.push(name, type);
    return c;
}

std::string Context::freshName(const std::string& base) const {
    std::string b = (base.empty() || base == "_") ? "x" : base;
    if (!contains(b)) return b;
    for (std::size_t k = decls_.size();; ++k) {
        std::string n = b + "_" + std::to_string(k);
        if (!contains(n)) return n;
    }
}

Environment::Environment(const Environment& o)
    : consts_(o.consts_), order_(o.order_), inductives_(o.inductives_), glift_(o.glift_) {}

Environment& Environment::operator=(const Environment& o) {
    if (this != &o) {
        consts_ = o.consts_;
        order_ = o.order_;
        inductives_ = o.inductives_;
        glift_ = o.glift_;
        std::lock_guard<std::mutex> lock(cacheMutex_);
        builtinCache_.clear();
    }
    return *this;
}

std::string eqName(Level l) { return "Eq.{" + std::to_string(l) + "}"; }
std::string existsName(Level l) { return "Exists.{" + std::to_string(l) + "}"; }
std::string gliftName(Level u, Level v) { return "GLift.{" + std::to_string(u) + "," + std::to_string(v) + "}"; }
std::string gliftUpName(Level u, Level v) {
    return "GLift.up.{" + std::to_string(u) + "," + std::to_string(v) + "}";
}
std::string gliftDownName(Level u, Level v) {
    return "GLift.down.{" + std::to_string(u) + "," + std::to_string(v) + "}";
}

std::optional<BuiltinName> parseBuiltinName(const std::string& name) {
    static const char* plain[] = {"False", "Not", "And", "Or", "Iff"};
    for (const char* p : plain)
        if (name == p) return BuiltinName{p, {}};
    auto brace = name.find(".{");
    if (brace == std::string::npos || name.back() != '}') return std::nullopt;
    std::string family = name.substr(0, brace);
    std::size_t want;
    if (family == "Eq" || family == "Exists")
        want = 1;
    else if (family == "GLift" || family == "GLift.up" || family == "GLift.down")
        want = 2;
    else
        return std::nullopt;
    std::string inner = name.substr(brace + 2, name.size() - brace - 3);
    std::vector<Level> levels;
    std::size_t pos = 0;
    while (pos <= inner.size()) {
        auto comma = inner.find(',', pos);
        std::string part = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (part.empty() || part.size() > 6 ||
            !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return std::nullopt;
        levels.push_back(static_cast<Level>(std::stoul(part)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (levels.size() != want) return std::nullopt;
    return BuiltinName{family, levels};
}

bool isReservedName(const std::string& name) {
    if (parseBuiltinName(name)) return true;
    return name == "Eq" || name == "Exists" || name.rfind("GLift", 0) == 0;
}

bool isConnectiveConst(const std::string& name) {
    return name == "False" || name == "Not" || name == "And" || name == "Or" || name == "Iff";
}

namespace {

std::unique_ptr<ConstantInfo> synthesize(const BuiltinName& b, const std::string& name, bool glift) {
    auto info = std::make_unique<ConstantInfo>();
    info->name = name;
    info->builtin = true;
    info->reducibility = Reducibility::Reducible;
    info->height = 1;
    auto setLogic = [&](LogicalSymbol s, std::optional<Level> l) {
        info->type = logicalSymbolType(s, l);
        info->value = logicalSymbol(s, l);
    };
    if (b.family == "False") setLogic(LogicalSymbol::Bot, std::nullopt);
    else if (b.family == "Not") setLogic(LogicalSymbol::Not, std::nullopt);
    else if (b.family == "And") setLogic(LogicalSymbol::And, std::nullopt);
    else if (b.family == "Or") setLogic(LogicalSymbol::Or, std::nullopt);
    else if (b.family == "Iff") setLogic(LogicalSymbol::Iff, std::nullopt);
    else if (b.family == "Eq") setLogic(LogicalSymbol::Eq, b.levels[0]);
    else if (b.family == "Exists") setLogic(LogicalSymbol::Exists, b.levels[0]);
    else {
        if (!glift) return nullptr;
        Level u = b.levels[0], v = b.levels[1];
        Term former = Term::constant(gliftName(u, v));
        Term a = Term::fvar("α");
        info->reducibility = Reducibility::Opaque;
        info->height = 0;
        if (b.family == "GLift")
            info->type = mkArrow(Term::sort(u), Term::sort(std::max(u, v + 1)));
        else if (b.family == "GLift.up")
            info->type = mkPiFVars({{"α", Term::sort(u)}}, mkArrow(a, Term::app(former, a)));
        else
            info->type = mkPiFVars({{"α", Term::sort(u)}}, mkArrow(Term::app(former, a), a));
    }
    return info;
}

std::uint32_t valueHeight(const Environment& env, const Term& value) {
    std::uint32_t h = 0;
    for (const auto& c : constantsOf(value)) {
        if (const ConstantInfo* ci = env.find(c)) h = std::max(h, ci->height);
    }
    return h + 1;
}

}  // namespace

const ConstantInfo* Environment::find(const std::string& name) const {
    auto it = consts_.find(name);
    if (it != consts_.end()) return &it->second;
    auto b = parseBuiltinName(name);
    if (!b) return nullptr;
    std::lock_guard<std::mutex> lock(cacheMutex_);
    auto cit = builtinCache_.find(name);
    if (cit != builtinCache_.end()) return cit->second.get();
    auto info = synthesize(*b, name, glift_);
    if (!info) return nullptr;
    const ConstantInfo* p = info.get();
    builtinCache_.emplace(name, std::move(info));
    return p;
}

void Environment::add(ConstantInfo info) {
    if (consts_.count(info.name) || isReservedName(info.name)) throw DuplicateName(info.name);
    info.height = info.value ? valueHeight(*this, *info.value) : 0;
    order_.push_back(info.name);
    std::string n = info.name;
    consts_.emplace(n, std::move(info));
}

void Environment::addInductive(InductiveDecl decl) {
    if (inductives_.count(decl.name)) throw DuplicateName(decl.name);
    std::string n = decl.name;
    inductives_.emplace(n, std::move(decl));
}

const InductiveDecl* Environment::findInductive(const std::string& name) const {
    auto it = inductives_.find(name);
    return it == inductives_.end() ? nullptr : &it->second;
}

}  // namespace lapc
