#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lapc/environment.hpp"
#include "lapc/term.hpp"

namespace lapc {

enum class HKind : std::uint8_t { BVar, FVar, SortU, SortUPrime, Bool, Bot, Imp, Forall, App, Lam, Arrow };

struct HNode;

// HOL / HOL* term. Function types use the Arrow form; there is no Π.
class HTerm {
public:
    HTerm() = default;

    static HTerm bvar(std::uint32_t i);
    static HTerm fvar(const std::string& name);
    static HTerm sortU(Level l);
    static HTerm sortUPrime(Level l);
    static HTerm boolean();
    static HTerm bot();
    static HTerm imp();
    static HTerm forall(const HTerm& s);
    static HTerm app(const HTerm& f, const HTerm& a);
    static HTerm lam(const std::string& name, const HTerm& type, const HTerm& body);
    static HTerm arrow(const HTerm& dom, const HTerm& cod);

    explicit operator bool() const { return node_ != nullptr; }
    HKind kind() const;
    bool is(HKind k) const { return node_ && kind() == k; }

    std::uint32_t index() const;
    const std::string& name() const;  // FVar name or Lam binder name
    Level level() const;
    const HTerm& fn() const;
    const HTerm& arg() const;
    const HTerm& sort() const;  // Forall
    const HTerm& binderType() const;
    const HTerm& body() const;
    const HTerm& dom() const;
    const HTerm& cod() const;

    std::uint64_t hash() const;
    std::uint32_t looseBound() const;
    std::uint64_t size() const;
    bool operator==(const HTerm& o) const;
    bool operator!=(const HTerm& o) const { return !(*this == o); }

private:
    explicit HTerm(std::shared_ptr<const HNode> n) : node_(std::move(n)) {}
    static HTerm make(HNode n);
    std::shared_ptr<const HNode> node_;
};

struct HNode {
    HKind kind;
    std::uint32_t num = 0;
    std::string name;
    HTerm a, b;
    std::uint64_t hash = 0;
    std::uint64_t size = 1;
    std::uint32_t loose = 0;
};

HTerm hGetAppFn(const HTerm& t);
std::vector<HTerm> hGetAppArgs(const HTerm& t);
HTerm hMkAppN(const HTerm& f, const std::vector<HTerm>& args);
HTerm hImp(const HTerm& p, const HTerm& q);          // p →′ q
HTerm hForallLam(const std::string& x, const HTerm& s, const HTerm& body);  // ∀′ₛ (λ x:s. body), body over FVar x
HTerm hLamF(const std::string& x, const HTerm& s, const HTerm& body);       // body over FVar x
HTerm hInstantiate(const HTerm& body, const HTerm& value);
HTerm hAbstract(const HTerm& t, const std::string& name);
HTerm hSubst(const HTerm& t, const std::string& name, const HTerm& value);
std::set<std::string> hFreeVars(const HTerm& t);
std::string hDisplay(const HTerm& t);

struct HDecl {
    std::string name;
    HTerm type;
};

class HContext {
public:
    const HDecl* find(const std::string& name) const;
    void push(const std::string& name, const HTerm& type) { decls_.push_back({name, type}); }
    std::string freshName(const std::string& base) const;
    std::size_t size() const { return decls_.size(); }
    bool empty() const { return decls_.empty(); }
    const std::vector<HDecl>& decls() const { return decls_; }
    std::vector<HDecl>::const_iterator begin() const { return decls_.begin(); }
    std::vector<HDecl>::const_iterator end() const { return decls_.end(); }

private:
    std::vector<HDecl> decls_;
};

enum class HMode { HOL, HOLStar };

HTerm holInferType(HMode mode, const HContext& ctx, const HTerm& t);
// Level ℓ with ctx ⊢ s : Uℓ.
Level holTypeLevel(HMode mode, const HContext& ctx, const HTerm& s);
// Each declared type is a well-formed type or sort under its prefix.
void holCheckContext(HMode mode, const HContext& ctx);

enum class HDerived { Not, And, Or, Iff, Eq, Exists };
HTerm holDerivedSymbol(HDerived which, const HTerm& s = HTerm());

HTerm rhoStar(const HTerm& t);
HContext rhoStar(const HContext& ctx);
HTerm rhoL(Level l, const HTerm& t);
HContext rhoL(Level l, const HContext& ctx);

struct PiStarOptions {
    // β-reduce the images of applied primitive logical symbols.
    bool reduceApplied = true;
};
Term piStar(const HTerm& t, PiStarOptions opts = {});
Context piStar(const HContext& ctx, PiStarOptions opts = {});

}  // namespace lapc
