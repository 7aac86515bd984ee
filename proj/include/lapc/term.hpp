#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lapc {

using Level = std::uint32_t;

// imax(m, n) = 0 when n = 0, otherwise max(m, n).
Level imax(Level m, Level n);

enum class TermKind : std::uint8_t { BVar, FVar, Const, Sort, App, Lam, Pi };
enum class BinderInfo : std::uint8_t { Default, Inst };

struct TermNode;

// Immutable λC expression. Bound variables are de Bruijn indices; binder names
// and binder info are display data and never affect equality or hashing.
class Term {
public:
    Term() = default;

    static Term bvar(std::uint32_t index);
    static Term fvar(const std::string& name);
    static Term constant(const std::string& name);
    static Term sort(Level level);
    static Term app(const Term& fn, const Term& arg);
    static Term lam(const std::string& name, const Term& type, const Term& body,
                    BinderInfo info = BinderInfo::Default);
    static Term pi(const std::string& name, const Term& type, const Term& body,
                   BinderInfo info = BinderInfo::Default);

    bool isNull() const { return !node_; }
    explicit operator bool() const { return node_ != nullptr; }

    TermKind kind() const;
    bool isBVar() const { return kind() == TermKind::BVar; }
    bool isFVar() const { return kind() == TermKind::FVar; }
    bool isConst() const { return kind() == TermKind::Const; }
    bool isSort() const { return kind() == TermKind::Sort; }
    bool isApp() const { return kind() == TermKind::App; }
    bool isLam() const { return kind() == TermKind::Lam; }
    bool isPi() const { return kind() == TermKind::Pi; }
    bool isBinder() const { return isLam() || isPi(); }

    std::uint32_t bvarIndex() const;
    const std::string& name() const;  // FVar / Const
    Level level() const;              // Sort
    const Term& fn() const;
    const Term& arg() const;
    const std::string& binderName() const;
    const Term& binderType() const;
    const Term& body() const;
    BinderInfo binderInfo() const;

    std::uint64_t hash() const;
    // One more than the largest loose de Bruijn index, 0 when closed.
    std::uint32_t looseBound() const;
    bool hasFVar() const;
    std::uint64_t size() const;

    bool samePtr(const Term& o) const { return node_ == o.node_; }
    // α-equality.
    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }

private:
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
    static Term binder(TermKind k, const std::string& name, const Term& type, const Term& body,
                       BinderInfo info);
    std::shared_ptr<const TermNode> node_;
};

struct TermNode {
    TermKind kind;
    BinderInfo info = BinderInfo::Default;
    std::uint32_t num = 0;  // bvar index or sort level
    std::string name;       // fvar/const name or binder name
    Term a, b;              // app fn/arg or binder type/body
    std::uint64_t hash = 0;
    std::uint64_t size = 1;
    std::uint32_t loose = 0;
    bool hasFVar = false;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return static_cast<std::size_t>(t.hash()); }
};

using Fingerprint = std::uint64_t;
Fingerprint fingerprint(const Term& t);

// Application spine helpers.
Term getAppFn(const Term& t);
std::vector<Term> getAppArgs(const Term& t);
Term mkAppN(const Term& fn, const std::vector<Term>& args);
Term mkArrow(const Term& dom, const Term& cod);
// Non-dependent Π: a Pi whose body does not mention its binder.
bool isArrow(const Term& t);

// de Bruijn plumbing.
Term liftLoose(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);
Term lowerLoose(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);
bool hasLooseBVar(const Term& t, std::uint32_t index);
// Replace loose BVar 0 of `body` by `value`.
Term instantiate(const Term& body, const Term& value);
// Replace FVar `name` by a bound variable, producing a body for a new binder.
Term abstractFVar(const Term& t, const std::string& name);
Term abstractFVars(const Term& t, const std::vector<std::string>& names);
Term mkLambdaFVars(const std::vector<std::pair<std::string, Term>>& binders, const Term& body);
Term mkPiFVars(const std::vector<std::pair<std::string, Term>>& binders, const Term& body);

std::set<std::string> freeVars(const Term& t);
bool occursFVar(const Term& t, const std::string& name);
std::set<std::string> constantsOf(const Term& t);
// Simultaneous replacement of free variables (σ̄); identity on sorts and
// constants, binders mapped to themselves.
Term substExtend(const std::map<std::string, Term>& sigma, const Term& t);
Term replaceConst(const Term& t, const std::string& name, const Term& value);

// Human-oriented rendering (∀, fun, →) used in messages, reports and comments.
std::string display(const Term& t);

}  // namespace lapc
