#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lapc/term.hpp"

namespace lapc {

// Ordered: a constant unfolds at level L when its reducibility <= L.
enum class Reducibility : std::uint8_t { Reducible = 0, Default = 1, Opaque = 2 };

const char* toString(Reducibility r);

struct ConstantInfo {
    std::string name;
    Term type;
    std::optional<Term> value;
    Reducibility reducibility = Reducibility::Default;
    bool isTheorem = false;
    bool builtin = false;
    // Definition height: 0 for declarations, else 1 + max height of constants in the value.
    std::uint32_t height = 0;
};

struct LocalDecl {
    std::string name;
    Term type;
    BinderInfo info = BinderInfo::Default;
};

class Context {
public:
    Context() = default;

    const LocalDecl* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    void push(const std::string& name, const Term& type, BinderInfo info = BinderInfo::Default);
    Context extended(const std::string& name, const Term& type) const;
    // A name not yet declared in this context, derived from `base`.
    std::string freshName(const std::string& base) const;

    std::size_t size() const { return decls_.size(); }
    bool empty() const { return decls_.empty(); }
    const LocalDecl& operator[](std::size_t i) const { return decls_[i]; }
    const std::vector<LocalDecl>& decls() const { return decls_; }
    std::vector<LocalDecl>::const_iterator begin() const { return decls_.begin(); }
    std::vector<LocalDecl>::const_iterator end() const { return decls_.end(); }

private:
    std::vector<LocalDecl> decls_;
};

// Simple (non-nested, non-mutual, unindexed) inductive declaration kept as
// constructor-signature data; the type former and constructors are opaque
// constants in the environment.
struct InductiveDecl {
    std::string name;
    std::vector<std::pair<std::string, Term>> params;
    Level level = 1;
    struct Ctor {
        std::string name;
        Term type;  // ∀ params, args → name params
    };
    std::vector<Ctor> ctors;
};

class Environment {
public:
    Environment() = default;
    Environment(const Environment& o);
    Environment& operator=(const Environment& o);

    // User constants, then the builtin logical prelude (False, Not, And, Or,
    // Iff, Eq.{l}, Exists.{l}) and, once enabled, the GLift family.
    const ConstantInfo* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    // Adds without typechecking; computes height. Throws DuplicateName.
    void add(ConstantInfo info);
    void addInductive(InductiveDecl decl);
    const InductiveDecl* findInductive(const std::string& name) const;
    const std::vector<std::string>& order() const { return order_; }
    const std::map<std::string, InductiveDecl>& inductives() const { return inductives_; }

    void enableGLift() { glift_ = true; }
    bool gliftEnabled() const { return glift_; }

private:
    std::map<std::string, ConstantInfo> consts_;
    std::vector<std::string> order_;
    std::map<std::string, InductiveDecl> inductives_;
    bool glift_ = false;
    mutable std::mutex cacheMutex_;
    mutable std::map<std::string, std::unique_ptr<ConstantInfo>> builtinCache_;
};

// Builtin names. Leveled families are spelled Eq.{l}, Exists.{l},
// GLift.{u,v}, GLift.up.{u,v}, GLift.down.{u,v}.
std::string eqName(Level l);
std::string existsName(Level l);
std::string gliftName(Level u, Level v);
std::string gliftUpName(Level u, Level v);
std::string gliftDownName(Level u, Level v);

struct BuiltinName {
    std::string family;  // "False", "Not", "And", "Or", "Iff", "Eq", "Exists", "GLift", "GLift.up", "GLift.down"
    std::vector<Level> levels;
};
std::optional<BuiltinName> parseBuiltinName(const std::string& name);
bool isReservedName(const std::string& name);

// False, Not, And, Or, Iff: the connectives translated as logic, not as
// HOL* variables.
bool isConnectiveConst(const std::string& name);

}  // namespace lapc
