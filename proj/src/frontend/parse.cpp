#include <algorithm>
#include <charconv>

#include "lapc/error.hpp"
#include "lapc/frontend.hpp"

namespace lapc {

bool Expr::operator==(const Expr& o) const {
    if (kind != o.kind || name != o.name || level != o.level || args != o.args) return false;
    if (binders.size() != o.binders.size()) return false;
    for (std::size_t i = 0; i < binders.size(); ++i) {
        const Binder &a = binders[i], &b = o.binders[i];
        if (a.names != b.names || a.inst != b.inst || !(a.type() == b.type())) return false;
    }
    return true;
}

bool Decl::operator==(const Decl& o) const {
    if (kind != o.kind || name != o.name || exprs != o.exprs || attr != o.attr || names != o.names ||
        ctors != o.ctors || block != o.block || binders.size() != o.binders.size())
        return false;
    for (std::size_t i = 0; i < binders.size(); ++i) {
        const Binder &a = binders[i], &b = o.binders[i];
        if (a.names != b.names || a.inst != b.inst || !(a.type() == b.type())) return false;
    }
    return true;
}

namespace {

struct Node {
    enum class K { Atom, Colon, Paren, Bracket } k = K::Atom;
    std::string text;
    std::vector<Node> kids;
    std::size_t line = 0, col = 0;
};

class Reader {
public:
    explicit Reader(std::string_view s) : s_(s) {}

    std::vector<Node> readAll() {
        std::vector<Node> out;
        for (;;) {
            skip();
            if (pos_ >= s_.size()) return out;
            if (s_[pos_] == ')' || s_[pos_] == ']') throw ParseError(line_, col_, "command");
            out.push_back(read());
        }
    }

    // End position, for messages about missing declarations.
    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    static bool delim(char c) {
        return c == '(' || c == ')' || c == '[' || c == ']' || c == ';' || c == ':' || c == ' ' || c == '\t' ||
               c == '\n' || c == '\r';
    }

    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    Node read() {
        Node n;
        n.line = line_;
        n.col = col_;
        char c = s_[pos_];
        if (c == '(' || c == '[') {
            char close = c == '(' ? ')' : ']';
            n.k = c == '(' ? Node::K::Paren : Node::K::Bracket;
            advance();
            for (;;) {
                skip();
                if (pos_ >= s_.size()) throw ParseError(line_, col_, std::string("'") + close + "'");
                char d = s_[pos_];
                if (d == close) {
                    advance();
                    return n;
                }
                if (d == ')' || d == ']') throw ParseError(line_, col_, std::string("'") + close + "'");
                n.kids.push_back(read());
            }
        }
        if (c == ':') {
            n.k = Node::K::Colon;
            n.text = ":";
            advance();
            return n;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && !delim(s_[pos_])) advance();
        n.text = std::string(s_.substr(start, pos_ - start));
        return n;
    }

    std::string_view s_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

const std::vector<std::string>& reservedWords() {
    static const std::vector<std::string> w = {"forall", "∀", "Π", "fun", "λ", "->", "→", "Sort", "sort", "Prop", "Type"};
    return w;
}

bool isNumber(const std::string& s) { return !s.empty() && std::all_of(s.begin(), s.end(), ::isdigit); }

std::optional<Level> universeAtom(const std::string& s) {
    if (s == "Prop") return 0;
    if (s == "Type") return 1;
    if (s.size() >= 2 && s[0] == 'U' && isNumber(s.substr(1))) return static_cast<Level>(std::stoul(s.substr(1)));
    return std::nullopt;
}

bool isIdent(const Node& n) {
    if (n.k != Node::K::Atom || n.text.empty() || isNumber(n.text) || universeAtom(n.text)) return false;
    const auto& w = reservedWords();
    return std::find(w.begin(), w.end(), n.text) == w.end();
}

std::string ident(const Node& n) {
    if (!isIdent(n)) throw ParseError(n.line, n.col, "identifier");
    return n.text;
}

Level number(const Node& n) {
    if (n.k != Node::K::Atom || !isNumber(n.text)) throw ParseError(n.line, n.col, "universe level");
    Level l = 0;
    auto r = std::from_chars(n.text.data(), n.text.data() + n.text.size(), l);
    if (r.ec != std::errc()) throw ParseError(n.line, n.col, "universe level");
    return l;
}

bool isBinderKw(const std::string& s, bool& isPi) {
    isPi = s == "forall" || s == "∀" || s == "Π";
    return isPi || s == "fun" || s == "λ";
}

Expr expr(const Node& n);

Binder group(const Node& n) {
    if (n.k != Node::K::Paren && n.k != Node::K::Bracket) throw ParseError(n.line, n.col, "binder group");
    Binder b;
    b.inst = n.k == Node::K::Bracket;
    std::size_t i = 0;
    while (i < n.kids.size() && n.kids[i].k == Node::K::Atom) b.names.push_back(ident(n.kids[i++]));
    if (b.names.empty()) throw ParseError(n.line, n.col + 1, "binder name");
    if (i >= n.kids.size() || n.kids[i].k != Node::K::Colon) {
        const Node& at = i < n.kids.size() ? n.kids[i] : n;
        throw ParseError(at.line, at.col, "':'");
    }
    ++i;
    if (i >= n.kids.size()) throw ParseError(n.line, n.col, "binder type");
    if (i + 1 != n.kids.size()) throw ParseError(n.kids[i + 1].line, n.kids[i + 1].col, "')'");
    b.typeBox.push_back(expr(n.kids[i]));
    return b;
}

Expr expr(const Node& n) {
    Expr e;
    e.line = n.line;
    e.column = n.col;
    if (n.k == Node::K::Atom) {
        if (auto l = universeAtom(n.text)) {
            e.kind = Expr::Kind::Sort;
            e.level = *l;
            return e;
        }
        e.name = ident(n);
        return e;
    }
    if (n.k != Node::K::Paren) throw ParseError(n.line, n.col, "expression");
    if (n.kids.empty()) throw ParseError(n.line, n.col + 1, "expression");
    const Node& h = n.kids.front();
    bool isPi = false;
    if (h.k == Node::K::Atom && (h.text == "Sort" || h.text == "sort")) {
        if (n.kids.size() != 2) throw ParseError(n.line, n.col, "(Sort <level>)");
        e.kind = Expr::Kind::Sort;
        e.level = number(n.kids[1]);
        return e;
    }
    if (h.k == Node::K::Atom && isBinderKw(h.text, isPi)) {
        e.kind = isPi ? Expr::Kind::Forall : Expr::Kind::Fun;
        if (n.kids.size() < 3) throw ParseError(n.line, n.col, "binder group and body");
        for (std::size_t i = 1; i + 1 < n.kids.size(); ++i) e.binders.push_back(group(n.kids[i]));
        e.args.push_back(expr(n.kids.back()));
        return e;
    }
    if (h.k == Node::K::Atom && (h.text == "->" || h.text == "→")) {
        e.kind = Expr::Kind::Arrow;
        if (n.kids.size() < 3) throw ParseError(n.line, n.col, "at least two arrow operands");
        for (std::size_t i = 1; i < n.kids.size(); ++i) e.args.push_back(expr(n.kids[i]));
        return e;
    }
    if (n.kids.size() < 2) throw ParseError(h.line, h.col, "application argument");
    e.kind = Expr::Kind::App;
    for (const auto& k : n.kids) e.args.push_back(expr(k));
    return e;
}

void expectCount(const Node& n, std::size_t lo, std::size_t hi, const std::string& what) {
    if (n.kids.size() < lo || n.kids.size() > hi) {
        const Node& at = n.kids.size() > hi ? n.kids[hi] : n;
        throw ParseError(at.line, at.col, what);
    }
}

Decl decl(const Node& n);

Decl inductive(const Node& n) {
    Decl d;
    d.kind = Decl::Kind::Inductive;
    if (n.kids.size() < 2) throw ParseError(n.line, n.col, "inductive name");
    d.name = ident(n.kids[1]);
    std::size_t i = 2;
    while (i < n.kids.size() && n.kids[i].k != Node::K::Colon) d.binders.push_back(group(n.kids[i++]));
    if (i >= n.kids.size()) throw ParseError(n.line, n.col, "':' before the inductive's sort");
    ++i;
    if (i >= n.kids.size()) throw ParseError(n.line, n.col, "inductive sort");
    d.exprs.push_back(expr(n.kids[i++]));
    for (; i < n.kids.size(); ++i) {
        Binder b = group(n.kids[i]);
        if (b.inst || b.names.size() != 1) throw ParseError(n.kids[i].line, n.kids[i].col, "constructor (name : type)");
        d.ctors.push_back({b.names[0], b.type()});
    }
    return d;
}

Decl decl(const Node& n) {
    if (n.k != Node::K::Paren || n.kids.empty() || n.kids[0].k != Node::K::Atom)
        throw ParseError(n.line, n.col, "command");
    const std::string& kw = n.kids[0].text;
    Decl d;
    d.line = n.line;
    d.column = n.col;
    if (kw == "axiom" || kw == "premise") {
        expectCount(n, 3, 3, kw == "axiom" ? "(axiom name type)" : "(premise name type)");
        d.kind = kw == "axiom" ? Decl::Kind::Axiom : Decl::Kind::Premise;
        d.name = ident(n.kids[1]);
        d.exprs.push_back(expr(n.kids[2]));
    } else if (kw == "def") {
        expectCount(n, 4, 5, "(def name type value [reducible|default|opaque])");
        d.kind = Decl::Kind::Def;
        d.name = ident(n.kids[1]);
        d.exprs.push_back(expr(n.kids[2]));
        d.exprs.push_back(expr(n.kids[3]));
        if (n.kids.size() == 5) {
            const Node& a = n.kids[4];
            if (a.k != Node::K::Atom || (a.text != "reducible" && a.text != "default" && a.text != "opaque"))
                throw ParseError(a.line, a.col, "reducible, default or opaque");
            d.attr = a.text;
        }
    } else if (kw == "var") {
        d.kind = Decl::Kind::Var;
        if (n.kids.size() == 3 && n.kids[1].k == Node::K::Atom) {
            Binder b;
            b.names.push_back(ident(n.kids[1]));
            b.typeBox.push_back(expr(n.kids[2]));
            d.binders.push_back(std::move(b));
        } else {
            if (n.kids.size() < 2) throw ParseError(n.line, n.col, "(var name type) or binder groups");
            for (std::size_t i = 1; i < n.kids.size(); ++i) d.binders.push_back(group(n.kids[i]));
        }
    } else if (kw == "goal") {
        expectCount(n, 2, 2, "(goal proposition)");
        d.exprs.push_back(expr(n.kids[1]));
    } else if (kw == "unfold" || kw == "defeq") {
        d.kind = kw == "unfold" ? Decl::Kind::Unfold : Decl::Kind::Defeq;
        if (n.kids.size() < 2) throw ParseError(n.line, n.col, "constant name");
        for (std::size_t i = 1; i < n.kids.size(); ++i) d.names.push_back(ident(n.kids[i]));
    } else if (kw == "set-option") {
        expectCount(n, 3, 3, "(set-option key value)");
        d.kind = Decl::Kind::Option;
        for (std::size_t i = 1; i < 3; ++i)
            if (n.kids[i].k != Node::K::Atom) throw ParseError(n.kids[i].line, n.kids[i].col, "option atom");
        d.name = n.kids[1].text;
        d.attr = n.kids[2].text;
    } else if (kw == "inductive") {
        d = inductive(n);
        d.line = n.line;
        d.column = n.col;
    } else if (kw == "mutual") {
        // a block of inductives, or of definitions that may refer to each other
        d.kind = Decl::Kind::Mutual;
        if (n.kids.size() < 2) throw ParseError(n.line, n.col, "inductive or def declaration");
        std::string member;
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
            const Node& k = n.kids[i];
            std::string kw2 = k.k == Node::K::Paren && !k.kids.empty() ? k.kids[0].text : "";
            if (member.empty() && (kw2 == "def" || kw2 == "inductive")) member = kw2;
            if (kw2.empty() || kw2 != member)
                throw ParseError(k.line, k.col, member.empty() ? "inductive or def declaration" : member + " declaration");
            d.block.push_back(decl(k));
        }
    } else {
        throw ParseError(n.kids[0].line, n.kids[0].col, "command keyword");
    }
    return d;
}

}  // namespace

SourceFile parse(std::string_view text) {
    Reader r(text);
    std::vector<Node> nodes = r.readAll();
    SourceFile sf;
    std::size_t goals = 0;
    for (const auto& n : nodes) {
        sf.declarations.push_back(decl(n));
        if (sf.declarations.back().kind == Decl::Kind::Goal && ++goals > 1)
            throw ParseError(n.line, n.col, "a single goal");
    }
    if (goals == 0) throw ParseError(r.line(), r.col(), "(goal ...)");
    return sf;
}

Expr parseExpr(std::string_view text) {
    Reader r(text);
    std::vector<Node> nodes = r.readAll();
    if (nodes.size() != 1) throw ParseError(r.line(), r.col(), "one expression");
    return expr(nodes[0]);
}

}  // namespace lapc
