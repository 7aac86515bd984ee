#pragma once

// Recursive-descent checker for the THF fragment the emitter produces:
// typed declarations, quantifiers, λ, application, the binary connectives
// and equality. Also checks that every constant is declared before use and
// every variable is bound. Returns an empty string on success.

#include <cctype>
#include <set>
#include <string>
#include <vector>

namespace th0check {

class Checker {
public:
    explicit Checker(std::string text) : s_(std::move(text)) {}

    std::string run() {
        try {
            skip();
            while (pos_ < s_.size()) {
                annotated();
                skip();
            }
            if (!sawConjecture_) fail("no conjecture");
        } catch (const std::string& e) {
            return e;
        }
        return "";
    }

private:
    std::string s_;
    std::size_t pos_ = 0;
    std::set<std::string> types_ = {"$o", "$i", "$tType"};
    std::set<std::string> constants_;
    std::set<std::string> labels_;
    std::vector<std::string> scope_;
    bool sawConjecture_ = false;

    [[noreturn]] void fail(const std::string& what) {
        throw "at offset " + std::to_string(pos_) + ": " + what + " near '" + s_.substr(pos_, 30) + "'";
    }

    void skip() {
        for (;;) {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '%') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
                continue;
            }
            return;
        }
    }

    bool peek(const std::string& t) {
        skip();
        return s_.compare(pos_, t.size(), t) == 0;
    }

    void expect(const std::string& t) {
        if (!peek(t)) fail("expected '" + t + "'");
        pos_ += t.size();
    }

    static bool wordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string word() {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '$') ++pos_;
        while (pos_ < s_.size() && wordChar(s_[pos_])) ++pos_;
        if (pos_ == start) fail("expected a word");
        return s_.substr(start, pos_ - start);
    }

    static bool lowerWord(const std::string& w) { return !w.empty() && std::islower(static_cast<unsigned char>(w[0])); }
    static bool upperWord(const std::string& w) { return !w.empty() && std::isupper(static_cast<unsigned char>(w[0])); }

    void annotated() {
        expect("thf");
        expect("(");
        std::string label = word();
        if (!lowerWord(label)) fail("label must be a lower word");
        if (!labels_.insert(label).second) fail("duplicate label " + label);
        expect(",");
        std::string role = word();
        expect(",");
        if (role == "type") {
            typeDecl();
        } else if (role == "axiom" || role == "conjecture" || role == "hypothesis" || role == "lemma") {
            if (role == "conjecture") {
                if (sawConjecture_) fail("second conjecture");
                sawConjecture_ = true;
            }
            formula();
        } else {
            fail("unknown role " + role);
        }
        expect(")");
        expect(".");
    }

    void typeDecl() {
        bool paren = peek("(");
        if (paren) expect("(");
        std::string name = word();
        if (!lowerWord(name)) fail("declared name must be a lower word");
        expect(":");
        if (peek("$tType")) {
            expect("$tType");
            if (!types_.insert(name).second) fail("type declared twice: " + name);
        } else {
            type();
            if (types_.count(name) || !constants_.insert(name).second) fail("constant declared twice: " + name);
        }
        if (paren) expect(")");
    }

    void type() {
        unitaryType();
        while (peek(">")) {
            expect(">");
            unitaryType();
        }
    }

    void unitaryType() {
        if (peek("(")) {
            expect("(");
            type();
            expect(")");
            return;
        }
        std::string w = word();
        if (!types_.count(w) || w == "$tType") fail("unknown type " + w);
    }

    // unitary (op unitary)*: one non-associative op, or a run of one associative op
    void formula() {
        unitary();
        std::string op;
        int count = 0;
        for (;;) {
            std::string next = binop();
            if (next.empty()) break;
            bool assoc = next == "&" || next == "|" || next == "@";
            if (count > 0 && (next != op || !assoc)) fail("mixed or chained non-associative operators");
            op = next;
            ++count;
            unitary();
        }
    }

    std::string binop() {
        skip();
        for (const char* op : {"<=>", "=>", "!=", "=", "&", "|", "@"}) {
            std::string o = op;
            if (s_.compare(pos_, o.size(), o) == 0) {
                if (o == "=" && s_.compare(pos_, 2, "=>") == 0) continue;
                pos_ += o.size();
                return o;
            }
        }
        return "";
    }

    void unitary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            expect("(");
            formula();
            expect(")");
            return;
        }
        if (c == '~') {
            expect("~");
            unitary();
            return;
        }
        if (c == '!' || c == '?' || c == '^') {
            ++pos_;
            expect("[");
            std::size_t pushed = 0;
            do {
                std::string v = word();
                if (!upperWord(v)) fail("bound variable must be an upper word");
                expect(":");
                type();
                scope_.push_back(v);
                ++pushed;
            } while (peek(",") && (expect(","), true));
            expect("]");
            expect(":");
            unitary();
            scope_.resize(scope_.size() - pushed);
            return;
        }
        std::string w = word();
        if (w == "$true" || w == "$false") return;
        if (upperWord(w)) {
            for (const auto& v : scope_)
                if (v == w) return;
            fail("unbound variable " + w);
        }
        if (!constants_.count(w)) fail("undeclared constant " + w);
    }
};

inline std::string check(const std::string& text) { return Checker(text).run(); }

}  // namespace th0check
