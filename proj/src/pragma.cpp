// Annotation pragma parsing and rendering.
//
// Grammar:
//   '#' 'pragma' kind body
//   kind      := "requires" | "param" [ "(" INT ")" ] | "return"
//   body      := [ "{" (["."] IDENT ":" ctype)+ "}" ] labelproj ("then" labelproj)*
//   labelproj := IDENT ":" ("secrecy" | "integrity" | "(secrecy, integrity)")
//
// Atom names are C identifiers (underscores allowed, hyphens are not).
#include <cctype>

#include "fln/cfront.hpp"

namespace fln {

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    SourceLoc base;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\\')) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    SourceLoc here() {
        skip_ws();
        SourceLoc l = base;
        l.col = base.col + (int)i;
        return l;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw FrontendError(DiagCode::SyntaxError, here(), msg);
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++i;
        return true;
    }
    void expect(char c, const char* what) {
        if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
    }
    std::string ident() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
        if (i == start) fail("expected identifier");
        if (std::isdigit((unsigned char)s[start])) fail("identifier cannot start with a digit");
        return s.substr(start, i - start);
    }
    int integer() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (i == start) fail("expected integer");
        return std::stoi(s.substr(start, i - start));
    }
};

Projection parse_projection(Cursor& c) {
    if (c.eat('(')) {
        if (c.ident() != "secrecy") c.fail("expected 'secrecy'");
        c.expect(',', "between projections");
        if (c.ident() != "integrity") c.fail("expected 'integrity'");
        c.expect(')', "after projection pair");
        return Projection::Both;
    }
    std::string word = c.ident();
    if (word == "secrecy") return Projection::Secrecy;
    if (word == "integrity") return Projection::Integrity;
    c.fail("unknown projection '" + word + "'");
}

// A field's C type: identifier words plus optional '*'s, folded into one token.
std::string parse_field_ctype(Cursor& c) {
    std::string out = c.ident();
    while (true) {
        char ch = c.peek();
        if (ch == '*') {
            c.eat('*');
            out += " *";
        } else if (std::isalpha((unsigned char)ch) || ch == '_') {
            out += " " + c.ident();
        } else {
            break;
        }
    }
    return out;
}

}  // namespace

bool is_annotation_pragma(const std::string& line) {
    Cursor c{line, 0, {}};
    if (!c.eat('#')) return false;
    size_t save = c.i;
    try {
        if (c.ident() != "pragma") return false;
        std::string kind = c.ident();
        return kind == "requires" || kind == "param" || kind == "return";
    } catch (const FrontendError&) {
        (void)save;
        return false;
    }
}

PragmaDirective parse_pragma(const std::string& text, const SourceLoc& at) {
    Cursor c{text, 0, at};
    PragmaDirective d;
    d.loc = at;
    c.expect('#', "to introduce the directive");
    if (c.ident() != "pragma") c.fail("expected 'pragma'");

    std::string kind = c.ident();
    if (kind == "requires") {
        d.kind = PragmaDirective::Kind::Requires;
    } else if (kind == "param") {
        d.kind = PragmaDirective::Kind::Param;
        if (c.eat('(')) {
            int idx = c.integer();
            if (idx < 1) c.fail("parameter index must be >= 1");
            d.param_index = idx;
            c.expect(')', "after parameter index");
        }
    } else if (kind == "return") {
        d.kind = PragmaDirective::Kind::Return;
    } else {
        c.fail("unknown directive kind '" + kind + "'");
    }

    if (c.peek() == '{') {
        if (d.kind != PragmaDirective::Kind::Requires)
            c.fail("a field set is only allowed on a requires directive");
        c.eat('{');
        while (!c.eat('}')) {
            c.eat('.');  // both {f1:int} and {.f1:int} spellings
            std::string field = c.ident();
            c.expect(':', "after field name");
            d.field_set.emplace_back(field, parse_field_ctype(c));
            c.eat(',');
            if (c.done()) c.fail("unterminated field set");
        }
        if (d.field_set.empty()) c.fail("empty field set");
    }

    while (true) {
        std::string atom = c.ident();
        c.expect(':', "after label atom");
        d.sequence.emplace_back(atom, parse_projection(c));
        if (c.done()) break;
        std::string word = c.ident();
        if (word != "then") c.fail("expected 'then' between labels");
    }
    if (d.sequence.empty()) c.fail("empty label sequence");
    return d;
}

std::string render_pragma(const PragmaDirective& d) {
    std::string out = "#pragma ";
    switch (d.kind) {
        case PragmaDirective::Kind::Requires: out += "requires"; break;
        case PragmaDirective::Kind::Param:
            out += "param";
            if (d.param_index) out += "(" + std::to_string(*d.param_index) + ")";
            break;
        case PragmaDirective::Kind::Return: out += "return"; break;
    }
    if (!d.field_set.empty()) {
        out += " {";
        for (size_t i = 0; i < d.field_set.size(); ++i) {
            if (i) out += ", ";
            out += d.field_set[i].first + ":" + d.field_set[i].second;
        }
        out += "}";
    }
    for (size_t i = 0; i < d.sequence.size(); ++i) {
        out += i ? " then " : " ";
        out += d.sequence[i].first + ":";
        switch (d.sequence[i].second) {
            case Projection::Secrecy: out += "secrecy"; break;
            case Projection::Integrity: out += "integrity"; break;
            case Projection::Both: out += "(secrecy, integrity)"; break;
        }
    }
    return out;
}

}  // namespace fln
