// Tokenizer for the supported C subset. Comments and whitespace vanish;
// preprocessor lines survive as single tokens so the parser can classify
// includes and annotation pragmas without a real preprocessor.
#include <cctype>

#include "fln/cfront.hpp"

namespace fln {

namespace {

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

// Multi-character punctuators, longest first.
const char* kPuncts[] = {"<<=", ">>=", "...", "->", "<<", ">>", "<=", ">=", "==", "!=",
                         "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "++", "--"};

}  // namespace

std::vector<Token> lex(const std::string& src, const std::string& file) {
    std::vector<Token> out;
    size_t i = 0, n = src.size();
    int line = 1, col = 1;
    bool at_line_start = true;

    auto advance = [&](size_t k) {
        for (size_t j = 0; j < k && i < n; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
                at_line_start = true;
            } else {
                ++col;
                if (!std::isspace((unsigned char)src[i])) at_line_start = false;
            }
        }
    };
    auto push = [&](Token::Kind k, size_t start, size_t end) {
        Token t;
        t.kind = k;
        t.text = src.substr(start, end - start);
        t.loc = {file, line, col};
        t.offset = start;
        out.push_back(std::move(t));
    };

    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            advance(2);
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
            advance(2);
            continue;
        }
        if (c == '#' && at_line_start) {
            // Capture the whole logical line (with backslash continuations).
            size_t start = i;
            Token t;
            t.kind = Token::Kind::Preproc;
            t.loc = {file, line, col};
            t.offset = start;
            while (i < n && src[i] != '\n') {
                if (src[i] == '\\' && i + 1 < n && src[i + 1] == '\n') advance(2);
                else advance(1);
            }
            t.text = src.substr(start, i - start);
            out.push_back(std::move(t));
            continue;
        }
        if (ident_start(c)) {
            size_t start = i;
            Token t;
            t.loc = {file, line, col};
            while (i < n && ident_char(src[i])) advance(1);
            t.kind = Token::Kind::Ident;
            t.text = src.substr(start, i - start);
            t.offset = start;
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = i;
            Token t;
            t.loc = {file, line, col};
            while (i < n && (ident_char(src[i]) || src[i] == '.')) advance(1);
            t.kind = Token::Kind::Number;
            t.text = src.substr(start, i - start);
            t.offset = start;
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"' || c == '\'') {
            size_t start = i;
            Token t;
            t.loc = {file, line, col};
            char quote = c;
            advance(1);
            while (i < n && src[i] != quote) {
                if (src[i] == '\\' && i + 1 < n) advance(2);
                else advance(1);
            }
            advance(1);
            t.kind = quote == '"' ? Token::Kind::StringLit : Token::Kind::CharLit;
            t.text = src.substr(start, i - start);
            t.offset = start;
            out.push_back(std::move(t));
            continue;
        }
        // Punctuator: try the multi-character spellings first.
        bool matched = false;
        for (const char* p : kPuncts) {
            size_t len = std::char_traits<char>::length(p);
            if (src.compare(i, len, p) == 0) {
                push(Token::Kind::Punct, i, i + len);
                advance(len);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        push(Token::Kind::Punct, i, i + 1);
        advance(1);
    }
    Token end;
    end.kind = Token::Kind::End;
    end.loc = {file, line, col};
    end.offset = n;
    out.push_back(std::move(end));
    return out;
}

}  // namespace fln
