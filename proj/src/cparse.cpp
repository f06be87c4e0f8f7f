// Recursive-descent parser for the supported C subset. Anything outside the
// subset is preserved verbatim as an opaque region (with a warning) so source
// reconstruction can re-emit it untouched.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "fln/cfront.hpp"

namespace fln {

namespace {

const std::set<std::string> kQualifiers = {"const",    "volatile", "static", "extern",
                                           "register", "inline",   "restrict"};
const std::set<std::string> kBaseWords = {"void",  "int",    "char",   "short", "long",
                                          "float", "double", "signed", "unsigned", "_Bool"};
// Common fixed-width aliases count as known types even without their typedefs
// in scope (headers are usually system includes we do not traverse).
const std::set<std::string> kKnownAliases = {"uint8_t",  "uint16_t", "uint32_t", "uint64_t",
                                             "int8_t",   "int16_t",  "int32_t",  "int64_t",
                                             "size_t",   "ssize_t",  "intptr_t", "uintptr_t",
                                             "ptrdiff_t"};

struct BinOp {
    const char* text;
    int prec;
};
const BinOp kBinOps[] = {{"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6},
                         {"!=", 6}, {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7}, {"<<", 8},
                         {">>", 8}, {"+", 9},  {"-", 9},  {"*", 10}, {"/", 10}, {"%", 10}};

struct Parser {
    const std::string& src;
    const std::string& file;
    std::vector<Token> toks;
    size_t p = 0;
    CUnit unit;
    std::set<std::string> typedef_names;

    Parser(const std::string& s, const std::string& f) : src(s), file(f), toks(lex(s, f)) {}

    const Token& cur(size_t ahead = 0) const {
        size_t i = p + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    bool at_end() const { return cur().kind == Token::Kind::End; }
    bool is(const char* text, size_t ahead = 0) const { return cur(ahead).text == text; }
    bool is_ident(size_t ahead = 0) const { return cur(ahead).kind == Token::Kind::Ident; }
    const Token& take() { return toks[p++]; }
    bool eat(const char* text) {
        if (!is(text)) return false;
        ++p;
        return true;
    }
    void expect(const char* text, const char* what) {
        if (!eat(text))
            throw FrontendError(DiagCode::ParseError, cur().loc,
                                std::string("expected '") + text + "' " + what + ", found '" +
                                    cur().text + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw FrontendError(DiagCode::ParseError, cur().loc, msg);
    }
    size_t end_offset(size_t tok_index) const {
        const Token& t = toks[tok_index];
        return t.offset + t.text.size();
    }

    // ------------------------------------------------------------- types ----
    bool is_type_word(const std::string& w) const {
        return kQualifiers.count(w) || kBaseWords.count(w) || kKnownAliases.count(w) ||
               typedef_names.count(w) || w == "struct" || w == "union";
    }
    // Does a declaration plausibly start here?
    bool decl_ahead() const {
        if (!is_ident()) return false;
        const std::string& w = cur().text;
        if (is_type_word(w)) return true;
        // "T x" / "T *x" with unknown alias T.
        size_t a = 1;
        while (is("*", a)) ++a;
        return a > 1 ? is_ident(a) : is_ident(1);
    }
    CType parse_type() {
        std::vector<std::string> words;
        while (is_ident()) {
            const std::string& w = cur().text;
            if (w == "struct" || w == "union") {
                take();
                if (!is_ident()) fail("expected record tag");
                words.push_back(w == "struct" ? "struct " + take().text : "union " + take().text);
                break;
            }
            if (kQualifiers.count(w) || kBaseWords.count(w)) {
                words.push_back(take().text);
                continue;
            }
            if (words.empty() || (kQualifiers.count(words.back()) &&
                                  (kKnownAliases.count(w) || typedef_names.count(w) || is_ident(1)))) {
                // A lone alias, or qualifier(s) followed by an alias.
                words.push_back(take().text);
            }
            break;
        }
        if (words.empty()) fail("expected type name");
        CType t;
        std::string base;
        for (size_t i = 0; i < words.size(); ++i) base += (i ? " " : "") + words[i];
        t.base = base;
        t.is_void = base == "void";
        while (eat("*")) ++t.pointers;
        return t;
    }

    // ------------------------------------------------------- expressions ----
    CExprRef mk(CExpr e) { return std::make_shared<CExpr>(std::move(e)); }

    CExprRef parse_init() {
        if (is("{")) return parse_init_list(CType{});
        return parse_expr();
    }
    CExprRef parse_init_list(CType named) {
        CExpr e;
        e.kind = CExpr::Kind::InitList;
        e.cast_type = std::move(named);
        e.loc = cur().loc;
        expect("{", "to open initializer");
        while (!eat("}")) {
            CInitItem item;
            if (eat(".")) {
                if (!is_ident()) fail("expected designator field");
                item.designator = take().text;
                expect("=", "after designator");
            }
            item.value = parse_init();
            e.items.push_back(std::move(item));
            if (!is("}")) expect(",", "between initializer items");
        }
        return mk(std::move(e));
    }

    CExprRef parse_expr() { return parse_binary(0); }

    CExprRef parse_binary(int min_prec) {
        CExprRef lhs = parse_unary();
        while (true) {
            const BinOp* op = nullptr;
            for (const BinOp& b : kBinOps)
                if (is(b.text) && b.prec >= min_prec) {
                    op = &b;
                    break;
                }
            if (!op) break;
            SourceLoc loc = cur().loc;
            take();
            CExprRef rhs = parse_binary(op->prec + 1);
            CExpr e;
            e.kind = CExpr::Kind::Bin;
            e.op2 = op->text;
            e.e1 = lhs;
            e.e2 = rhs;
            e.loc = loc;
            lhs = mk(std::move(e));
        }
        return lhs;
    }

    CExprRef parse_unary() {
        SourceLoc loc = cur().loc;
        if (is("-") || is("!") || is("~")) {
            char op = take().text[0];
            CExpr e;
            e.kind = CExpr::Kind::Unary;
            e.op = op;
            e.e1 = parse_unary();
            e.loc = loc;
            return mk(std::move(e));
        }
        if (eat("*")) {
            CExpr e;
            e.kind = CExpr::Kind::Deref;
            e.e1 = parse_unary();
            e.loc = loc;
            return mk(std::move(e));
        }
        if (eat("&")) {
            CExpr e;
            e.kind = CExpr::Kind::AddrOf;
            e.e1 = parse_unary();
            e.loc = loc;
            return mk(std::move(e));
        }
        if (is("(") && is_ident(1) && is_type_word(cur(1).text)) {
            // Cast or compound literal.
            take();  // '('
            CType t = parse_type();
            expect(")", "after cast type");
            if (is("{")) {
                CExprRef lit = parse_init_list(t);
                return parse_postfix_chain(lit);
            }
            CExpr e;
            e.kind = CExpr::Kind::Cast;
            e.cast_type = std::move(t);
            e.e1 = parse_unary();
            e.loc = loc;
            return mk(std::move(e));
        }
        return parse_postfix();
    }

    CExprRef parse_postfix() { return parse_postfix_chain(parse_primary()); }

    CExprRef parse_postfix_chain(CExprRef base) {
        while (true) {
            SourceLoc loc = cur().loc;
            if (is("(") && base->kind == CExpr::Kind::Ident) {
                take();
                CExpr e;
                e.kind = CExpr::Kind::Call;
                e.name = base->name;
                e.loc = base->loc;
                while (!eat(")")) {
                    e.args.push_back(parse_expr());
                    if (!is(")")) expect(",", "between arguments");
                }
                base = mk(std::move(e));
                continue;
            }
            if (eat("[")) {
                CExpr e;
                e.kind = CExpr::Kind::Index;
                e.e1 = base;
                e.e2 = parse_expr();
                e.loc = loc;
                expect("]", "after subscript");
                base = mk(std::move(e));
                continue;
            }
            if (is(".") || is("->")) {
                bool arrow = take().text == "->";
                if (!is_ident()) fail("expected member name");
                CExpr e;
                e.kind = CExpr::Kind::Member;
                e.e1 = base;
                e.name = take().text;
                e.is_arrow = arrow;
                e.loc = loc;
                base = mk(std::move(e));
                continue;
            }
            break;
        }
        return base;
    }

    CExprRef parse_primary() {
        const Token& t = cur();
        CExpr e;
        e.loc = t.loc;
        switch (t.kind) {
            case Token::Kind::Number:
                e.kind = CExpr::Kind::IntLit;
                e.num = std::stoll(t.text, nullptr, 0);
                e.text = t.text;
                take();
                return mk(std::move(e));
            case Token::Kind::StringLit:
                e.kind = CExpr::Kind::StringLit;
                e.text = t.text;
                take();
                return mk(std::move(e));
            case Token::Kind::CharLit:
                e.kind = CExpr::Kind::CharLit;
                e.text = t.text;
                take();
                return mk(std::move(e));
            case Token::Kind::Ident:
                e.kind = CExpr::Kind::Ident;
                e.name = t.text;
                take();
                return mk(std::move(e));
            default:
                if (eat("(")) {
                    CExprRef inner = parse_expr();
                    expect(")", "to close parenthesized expression");
                    return inner;
                }
                fail("unexpected token '" + t.text + "' in expression");
        }
    }

    // -------------------------------------------------------- statements ----
    // Skips a balanced construct starting at an opening brace/paren.
    void skip_balanced() {
        std::vector<char> stack;
        do {
            if (at_end()) fail("unbalanced delimiters");
            const std::string& t = take().text;
            if (t == "{" || t == "(" || t == "[") stack.push_back(t[0]);
            else if (t == "}" || t == ")" || t == "]") stack.pop_back();
        } while (!stack.empty());
    }

    CStmtRef opaque_stmt(size_t start_tok) {
        // Consume to the end of the unsupported statement: a balanced-brace
        // construct (possibly with heads like "while (...)") or through ';'.
        while (!at_end()) {
            if (is("{") ) {
                skip_balanced();
                if (is(";")) take();
                break;
            }
            if (is("(") || is("[")) {
                skip_balanced();
                continue;
            }
            if (is("}")) break;  // do not swallow the enclosing block
            if (take().text == ";") break;
        }
        CStmt s;
        s.kind = CStmt::Kind::Opaque;
        s.loc = toks[start_tok].loc;
        s.offset = toks[start_tok].offset;
        s.length = (p ? end_offset(p - 1) : s.offset) - s.offset;
        s.text = src.substr(s.offset, s.length);
        unit.diags.push_back(Diagnostic::warning(
            DiagCode::OpaqueRegion, s.loc, "statement outside the supported subset is preserved verbatim"));
        return std::make_shared<const CStmt>(std::move(s));
    }

    std::vector<CStmtRef> parse_block() {
        expect("{", "to open block");
        std::vector<CStmtRef> out;
        while (!eat("}")) {
            if (at_end()) fail("unterminated block");
            out.push_back(parse_stmt());
        }
        return out;
    }

    CStmtRef parse_stmt() {
        size_t start_tok = p;
        try {
            return parse_stmt_inner(start_tok);
        } catch (const FrontendError&) {
            p = start_tok;
            return opaque_stmt(start_tok);
        }
    }

    CStmtRef parse_stmt_inner(size_t start_tok) {
        CStmt s;
        s.loc = cur().loc;
        s.offset = cur().offset;
        auto done = [&]() {
            s.length = end_offset(p - 1) - s.offset;
            return std::make_shared<const CStmt>(std::move(s));
        };

        if (cur().kind == Token::Kind::Preproc) {
            const Token& t = take();
            if (is_annotation_pragma(t.text)) {
                s.kind = CStmt::Kind::Pragma;
                s.pragma = parse_pragma(t.text, t.loc);
                s.pragma.offset = t.offset;
                s.pragma.length = t.text.size();
                return done();
            }
            s.kind = CStmt::Kind::Opaque;
            s.text = t.text;
            return done();
        }
        if (is("{")) {
            s.kind = CStmt::Kind::Block;
            s.then_body = parse_block();
            return done();
        }
        if (is("if")) {
            take();
            s.kind = CStmt::Kind::If;
            expect("(", "after 'if'");
            s.cond = parse_expr();
            expect(")", "after condition");
            s.then_body = is("{") ? parse_block() : std::vector<CStmtRef>{parse_stmt()};
            if (eat("else"))
                s.else_body = is("{") ? parse_block() : std::vector<CStmtRef>{parse_stmt()};
            return done();
        }
        if (is("return")) {
            take();
            s.kind = CStmt::Kind::Return;
            if (!is(";")) s.rhs = parse_expr();
            expect(";", "after return");
            return done();
        }
        if (is("while") || is("for") || is("do") || is("switch") || is("goto") || is("break") ||
            is("continue")) {
            p = start_tok;
            return opaque_stmt(start_tok);
        }
        if (decl_ahead()) {
            s.kind = CStmt::Kind::Decl;
            s.decl = std::make_shared<CDecl>();
            s.decl->loc = s.loc;
            s.decl->offset = s.offset;
            s.decl->type = parse_type();
            if (!is_ident()) fail("expected declarator name");
            s.decl->name = take().text;
            if (is("[")) fail("array declarators are outside the subset");
            if (eat("=")) s.decl->init = parse_init();
            expect(";", "after declaration");
            s.decl->length = end_offset(p - 1) - s.offset;
            return done();
        }
        // Assignment or expression statement.
        CExprRef e = parse_expr();
        if (eat("=")) {
            s.kind = CStmt::Kind::Assign;
            s.lhs = e;
            s.rhs = parse_expr();
        } else {
            s.kind = CStmt::Kind::ExprStmt;
            s.rhs = e;
        }
        expect(";", "after statement");
        return done();
    }

    // --------------------------------------------------------- top level ----
    void opaque_top(size_t start_tok) {
        p = start_tok;
        CTopItem item;
        item.kind = CTopItem::Kind::Opaque;
        item.loc = cur().loc;
        item.offset = cur().offset;
        while (!at_end()) {
            if (is("{")) {
                skip_balanced();
                if (is(";")) take();
                break;
            }
            if (is("(") || is("[")) {
                skip_balanced();
                continue;
            }
            if (take().text == ";") break;
        }
        item.length = (p ? end_offset(p - 1) : item.offset) - item.offset;
        item.text = src.substr(item.offset, item.length);
        unit.diags.push_back(Diagnostic::warning(
            DiagCode::OpaqueRegion, item.loc,
            "declaration outside the supported subset is preserved verbatim"));
        unit.items.push_back(std::move(item));
    }

    void parse_record_body(CRecordDef& rec) {
        expect("{", "to open record body");
        while (!eat("}")) {
            if (at_end()) fail("unterminated record body");
            CParam f;
            f.loc = cur().loc;
            f.type = parse_type();
            if (!is_ident()) fail("expected field name");
            f.name = take().text;
            expect(";", "after field");
            rec.fields.push_back(std::move(f));
        }
    }

    void parse_params(CDecl& d) {
        expect("(", "to open parameter list");
        if (eat(")")) return;
        if (is("void") && is(")", 1)) {
            take();
            take();
            return;
        }
        while (true) {
            if (eat("...")) {
                d.variadic = true;
                expect(")", "after variadic marker");
                return;
            }
            CParam param;
            param.loc = cur().loc;
            param.type = parse_type();
            if (is_ident()) param.name = take().text;
            d.params.push_back(std::move(param));
            if (eat(")")) return;
            expect(",", "between parameters");
        }
    }

    void parse_top_item() {
        size_t start_tok = p;
        try {
            parse_top_inner();
        } catch (const FrontendError&) {
            opaque_top(start_tok);
        }
    }

    void parse_top_inner() {
        CTopItem item;
        item.loc = cur().loc;
        item.offset = cur().offset;
        auto finish = [&]() {
            item.length = end_offset(p - 1) - item.offset;
            unit.items.push_back(std::move(item));
        };

        if (cur().kind == Token::Kind::Preproc) {
            const Token& t = take();
            std::istringstream ls(t.text);
            std::string hash_word;
            ls >> hash_word;  // '#include' or '#' 'include'
            std::string directive = hash_word == "#" ? (ls >> hash_word, hash_word)
                                                     : hash_word.substr(1);
            if (directive == "include") {
                std::string rest;
                std::getline(ls, rest);
                size_t open = rest.find_first_of("\"<");
                if (open != std::string::npos) {
                    char close = rest[open] == '"' ? '"' : '>';
                    size_t end = rest.find(close, open + 1);
                    if (end != std::string::npos) {
                        item.kind = CTopItem::Kind::Include;
                        item.include.path = rest.substr(open + 1, end - open - 1);
                        item.include.system = close == '>';
                        item.include.loc = t.loc;
                        item.include.offset = t.offset;
                        item.include.length = t.text.size();
                        unit.includes.push_back(item.include);
                        finish();
                        return;
                    }
                }
            } else if (is_annotation_pragma(t.text)) {
                item.kind = CTopItem::Kind::Pragma;
                item.pragma = parse_pragma(t.text, t.loc);
                item.pragma.offset = t.offset;
                item.pragma.length = t.text.size();
                unit.pragmas.push_back(item.pragma);
                finish();
                return;
            }
            item.kind = CTopItem::Kind::Opaque;
            item.text = t.text;
            finish();
            return;
        }

        if (is("typedef")) {
            take();
            if ((is("struct") || is("union")) && (is("{", 1) || (is_ident(1) && is("{", 2)))) {
                // typedef struct [tag] { fields } name;
                bool is_union = take().text == "union";
                std::string tag = is_ident() ? take().text : "";
                item.kind = CTopItem::Kind::Record;
                item.record.is_union = is_union;
                item.record.loc = item.loc;
                item.record.offset = item.offset;
                parse_record_body(item.record);
                if (!is_ident()) fail("expected typedef name");
                item.record.name = take().text;
                expect(";", "after typedef");
                item.record.length = end_offset(p - 1) - item.offset;
                typedef_names.insert(item.record.name);
                finish();
                return;
            }
            item.kind = CTopItem::Kind::Typedef;
            item.tdef.loc = item.loc;
            item.tdef.offset = item.offset;
            item.tdef.type = parse_type();
            if (!is_ident()) fail("expected typedef name");
            item.tdef.name = take().text;
            expect(";", "after typedef");
            item.tdef.length = end_offset(p - 1) - item.offset;
            typedef_names.insert(item.tdef.name);
            finish();
            return;
        }

        if ((is("struct") || is("union")) && is_ident(1) && is("{", 2)) {
            item.kind = CTopItem::Kind::Record;
            item.record.is_union = take().text == "union";
            item.record.name = take().text;
            item.record.loc = item.loc;
            item.record.offset = item.offset;
            parse_record_body(item.record);
            expect(";", "after record definition");
            item.record.length = end_offset(p - 1) - item.offset;
            finish();
            return;
        }

        // Object or function declaration.
        item.kind = CTopItem::Kind::Decl;
        item.decl = std::make_shared<CDecl>();
        item.decl->loc = item.loc;
        item.decl->offset = item.offset;
        item.decl->type = parse_type();
        if (!is_ident()) fail("expected declarator name");
        item.decl->name = take().text;
        if (is("(")) {
            item.decl->is_function = true;
            parse_params(*item.decl);
            if (is("{")) {
                item.decl->has_body = true;
                item.decl->body = parse_block();
            } else {
                expect(";", "after function declaration");
            }
        } else {
            if (is("[")) fail("array declarators are outside the subset");
            if (eat("=")) item.decl->init = parse_init();
            expect(";", "after declaration");
        }
        item.decl->length = end_offset(p - 1) - item.offset;
        finish();
    }
};

// ------------------------------------------------------ annotation binding --

bool binds_ok(const PragmaDirective& d, const CDecl& decl, Diagnostic* out) {
    switch (d.kind) {
        case PragmaDirective::Kind::Requires:
            if (decl.is_function) {
                *out = Diagnostic::error(DiagCode::KindMismatch, d.loc,
                                         "a requires directive cannot bind to function '" +
                                             decl.name + "'");
                return false;
            }
            return true;
        case PragmaDirective::Kind::Param: {
            if (!decl.is_function) {
                *out = Diagnostic::error(DiagCode::KindMismatch, d.loc,
                                         "a param directive cannot bind to object '" + decl.name +
                                             "'");
                return false;
            }
            int named = (int)decl.params.size();
            if (d.param_index && *d.param_index > named) {
                *out = Diagnostic::error(
                    DiagCode::VariadicAnnotation, d.loc,
                    "param(" + std::to_string(*d.param_index) + ") on '" + decl.name +
                        "' targets beyond the named parameters (only named parameters can carry "
                        "annotations)");
                return false;
            }
            return true;
        }
        case PragmaDirective::Kind::Return:
            if (!decl.is_function) {
                *out = Diagnostic::error(DiagCode::KindMismatch, d.loc,
                                         "a return directive cannot bind to object '" + decl.name +
                                             "'");
                return false;
            }
            if (decl.type.is_void && decl.type.pointers == 0) {
                *out = Diagnostic::error(DiagCode::VoidReturnAnnotation, d.loc,
                                         "a return directive is not allowed on void function '" +
                                             decl.name + "'");
                return false;
            }
            return true;
    }
    return false;
}

void flush_dangling(std::vector<PragmaDirective>& pending, std::vector<Diagnostic>& diags) {
    for (const PragmaDirective& d : pending)
        diags.push_back(Diagnostic::error(DiagCode::DanglingDirective, d.loc,
                                          "directive does not immediately precede a declaration"));
    pending.clear();
}

void bind_pending(std::vector<PragmaDirective>& pending, CDecl& decl,
                  std::vector<Diagnostic>& diags) {
    for (PragmaDirective& d : pending) {
        Diagnostic err;
        if (binds_ok(d, decl, &err)) decl.bound.push_back(std::move(d));
        else diags.push_back(std::move(err));
    }
    pending.clear();
}

void attach_in_block(const std::vector<CStmtRef>& body, std::vector<Diagnostic>& diags) {
    std::vector<PragmaDirective> pending;
    for (const CStmtRef& s : body) {
        switch (s->kind) {
            case CStmt::Kind::Pragma: pending.push_back(s->pragma); break;
            case CStmt::Kind::Decl:
                bind_pending(pending, *s->decl, diags);
                break;
            case CStmt::Kind::If:
                flush_dangling(pending, diags);
                attach_in_block(s->then_body, diags);
                attach_in_block(s->else_body, diags);
                break;
            case CStmt::Kind::Block:
                flush_dangling(pending, diags);
                attach_in_block(s->then_body, diags);
                break;
            default: flush_dangling(pending, diags); break;
        }
    }
    flush_dangling(pending, diags);
}

}  // namespace

std::string to_string(const CType& t) {
    std::string out = t.base;
    for (int i = 0; i < t.pointers; ++i) out += i ? "*" : " *";
    return out;
}

std::string to_string(const CExpr& e) {
    switch (e.kind) {
        case CExpr::Kind::Ident: return e.name;
        case CExpr::Kind::IntLit: return e.text.empty() ? std::to_string(e.num) : e.text;
        case CExpr::Kind::StringLit:
        case CExpr::Kind::CharLit: return e.text;
        case CExpr::Kind::Unary: return std::string(1, e.op) + to_string(*e.e1);
        case CExpr::Kind::Bin:
            return to_string(*e.e1) + " " + e.op2 + " " + to_string(*e.e2);
        case CExpr::Kind::Call: {
            std::string out = e.name + "(";
            for (size_t i = 0; i < e.args.size(); ++i)
                out += (i ? ", " : "") + to_string(*e.args[i]);
            return out + ")";
        }
        case CExpr::Kind::Member:
            return to_string(*e.e1) + (e.is_arrow ? "->" : ".") + e.name;
        case CExpr::Kind::Index: return to_string(*e.e1) + "[" + to_string(*e.e2) + "]";
        case CExpr::Kind::Deref: return "*" + to_string(*e.e1);
        case CExpr::Kind::AddrOf: return "&" + to_string(*e.e1);
        case CExpr::Kind::Cast: return "(" + to_string(e.cast_type) + ")" + to_string(*e.e1);
        case CExpr::Kind::InitList: {
            std::string out =
                e.cast_type.base.empty() ? "" : "(" + to_string(e.cast_type) + ")";
            out += "{";
            for (size_t i = 0; i < e.items.size(); ++i) {
                if (i) out += ", ";
                if (!e.items[i].designator.empty()) out += "." + e.items[i].designator + " = ";
                out += to_string(*e.items[i].value);
            }
            return out + "}";
        }
    }
    return "";
}

CUnit parse_unit(const std::string& source, const std::string& file) {
    Parser parser(source, file);
    parser.unit.path = file;
    parser.unit.text = source;
    while (!parser.at_end()) parser.parse_top_item();
    return std::move(parser.unit);
}

std::vector<Diagnostic> attach_annotations(CUnit& unit) {
    std::vector<Diagnostic> diags;
    std::vector<PragmaDirective> pending;
    for (CTopItem& item : unit.items) {
        switch (item.kind) {
            case CTopItem::Kind::Pragma: pending.push_back(item.pragma); break;
            case CTopItem::Kind::Decl:
                bind_pending(pending, *item.decl, diags);
                if (item.decl->has_body) attach_in_block(item.decl->body, diags);
                break;
            default: flush_dangling(pending, diags); break;
        }
    }
    flush_dangling(pending, diags);
    std::sort(diags.begin(), diags.end(), diag_before);
    return diags;
}

DependencyGraph resolve_includes(const std::string& root_path) {
    namespace fs = std::filesystem;
    DependencyGraph g;
    g.root = root_path;
    std::set<std::string> visiting, done, system_seen;

    // DFS; order is post-order (dependencies first).
    std::function<void(const std::string&)> visit = [&](const std::string& path) {
        std::string canon = fs::path(path).lexically_normal().string();
        if (done.count(canon)) return;
        if (visiting.count(canon))
            throw FrontendError(DiagCode::IncludeCycle, {canon, 0, 0},
                                "include cycle through " + canon);
        std::ifstream in(canon);
        if (!in)
            throw FrontendError(DiagCode::MissingInclude, {canon, 0, 0},
                                "cannot open included file " + canon);
        visiting.insert(canon);
        std::stringstream buf;
        buf << in.rdbuf();
        CUnit unit = parse_unit(buf.str(), canon);
        std::vector<std::string> children;
        for (const CInclude& inc : unit.includes) {
            if (inc.system) {
                if (system_seen.insert(inc.path).second) g.system_includes.push_back(inc.path);
                continue;
            }
            std::string child =
                (fs::path(canon).parent_path() / inc.path).lexically_normal().string();
            g.edges.emplace_back(canon, child);
            children.push_back(child);
        }
        std::sort(children.begin(), children.end());
        for (const std::string& child : children) visit(child);
        visiting.erase(canon);
        done.insert(canon);
        g.order.push_back(canon);
    };
    visit(root_path);
    return g;
}

}  // namespace fln
