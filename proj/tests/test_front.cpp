// Frontend tests: lexer, pragma grammar, the C-subset parser with opaque
// preservation, annotation binding, and include resolution.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fln/cfront.hpp"

using namespace fln;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> token_texts(const std::string& src) {
    std::vector<std::string> out;
    for (const Token& t : lex(src, "t.c"))
        if (t.kind != Token::Kind::End) out.push_back(t.text);
    return out;
}

struct TempTree {
    fs::path dir;
    TempTree() {
        dir = fs::temp_directory_path() / ("fln_front_" + std::to_string(::getpid()) + "_" +
                                           std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~TempTree() { fs::remove_all(dir); }
    std::string write(const std::string& rel, const std::string& text) {
        fs::path p = dir / rel;
        fs::create_directories(p.parent_path());
        std::ofstream(p) << text;
        return p.string();
    }
    static int counter;
};
int TempTree::counter = 0;

const CDecl* find_decl(const CUnit& u, const std::string& name) {
    for (const CTopItem& item : u.items)
        if (item.kind == CTopItem::Kind::Decl && item.decl->name == name) return item.decl.get();
    return nullptr;
}

}  // namespace

TEST_CASE("lexer basics") {
    auto t = token_texts("int x = 42; /* gone */ y->f += 0x10; // gone");
    CHECK(t == std::vector<std::string>{"int", "x", "=", "42", ";", "y", "->", "f", "+=", "0x10",
                                        ";"});
    auto toks = lex("#include \"a.h\"\nint x;", "t.c");
    REQUIRE(toks[0].kind == Token::Kind::Preproc);
    CHECK(toks[0].text == "#include \"a.h\"");
    CHECK(toks[1].text == "int");
    CHECK(toks[1].loc.line == 2);
}

TEST_CASE("lexer positions and offsets slice the source") {
    std::string src = "int  main ( )\n{ return 0; }\n";
    for (const Token& t : lex(src, "t.c")) {
        if (t.kind == Token::Kind::End) continue;
        CHECK(src.substr(t.offset, t.text.size()) == t.text);
    }
}

TEST_CASE("pragma grammar accepts the documented forms") {
    auto d1 = parse_pragma("#pragma requires AlicePriv:secrecy", {});
    CHECK(d1.kind == PragmaDirective::Kind::Requires);
    REQUIRE(d1.sequence.size() == 1);
    CHECK(d1.sequence[0] == std::pair<std::string, Projection>{"AlicePriv", Projection::Secrecy});

    auto d2 = parse_pragma("#pragma requires l1:secrecy then l2:secrecy", {});
    REQUIRE(d2.sequence.size() == 2);
    CHECK(d2.sequence[1].first == "l2");

    auto d3 = parse_pragma("#pragma param(2) EncodedBal:integrity", {});
    CHECK(d3.kind == PragmaDirective::Kind::Param);
    CHECK(d3.param_index == 2);
    CHECK(d3.sequence[0].second == Projection::Integrity);

    auto d4 = parse_pragma("#pragma return valid_gate:(secrecy, integrity)", {});
    CHECK(d4.kind == PragmaDirective::Kind::Return);
    CHECK(d4.sequence[0].second == Projection::Both);

    auto d5 = parse_pragma("#pragma requires {f1:int, .push_time:unsigned long} l1:secrecy", {});
    REQUIRE(d5.field_set.size() == 2);
    CHECK(d5.field_set[0] == std::pair<std::string, std::string>{"f1", "int"});
    CHECK(d5.field_set[1] == std::pair<std::string, std::string>{"push_time", "unsigned long"});

    auto d6 = parse_pragma("#pragma param t:integrity", {});
    CHECK(d6.kind == PragmaDirective::Kind::Param);
    CHECK_FALSE(d6.param_index.has_value());
}

TEST_CASE("pragma grammar rejections carry a column") {
    auto reject = [](const std::string& text) {
        try {
            parse_pragma(text, {"f.c", 3, 1});
            return false;
        } catch (const FrontendError& e) {
            CHECK(e.code == DiagCode::SyntaxError);
            CHECK(e.loc.col >= 1);
            return true;
        }
    };
    CHECK(reject("#pragma requires"));                         // empty sequence
    CHECK(reject("#pragma requires AlicePriv"));               // missing colon
    CHECK(reject("#pragma requires a:privacy"));               // bad projection
    CHECK(reject("#pragma requires check-valid-ptr:secrecy")); // hyphen rejected
    CHECK(reject("#pragma param(0) a:secrecy"));               // index >= 1
    CHECK(reject("#pragma param {f:int} a:secrecy"));          // field set on param
    CHECK(reject("#pragma requires a:secrecy and b:secrecy")); // not 'then'
    CHECK(reject("#pragma frobnicate a:secrecy"));             // unknown kind
}

TEST_CASE("render_pragma round-trips through parse_pragma") {
    const char* lines[] = {
        "#pragma requires AlicePriv:secrecy",
        "#pragma requires l1:secrecy then l2:(secrecy, integrity) then l3:integrity",
        "#pragma param(2) EncodedBal:integrity",
        "#pragma return valid_gate:(secrecy, integrity)",
        "#pragma requires {f1:int, f2:unsigned long} l1:secrecy",
    };
    for (const char* line : lines) {
        PragmaDirective d = parse_pragma(line, {});
        PragmaDirective d2 = parse_pragma(render_pragma(d), {});
        CHECK(render_pragma(d) == render_pragma(d2));
        CHECK(d.kind == d2.kind);
        CHECK(d.sequence == d2.sequence);
        CHECK(d.field_set == d2.field_set);
    }
}

TEST_CASE("parses a simple declaration") {
    CUnit u = parse_unit("int x;", "t.c");
    REQUIRE(u.items.size() == 1);
    CHECK(u.items[0].kind == CTopItem::Kind::Decl);
    CHECK(u.items[0].decl->name == "x");
    CHECK(u.items[0].decl->type.base == "int");
    CHECK_FALSE(u.items[0].decl->is_function);
}

TEST_CASE("parses the account-handler shape: one local, two calls") {
    const char* src = R"(
int balA;

void bankHandler(int amount) {
    int newBal = balA - amount;
    postBalance(newBal);
    logTransaction(newBal);
}
)";
    CUnit u = parse_unit(src, "bank.c");
    const CDecl* f = find_decl(u, "bankHandler");
    REQUIRE(f != nullptr);
    CHECK(f->is_function);
    REQUIRE(f->params.size() == 1);
    CHECK(f->params[0].name == "amount");
    int locals = 0, calls = 0;
    for (const CStmtRef& s : f->body) {
        if (s->kind == CStmt::Kind::Decl) ++locals;
        if (s->kind == CStmt::Kind::ExprStmt && s->rhs->kind == CExpr::Kind::Call) ++calls;
    }
    CHECK(locals == 1);
    CHECK(calls == 2);
    CHECK(u.diags.empty());
}

TEST_CASE("comment-only file yields an empty unit") {
    CUnit u = parse_unit("/* just\n a comment */\n// and another\n", "t.c");
    CHECK(u.items.empty());
    CHECK(u.pragmas.empty());
}

TEST_CASE("records, typedefs, pointers, casts, member access") {
    const char* src = R"(
struct foo { int f1; int f2; };
typedef unsigned char uint8_t2;
typedef struct { int d; } wrapper;

int use(struct foo *p, uint8_t2 b) {
    int v = p->f1;
    v = (int)b;
    struct foo local = {.f1 = 1, .f2 = 2};
    return local.f2 + v;
}
)";
    CUnit u = parse_unit(src, "t.c");
    REQUIRE(u.items.size() >= 4);
    CHECK(u.items[0].kind == CTopItem::Kind::Record);
    CHECK(u.items[0].record.fields.size() == 2);
    CHECK(u.items[1].kind == CTopItem::Kind::Typedef);
    CHECK(u.items[1].tdef.type.base == "unsigned char");
    CHECK(u.items[2].kind == CTopItem::Kind::Record);
    CHECK(u.items[2].record.name == "wrapper");
    const CDecl* f = find_decl(u, "use");
    REQUIRE(f != nullptr);
    CHECK(f->params[0].type == CType{"struct foo", 1, false});
    REQUIRE(f->body.size() == 4);
    CHECK(f->body[0]->decl->init->kind == CExpr::Kind::Member);
    CHECK(f->body[0]->decl->init->is_arrow);
    CHECK(f->body[1]->kind == CStmt::Kind::Assign);
    CHECK(f->body[1]->rhs->kind == CExpr::Kind::Cast);
    CHECK(f->body[2]->decl->init->kind == CExpr::Kind::InitList);
    CHECK(f->body[2]->decl->init->items[0].designator == "f1");
    CHECK(u.diags.empty());
}

TEST_CASE("unsupported constructs are preserved opaquely with warnings") {
    const char* src = R"(
int ok;
int loops(int n) {
    int acc = 0;
    while (n) { acc = acc + n; n = n - 1; }
    return acc;
}
union sig { void (*handler)(int); int code; };
)";
    CUnit u = parse_unit(src, "t.c");
    const CDecl* f = find_decl(u, "loops");
    REQUIRE(f != nullptr);
    bool saw_opaque = false;
    for (const CStmtRef& s : f->body)
        if (s->kind == CStmt::Kind::Opaque) {
            saw_opaque = true;
            CHECK(s->text.find("while") != std::string::npos);
            CHECK(s->text.find("acc + n") != std::string::npos);
        }
    CHECK(saw_opaque);
    int warnings = 0;
    for (const Diagnostic& d : u.diags)
        if (d.code == DiagCode::OpaqueRegion) ++warnings;
    CHECK(warnings >= 1);
    // The opaque slices are verbatim source text.
    for (const CTopItem& item : u.items)
        if (item.kind == CTopItem::Kind::Opaque)
            CHECK(u.text.substr(item.offset, item.length) == item.text);
}

TEST_CASE("top item spans tile the source in order") {
    const char* src = "#include \"a.h\"\nint x;\nstruct s { int a; };\nint f(void) { return x; }\n";
    CUnit u = parse_unit(src, "t.c");
    size_t prev_end = 0;
    for (const CTopItem& item : u.items) {
        CHECK(item.offset >= prev_end);
        prev_end = item.offset + item.length;
    }
    CHECK(prev_end <= u.text.size());
    // Re-lexing the concatenated slices gives the same tokens as the input.
    std::string sliced;
    for (const CTopItem& item : u.items) sliced += u.text.substr(item.offset, item.length) + "\n";
    auto orig = token_texts(src);
    auto rebuilt = token_texts(sliced);
    CHECK(orig == rebuilt);
}

TEST_CASE("directives bind to the immediately following declaration") {
    const char* src = R"(
#pragma requires AlicePriv:secrecy
int balA;

#pragma param AlicePriv:secrecy
#pragma return EncodedBal:integrity
int encodeA(int x);
)";
    CUnit u = parse_unit(src, "t.c");
    auto diags = attach_annotations(u);
    CHECK(diags.empty());
    const CDecl* bal = find_decl(u, "balA");
    REQUIRE(bal != nullptr);
    REQUIRE(bal->bound.size() == 1);
    CHECK(bal->bound[0].kind == PragmaDirective::Kind::Requires);
    const CDecl* enc = find_decl(u, "encodeA");
    REQUIRE(enc != nullptr);
    REQUIRE(enc->bound.size() == 2);
    CHECK(enc->bound[0].kind == PragmaDirective::Kind::Param);
    CHECK(enc->bound[1].kind == PragmaDirective::Kind::Return);
}

TEST_CASE("binding errors: dangling, kind mismatch, void return, variadic") {
    const char* src = R"(
#pragma requires a:secrecy
struct s { int x; };

#pragma requires b:secrecy
void f(void);

#pragma return t:integrity
void g(int x);

#pragma param(3) c:secrecy
int h(int x, int y, ...);

#pragma requires tail:secrecy
)";
    CUnit u = parse_unit(src, "t.c");
    auto diags = attach_annotations(u);
    std::vector<DiagCode> codes;
    for (const Diagnostic& d : diags) codes.push_back(d.code);
    REQUIRE(codes.size() == 5);
    CHECK(std::count(codes.begin(), codes.end(), DiagCode::DanglingDirective) == 2);
    CHECK(std::count(codes.begin(), codes.end(), DiagCode::KindMismatch) == 1);
    CHECK(std::count(codes.begin(), codes.end(), DiagCode::VoidReturnAnnotation) == 1);
    CHECK(std::count(codes.begin(), codes.end(), DiagCode::VariadicAnnotation) == 1);
}

TEST_CASE("every directive is either bound or reported, never dropped") {
    const char* src = R"(
#pragma requires a:secrecy
int x;
#pragma requires b:secrecy
#pragma param c:secrecy
int f(int v) {
    #pragma requires d:integrity
    int local = v;
    return local;
}
#pragma requires e:secrecy
)";
    CUnit u = parse_unit(src, "t.c");
    auto diags = attach_annotations(u);
    size_t bound = 0;
    std::function<void(const std::vector<CStmtRef>&)> count_stmts =
        [&](const std::vector<CStmtRef>& body) {
            for (const CStmtRef& s : body) {
                if (s->kind == CStmt::Kind::Decl) bound += s->decl->bound.size();
                count_stmts(s->then_body);
                count_stmts(s->else_body);
            }
        };
    for (const CTopItem& item : u.items)
        if (item.kind == CTopItem::Kind::Decl) {
            bound += item.decl->bound.size();
            if (item.decl->has_body) count_stmts(item.decl->body);
        }
    size_t total_directives = 5;
    CHECK(bound + diags.size() == total_directives);
    CHECK(bound == 3);  // a, c, d bind; b is a KindMismatch, e dangles
}

TEST_CASE("include resolution orders dependencies first") {
    TempTree t;
    t.write("c.h", "int cc;\n");
    t.write("b.h", "#include \"c.h\"\nint bb;\n");
    std::string root = t.write("a.c", "#include \"b.h\"\n#include <stdio.h>\nint aa;\n");
    DependencyGraph g = resolve_includes(root);
    REQUIRE(g.order.size() == 3);
    CHECK(fs::path(g.order[0]).filename() == "c.h");
    CHECK(fs::path(g.order[1]).filename() == "b.h");
    CHECK(fs::path(g.order[2]).filename() == "a.c");
    CHECK(g.edges.size() == 2);
    CHECK(g.system_includes == std::vector<std::string>{"stdio.h"});
}

TEST_CASE("include resolution: single file, missing file, cycle") {
    TempTree t;
    std::string solo = t.write("solo.c", "int x;\n");
    DependencyGraph g = resolve_includes(solo);
    CHECK(g.order.size() == 1);
    CHECK(g.edges.empty());

    std::string bad = t.write("bad.c", "#include \"nope.h\"\n");
    CHECK_THROWS_AS(resolve_includes(bad), FrontendError);

    t.write("x.h", "#include \"y.h\"\n");
    t.write("y.h", "#include \"x.h\"\n");
    std::string cyc = t.write("cyc.c", "#include \"x.h\"\n");
    try {
        resolve_includes(cyc);
        CHECK(false);
    } catch (const FrontendError& e) {
        CHECK(e.code == DiagCode::IncludeCycle);
    }
}

TEST_CASE("children are visited in lexicographic order") {
    TempTree t;
    t.write("zeta.h", "int z;\n");
    t.write("alpha.h", "int a;\n");
    std::string root = t.write("r.c", "#include \"zeta.h\"\n#include \"alpha.h\"\nint r;\n");
    DependencyGraph g = resolve_includes(root);
    REQUIRE(g.order.size() == 3);
    CHECK(fs::path(g.order[0]).filename() == "alpha.h");
    CHECK(fs::path(g.order[1]).filename() == "zeta.h");
}

TEST_CASE("variadic annotations on named parameters are accepted") {
    const char* src = R"(
#pragma param(2) lbl:integrity
int snprintf_like(char *buf, int n, ...);
)";
    CUnit u = parse_unit(src, "t.c");
    auto diags = attach_annotations(u);
    CHECK(diags.empty());
    const CDecl* f = find_decl(u, "snprintf_like");
    REQUIRE(f != nullptr);
    CHECK(f->variadic);
    CHECK(f->bound.size() == 1);
}
