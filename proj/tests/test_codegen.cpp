// C emission: golden typedef/rewrite forms, header generation and
// deduplication, member-access and initializer rewriting, surface feature
// rules, and output-tree reconstruction.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fln/codegen.hpp"
#include "fln/translate.hpp"

using namespace fln;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) {
    return slurp(std::string(FLN_GOLDEN_DIR) + "/" + name);
}

Policy seq_l1_l2() {
    return elaborate_policy({{"l1", Projection::Secrecy}, {"l2", Projection::Secrecy}});
}

RewrittenFile rewrite_source(const std::string& src, HeaderPlan& plan,
                             const std::string& path = "t.c") {
    CUnit u = parse_unit(src, path);
    attach_annotations(u);
    SurfaceCtx ctx;
    return rewrite_unit(u, ctx, plan);
}

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (l == line) return true;
    return false;
}

// Whitespace-insensitive token equality.
std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    for (const Token& t : lex(text, "x"))
        if (t.kind != Token::Kind::End) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("scalar wrapper typedef matches the golden form") {
    CHECK(emit_policy_typedef("int", seq_l1_l2()) == golden("typedef_simple.c"));
}

TEST_CASE("whole-record wrapper nests the structure as the data member") {
    CHECK(emit_policy_typedef("struct foo", seq_l1_l2()) == golden("typedef_struct_whole.c"));
}

TEST_CASE("field-annotated wrapper lists labeled fields before the nested record") {
    CHECK(emit_field_typedef("foo", seq_l1_l2(), {{"f1", "int"}, {"f2", "int"}}) ==
          golden("typedef_struct_fields.c"));
}

TEST_CASE("conversion pair wraps into and projects out of the data member") {
    Policy p = elaborate_policy({{"AlicePriv", Projection::Secrecy}});
    std::string fns = emit_relabel_fns("int", p);
    CHECK(has_line(fns, "__fln__AlicePrivS_int __fln__AlicePrivS_int_w(int x) {"));
    CHECK(has_line(fns, "int __fln__AlicePrivS_int_r(__fln__AlicePrivS_int x) {"));
    CHECK(fns.find("r.d = x;") != std::string::npos);
    CHECK(fns.find("return x.d;") != std::string::npos);
}

TEST_CASE("header: empty plan yields a guard-only header") {
    std::string h = generate_header({}, "t__fln.h");
    CHECK(h.find("#ifndef FLN_") == 0);
    CHECK(h.find("#define FLN_") != std::string::npos);
    CHECK(h.find("typedef") == std::string::npos);
    CHECK(h.find("#endif") != std::string::npos);
}

TEST_CASE("header: duplicate wrapper uses still emit one typedef and one pair") {
    HeaderPlan plan;
    HeaderEntry e;
    e.base = "int";
    e.pol = seq_l1_l2();
    plan.add(e);
    plan.add(e);
    REQUIRE(plan.entries.size() == 1);
    std::string h = generate_header(plan, "t__fln.h");
    size_t first = h.find("typedef struct {int d;}");
    REQUIRE(first != std::string::npos);
    CHECK(h.find("typedef struct {int d;}", first + 1) == std::string::npos);
}

TEST_CASE("header generation is deterministic") {
    HeaderPlan plan;
    HeaderEntry e;
    e.base = "uint8_t";
    e.pol = elaborate_policy({{"g", Projection::Both}});
    plan.add(e);
    CHECK(generate_header(plan, "a__fln.h") == generate_header(plan, "a__fln.h"));
    CHECK(generate_header(plan, "a__fln.h") != generate_header(plan, "b__fln.h"));
}

static const char* kFieldAnnotSource = R"(struct foo { int f1; int f2; };
typedef struct foo foo;
#pragma requires {f1:int} l1:secrecy then l2:secrecy
foo x = {.f1 = 1, .f2 = 2};
int use(void) {
    int y;
    y = x.f2 + x.f1;
    return y;
}
)";

TEST_CASE("unannotated field access routes through the nested data member") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(kFieldAnnotSource, plan);
    CHECK(has_line(rf.text, "    " + golden("member_access_rewrite.c").substr(
                                         0, golden("member_access_rewrite.c").size() - 1)));
    CHECK(rf.text.find("x.f1") != std::string::npos);   // annotated: direct access
    CHECK(rf.text.find("x.d.f1") == std::string::npos);
}

TEST_CASE("designated initializer splits around the annotated fields") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(kFieldAnnotSource, plan);
    std::string want = golden("initializer_rewrite.c");
    CHECK(has_line(rf.text, want.substr(0, want.size() - 1)));
}

TEST_CASE("annotated file gets its generated header included") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(kFieldAnnotSource, plan);
    REQUIRE(rf.includes.size() == 1);
    CHECK(rf.includes[0] == "#include \"t__fln.h\"");
    CHECK(rf.text.rfind("#include \"t__fln.h\"\n", 0) == 0);
    CHECK(plan.entries.size() == 2);  // the field wrapper and its int field type
}

TEST_CASE("annotation pragma lines are removed from the output") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(kFieldAnnotSource, plan);
    CHECK(rf.text.find("#pragma requires") == std::string::npos);
}

TEST_CASE("annotated scalar with initializer braces the value") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(R"(#pragma requires check_len:integrity
int check_len = 16;
)",
                                      plan);
    CHECK(has_line(rf.text, "__fln__check_lenI_int check_len = {16};"));
}

TEST_CASE("annotated pointer declaration wraps the pointee type") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(R"(typedef int uint8_t;
#pragma requires secret:secrecy
uint8_t *buf;
)",
                                      plan);
    CHECK(rf.text.find("__fln__secretS_uint8_t * buf;") != std::string::npos);
    REQUIRE(plan.entries.size() == 1);
    CHECK(plan.entries[0].name() == "__fln__secretS_uint8_t");
}

TEST_CASE("unannotated unit is returned token-identical with no include") {
    std::string src;
    for (int i = 0; i < 40; ++i)
        src += "int g" + std::to_string(i) + "(int a, int b) { return a + b; }\n";
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(src, plan);
    CHECK(rf.text == src);
    CHECK(rf.includes.empty());
    CHECK(plan.entries.empty());
    CHECK(tokens_of(rf.text) == tokens_of(src));
}

TEST_CASE("user identifiers with the reserved prefix are rejected") {
    HeaderPlan plan;
    RewrittenFile rf = rewrite_source("int __fln__mine;\n", plan);
    REQUIRE(rf.diags.size() == 1);
    CHECK(rf.diags[0].code == DiagCode::ReservedIdentifier);
}

TEST_CASE("feature rules flag casts, pointer arithmetic, and builtin operators") {
    const char* src = R"(#pragma requires a:secrecy
int x;
#pragma requires a:secrecy
int y;
#pragma requires a:secrecy
int *p;
int use(int q) {
    q = (int)x;
    q = x + y;
    return q;
}
int walk(void) {
    int r;
    r = *(p + 1);
    return r;
}
)";
    CUnit u = parse_unit(src, "t.c");
    attach_annotations(u);
    MappedUnit mu = map_units({&u});
    std::vector<Diagnostic> diags = enforce_feature_rules(u, mu.surface);
    int casts = 0, arith = 0, ops = 0;
    for (const auto& d : diags) {
        if (d.code == DiagCode::CastOnAnnotated) ++casts;
        if (d.code == DiagCode::PointerArithOnAnnotated) ++arith;
        if (d.code == DiagCode::OperatorOnAnnotated) ++ops;
    }
    CHECK(casts == 1);
    CHECK(arith == 1);
    CHECK(ops == 1);
}

TEST_CASE("feature rules flag aliasing across mismatched annotated pointers") {
    const char* src = R"(#pragma requires a:secrecy
int *p;
#pragma requires b:secrecy
int *q;
int use(void) {
    p = q;
    return 0;
}
)";
    CUnit u = parse_unit(src, "t.c");
    attach_annotations(u);
    MappedUnit mu = map_units({&u});
    std::vector<Diagnostic> diags = enforce_feature_rules(u, mu.surface);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == DiagCode::AliasMismatch);
}

TEST_CASE("reconstruction writes the mirrored tree plus one header per file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "fln_cg_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string root = (dir / "main.c").string();
    {
        std::ofstream f(root);
        f << "int main(void) { return 0; }\n";
    }
    DependencyGraph g;
    g.root = root;
    g.order = {root};

    HeaderPlan plan;
    RewrittenFile rf = rewrite_source(slurp(root), plan, root);
    std::string out_dir = (dir / "_fln_out").string();
    std::vector<std::string> written = reconstruct_program(g, {rf}, plan, out_dir);
    REQUIRE(written.size() == 2);
    CHECK(slurp((fs::path(out_dir) / "main.c").string()) == slurp(root));
    std::string header = slurp((fs::path(out_dir) / "main__fln.h").string());
    CHECK(header.find("#ifndef FLN_") == 0);
    CHECK(header.find("typedef") == std::string::npos);
    fs::remove_all(dir);
}
