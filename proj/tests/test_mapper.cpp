// Annotation mapping and translation: surface C units become labeled
// programs, labeled programs become nominal programs, and policy violations
// surface as nominal type errors at the right source lines.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fln/cfront.hpp"
#include "fln/mapper.hpp"
#include "fln/muc.hpp"
#include "fln/translate.hpp"

using namespace fln;

namespace {

MappedUnit map_source(const std::string& src) {
    static int n = 0;
    CUnit unit = parse_unit(src, "test" + std::to_string(n++) + ".c");
    auto diags = attach_annotations(unit);
    for (auto& d : diags) unit.diags.push_back(d);
    return map_units({&unit});
}

std::vector<Diagnostic> nominal_errors(const MappedUnit& mu) {
    GeneratedDefs defs;
    MucProgram muc = translate_program(mu.prog, defs);
    return check_muc_program(muc);
}

Policy sec(const std::string& atom) {
    return Policy::single({SecrecyTag::make(atom), IntegrityTag::bottom()});
}
Policy integ(const std::string& atom) {
    return Policy::single({SecrecyTag::bottom(), IntegrityTag::make(atom)});
}

}  // namespace

TEST_CASE("policy elaboration: secrecy, integrity, both, sequences") {
    Policy p1 = elaborate_policy({{"AlicePriv", Projection::Secrecy}});
    CHECK(p1 == sec("AlicePriv"));
    CHECK(p1.term == Terminal::Bottom);

    Policy p2 = elaborate_policy(
        {{"AlicePriv", Projection::Secrecy}, {"EncodedBal", Projection::Integrity}});
    REQUIRE(p2.labels.size() == 2);
    CHECK(p2.labels[0] == Label{SecrecyTag::make("AlicePriv"), IntegrityTag::bottom()});
    CHECK(p2.labels[1] == Label{SecrecyTag::bottom(), IntegrityTag::make("EncodedBal")});

    Policy p3 = elaborate_policy({{"valid_gate", Projection::Both}});
    CHECK(p3.labels[0] == Label{SecrecyTag::make("valid_gate"), IntegrityTag::make("valid_gate")});
}

TEST_CASE("surface types: unannotated markers, policies, pointer content") {
    SurfaceCtx ctx;
    ctx.typedefs["uint8_t"] = CType{"int", 0, false};
    CHECK(map_type(ctx, CType{"int", 0, false}, nullptr)->pol.is_unlabeled());
    Policy p = sec("l1");
    STypeRef t = map_type(ctx, CType{"int", 0, false}, &p);
    CHECK(t->pol == p);
    // A policy on a pointer type lands on the innermost pointee.
    STypeRef pt = map_type(ctx, CType{"uint8_t", 1, false}, &p);
    REQUIRE(pt->kind == SType::Kind::Ptr);
    CHECK(pt->pol.is_unlabeled());
    CHECK(pt->pointee->pol == p);
    CHECK(pt->pointee->cbase == "uint8_t");
}

TEST_CASE("generated names: codes, sequences, pointer suffix, qualifiers") {
    Policy two = Policy::cons({SecrecyTag::make("l1"), IntegrityTag::bottom()}, sec("l2"));
    CHECK(gen_name("int", two) == "__fln__l1S_l2S_int");
    CHECK(gen_name("volatile int", sec("test")) == "__fln__testS_volatile_int");
    CHECK(gen_name("int", integ("check_len")) == "__fln__check_lenI_int");
    Policy both = Policy::single({SecrecyTag::make("g"), IntegrityTag::make("g")});
    CHECK(gen_name("uint64_t", both) == "__fln__gSI_uint64_t");
    // Terminals are not encoded: the same labels name the same wrapper.
    Policy topped = sec("l1");
    topped.term = Terminal::Top;
    CHECK(gen_name("int", topped) == gen_name("int", sec("l1")));
}

TEST_CASE("secrecy violation: annotated value into an unannotated sink") {
    const char* src = R"(#pragma requires AlicePriv:secrecy
int balA;
void postBalance(int b);
void bankHandler(void) {
    postBalance(balA);
}
)";
    MappedUnit mu = map_source(src);
    auto errs = nominal_errors(mu);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DiagCode::ArgMismatch);
    CHECK(errs[0].loc.line == 5);
    CHECK(errs[0].callee == "postBalance");
    CHECK(errs[0].argno == 1);
    CHECK(errs[0].found == "__fln__AlicePrivS_int");
}

TEST_CASE("secrecy violation clears when the sink is annotated") {
    const char* src = R"(#pragma requires AlicePriv:secrecy
int balA;
#pragma param AlicePriv:secrecy
void postBalance(int b);
void bankHandler(void) {
    postBalance(balA);
}
)";
    MappedUnit mu = map_source(src);
    CHECK(nominal_errors(mu).empty());
}

TEST_CASE("sequencing: encode-then-execute passes, execute-first fails") {
    const char* good = R"(#pragma requires AlicePriv:secrecy then EncodedBal:integrity
int balA;
#pragma param AlicePriv:secrecy
#pragma return EncodedBal:integrity
int encodeA(int x);
#pragma param EncodedBal:integrity
void yao_execA(int x);
void run(void) {
    yao_execA(encodeA(balA));
}
)";
    MappedUnit mu = map_source(good);
    REQUIRE(mu.diags.empty());
    // encodeA is registered as declassification/endorsement.
    REQUIRE(mu.caps.size() == 1);
    CHECK(mu.caps[0].source == "encodeA");
    CHECK(nominal_errors(mu).empty());

    const char* bad = R"(#pragma requires AlicePriv:secrecy then EncodedBal:integrity
int balA;
#pragma param AlicePriv:secrecy
#pragma return EncodedBal:integrity
int encodeA(int x);
#pragma param EncodedBal:integrity
void yao_execA(int x);
void run(void) {
    yao_execA(balA);
}
)";
    auto errs = nominal_errors(map_source(bad));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DiagCode::ArgMismatch);
    CHECK(errs[0].loc.line == 9);
    CHECK(errs[0].callee == "yao_execA");
}

TEST_CASE("pointer endorsement: unchecked pointer into a checked parameter") {
    const char* src = R"(#pragma param(2) check_valid_ptr:integrity
void copy_do_1(int tag, int *do_data, int with_tag);
#pragma return check_valid_ptr:integrity
int *check_do_ptr(int *p);
void rw_kdf(int *do_ptr, int tag, int with_tag) {
    copy_do_1(tag, do_ptr, with_tag);
}
)";
    auto errs = nominal_errors(map_source(src));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DiagCode::ArgPointerMismatch);
    CHECK(errs[0].loc.line == 6);
    CHECK(errs[0].argno == 2);
    CHECK(errs[0].callee == "copy_do_1");

    const char* fixed = R"(#pragma param(2) check_valid_ptr:integrity
void copy_do_1(int tag, int *do_data, int with_tag);
#pragma return check_valid_ptr:integrity
int *check_do_ptr(int *p);
void rw_kdf(int *do_ptr, int tag, int with_tag) {
    copy_do_1(tag, check_do_ptr(do_ptr), with_tag);
}
)";
    CHECK(nominal_errors(map_source(fixed)).empty());
}

TEST_CASE("assignment endorsement: unchecked value into a checked variable") {
    const char* src = R"(#pragma requires check_len:integrity
int len;
void copy_do_1(int *do_data) {
    len = do_data[0];
}
)";
    auto errs = nominal_errors(map_source(src));
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DiagCode::AssignMismatch);
    CHECK(errs[0].loc.line == 4);
    CHECK(errs[0].expected == "__fln__check_lenI_int");

    const char* fixed = R"(#pragma requires check_len:integrity
int len;
#pragma return check_len:integrity
int check_len_fn(int n);
void copy_do_1(int *do_data) {
    len = check_len_fn(do_data[0]);
}
)";
    CHECK(nominal_errors(map_source(fixed)).empty());
}

TEST_CASE("unannotated programs map to unlabeled accepted programs") {
    const char* src = R"(int counter;
int bump(int by) {
    int next = counter + by;
    counter = next;
    if (next) { return next; }
    return 0;
}
void twice(void) {
    bump(1);
    bump(2);
}
)";
    MappedUnit mu = map_source(src);
    CHECK(mu.diags.empty());
    CHECK(mu.caps.empty());
    CHECK(check_polc_program(mu.prog).empty());
    GeneratedDefs defs;
    MucProgram muc = translate_program(mu.prog, defs);
    CHECK(check_muc_program(muc).empty());
    CHECK(defs.defs.empty());  // nothing annotated, nothing generated
}

TEST_CASE("mapped labeled programs satisfy the labeled checker on clean fixtures") {
    const char* src = R"(#pragma requires AlicePriv:secrecy then EncodedBal:integrity
int balA;
#pragma param AlicePriv:secrecy
#pragma return EncodedBal:integrity
int encodeA(int x);
#pragma param EncodedBal:integrity
void yao_execA(int x);
void run(void) {
    yao_execA(encodeA(balA));
}
)";
    MappedUnit mu = map_source(src);
    auto errs = check_polc_program(mu.prog);
    for (const auto& d : errs) MESSAGE(d.message);
    CHECK(errs.empty());
}

TEST_CASE("field-annotated instances: labeled field, unlabeled rest") {
    const char* src = R"(struct foo { int f1; int f2; };
#pragma requires {f1:int} p:secrecy
struct foo x;
void sink(int n);
void use(void) {
    sink(x.f2);
}
)";
    MappedUnit mu = map_source(src);
    auto errs = nominal_errors(mu);
    CHECK(errs.empty());

    const char* bad = R"(struct foo { int f1; int f2; };
#pragma requires {f1:int} p:secrecy
struct foo x;
void sink(int n);
void use(void) {
    sink(x.f1);
}
)";
    auto errs2 = nominal_errors(map_source(bad));
    REQUIRE(errs2.size() == 1);
    CHECK(errs2[0].code == DiagCode::ArgMismatch);
    CHECK(errs2[0].found == "__fln__pS_int");
}

TEST_CASE("d&e base type mismatch is reported") {
    const char* src = R"(struct foo { int f1; };
#pragma param l1:secrecy
#pragma return l2:integrity
struct foo f(int x);
)";
    MappedUnit mu = map_source(src);
    REQUIRE(mu.diags.size() == 1);
    CHECK(mu.diags[0].code == DiagCode::BaseTypeMismatch);
}

TEST_CASE("translated globals use wrapper cells; translation is deterministic") {
    const char* src = R"(#pragma requires l1:secrecy then l2:secrecy
int x;
)";
    MappedUnit mu = map_source(src);
    GeneratedDefs d1, d2;
    MucProgram m1 = translate_program(mu.prog, d1);
    MucProgram m2 = translate_program(mu.prog, d2);
    REQUIRE(d1.order == d2.order);
    REQUIRE(d1.order.size() == 1);
    CHECK(d1.order[0] == "__fln__l1S_l2S_int");
    REQUIRE(m1.globals.count("x"));
    CHECK(m1.globals.at("x")->kind == MType::Kind::Ptr);
    CHECK(m1.globals.at("x")->pointee->rec == "__fln__l1S_l2S_int");
}
