// End-to-end acceptance gate: one pass/fail line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fln/driver.hpp"
#include "fln/generate.hpp"
#include "fln/muc.hpp"
#include "fln/translate.hpp"

using namespace fln;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what) {
    std::printf("criterion %2d: %s — %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture(const std::string& name) {
    return std::string(FLN_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    for (const Token& t : lex(text, "x"))
        if (t.kind != Token::Kind::End) out.push_back(t.text);
    return out;
}

RunResult check_file(const std::string& path) {
    RunConfig cfg;
    cfg.root = path;
    return run(cfg);
}

int error_count(const RunResult& r) {
    int n = 0;
    for (const auto& d : r.diags)
        if (d.severity == Severity::Error) ++n;
    return n;
}

// ---- criteria -------------------------------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    RunResult bad = check_file(fixture("secrecy_leak.c"));
    RunResult good = check_file(fixture("secrecy_leak_fixed.c"));
    bool ok = bad.exit_code == 1 && error_count(bad) == 1 && bad.diags[0].loc.line == 5 &&
              good.exit_code == 0 && error_count(good) == 0 && seconds_since(t0) < 1.0;
    report(1, ok, "secrecy policy end-to-end: leak flagged at the call line, annotation clears it");
}

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    RunResult good = check_file(fixture("sequencing_good.c"));
    RunResult bad = check_file(fixture("sequencing_bad.c"));
    bool ok = good.exit_code == 0 && bad.exit_code == 1 && error_count(bad) == 1 &&
              bad.diags[0].loc.line == 9 && seconds_since(t0) < 1.0;
    report(2, ok, "sequencing policy end-to-end: encode-then-execute accepted, reorder rejected");
}

void criterion_3() {
    Policy attacker = Policy::single(Label::bottom(), Terminal::Top);
    Label alice{SecrecyTag::make("AlicePrivate"), IntegrityTag::bottom()};
    Label encoded{SecrecyTag::bottom(), IntegrityTag::make("EncodedBal")};
    RelabelCapability encode{alice, encoded, "encodeA"};
    RelabelCapability yao{encoded, Label::bottom(), "yao_execA"};
    bool a = in_high(attacker, {}, Policy::single(alice));
    bool b = in_high(attacker, {encode}, Policy::single(encoded));
    bool c = in_high(attacker, {encode, yao}, Policy::single(encoded));
    report(3, a && b && !c,
           "high-policy membership: empty set and encode-capability high, full chain not high");
}

void criterion_4() {
    Policy p = elaborate_policy({{"l1", Projection::Secrecy}, {"l2", Projection::Secrecy}});
    std::string dir = FLN_GOLDEN_DIR;
    bool ok = emit_policy_typedef("int", p) == slurp(dir + "/typedef_simple.c") &&
              emit_policy_typedef("struct foo", p) == slurp(dir + "/typedef_struct_whole.c") &&
              emit_field_typedef("foo", p, {{"f1", "int"}, {"f2", "int"}}) ==
                  slurp(dir + "/typedef_struct_fields.c");

    // Member-access and initializer rewriting through the unit rewriter.
    const char* src = R"(struct foo { int f1; int f2; };
typedef struct foo foo;
#pragma requires {f1:int} l1:secrecy then l2:secrecy
foo x = {.f1 = 1, .f2 = 2};
int use(void) {
    int y;
    y = x.f2 + x.f1;
    return y;
}
)";
    CUnit u = parse_unit(src, "t.c");
    attach_annotations(u);
    SurfaceCtx ctx;
    HeaderPlan plan;
    RewrittenFile rf = rewrite_unit(u, ctx, plan);
    auto want_line = [&](const std::string& golden_file) {
        std::string want = slurp(dir + "/" + golden_file);
        while (!want.empty() && (want.back() == '\n' || want.back() == '\r')) want.pop_back();
        return rf.text.find(want) != std::string::npos;
    };
    ok = ok && want_line("member_access_rewrite.c") && want_line("initializer_rewrite.c");
    report(4, ok, "golden emission: five generated-C forms match byte-for-byte");
}

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    GenOptions opts;
    std::mt19937_64 rng(101);
    int bad = 0;
    const int kRuns = 1000;
    for (int i = 0; i < kRuns; ++i) {
        Generated g = generate_program(rng, opts);
        GeneratedDefs defs;
        MucProgram mp = translate_program(g.prog, defs, TranslateMode::Faithful);
        if (!check_muc_program(mp).empty()) {
            ++bad;
            continue;
        }
        try {
            ExprRef tb = translate_expr(g.body, g.prog, defs, g.params, Policy::bottom(),
                                        TranslateMode::Faithful);
            for (const auto& [n, fields] : defs.defs) mp.records[n] = fields;
            MucCheckCtx mctx;
            mctx.prog = &mp;
            for (const auto& [n, t] : g.params) mctx.vars[n] = translate_type(t, g.prog, defs);
            MTypeRef got = typecheck_muc(mctx, tb);

            CheckCtx pctx;
            pctx.prog = &g.prog;
            for (const auto& [n, t] : g.params) pctx.vars[n] = t;
            STypeRef st = typecheck_expr(pctx, Policy::bottom(), g.body);
            if (!mtype_equal(got, translate_type(st, g.prog, defs))) ++bad;
        } catch (const TypeError&) {
            ++bad;
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream what;
    what << "translation soundness on " << kRuns << " generated programs, " << bad
         << " counterexamples, " << (int)secs << " s";
    report(5, bad == 0 && secs < 60.0, what.str());
}

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    GenOptions opts;
    opts.allow_relabel = false;
    opts.allow_de = false;
    opts.low_result = true;
    Policy attacker = Policy::single(Label::bottom(), Terminal::Top);
    std::mt19937_64 rng(29);
    int trials = 0, fails = 0;
    while (trials < 500) {
        Generated g = generate_program(rng, opts);
        auto r = noninterference_trial(g.prog, g.body, g.params, g.high_var, attacker, {},
                                       40000 + (uint64_t)trials);
        if (r.verdict == NiTrialResult::Verdict::IllTyped ||
            r.verdict == NiTrialResult::Verdict::FuelOut)
            continue;
        ++trials;
        if (r.verdict == NiTrialResult::Verdict::Fail) ++fails;
    }
    double secs = seconds_since(t0);
    std::ostringstream what;
    what << "noninterference: " << trials << " paired trials, " << fails << " failures, "
         << (int)secs << " s";
    report(6, fails == 0 && secs < 60.0, what.str());
}

void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    GenOptions opts;
    std::mt19937_64 rng(7);
    int runs = 0, mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        Generated g = generate_program(rng, opts);
        Store store;
        std::vector<STypeRef> st = g.prog.store_typing;
        ExprRef body = g.body;
        for (const auto& [name, t] : g.params)
            body = subst(body, name, generate_value(rng, g.prog, t, store, st));
        FunTable funs;
        for (const auto& [n, f] : g.prog.funs) funs.emplace(n, f);
        PairedStore pstore;
        for (const auto& c : store.cells) pstore.cells.push_back({c, c});
        auto single = eval(funs, store, body);
        auto paired = eval_paired(funs, pstore, body);
        ++runs;
        if (!value_equal(single.second, project(paired.second, 1)) ||
            !value_equal(single.second, project(paired.second, 2)))
            ++mismatches;
    }
    double secs = seconds_since(t0);
    std::ostringstream what;
    what << "paired-semantics agreement: " << runs << " programs, " << mismatches
         << " projection mismatches, " << (int)secs << " s";
    report(7, runs >= 500 && mismatches == 0 && secs < 60.0, what.str());
}

void criterion_8() {
    struct Case {
        const char* file;
        const char* must_contain;  // message-template fragment, or ""
    };
    const Case cases[] = {
        {"case_flipbit.c", ""},
        {"case_valid_gate.c", ""},
        {"case_check_valid_ptr.c",
         "from incompatible pointer type [-Werror=incompatible-pointer-types]"},
        {"case_check_len.c", "incompatible types when assigning to type"},
    };
    bool ok = true;
    for (const Case& c : cases) {
        std::string path = fixture(c.file);
        std::string text = slurp(path);
        // The fixture's last line records the expected diagnostic.
        size_t at = text.find("// expect: ");
        int want_line = 0;
        char want_code[64] = {0};
        if (at == std::string::npos ||
            std::sscanf(text.c_str() + at, "// expect: %d %63s", &want_line, want_code) != 2) {
            ok = false;
            continue;
        }
        RunResult r = check_file(path);
        bool one = r.exit_code == 1 && error_count(r) == 1;
        bool placed = one && r.diags[0].loc.line == want_line &&
                      std::string(diag_code_name(r.diags[0].code)) == want_code;
        bool templated =
            c.must_contain[0] == 0 || r.error_text.find(c.must_contain) != std::string::npos;
        if (!(one && placed && templated)) ok = false;
    }
    report(8, ok, "case-study miniatures: one diagnostic each at the expected line,"
                  " message templates match");
}

void criterion_9() {
    fs::path dir = fs::temp_directory_path() / "fln_bench";
    fs::create_directories(dir);
    auto time_check = [&](int loc, int ann, const char* name) {
        std::string path = (dir / name).string();
        std::ofstream(path) << bench_generate(loc, ann, 5);
        auto t0 = std::chrono::steady_clock::now();
        RunResult r = check_file(path);
        double secs = seconds_since(t0);
        return std::make_pair(r.exit_code == 0 ? secs : 1e9, secs);
    };
    auto big = time_check(4000, 128, "big.c");
    auto small = time_check(500, 16, "small.c");
    std::ostringstream what;
    what.setf(std::ios::fixed);
    what.precision(2);
    what << "performance: 4000-line/128-annotation check in " << big.second
         << " s (< 10), 500/16 in " << small.second << " s (< 2)";
    report(9, big.first < 10.0 && small.first < 2.0, what.str());
    fs::remove_all(dir);
}

void criterion_10() {
    fs::path out = fs::temp_directory_path() / "fln_identity_out";
    fs::remove_all(out);
    RunConfig cfg;
    cfg.root = fixture("identity_200.c");
    cfg.mode = RunConfig::Mode::Both;
    cfg.out_dir = out.string();
    RunResult r = run(cfg);
    std::string emitted = slurp((out / "identity_200.c").string());
    std::string header = slurp((out / "identity_200__fln.h").string());
    bool ok = r.exit_code == 0 && tokens_of(emitted) == tokens_of(slurp(cfg.root)) &&
              header.find("#ifndef FLN_") == 0 && header.find("typedef") == std::string::npos;
    report(10, ok, "idempotence: 200-line unannotated file transforms to itself,"
                   " header is guard-only, exit 0");
    fs::remove_all(out);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures) std::printf("%d criterion(s) failing\n", failures);
    return failures == 0 ? 0 : 1;
}
