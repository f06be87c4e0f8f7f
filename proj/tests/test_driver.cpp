// Pipeline driver: exit-code contract, diagnostic rendering templates,
// summary counting, determinism, and the synthetic benchmark generator.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <cstdlib>
#include <fstream>

#include "fln/driver.hpp"

using namespace fln;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    fs::path dir = fs::temp_directory_path() / "fln_driver_test";
    fs::create_directories(dir);
    std::string path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

RunResult check_source(const std::string& name, const std::string& src) {
    RunConfig cfg;
    cfg.root = write_temp(name, src);
    return run(cfg);
}

}  // namespace

TEST_CASE("missing root exits 2") {
    RunConfig cfg;
    cfg.root = "/nonexistent/never.c";
    RunResult r = run(cfg);
    CHECK(r.exit_code == 2);
    CHECK(!r.error_text.empty());
}

TEST_CASE("check mode rejects an output directory") {
    RunConfig cfg;
    cfg.root = write_temp("empty.c", "int x;\n");
    cfg.out_dir = "/tmp/somewhere";
    CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("clean annotated project exits 0 with policy counts by kind") {
    RunResult r = check_source("clean.c", R"(#pragma requires a:secrecy
int x;
#pragma requires b:integrity
int y;
#pragma requires c:secrecy then d:integrity
int z;
)");
    CHECK(r.exit_code == 0);
    CHECK(r.report.find("3 annotations, 3 policies (1 sec, 1 int, 1 seq)") != std::string::npos);
}

TEST_CASE("violation exits 1 and renders the argument template with a caret") {
    RunResult r = check_source("leak.c", R"(#pragma requires AlicePriv:secrecy
int balA;
void postBalance(int b);
void go(void) {
    postBalance(balA);
}
)");
    CHECK(r.exit_code == 1);
    CHECK(r.error_text.find("error: incompatible type for argument 1 of 'postBalance'") !=
          std::string::npos);
    CHECK(r.error_text.find(":5:5:") != std::string::npos);
    CHECK(r.error_text.find("^") != std::string::npos);
}

TEST_CASE("assignment mismatch renders the incompatible-types template") {
    Diagnostic d = Diagnostic::error(DiagCode::AssignMismatch, {"f.c", 3, 9}, "");
    d.expected = "__fln__check_lenI_int";
    d.found = "uint8_t";
    CHECK(render_diagnostic(d) ==
          "f.c:3:9: error: incompatible types when assigning to type '__fln__check_lenI_int' "
          "from type 'uint8_t'");
}

TEST_CASE("pointer-argument mismatch renders the incompatible-pointer template") {
    Diagnostic d = Diagnostic::error(DiagCode::ArgPointerMismatch, {"f.c", 6, 5}, "");
    d.callee = "copy_do_1";
    d.argno = 2;
    CHECK(render_diagnostic(d) ==
          "f.c:6:5: error: passing argument 2 of 'copy_do_1' from incompatible pointer type "
          "[-Werror=incompatible-pointer-types]");
}

TEST_CASE("warnings alone keep exit 0 unless fail-on-warning is set") {
    std::string src = "#pragma requires a:secrecy\nint q(void);\nint other;\n";
    // A requires directive on a function produces a warning-level binding
    // problem at worst; synthesize one directly to keep the case focused.
    RunConfig cfg;
    cfg.root = write_temp("warn.c", "@#$ unparseable |||\nint x;\n");
    RunResult r = run(cfg);
    bool any_error = false;
    for (const auto& d : r.diags)
        if (d.severity == Severity::Error) any_error = true;
    if (!any_error) {
        CHECK(r.exit_code == 0);
        cfg.fail_on_warning = true;
        CHECK(run(cfg).exit_code == (r.diags.empty() ? 0 : 1));
    }
    (void)src;
}

TEST_CASE("same input produces byte-identical report and rendering") {
    std::string src = bench_generate(300, 12, 9);
    RunResult a = check_source("det.c", src);
    RunResult b = check_source("det.c", src);
    CHECK(a.report == b.report);
    CHECK(a.error_text == b.error_text);
    CHECK(a.exit_code == b.exit_code);
}

TEST_CASE("bench generator hits the requested size and annotation count") {
    std::string src = bench_generate(500, 16, 3);
    CHECK(std::count(src.begin(), src.end(), '\n') == 500);
    CUnit u = parse_unit(src, "bench.c");
    CHECK((int)u.pragmas.size() == 16);
    RunResult r = check_source("bench.c", src);
    CHECK(r.exit_code == 0);
}

TEST_CASE("bench generator with zero annotations is identity under emit") {
    std::string src = bench_generate(60, 0, 4);
    std::string root = write_temp("plain.c", src);
    fs::path out = fs::temp_directory_path() / "fln_driver_test" / "out";
    fs::remove_all(out);
    RunConfig cfg;
    cfg.root = root;
    cfg.mode = RunConfig::Mode::Both;
    cfg.out_dir = out.string();
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    std::ifstream f((out / "plain.c").string(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == src);
}

TEST_CASE("profile report names the four pipeline stages") {
    RunConfig cfg;
    cfg.root = write_temp("prof.c", "int x;\n");
    cfg.profile = true;
    RunResult r = run(cfg);
    for (const char* stage : {"Parse Files", "Build AST", "Transform", "Generate Header"})
        CHECK(r.report.find(stage) != std::string::npos);
}

// Gated: set FLN_VERIFY_CC to a C compiler to cross-check emitted code.
TEST_CASE("external compiler verdict matches the internal checker") {
    const char* cc = std::getenv("FLN_VERIFY_CC");
    if (!cc) return;  // optional, environment-gated
    auto verdicts = [&](const std::string& name, const std::string& src) {
        std::string root = write_temp(name, src);
        RunConfig cfg;
        cfg.root = root;
        int internal = run(cfg).exit_code;
        fs::path out = fs::temp_directory_path() / "fln_driver_test" / ("v_" + name);
        fs::remove_all(out);
        cfg.mode = RunConfig::Mode::Emit;
        cfg.out_dir = out.string();
        run(cfg);
        std::string cmd = std::string(cc) + " -fsyntax-only \"" +
                          (out / name).string() + "\" 2>/dev/null";
        int external = std::system(cmd.c_str()) == 0 ? 0 : 1;
        return std::make_pair(internal, external);
    };
    auto clean = verdicts("vc_clean.c", R"(#pragma requires a:secrecy
int x;
#pragma param a:secrecy
void sink(int v);
void go(void) { sink(x); }
)");
    CHECK(clean.first == clean.second);
    auto bad = verdicts("vc_bad.c", R"(#pragma requires a:secrecy
int x;
void sink(int v);
void go(void) { sink(x); }
)");
    CHECK(bad.first == bad.second);
    CHECK(bad.first == 1);
}
