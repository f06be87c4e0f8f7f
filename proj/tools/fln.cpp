// Command-line entry point: runs the policy-checking pipeline over a root C
// file, optionally emitting the transformed sources, or generates a
// synthetic benchmark project.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fln/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"policy annotation checker and source-to-source translator"};

    std::string root;
    std::string mode = "check";
    std::string out_dir;
    std::string verify_cc;
    unsigned seed = 0;
    int fuel = 1 << 20;
    bool profile = false;
    bool fail_on_warning = false;
    std::vector<int> bench;

    app.add_option("root", root, "root C file of the project");
    app.add_option("--mode", mode, "check | emit | both")
        ->check(CLI::IsMember({"check", "emit", "both"}));
    app.add_option("--out", out_dir, "output directory for emitted sources");
    app.add_option("--seed", seed, "deterministic seed");
    app.add_option("--fuel", fuel, "evaluation step budget");
    app.add_option("--verify-cc", verify_cc, "external compiler for emitted code");
    app.add_flag("--profile", profile, "print per-stage timings");
    app.add_flag("--fail-on-warning", fail_on_warning, "warnings also fail the run");
    app.add_option("--bench", bench, "generate a synthetic project: LOC ANNOTATIONS")
        ->expected(2);

    CLI11_PARSE(app, argc, argv);

    if (!bench.empty()) {
        std::cout << fln::bench_generate(bench[0], bench[1], seed);
        return 0;
    }
    if (root.empty()) {
        std::cerr << "error: no root file given\n";
        return 2;
    }

    fln::RunConfig cfg;
    cfg.root = root;
    cfg.mode = mode == "check"  ? fln::RunConfig::Mode::Check
               : mode == "emit" ? fln::RunConfig::Mode::Emit
                                : fln::RunConfig::Mode::Both;
    cfg.out_dir = out_dir;
    cfg.seed = seed;
    cfg.fuel = fuel;
    cfg.profile = profile;
    cfg.fail_on_warning = fail_on_warning;
    cfg.verify_cc = verify_cc;

    fln::RunResult res = fln::run(cfg);
    std::cerr << res.error_text;
    std::cout << res.report;
    return res.exit_code;
}
