// Pipeline orchestration: walks the include graph from a root file, runs
// parse → annotation binding → mapping → translation, checks the result
// internally and/or emits transformed C, and renders compiler-style
// diagnostics with a summary line.
#pragma once

#include <string>
#include <vector>

#include "fln/codegen.hpp"
#include "fln/diag.hpp"

namespace fln {

struct RunConfig {
    std::string root;
    enum class Mode { Check, Emit, Both } mode = Mode::Check;
    std::string out_dir;          // Emit/Both; defaults to <root dir>/_fln_out
    unsigned seed = 0;
    int fuel = 1u << 20;          // evaluation step budget where applicable
    bool fail_on_warning = false;
    bool profile = false;         // include a per-stage timing breakdown
    std::string verify_cc;        // optional external compiler for emitted code
};

struct StageTime {
    std::string name;
    double ms = 0;
};

struct RunResult {
    int exit_code = 0;            // 0 clean, 1 diagnostics, 2 tool failure
    std::vector<Diagnostic> diags;  // stable order: file, line, column, code
    std::string report;           // summary (and profile) text for stdout
    std::string error_text;       // rendered diagnostics for stderr
    std::vector<StageTime> stages;
    std::vector<std::string> written;  // Emit/Both: output paths
};

RunResult run(const RunConfig& config);

// `<file>:<line>:<col>: <severity>: <message>` plus a caret line when the
// originating source text is available.
std::string render_diagnostic(const Diagnostic& d, const std::string& source_text = "");

// Deterministic synthetic C-subset project of roughly `loc` lines carrying
// `annotations` pragma directives, biased toward sequencing chains. Returns
// the program text; it parses and checks clean.
std::string bench_generate(int loc, int annotations, unsigned seed);

}  // namespace fln
