// The nominal target calculus: record types are equal only by name, which is
// the entire enforcement mechanism — policy wrappers that differ make
// otherwise identical programs fail to check.
#pragma once

#include "fln/ast.hpp"
#include "fln/polc.hpp"  // TypeError, EvalError, Store, FunTable

namespace fln {

struct MucCheckCtx {
    const MucProgram* prog = nullptr;
    std::map<std::string, MTypeRef> vars;
    std::vector<MTypeRef> store_typing;
};

// Synthesizes the unique nominal type of e or throws TypeError whose code
// distinguishes assignment, argument and generic mismatches.
MTypeRef typecheck_muc(const MucCheckCtx& ctx, const ExprRef& e);
MTypeRef typecheck_muc_value(const MucCheckCtx& ctx, const ValueRef& v);

// Checks every function body and the global initializers; recovers per
// function so independent violations each surface once.
std::vector<Diagnostic> check_muc_program(const MucProgram& prog);

// Evaluation reuses the shared small-step engine; relabels never occur in
// translated programs.
std::pair<Store, ValueRef> eval_muc(const MucProgram& prog, Store store, ExprRef e,
                                    long long fuel = kDefaultFuel);

}  // namespace fln
