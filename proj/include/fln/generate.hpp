// Random generation of well-typed labeled programs for property testing.
// Generation is goal-directed: every emitted redex is checked against the
// typing rules before it is kept, so generated programs check by
// construction, over a small atom universe with bounded depth and policies.
#pragma once

#include <random>

#include "fln/polc.hpp"

namespace fln {

struct GenOptions {
    int max_depth = 6;        // nesting bound for branches
    int max_steps = 12;       // let-chain length at each level
    int secrecy_atoms = 3;
    int integrity_atoms = 3;
    int max_policy_len = 3;
    bool allow_relabel = true;
    bool allow_de = true;
    bool allow_records = true;
    bool low_result = false;  // force the program's result policy to bottom
};

struct Generated {
    PolcProgram prog;
    ExprRef body;                               // main expression
    std::map<std::string, STypeRef> params;     // free variables of body
    std::string high_var;                       // one distinguished input ("" if none)
};

// Generates a closed-under-params program; with opts.low_result the body's
// type has the unrestricted policy while high_var is a secrecy-atom input.
Generated generate_program(std::mt19937_64& rng, const GenOptions& opts);

// Draw a closed value inhabiting t (allocating pointees into the store).
ValueRef generate_value(std::mt19937_64& rng, const PolcProgram& prog, const STypeRef& t,
                        Store& store, std::vector<STypeRef>& store_typing);

// Label erasure: the same program as a nominal-calculus program (relabels
// become their operands, policies are dropped).
ExprRef erase_expr(const ExprRef& e);
MTypeRef erase_type(const STypeRef& t);
MucProgram erase_program(const PolcProgram& prog);

}  // namespace fln
