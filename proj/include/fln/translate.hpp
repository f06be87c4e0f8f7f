// Translation from the labeled calculus into the nominal target: generates
// one wrapper record type per (base type, policy), erases unlabeled and
// unrestricted policies, rewrites relabels into record construction and
// projection, and wraps declassification/endorsement call sites with the
// boundary conversions the nominal checker can follow.
#pragma once

#include "fln/ast.hpp"
#include "fln/polc.hpp"

namespace fln {

struct GeneratedDefs {
    // Wrapper record definitions keyed by generated name.
    std::map<std::string, std::vector<std::pair<std::string, MTypeRef>>> defs;
    // Generated name -> (surface base token, policy); injective by scheme.
    std::map<std::string, std::pair<std::string, Policy>> provenance;
    std::vector<std::string> order;               // first-use order
    std::map<std::string, std::string> aka;       // rendering hints
};

// How implicit policy subsumption is handled.
//   Surface:  conversions appear only at explicit relabels, at
//             declassification/endorsement call boundaries, and in
//             initializer positions (where C initialization admits nested
//             braces). An implicit unlabeled-to-labeled flow stays as-is and
//             surfaces as a nominal type error — this is the enforcement
//             mode the pipeline uses.
//   Faithful: every use of subsumption in the labeled typing derivation is
//             materialized as a wrapper conversion, so any well-typed
//             labeled program translates to a nominally well-typed program —
//             the mode the translation-soundness property is stated in.
enum class TranslateMode { Surface, Faithful };

// Deterministic wrapper identifier for a base token and a policy. Terminals
// are not encoded; each label contributes its atom plus a component code
// (S, I, or SI); pointer levels append "p" to the base token.
std::string gen_name(const std::string& base_token, const Policy& p);

// Surface token of a labeled type's base ("int", "uint8_t", "foo", with "p"
// per pointer level).
std::string base_token(const SType& s);

MTypeRef translate_type(const STypeRef& s, const PolcProgram& prog, GeneratedDefs& defs);

// Translates an expression under an optional variable environment and
// program-counter policy. The translation is type-directed: it replays the
// labeled typing rules to find every policy join and every use of
// subsumption and materializes exactly those as wrapper conversions, so a
// well-typed labeled expression translates to a nominally well-typed one and
// a policy violation survives as a nominal mismatch. Throws TypeError with
// code TagMissing when a relabel operand can be typed neither from the
// environment nor from its tag.
ExprRef translate_expr(const ExprRef& le, const PolcProgram& prog, GeneratedDefs& defs,
                       const std::map<std::string, STypeRef>& vars = {},
                       const Policy& pc = Policy::bottom(),
                       TranslateMode mode = TranslateMode::Surface);

// Whole-program translation: records, globals and functions pointwise; d&e
// markers erase to ordinary arrows.
MucProgram translate_program(const PolcProgram& prog, GeneratedDefs& defs,
                             TranslateMode mode = TranslateMode::Surface);

}  // namespace fln
