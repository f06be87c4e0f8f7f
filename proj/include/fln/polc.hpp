// The labeled calculus: guard predicate, subtyping, bidirectional type
// checking, small-step evaluation (single and paired), projection, and the
// noninterference trial harness.
#pragma once

#include <functional>
#include <optional>
#include <random>

#include "fln/ast.hpp"

namespace fln {

// Typing failure; carries the rule-level code and both types when known.
struct TypeError : std::runtime_error {
    DiagCode code;
    SourceLoc loc;
    std::string expected, found;
    std::string callee;  // for argument mismatches
    int argno = 0;
    TypeError(DiagCode c, SourceLoc l, const std::string& msg, std::string exp = {},
              std::string fnd = {})
        : std::runtime_error(msg), code(c), loc(std::move(l)), expected(std::move(exp)),
          found(std::move(fnd)) {}
};

struct EvalError : std::runtime_error {
    bool fuel_exhausted;
    EvalError(const std::string& msg, bool fuel) : std::runtime_error(msg), fuel_exhausted(fuel) {}
};

// p guards t: always for unit, p <= labOf(t) otherwise.
bool guards(const Policy& p, const SType& t);

// Subtyping: covariant in policies and return type, contravariant in argument
// and pc, invariant in pointer content.  Unlabeled policies participate as
// the unrestricted policy.
bool subtype(const STypeRef& a, const STypeRef& b);

// High-policy classification parameters for pair typing; absent means pair
// values are not admitted.
struct HighCtx {
    Policy attacker;
    std::vector<RelabelCapability> caps;
};

struct CheckCtx {
    const PolcProgram* prog = nullptr;
    std::map<std::string, STypeRef> vars;
    std::optional<HighCtx> high;
};

STypeRef typecheck_value(const CheckCtx& ctx, const ValueRef& v, const STypeRef& expected = nullptr);
STypeRef typecheck_expr(const CheckCtx& ctx, const Policy& pc, const ExprRef& e,
                        const STypeRef& expected = nullptr);

// Checks every function body against its declared signature; recovers per
// function so each violation surfaces once.
std::vector<Diagnostic> check_polc_program(const PolcProgram& prog);

// ----------------------------------------------------------- evaluation ----

constexpr long long kDefaultFuel = 1000000;

struct Store {
    std::vector<ValueRef> cells;
};

// One-sided-capable paired store.
struct PairedCell {
    ValueRef s1, s2;  // either may be null (one-sided)
};
struct PairedStore {
    std::vector<PairedCell> cells;
};

using FunTable = std::map<std::string, FunDef>;

// Single small step; returns false when e is already a value.
bool step(const FunTable& funs, Store& store, ExprRef& e);
std::pair<Store, ValueRef> eval(const FunTable& funs, Store store, ExprRef e,
                                long long fuel = kDefaultFuel);

// side: 0 = top level (both components), 1/2 = inside that pair component.
bool step_paired(const FunTable& funs, PairedStore& store, ExprRef& e, int side = 0);
std::pair<PairedStore, ValueRef> eval_paired(const FunTable& funs, PairedStore store, ExprRef e,
                                             long long fuel = kDefaultFuel);

ValueRef project(const ValueRef& v, int side);
ExprRef project(const ExprRef& e, int side);
Store project(const PairedStore& s, int side);

// ------------------------------------------------- noninterference harness ----

struct NiTrialResult {
    enum class Verdict { Pass, Fail, IllTyped, FuelOut } verdict;
    std::string detail;
    ValueRef out1, out2;  // projections of the result on Fail
};

// Runs one noninterference trial: draws two substitutions equal on low
// variables and independent on the high one, merges them, runs the paired
// evaluator, and compares the projections of the result.
NiTrialResult noninterference_trial(const PolcProgram& prog, const ExprRef& e,
                                    const std::map<std::string, STypeRef>& params,
                                    const std::string& high_var, const Policy& attacker,
                                    const std::vector<RelabelCapability>& caps, uint64_t seed);

// ---------------------------------------------------------- serialization ----

std::string to_sexpr(const ExprRef& e);
std::string to_sexpr(const ValueRef& v);
std::string to_sexpr(const STypeRef& t);
std::string to_sexpr(const Policy& p);
std::string to_sexpr(const PolcProgram& prog);

}  // namespace fln
