// Abstract syntax shared by the labeled calculus (the checker's source
// language) and the nominal target calculus.  Both use the same A-normal-form
// expression shape: elimination forms take values, and computation is
// sequenced with let.  Labeled programs additionally carry policies, expected
// type tags and relabel nodes, all of which the target side ignores or
// forbids.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fln/diag.hpp"
#include "fln/policy.hpp"

namespace fln {

// ---------------------------------------------------------------- types ----

struct SType;
using STypeRef = std::shared_ptr<const SType>;

// Security types: unit, int/ptr/record bases with a policy, and labeled
// function types with a program-counter bound and an optional d&e marker.
struct SType {
    enum class Kind { Unit, Int, Ptr, Rec, Fun };
    Kind kind = Kind::Unit;
    Policy pol;          // Int/Ptr/Rec outer policy; Fun label
    STypeRef pointee;    // Ptr
    std::string rec;     // Rec
    Policy pc;           // Fun
    std::vector<STypeRef> args;  // Fun parameters
    STypeRef ret;        // Fun
    bool de = false;     // Fun: declassification/endorsement
    int de_arg = 1;      // Fun: 1-based index of the policy-driving argument
    // Surface base-type token ("int", "uint8_t", "volatile int", ...) kept
    // for deterministic wrapper naming; empty when not mapped from C.
    std::string cbase;
};

STypeRef s_unit();
STypeRef s_int(Policy p);
STypeRef s_ptr(STypeRef pointee, Policy p);
STypeRef s_rec(std::string name, Policy p);
STypeRef s_fun(Policy pc, std::vector<STypeRef> args, STypeRef ret, Policy label, bool de);
STypeRef with_policy(const STypeRef& s, Policy p);

// Outermost policy of a non-unit type.
Policy lab_of(const SType& s);
std::string to_string(const SType& s);
bool stype_equal(const STypeRef& a, const STypeRef& b);

// Nominal target types.
struct MType;
using MTypeRef = std::shared_ptr<const MType>;
struct MType {
    enum class Kind { Unit, Int, Ptr, Rec, Fun };
    Kind kind = Kind::Int;
    MTypeRef pointee;
    std::string rec;
    std::vector<MTypeRef> args;
    MTypeRef ret;
    // Surface spelling of an int base ("uint8_t", ...); ignored by equality,
    // used only when rendering diagnostics.
    std::string cbase;
};

MTypeRef m_unit();
MTypeRef m_int();
MTypeRef m_ptr(MTypeRef pointee);
MTypeRef m_rec(std::string name);
MTypeRef m_fun(std::vector<MTypeRef> args, MTypeRef ret);
bool mtype_equal(const MTypeRef& a, const MTypeRef& b);
std::string to_string(const MType& t);

// --------------------------------------------------------------- values ----

struct Value;
using ValueRef = std::shared_ptr<const Value>;

struct Value {
    enum class Kind { Var, Int, Unit, Fun, Struct, Loc, Pair };
    Kind kind = Kind::Unit;
    std::string name;               // Var / Fun
    long long n = 0;                // Int
    std::string rec;                // Struct
    std::vector<ValueRef> fields;   // Struct
    int loc = -1;                   // Loc
    ValueRef left, right;           // Pair (both present)
    STypeRef tag;                   // expected-type tag ("@s"), may be null
};

ValueRef v_var(std::string name, STypeRef tag = nullptr);
ValueRef v_int(long long n, STypeRef tag = nullptr);
ValueRef v_unit();
ValueRef v_fun(std::string name, STypeRef tag = nullptr);
ValueRef v_struct(std::string rec, std::vector<ValueRef> fields, STypeRef tag = nullptr);
ValueRef v_loc(int loc);
ValueRef v_pair(ValueRef l, ValueRef r);
ValueRef with_tag(const ValueRef& v, STypeRef tag);
bool value_equal(const ValueRef& a, const ValueRef& b);
std::string to_string(const Value& v);

// ---------------------------------------------------------- expressions ----

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Val, Bop, Field, New, Deref, Assign, Let, If, App, Relab, PairE };
    Kind kind = Kind::Val;
    SourceLoc sloc;
    ValueRef v1, v2;      // Val/Bop/Field/New/Deref/Assign(target,value)/If(cond)/App(fn)/Relab(operand)
    std::vector<ValueRef> app_args;  // App arguments
    char op = '+';        // Bop: + - * <
    int field = 0;        // Field, 1-based
    Policy new_pol;       // New: the pointer policy
    std::string let_var;  // Let
    STypeRef let_type;    // Let annotation, may be null
    ExprRef e1, e2;       // Let rhs/body; If then/else; PairE sides
    MTypeRef let_mtype;   // Let annotation on the nominal side, may be null
    Policy to, from;      // Relab
    // Provenance for diagnostics on elaborated calls.
    std::string call_name;
    int call_arg = 0;
};

ExprRef e_val(ValueRef v, SourceLoc loc = {});
ExprRef e_bop(char op, ValueRef a, ValueRef b, SourceLoc loc = {});
ExprRef e_field(ValueRef v, int i, SourceLoc loc = {});
ExprRef e_new(ValueRef v, Policy pol, SourceLoc loc = {});
ExprRef e_deref(ValueRef v, SourceLoc loc = {});
ExprRef e_assign(ValueRef target, ValueRef val, SourceLoc loc = {});
ExprRef e_let(std::string var, STypeRef t, ExprRef rhs, ExprRef body, SourceLoc loc = {});
ExprRef e_if(ValueRef cond, ExprRef then_e, ExprRef else_e, SourceLoc loc = {});
ExprRef e_app(ValueRef fn, std::vector<ValueRef> args, SourceLoc loc = {});
ExprRef e_relab(Policy to, Policy from, ValueRef v, SourceLoc loc = {});
ExprRef e_pair(ExprRef l, ExprRef r, SourceLoc loc = {});
bool expr_equal(const ExprRef& a, const ExprRef& b);
std::string to_string(const Expr& e);

// ------------------------------------------------------------- programs ----

struct FunDef {
    std::string name;
    STypeRef type;   // Fun
    std::vector<std::string> params;
    ExprRef body;
    SourceLoc sloc;
};

// Labeled program: typedefs D, functions F, globals Gamma, store typing Sigma.
struct PolcProgram {
    std::map<std::string, std::vector<std::pair<std::string, STypeRef>>> records;
    std::map<std::string, FunDef> funs;
    std::map<std::string, STypeRef> globals;
    std::vector<STypeRef> store_typing;
};

struct MFunDef {
    std::string name;
    MTypeRef type;  // Fun
    std::vector<std::string> params;
    ExprRef body;   // shared Expr shape; Relab/PairE never appear
    SourceLoc sloc;
};

struct MucProgram {
    std::map<std::string, std::vector<std::pair<std::string, MTypeRef>>> records;
    std::map<std::string, MFunDef> funs;
    std::map<std::string, MTypeRef> globals;
    // Rendering info for diagnostics: type name -> what it abbreviates.
    std::map<std::string, std::string> aka;
};

// Capture-avoiding-enough substitution (bound names are made fresh upstream;
// generated programs never shadow).
ExprRef subst(const ExprRef& e, const std::string& var, const ValueRef& v);
ValueRef subst(const ValueRef& val, const std::string& var, const ValueRef& v);

}  // namespace fln
