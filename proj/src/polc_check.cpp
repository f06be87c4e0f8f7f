#include <algorithm>

#include "fln/polc.hpp"

namespace fln {

// The Unlabeled marker behaves as the unrestricted policy wherever the
// checker needs an order or a join; it stays distinct in the syntax so the
// translator can still see which types were never annotated.
static Policy norm(const Policy& p) {
    return p.is_unlabeled() ? Policy::bottom() : p;
}

static bool nleq(const Policy& p, const Policy& q) { return policy_leq(norm(p), norm(q)); }

static Policy njoin(const Policy& p, const Policy& q) {
    if (p.is_unlabeled()) return norm(q);
    if (q.is_unlabeled()) return norm(p);
    return policy_join(p, q);
}

// s with its outer policy joined with p; unit is unaffected.
static STypeRef join_outer(const STypeRef& s, const Policy& p) {
    if (s->kind == SType::Kind::Unit) return s;
    if (norm(p) == Policy::bottom()) return s;
    return with_policy(s, njoin(s->pol, p));
}

bool guards(const Policy& p, const SType& t) {
    if (t.kind == SType::Kind::Unit) return true;
    return nleq(p, lab_of(t));
}

static bool base_equal(const STypeRef& a, const STypeRef& b);

bool subtype(const STypeRef& a, const STypeRef& b) {
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SType::Kind::Unit: return true;
        case SType::Kind::Int: return nleq(a->pol, b->pol);
        case SType::Kind::Rec: return a->rec == b->rec && nleq(a->pol, b->pol);
        case SType::Kind::Ptr:
            // Pointer content is invariant.
            return base_equal(a->pointee, b->pointee) && nleq(a->pol, b->pol);
        case SType::Kind::Fun: {
            if (a->de != b->de || !nleq(b->pc, a->pc) || !subtype(a->ret, b->ret) ||
                !nleq(a->pol, b->pol) || a->args.size() != b->args.size())
                return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!subtype(b->args[i], a->args[i])) return false;  // contravariant
            return true;
        }
    }
    return false;
}

// Structural equality modulo the Unlabeled/Bottom identification.
static bool base_equal(const STypeRef& a, const STypeRef& b) {
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SType::Kind::Unit: return true;
        case SType::Kind::Int: return norm(a->pol) == norm(b->pol);
        case SType::Kind::Rec: return a->rec == b->rec && norm(a->pol) == norm(b->pol);
        case SType::Kind::Ptr:
            return base_equal(a->pointee, b->pointee) && norm(a->pol) == norm(b->pol);
        case SType::Kind::Fun: {
            if (a->de != b->de || norm(a->pc) != norm(b->pc) || !base_equal(a->ret, b->ret) ||
                norm(a->pol) != norm(b->pol) || a->args.size() != b->args.size())
                return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!base_equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

static TypeError type_mismatch(const SourceLoc& loc, const STypeRef& expected, const STypeRef& found,
                          const char* what) {
    return TypeError(DiagCode::PolicyViolation, loc,
                     std::string(what) + ": expected " + to_string(*expected) + ", found " +
                         to_string(*found),
                     to_string(*expected), to_string(*found));
}

STypeRef typecheck_value(const CheckCtx& ctx, const ValueRef& v, const STypeRef& expected) {
    auto finish = [&](STypeRef synth) -> STypeRef {
        // A type tag on a non-literal acts as an ascription: the synthesized
        // type must weaken to it, and the tag becomes the value's type.
        if (v->tag && v->kind != Value::Kind::Int && !stype_equal(v->tag, synth)) {
            if (!subtype(synth, v->tag)) throw type_mismatch({}, v->tag, synth, "ascription");
            synth = v->tag;
        }
        if (expected) {
            if (!subtype(synth, expected)) throw type_mismatch({}, expected, synth, "value");
            return expected;
        }
        return synth;
    };
    const STypeRef& want = v->tag ? v->tag : expected;
    switch (v->kind) {
        case Value::Kind::Unit: return finish(s_unit());
        case Value::Kind::Int: {
            // Integers admit any policy; check against the expectation if one
            // exists, otherwise synthesize the unrestricted type.
            if (want && want->kind == SType::Kind::Int) return finish(want);
            return finish(s_int(Policy::bottom()));
        }
        case Value::Kind::Var: {
            auto it = ctx.vars.find(v->name);
            if (it == ctx.vars.end()) {
                auto git = ctx.prog->globals.find(v->name);
                if (git == ctx.prog->globals.end())
                    throw TypeError(DiagCode::UnknownSymbol, {}, "unbound variable " + v->name);
                return finish(git->second);
            }
            return finish(it->second);
        }
        case Value::Kind::Fun: {
            auto it = ctx.prog->funs.find(v->name);
            if (it == ctx.prog->funs.end())
                throw TypeError(DiagCode::UnknownSymbol, {}, "unknown function " + v->name);
            return finish(it->second.type);
        }
        case Value::Kind::Loc: {
            if (v->loc < 0 || (size_t)v->loc >= ctx.prog->store_typing.size())
                throw TypeError(DiagCode::Internal, {}, "location outside store typing");
            Policy p = want && want->kind == SType::Kind::Ptr ? want->pol : Policy::bottom();
            return finish(s_ptr(ctx.prog->store_typing[v->loc], p));
        }
        case Value::Kind::Struct: {
            auto it = ctx.prog->records.find(v->rec);
            if (it == ctx.prog->records.end())
                throw TypeError(DiagCode::UnknownSymbol, {}, "unknown record " + v->rec);
            if (it->second.size() != v->fields.size())
                throw TypeError(DiagCode::TypeMismatch, {},
                                "record " + v->rec + " expects " +
                                    std::to_string(it->second.size()) + " fields, got " +
                                    std::to_string(v->fields.size()));
            for (size_t i = 0; i < v->fields.size(); ++i)
                typecheck_value(ctx, v->fields[i], it->second[i].second);
            Policy p = want && want->kind == SType::Kind::Rec ? want->pol : Policy::unlabeled();
            return finish(s_rec(v->rec, p));
        }
        case Value::Kind::Pair: {
            if (!ctx.high)
                throw TypeError(DiagCode::Internal, {}, "pair value outside paired checking");
            STypeRef s = typecheck_value(ctx, v->left, want);
            typecheck_value(ctx, v->right, s);
            if (s->kind == SType::Kind::Unit)
                throw TypeError(DiagCode::PolicyViolation, {}, "pair of unit values");
            if (!in_high(ctx.high->attacker, ctx.high->caps, norm(lab_of(*s))))
                throw TypeError(DiagCode::PolicyViolation, {},
                                "pair at a policy the attacker can reach: " + to_string(lab_of(*s)));
            return finish(s);
        }
    }
    throw TypeError(DiagCode::Internal, {}, "unreachable value kind");
}

static STypeRef fun_type_of(const CheckCtx& ctx, const ValueRef& fn) {
    STypeRef ft;
    if (fn->kind == Value::Kind::Fun || fn->kind == Value::Kind::Var) {
        auto it = ctx.prog->funs.find(fn->name);
        if (it != ctx.prog->funs.end()) ft = it->second.type;
        if (!ft && fn->kind == Value::Kind::Var) {
            auto vit = ctx.vars.find(fn->name);
            if (vit != ctx.vars.end()) ft = vit->second;
        }
    } else if (fn->kind == Value::Kind::Pair) {
        throw TypeError(DiagCode::Internal, {}, "pair in function position during checking");
    }
    if (!ft || ft->kind != SType::Kind::Fun)
        throw TypeError(DiagCode::TypeMismatch, {}, to_string(*fn) + " is not a function");
    return ft;
}

// Least upper bound of two types if one is a subtype of the other.
static STypeRef type_lub(const SourceLoc& loc, const STypeRef& a, const STypeRef& b) {
    if (subtype(a, b)) return b;
    if (subtype(b, a)) return a;
    throw type_mismatch(loc, a, b, "branch types");
}

STypeRef typecheck_expr(const CheckCtx& ctx, const Policy& pc, const ExprRef& e,
                        const STypeRef& expected) {
    switch (e->kind) {
        case Expr::Kind::Val: {
            STypeRef s = typecheck_value(ctx, e->v1, expected);
            return join_outer(s, pc);
        }
        case Expr::Kind::Bop: {
            STypeRef a = typecheck_value(ctx, e->v1);
            STypeRef b = typecheck_value(ctx, e->v2);
            if (a->kind != SType::Kind::Int || b->kind != SType::Kind::Int)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "arithmetic on non-integers");
            return s_int(njoin(njoin(a->pol, b->pol), pc));
        }
        case Expr::Kind::Field: {
            STypeRef s = typecheck_value(ctx, e->v1);
            if (s->kind != SType::Kind::Rec)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "field access on non-record");
            auto it = ctx.prog->records.find(s->rec);
            if (it == ctx.prog->records.end())
                throw TypeError(DiagCode::UnknownSymbol, e->sloc, "unknown record " + s->rec);
            if (e->field < 1 || (size_t)e->field > it->second.size())
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "field index out of range");
            if (!nleq(pc, s->pol))
                throw TypeError(DiagCode::PcViolation, e->sloc,
                                "context " + to_string(pc) + " not below record policy " +
                                    to_string(s->pol));
            return join_outer(it->second[(size_t)e->field - 1].second, njoin(s->pol, pc));
        }
        case Expr::Kind::New: {
            // Propagate an expected pointee so the allocated cell's store
            // typing matches the annotation (pointer content is invariant).
            STypeRef want =
                expected && expected->kind == SType::Kind::Ptr ? expected->pointee : nullptr;
            STypeRef s = typecheck_value(ctx, e->v1, want);
            if (!nleq(pc, e->new_pol))
                throw TypeError(DiagCode::PcViolation, e->sloc,
                                "context " + to_string(pc) + " does not guard allocation at " +
                                    to_string(e->new_pol));
            return s_ptr(s, e->new_pol);
        }
        case Expr::Kind::Deref: {
            STypeRef s = typecheck_value(ctx, e->v1);
            if (s->kind != SType::Kind::Ptr)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "dereference of non-pointer");
            if (!nleq(pc, s->pol))
                throw TypeError(DiagCode::PcViolation, e->sloc,
                                "context " + to_string(pc) + " not below pointer policy " +
                                    to_string(s->pol));
            return join_outer(s->pointee, njoin(s->pol, pc));
        }
        case Expr::Kind::Assign: {
            STypeRef t = typecheck_value(ctx, e->v1);
            if (t->kind != SType::Kind::Ptr)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "assignment through non-pointer");
            typecheck_value(ctx, e->v2, t->pointee);
            if (!guards(njoin(t->pol, pc), *t->pointee))
                throw TypeError(DiagCode::GuardViolation, e->sloc,
                                "policy " + to_string(t->pol) + " does not guard stored type " +
                                    to_string(*t->pointee));
            return s_unit();
        }
        case Expr::Kind::Let: {
            STypeRef s1 = typecheck_expr(ctx, pc, e->e1, e->let_type);
            CheckCtx inner = ctx;
            inner.vars[e->let_var] = e->let_type ? e->let_type : s1;
            return typecheck_expr(inner, pc, e->e2, expected);
        }
        case Expr::Kind::If: {
            STypeRef c = typecheck_value(ctx, e->v1);
            if (c->kind != SType::Kind::Int)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "condition is not an integer");
            Policy inner_pc = njoin(pc, c->pol);
            STypeRef t = typecheck_expr(ctx, inner_pc, e->e1, expected);
            STypeRef f = typecheck_expr(ctx, inner_pc, e->e2, expected);
            return type_lub(e->sloc, t, f);
        }
        case Expr::Kind::App: {
            STypeRef ft = fun_type_of(ctx, e->v1);
            Policy rho_f = norm(ft->pol);
            if (!nleq(njoin(rho_f, pc), ft->pc))
                throw TypeError(DiagCode::PcViolation, e->sloc,
                                "call context " + to_string(njoin(rho_f, pc)) +
                                    " exceeds function pc bound " + to_string(ft->pc));
            if (e->app_args.size() != ft->args.size())
                throw TypeError(DiagCode::TypeMismatch, e->sloc,
                                "wrong number of arguments in call");
            size_t de_i = ft->de_arg >= 1 ? (size_t)ft->de_arg - 1 : 0;
            if (ft->de && de_i < ft->args.size() &&
                ft->args[de_i]->kind != SType::Kind::Unit &&
                !ft->args[de_i]->pol.is_erasable() && ft->ret->kind != SType::Kind::Unit &&
                !ft->ret->pol.is_erasable()) {
                // Declassification/endorsement call: the designated argument's
                // policy must start with the head the function consumes,
                // followed by the head it produces; the call peels the first.
                STypeRef sa = typecheck_value(ctx, e->app_args[de_i]);
                Policy pa = norm(sa->pol);
                const Label& l1 = ft->args[de_i]->pol.labels.front();
                const Label& l2 = ft->ret->pol.labels.front();
                bool shape_ok = !pa.labels.empty() && label_leq(pa.labels[0], l1) &&
                                (pa.labels.size() >= 2 ? label_leq(pa.labels[1], l2)
                                                       : pa.term == Terminal::Bottom);
                if (shape_ok && sa->kind == ft->args[de_i]->kind &&
                    (sa->kind != SType::Kind::Rec || sa->rec == ft->args[de_i]->rec)) {
                    for (size_t i = 0; i < e->app_args.size(); ++i)
                        if (i != de_i) typecheck_value(ctx, e->app_args[i], ft->args[i]);
                    Policy rest = pa.labels.size() >= 2 ? pa.tail().tail() : Policy::bottom();
                    return join_outer(with_policy(ft->ret, Policy::cons(l2, rest)),
                                      njoin(rho_f, pc));
                }
                // Fall through to the plain rule (subsumption may still apply).
            }
            for (size_t i = 0; i < e->app_args.size(); ++i)
                typecheck_value(ctx, e->app_args[i], ft->args[i]);
            return join_outer(ft->ret, njoin(rho_f, pc));
        }
        case Expr::Kind::Relab: {
            STypeRef s = typecheck_value(ctx, e->v1);
            if (s->kind == SType::Kind::Unit || s->kind == SType::Kind::Fun)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "relabel of non-base value");
            if (!nleq(s->pol, e->from))
                throw TypeError(DiagCode::PolicyViolation, e->sloc,
                                "relabel source " + to_string(e->from) + " does not cover " +
                                    to_string(s->pol),
                                to_string(e->from), to_string(s->pol));
            if (!nleq(pc, e->to))
                throw TypeError(DiagCode::PcViolation, e->sloc,
                                "context " + to_string(pc) + " not below relabel target " +
                                    to_string(e->to));
            return with_policy(s, e->to);
        }
        case Expr::Kind::PairE: {
            if (!ctx.high)
                throw TypeError(DiagCode::Internal, e->sloc, "pair expression outside paired checking");
            STypeRef a = typecheck_expr(ctx, pc, e->e1, expected);
            STypeRef b = typecheck_expr(ctx, pc, e->e2, expected);
            STypeRef s = type_lub(e->sloc, a, b);
            if (s->kind != SType::Kind::Unit &&
                !in_high(ctx.high->attacker, ctx.high->caps, norm(lab_of(*s))))
                throw TypeError(DiagCode::PolicyViolation, e->sloc,
                                "paired expression at an attacker-reachable policy");
            return s;
        }
    }
    throw TypeError(DiagCode::Internal, e->sloc, "unreachable expression kind");
}

std::vector<Diagnostic> check_polc_program(const PolcProgram& prog) {
    std::vector<Diagnostic> out;
    for (const auto& [name, f] : prog.funs) {
        if (!f.body) continue;
        CheckCtx ctx;
        ctx.prog = &prog;
        for (size_t i = 0; i < f.params.size() && i < f.type->args.size(); ++i)
            if (!f.params[i].empty()) ctx.vars[f.params[i]] = f.type->args[i];
        try {
            STypeRef rt = typecheck_expr(ctx, f.type->pc, f.body, f.type->ret);
            if (!subtype(rt, f.type->ret)) {
                Diagnostic d = Diagnostic::error(DiagCode::PolicyViolation, f.sloc,
                                                 "return type of '" + name + "' does not match");
                d.expected = to_string(*f.type->ret);
                d.found = to_string(*rt);
                out.push_back(std::move(d));
            }
        } catch (const TypeError& err) {
            Diagnostic d =
                Diagnostic::error(err.code, err.loc.valid() ? err.loc : f.sloc, err.what());
            d.expected = err.expected;
            d.found = err.found;
            out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace fln
