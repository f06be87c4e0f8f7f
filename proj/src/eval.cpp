#include "fln/polc.hpp"

namespace fln {

namespace {

[[noreturn]] void stuck(const char* what, const Expr& e) {
    throw EvalError(std::string("stuck at ") + what + ": " + to_string(e), false);
}

bool is_value(const ExprRef& e) { return e->kind == Expr::Kind::Val; }

long long as_int(const ValueRef& v, const Expr& e) {
    if (v->kind != Value::Kind::Int) stuck("integer operand", e);
    return v->n;
}

int as_loc(const ValueRef& v, const Expr& e) {
    if (v->kind != Value::Kind::Loc) stuck("location operand", e);
    return v->loc;
}

long long apply_op(char op, long long a, long long b, const Expr& e) {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '<': return a < b ? 1 : 0;
    }
    stuck("operator", e);
}

const FunDef& lookup_fun(const FunTable& funs, const ValueRef& fn, const Expr& e) {
    if (fn->kind != Value::Kind::Fun && fn->kind != Value::Kind::Var) stuck("function value", e);
    auto it = funs.find(fn->name);
    if (it == funs.end()) stuck("function lookup", e);
    return it->second;
}

}  // namespace

// ------------------------------------------------------------ projection ----

ValueRef project(const ValueRef& v, int side) {
    if (!v) return v;
    switch (v->kind) {
        case Value::Kind::Pair: return project(side == 1 ? v->left : v->right, side);
        case Value::Kind::Struct: {
            std::vector<ValueRef> fs;
            fs.reserve(v->fields.size());
            bool changed = false;
            for (const auto& f : v->fields) {
                auto nf = project(f, side);
                changed |= nf != f;
                fs.push_back(std::move(nf));
            }
            if (!changed) return v;
            auto copy = std::make_shared<Value>(*v);
            copy->fields = std::move(fs);
            return copy;
        }
        default: return v;
    }
}

ExprRef project(const ExprRef& e, int side) {
    if (!e) return e;
    if (e->kind == Expr::Kind::PairE) return project(side == 1 ? e->e1 : e->e2, side);
    auto copy = std::make_shared<Expr>(*e);
    if (copy->v1) copy->v1 = project(copy->v1, side);
    if (copy->v2) copy->v2 = project(copy->v2, side);
    for (ValueRef& a : copy->app_args) a = project(a, side);
    if (copy->e1) copy->e1 = project(copy->e1, side);
    if (copy->e2) copy->e2 = project(copy->e2, side);
    return copy;
}

Store project(const PairedStore& s, int side) {
    Store out;
    out.cells.reserve(s.cells.size());
    for (const auto& c : s.cells) out.cells.push_back(side == 1 ? c.s1 : c.s2);
    return out;
}

// ---------------------------------------------------------- single steps ----

bool step(const FunTable& funs, Store& store, ExprRef& e) {
    switch (e->kind) {
        case Expr::Kind::Val: return false;
        case Expr::Kind::Let: {
            if (is_value(e->e1)) {
                e = subst(e->e2, e->let_var, e->e1->v1);
                return true;
            }
            ExprRef rhs = e->e1;
            if (!step(funs, store, rhs)) stuck("let right-hand side", *e);
            auto copy = std::make_shared<Expr>(*e);
            copy->e1 = rhs;
            e = copy;
            return true;
        }
        case Expr::Kind::Bop:
            e = e_val(v_int(apply_op(e->op, as_int(e->v1, *e), as_int(e->v2, *e), *e)), e->sloc);
            return true;
        case Expr::Kind::Field: {
            if (e->v1->kind != Value::Kind::Struct) stuck("record operand", *e);
            if (e->field < 1 || (size_t)e->field > e->v1->fields.size()) stuck("field index", *e);
            e = e_val(e->v1->fields[(size_t)e->field - 1], e->sloc);
            return true;
        }
        case Expr::Kind::New:
            store.cells.push_back(e->v1);
            e = e_val(v_loc((int)store.cells.size() - 1), e->sloc);
            return true;
        case Expr::Kind::Deref: {
            int l = as_loc(e->v1, *e);
            if (l < 0 || (size_t)l >= store.cells.size() || !store.cells[l]) stuck("deref", *e);
            e = e_val(store.cells[l], e->sloc);
            return true;
        }
        case Expr::Kind::Assign: {
            int l = as_loc(e->v1, *e);
            if (l < 0 || (size_t)l >= store.cells.size()) stuck("assign", *e);
            store.cells[l] = e->v2;
            e = e_val(v_unit(), e->sloc);
            return true;
        }
        case Expr::Kind::If:
            e = as_int(e->v1, *e) > 0 ? e->e1 : e->e2;
            return true;
        case Expr::Kind::App: {
            const FunDef& f = lookup_fun(funs, e->v1, *e);
            if (e->app_args.size() != f.params.size()) stuck("argument count", *e);
            ExprRef body = f.body;
            for (size_t i = 0; i < f.params.size(); ++i)
                body = subst(body, f.params[i], e->app_args[i]);
            e = body;
            return true;
        }
        case Expr::Kind::Relab:
            // Identity at run time, but the relabel's static type supersedes
            // any type tag the operand carried.
            e = e_val(with_tag(e->v1, nullptr), e->sloc);
            return true;
        case Expr::Kind::PairE: stuck("pair expression in single execution", *e);
    }
    return false;
}

std::pair<Store, ValueRef> eval(const FunTable& funs, Store store, ExprRef e, long long fuel) {
    while (!is_value(e)) {
        if (fuel-- <= 0) throw EvalError("fuel exhausted", true);
        step(funs, store, e);
    }
    return {std::move(store), e->v1};
}

// ---------------------------------------------------------- paired steps ----

namespace {

bool contains_pair(const ValueRef& v) {
    if (!v) return false;
    if (v->kind == Value::Kind::Pair) return true;
    if (v->kind == Value::Kind::Struct)
        for (const auto& f : v->fields)
            if (contains_pair(f)) return true;
    return false;
}

// Lift a redex whose scrutinee is two-sided into a pair of one-sided copies.
ExprRef lift(const ExprRef& e) { return e_pair(project(e, 1), project(e, 2), e->sloc); }

ValueRef read_cell(const PairedCell& c, int side, const Expr& e) {
    if (side == 1) {
        if (!c.s1) stuck("read of a right-only cell", e);
        return c.s1;
    }
    if (side == 2) {
        if (!c.s2) stuck("read of a left-only cell", e);
        return c.s2;
    }
    if (!c.s1 || !c.s2) stuck("whole read of a one-sided cell", e);
    if (value_equal(c.s1, c.s2)) return c.s1;
    return v_pair(c.s1, c.s2);
}

}  // namespace

bool step_paired(const FunTable& funs, PairedStore& store, ExprRef& e, int side) {
    // Inside a pair component there are no pairs left (projection removed
    // them), so only the store operations differ from the single semantics.
    switch (e->kind) {
        case Expr::Kind::Val: return false;
        case Expr::Kind::Let: {
            if (is_value(e->e1)) {
                e = subst(e->e2, e->let_var, e->e1->v1);
                return true;
            }
            ExprRef rhs = e->e1;
            if (!step_paired(funs, store, rhs, side)) stuck("let right-hand side", *e);
            auto copy = std::make_shared<Expr>(*e);
            copy->e1 = rhs;
            e = copy;
            return true;
        }
        case Expr::Kind::PairE: {
            if (side != 0) stuck("nested pair expression", *e);
            if (!is_value(e->e1)) {
                ExprRef l = e->e1;
                if (!step_paired(funs, store, l, 1)) stuck("pair left side", *e);
                auto copy = std::make_shared<Expr>(*e);
                copy->e1 = l;
                e = copy;
                return true;
            }
            if (!is_value(e->e2)) {
                ExprRef r = e->e2;
                if (!step_paired(funs, store, r, 2)) stuck("pair right side", *e);
                auto copy = std::make_shared<Expr>(*e);
                copy->e2 = r;
                e = copy;
                return true;
            }
            ValueRef l = e->e1->v1;
            ValueRef r = e->e2->v1;
            e = e_val(value_equal(l, r) ? l : v_pair(l, r), e->sloc);
            return true;
        }
        case Expr::Kind::Bop: {
            if (side == 0 && (e->v1->kind == Value::Kind::Pair || e->v2->kind == Value::Kind::Pair)) {
                e = lift(e);
                return true;
            }
            e = e_val(v_int(apply_op(e->op, as_int(e->v1, *e), as_int(e->v2, *e), *e)), e->sloc);
            return true;
        }
        case Expr::Kind::Field: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            if (e->v1->kind != Value::Kind::Struct) stuck("record operand", *e);
            if (e->field < 1 || (size_t)e->field > e->v1->fields.size()) stuck("field index", *e);
            e = e_val(e->v1->fields[(size_t)e->field - 1], e->sloc);
            return true;
        }
        case Expr::Kind::New: {
            PairedCell cell;
            if (side == 0) {
                cell.s1 = project(e->v1, 1);
                cell.s2 = project(e->v1, 2);
            } else if (side == 1) {
                cell.s1 = e->v1;
            } else {
                cell.s2 = e->v1;
            }
            store.cells.push_back(std::move(cell));
            e = e_val(v_loc((int)store.cells.size() - 1), e->sloc);
            return true;
        }
        case Expr::Kind::Deref: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            int l = as_loc(e->v1, *e);
            if (l < 0 || (size_t)l >= store.cells.size()) stuck("deref", *e);
            e = e_val(read_cell(store.cells[l], side, *e), e->sloc);
            return true;
        }
        case Expr::Kind::Assign: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            int l = as_loc(e->v1, *e);
            if (l < 0 || (size_t)l >= store.cells.size()) stuck("assign", *e);
            PairedCell& cell = store.cells[l];
            if (side == 0) {
                cell.s1 = project(e->v2, 1);
                cell.s2 = project(e->v2, 2);
            } else if (side == 1) {
                cell.s1 = e->v2;
            } else {
                cell.s2 = e->v2;
            }
            e = e_val(v_unit(), e->sloc);
            return true;
        }
        case Expr::Kind::If: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            e = as_int(e->v1, *e) > 0 ? e->e1 : e->e2;
            return true;
        }
        case Expr::Kind::App: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            const FunDef& f = lookup_fun(funs, e->v1, *e);
            if (e->app_args.size() != f.params.size()) stuck("argument count", *e);
            ExprRef body = f.body;
            for (size_t i = 0; i < f.params.size(); ++i)
                body = subst(body, f.params[i], e->app_args[i]);
            e = body;
            return true;
        }
        case Expr::Kind::Relab: {
            if (side == 0 && e->v1->kind == Value::Kind::Pair) {
                e = lift(e);
                return true;
            }
            e = e_val(with_tag(e->v1, nullptr), e->sloc);
            return true;
        }
    }
    return false;
}

std::pair<PairedStore, ValueRef> eval_paired(const FunTable& funs, PairedStore store, ExprRef e,
                                             long long fuel) {
    while (!is_value(e)) {
        if (fuel-- <= 0) throw EvalError("fuel exhausted", true);
        step_paired(funs, store, e, 0);
    }
    return {std::move(store), e->v1};
}

// --------------------------------------------- noninterference harness ----

namespace {

// Draw a closed value of the given type, allocating pointees in the store.
ValueRef draw_value(std::mt19937_64& rng, const PolcProgram& prog, const STypeRef& t,
                    PairedStore& store, std::vector<STypeRef>& store_typing) {
    switch (t->kind) {
        case SType::Kind::Unit: return v_unit();
        case SType::Kind::Int:
            return v_int((long long)(rng() % 17) - 8);
        case SType::Kind::Ptr: {
            ValueRef inner = draw_value(rng, prog, t->pointee, store, store_typing);
            store.cells.push_back({inner, inner});
            store_typing.push_back(t->pointee);
            return v_loc((int)store.cells.size() - 1);
        }
        case SType::Kind::Rec: {
            auto it = prog.records.find(t->rec);
            if (it == prog.records.end()) throw EvalError("unknown record in trial", false);
            std::vector<ValueRef> fs;
            for (const auto& [_, ft] : it->second)
                fs.push_back(draw_value(rng, prog, ft, store, store_typing));
            return v_struct(t->rec, std::move(fs));
        }
        case SType::Kind::Fun: throw EvalError("function-typed trial input", false);
    }
    return v_unit();
}

}  // namespace

NiTrialResult noninterference_trial(const PolcProgram& prog, const ExprRef& e,
                                    const std::map<std::string, STypeRef>& params,
                                    const std::string& high_var, const Policy& attacker,
                                    const std::vector<RelabelCapability>& caps, uint64_t seed) {
    CheckCtx ctx;
    ctx.prog = &prog;
    ctx.vars = params;
    ctx.high = HighCtx{attacker, caps};
    STypeRef result_type;
    try {
        result_type = typecheck_expr(ctx, Policy::bottom(), e);
    } catch (const TypeError& err) {
        return {NiTrialResult::Verdict::IllTyped, err.what(), nullptr, nullptr};
    }
    // The trial only means something when the result is attacker-visible and
    // the distinguished input is not.
    if (result_type->kind != SType::Kind::Unit) {
        Policy rp = result_type->pol.is_unlabeled() ? Policy::bottom() : result_type->pol;
        if (in_high(attacker, caps, rp))
            return {NiTrialResult::Verdict::IllTyped, "result policy is attacker-hidden", nullptr,
                    nullptr};
    }

    std::mt19937_64 rng(seed);
    PairedStore store;
    std::vector<STypeRef> store_typing = prog.store_typing;
    ExprRef body = e;
    for (const auto& [name, t] : params) {
        ValueRef v;
        if (name == high_var) {
            ValueRef a = draw_value(rng, prog, t, store, store_typing);
            ValueRef b = draw_value(rng, prog, t, store, store_typing);
            v = value_equal(a, b) ? a : v_pair(a, b);
        } else {
            v = draw_value(rng, prog, t, store, store_typing);
        }
        body = subst(body, name, v);
    }

    FunTable funs;
    for (const auto& [n, f] : prog.funs) funs.emplace(n, f);
    try {
        auto [_, result] = eval_paired(funs, std::move(store), body);
        ValueRef o1 = project(result, 1);
        ValueRef o2 = project(result, 2);
        if (value_equal(o1, o2)) return {NiTrialResult::Verdict::Pass, "", o1, o2};
        return {NiTrialResult::Verdict::Fail,
                "projections differ: " + to_string(*o1) + " vs " + to_string(*o2), o1, o2};
    } catch (const EvalError& err) {
        return {err.fuel_exhausted ? NiTrialResult::Verdict::FuelOut : NiTrialResult::Verdict::Fail,
                err.what(), nullptr, nullptr};
    }
}

}  // namespace fln
