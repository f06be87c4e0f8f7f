#include "fln/muc.hpp"

namespace fln {

namespace {

std::string name_of(const MTypeRef& t) { return to_string(*t); }

TypeError type_mismatch(DiagCode code, const SourceLoc& loc, const MTypeRef& expected,
                   const MTypeRef& found, const std::string& msg) {
    return TypeError(code, loc, msg, name_of(expected), name_of(found));
}

}  // namespace

MTypeRef typecheck_muc_value(const MucCheckCtx& ctx, const ValueRef& v) {
    switch (v->kind) {
        case Value::Kind::Unit: return m_unit();
        case Value::Kind::Int: return m_int();
        case Value::Kind::Var: {
            auto it = ctx.vars.find(v->name);
            if (it != ctx.vars.end()) return it->second;
            auto git = ctx.prog->globals.find(v->name);
            if (git != ctx.prog->globals.end()) return git->second;
            throw TypeError(DiagCode::UnknownSymbol, {}, "unbound variable " + v->name);
        }
        case Value::Kind::Fun: {
            auto it = ctx.prog->funs.find(v->name);
            if (it == ctx.prog->funs.end())
                throw TypeError(DiagCode::UnknownSymbol, {}, "unknown function " + v->name);
            return it->second.type;
        }
        case Value::Kind::Loc:
            if (v->loc < 0 || (size_t)v->loc >= ctx.store_typing.size())
                throw TypeError(DiagCode::Internal, {}, "location outside store typing");
            return m_ptr(ctx.store_typing[v->loc]);
        case Value::Kind::Struct: {
            auto it = ctx.prog->records.find(v->rec);
            if (it == ctx.prog->records.end())
                throw TypeError(DiagCode::UnknownSymbol, {}, "unknown record " + v->rec);
            if (it->second.size() != v->fields.size())
                throw TypeError(DiagCode::TypeMismatch, {},
                                "record " + v->rec + " expects " +
                                    std::to_string(it->second.size()) + " fields");
            for (size_t i = 0; i < v->fields.size(); ++i) {
                MTypeRef ft = typecheck_muc_value(ctx, v->fields[i]);
                if (!mtype_equal(ft, it->second[i].second))
                    throw type_mismatch(DiagCode::TypeMismatch, {}, it->second[i].second, ft,
                                   "field " + it->second[i].first + " of " + v->rec);
            }
            return m_rec(v->rec);
        }
        case Value::Kind::Pair:
            throw TypeError(DiagCode::Internal, {}, "pair value in nominal checking");
    }
    throw TypeError(DiagCode::Internal, {}, "unreachable value kind");
}

MTypeRef typecheck_muc(const MucCheckCtx& ctx, const ExprRef& e) {
    switch (e->kind) {
        case Expr::Kind::Val: return typecheck_muc_value(ctx, e->v1);
        case Expr::Kind::Bop: {
            MTypeRef a = typecheck_muc_value(ctx, e->v1);
            MTypeRef b = typecheck_muc_value(ctx, e->v2);
            if (a->kind != MType::Kind::Int)
                throw type_mismatch(DiagCode::TypeMismatch, e->sloc, m_int(), a, "left operand");
            if (b->kind != MType::Kind::Int)
                throw type_mismatch(DiagCode::TypeMismatch, e->sloc, m_int(), b, "right operand");
            return m_int();
        }
        case Expr::Kind::Field: {
            MTypeRef t = typecheck_muc_value(ctx, e->v1);
            if (t->kind != MType::Kind::Rec)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "member access on non-record");
            auto it = ctx.prog->records.find(t->rec);
            if (it == ctx.prog->records.end())
                throw TypeError(DiagCode::UnknownSymbol, e->sloc, "unknown record " + t->rec);
            if (e->field < 1 || (size_t)e->field > it->second.size())
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "no such member");
            return it->second[(size_t)e->field - 1].second;
        }
        case Expr::Kind::New: return m_ptr(typecheck_muc_value(ctx, e->v1));
        case Expr::Kind::Deref: {
            MTypeRef t = typecheck_muc_value(ctx, e->v1);
            if (t->kind != MType::Kind::Ptr)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "dereference of non-pointer");
            return t->pointee;
        }
        case Expr::Kind::Assign: {
            MTypeRef t = typecheck_muc_value(ctx, e->v1);
            if (t->kind != MType::Kind::Ptr)
                throw TypeError(DiagCode::TypeMismatch, e->sloc, "assignment through non-pointer");
            MTypeRef vt = typecheck_muc_value(ctx, e->v2);
            if (!mtype_equal(vt, t->pointee))
                throw type_mismatch(DiagCode::AssignMismatch, e->sloc, t->pointee, vt,
                               "incompatible types in assignment");
            return m_unit();
        }
        case Expr::Kind::Let: {
            MTypeRef t1 = typecheck_muc(ctx, e->e1);
            if (e->let_mtype && !mtype_equal(t1, e->let_mtype))
                throw type_mismatch(DiagCode::TypeMismatch, e->sloc, e->let_mtype, t1,
                               "declared type does not match initializer");
            MucCheckCtx inner = ctx;
            inner.vars[e->let_var] = e->let_mtype ? e->let_mtype : t1;
            return typecheck_muc(inner, e->e2);
        }
        case Expr::Kind::If: {
            MTypeRef c = typecheck_muc_value(ctx, e->v1);
            if (c->kind != MType::Kind::Int)
                throw type_mismatch(DiagCode::TypeMismatch, e->sloc, m_int(), c, "condition");
            MTypeRef t = typecheck_muc(ctx, e->e1);
            MTypeRef f = typecheck_muc(ctx, e->e2);
            if (!mtype_equal(t, f))
                throw type_mismatch(DiagCode::TypeMismatch, e->sloc, t, f, "branch types differ");
            return t;
        }
        case Expr::Kind::App: {
            MTypeRef ft = typecheck_muc_value(ctx, e->v1);
            if (ft->kind != MType::Kind::Fun)
                throw TypeError(DiagCode::TypeMismatch, e->sloc,
                                to_string(*e->v1) + " is not a function");
            if (e->app_args.size() != ft->args.size())
                throw TypeError(DiagCode::TypeMismatch, e->sloc,
                                "wrong number of arguments in call");
            for (size_t i = 0; i < e->app_args.size(); ++i) {
                MTypeRef at = typecheck_muc_value(ctx, e->app_args[i]);
                if (mtype_equal(at, ft->args[i])) continue;
                bool ptr = ft->args[i]->kind == MType::Kind::Ptr || at->kind == MType::Kind::Ptr;
                std::string fname = !e->call_name.empty()
                                        ? e->call_name
                                        : (e->v1->kind != Value::Kind::Unit ? e->v1->name : "");
                int argno = e->call_arg > 0 ? e->call_arg : (int)i + 1;
                TypeError err = type_mismatch(
                    ptr ? DiagCode::ArgPointerMismatch : DiagCode::ArgMismatch, e->sloc,
                    ft->args[i], at,
                    "incompatible type for argument " + std::to_string(argno) + " of '" + fname +
                        "'");
                err.callee = fname;
                err.argno = argno;
                throw err;
            }
            return ft->ret;
        }
        case Expr::Kind::Relab:
            throw TypeError(DiagCode::Internal, e->sloc, "relabel in nominal program");
        case Expr::Kind::PairE:
            throw TypeError(DiagCode::Internal, e->sloc, "pair expression in nominal program");
    }
    throw TypeError(DiagCode::Internal, e->sloc, "unreachable expression kind");
}

std::vector<Diagnostic> check_muc_program(const MucProgram& prog) {
    std::vector<Diagnostic> out;
    for (const auto& [name, f] : prog.funs) {
        if (!f.body) continue;  // external declaration
        MucCheckCtx ctx;
        ctx.prog = &prog;
        for (size_t i = 0; i < f.params.size() && i < f.type->args.size(); ++i)
            if (!f.params[i].empty()) ctx.vars[f.params[i]] = f.type->args[i];
        try {
            MTypeRef rt = typecheck_muc(ctx, f.body);
            if (!mtype_equal(rt, f.type->ret)) {
                Diagnostic d = Diagnostic::error(DiagCode::TypeMismatch, f.sloc,
                                                 "return type of '" + name + "' does not match");
                d.expected = to_string(*f.type->ret);
                d.found = to_string(*rt);
                out.push_back(std::move(d));
            }
        } catch (const TypeError& err) {
            Diagnostic d = Diagnostic::error(err.code, err.loc.valid() ? err.loc : f.sloc,
                                             err.what());
            d.expected = err.expected;
            d.found = err.found;
            d.callee = err.callee;
            d.argno = err.argno;
            out.push_back(std::move(d));
        }
    }
    return out;
}

std::pair<Store, ValueRef> eval_muc(const MucProgram& prog, Store store, ExprRef e,
                                    long long fuel) {
    FunTable funs;
    for (const auto& [n, f] : prog.funs) {
        FunDef def;
        def.name = n;
        def.params = f.params;
        def.body = f.body;
        funs.emplace(n, std::move(def));
    }
    return eval(funs, std::move(store), std::move(e), fuel);
}

}  // namespace fln
