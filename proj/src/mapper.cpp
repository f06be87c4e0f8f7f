#include "fln/mapper.hpp"

#include <algorithm>
#include <cassert>

namespace fln {

Policy elaborate_policy(const std::vector<std::pair<std::string, Projection>>& seq) {
    Policy p = Policy::bottom();
    for (const auto& [atom, proj] : seq) {
        Label l;
        switch (proj) {
            case Projection::Secrecy:
                l = {SecrecyTag::make(atom), IntegrityTag::bottom()};
                break;
            case Projection::Integrity:
                l = {SecrecyTag::bottom(), IntegrityTag::make(atom)};
                break;
            case Projection::Both:
                l = {SecrecyTag::make(atom), IntegrityTag::make(atom)};
                break;
        }
        p.labels.push_back(l);
    }
    return p;
}

CType SurfaceCtx::resolve(const CType& t) const {
    CType cur = t;
    // Guard against accidental alias cycles.
    for (int hops = 0; hops < 32; ++hops) {
        auto it = typedefs.find(cur.base);
        if (it == typedefs.end()) return cur;
        CType next = it->second;
        next.pointers += cur.pointers;
        cur = next;
    }
    return cur;
}

namespace {

STypeRef with_cbase(const STypeRef& s, std::string cb) {
    auto c = std::make_shared<SType>(*s);
    c->cbase = std::move(cb);
    return c;
}

std::string strip_tag_prefix(const std::string& base) {
    if (base.rfind("struct ", 0) == 0) return base.substr(7);
    if (base.rfind("union ", 0) == 0) return base.substr(6);
    return base;
}

bool meaningful(const Policy& p) { return !p.labels.empty(); }

}  // namespace

STypeRef map_type(const SurfaceCtx& ctx, const CType& t, const Policy* pol) {
    if (t.is_void && t.pointers == 0) return s_unit();
    CType resolved = ctx.resolve(t);
    Policy inner = pol ? *pol : Policy::unlabeled();
    STypeRef core;
    std::string tag = strip_tag_prefix(resolved.base);
    bool is_record = resolved.base.rfind("struct ", 0) == 0 ||
                     resolved.base.rfind("union ", 0) == 0 || ctx.records.count(resolved.base);
    if (is_record)
        core = s_rec(tag, inner);
    else
        core = with_cbase(s_int(inner), t.base);
    for (int i = 0; i < resolved.pointers; ++i) core = s_ptr(core, Policy::unlabeled());
    return core;
}

namespace {

struct FunInfo {
    STypeRef type;  // Fun
    bool variadic = false;
    std::vector<std::string> params;
};

// Whole-program mapping state.
struct Mapper {
    SurfaceCtx ctx;
    MappedUnit out;
    std::map<std::string, FunInfo> funs;
    std::map<std::string, STypeRef> global_cells;  // symbol -> pointee type
    int tmp = 0;

    std::string fresh() { return "__fln_t" + std::to_string(tmp++); }

    void error(DiagCode c, const SourceLoc& loc, std::string msg) {
        out.diags.push_back(Diagnostic::error(c, loc, std::move(msg)));
    }
    void warn(DiagCode c, const SourceLoc& loc, std::string msg) {
        out.diags.push_back(Diagnostic::warning(c, loc, std::move(msg)));
    }

    // ------------------------------------------------------ declarations --

    // Value-level policy of a declaration (first requires directive), if any.
    const PragmaDirective* requires_of(const CDecl& d) {
        for (const auto& p : d.bound)
            if (p.kind == PragmaDirective::Kind::Requires) return &p;
        return nullptr;
    }

    void declare_record(const CRecordDef& r) {
        std::vector<std::pair<std::string, STypeRef>> fields;
        for (const auto& f : r.fields) fields.emplace_back(f.name, map_type(ctx, f.type, nullptr));
        out.prog.records[r.name] = std::move(fields);
        ctx.records.insert(r.name);
        ctx.records.insert("struct " + r.name);
    }

    // Field-annotated instance: derive a record type whose listed fields are
    // labeled; the instance keeps the unlabeled outer policy so access to an
    // annotated field yields a labeled value.
    std::string derive_field_record(const std::string& rec, const PragmaDirective& dir,
                                    const Policy& pol) {
        std::string name = rec + "$";
        for (const auto& [f, t] : dir.field_set) name += f + "_";
        for (const auto& [atom, proj] : dir.sequence) name += atom;
        if (out.prog.records.count(name)) return name;
        std::vector<std::pair<std::string, STypeRef>> fields;
        auto base = out.prog.records.find(rec);
        std::set<std::string> annotated;
        for (const auto& [f, ct] : dir.field_set) {
            annotated.insert(f);
            fields.emplace_back(f, with_cbase(s_int(pol), ct));
        }
        if (base != out.prog.records.end())
            for (const auto& [f, t] : base->second)
                if (!annotated.count(f)) fields.emplace_back(f, t);
        out.prog.records[name] = std::move(fields);
        return name;
    }

    void declare_global(const CDeclRef& d) {
        const PragmaDirective* req = requires_of(*d);
        STypeRef s;
        if (req && !req->field_set.empty()) {
            Policy pol = elaborate_policy(req->sequence);
            CType resolved = ctx.resolve(d->type);
            std::string rec = strip_tag_prefix(resolved.base);
            std::string derived = derive_field_record(rec, *req, pol);
            s = s_rec(derived, Policy::unlabeled());
            out.surface.field_annots[d->name] = {rec, req->field_set, pol};
        } else if (req) {
            Policy pol = elaborate_policy(req->sequence);
            s = map_type(ctx, d->type, &pol);
            out.surface.policies[d->name] = pol;
        } else {
            s = map_type(ctx, d->type, nullptr);
        }
        out.surface.globals[d->name] = d->type;
        global_cells[d->name] = s;
        out.prog.globals[d->name] = s_ptr(s, Policy::unlabeled());
    }

    void declare_function(const CDeclRef& d) {
        std::vector<STypeRef> args;
        std::vector<const PragmaDirective*> param_dirs(d->params.size(), nullptr);
        const PragmaDirective* ret_dir = nullptr;
        for (const auto& p : d->bound) {
            if (p.kind == PragmaDirective::Kind::Return) ret_dir = &p;
            if (p.kind == PragmaDirective::Kind::Param) {
                if (p.param_index) {
                    int i = *p.param_index - 1;
                    if (i >= 0 && (size_t)i < param_dirs.size()) param_dirs[i] = &p;
                } else {
                    for (auto& slot : param_dirs) slot = &p;
                }
            }
        }
        for (size_t i = 0; i < d->params.size(); ++i) {
            if (param_dirs[i]) {
                Policy pol = elaborate_policy(param_dirs[i]->sequence);
                args.push_back(map_type(ctx, d->params[i].type, &pol));
            } else {
                args.push_back(map_type(ctx, d->params[i].type, nullptr));
            }
        }
        STypeRef ret = ret_dir
                           ? [&] {
                                 Policy pol = elaborate_policy(ret_dir->sequence);
                                 return map_type(ctx, d->type, &pol);
                             }()
                           : map_type(ctx, d->type, nullptr);

        // Declassification/endorsement detection: a value-level annotated
        // parameter plus an annotated return on the same non-pointer base.
        bool de = false;
        int de_arg = 1;
        if (ret_dir) {
            for (size_t i = 0; i < args.size(); ++i) {
                if (!param_dirs[i]) continue;
                const STypeRef& a = args[i];
                if (a->kind == SType::Kind::Ptr || ret->kind == SType::Kind::Ptr) continue;
                if (!meaningful(a->pol) || !meaningful(ret->pol)) continue;
                if (a->kind != ret->kind || (a->kind == SType::Kind::Rec && a->rec != ret->rec)) {
                    error(DiagCode::BaseTypeMismatch, d->loc,
                          "annotated parameter and return of '" + d->name +
                              "' have different base types");
                    continue;
                }
                de = true;
                de_arg = (int)i + 1;
                Label l1 = a->pol.labels.front();
                Label l2 = ret->pol.labels.front();
                // The d&e signature: the designated argument accepts only the
                // head label (no further peeling), the result starts the tail.
                auto na = std::make_shared<SType>(*a);
                na->pol = Policy::single(l1, Terminal::Top);
                args[i] = na;
                auto nr = std::make_shared<SType>(*ret);
                nr->pol = Policy::single(l2, Terminal::Bottom);
                ret = nr;
                out.caps.push_back({l1, l2, d->name});
                break;
            }
        }

        FunInfo info;
        info.type = s_fun(Policy::bottom(), std::move(args), ret, Policy::bottom(), de);
        {
            auto ft = std::make_shared<SType>(*info.type);
            ft->de_arg = de_arg;
            info.type = ft;
        }
        info.variadic = d->variadic;
        for (const auto& p : d->params) info.params.push_back(p.name);
        funs[d->name] = std::move(info);
        out.surface.globals[d->name] = d->type;
    }

    // ------------------------------------------------------------- bodies --

    void map_bodies(const std::vector<const CUnit*>& units) {
        for (const CUnit* u : units)
            for (const auto& item : u->items)
                if (item.kind == CTopItem::Kind::Decl && item.decl->is_function) {
                    auto it = funs.find(item.decl->name);
                    if (it == funs.end()) continue;
                    FunDef def;
                    def.name = item.decl->name;
                    def.type = it->second.type;
                    def.params = it->second.params;
                    def.sloc = item.decl->loc;
                    if (item.decl->has_body) def.body = map_body(*item.decl, it->second);
                    out.prog.funs[def.name] = std::move(def);
                }
    }

    ExprRef map_body(const CDecl& d, const FunInfo& info);
};

// Per-function body mapping: builds an A-normal-form let chain.
struct FnMapper {
    Mapper& m;
    const SType* ftype;
    struct Frame {
        std::string var;
        STypeRef type;
        ExprRef rhs;
    };
    std::vector<Frame> frames;
    std::map<std::string, STypeRef> env;  // boxed: name -> pointee type

    std::string fresh() { return m.fresh(); }

    void push(const std::string& var, STypeRef t, ExprRef rhs) {
        frames.push_back({var, std::move(t), std::move(rhs)});
    }

    // A value of type t bound through a fresh let.
    ValueRef bind(STypeRef t, ExprRef rhs) {
        std::string v = fresh();
        push(v, t, std::move(rhs));
        return v_var(v, t);
    }

    ExprRef wrap(size_t mark, ExprRef inner) {
        for (size_t i = frames.size(); i > mark; --i) {
            const Frame& f = frames[i - 1];
            inner = e_let(f.var, f.type, f.rhs, inner, f.rhs ? f.rhs->sloc : SourceLoc{});
        }
        frames.resize(mark);
        return inner;
    }

    static STypeRef type_of(const ValueRef& v) { return v->tag; }

    // ----------------------------------------------------------- relabels --

    // Materialized downward chain: peels every label, ending unrestricted.
    ValueRef relab_down(ValueRef v, const SourceLoc& loc) {
        STypeRef t = type_of(v);
        if (!t || !meaningful(t->pol)) return v;
        Policy cur = t->pol;
        ValueRef out = v;
        for (size_t i = 0; i < cur.labels.size(); ++i) {
            Policy from = Policy::single(cur.labels[i], Terminal::Top);
            Policy to = i + 1 < cur.labels.size()
                            ? Policy::single(cur.labels[i + 1], Terminal::Bottom)
                            : Policy::bottom();
            STypeRef rt = with_policy(t, to);
            out = bind(rt, e_relab(to, from, out, loc));
        }
        return out;
    }

    // Upward relabel to an annotated type in one step.
    ValueRef relab_up(ValueRef v, const STypeRef& target, const SourceLoc& loc) {
        STypeRef t = type_of(v);
        Policy from = t ? t->pol : Policy::unlabeled();
        return bind(target, e_relab(target->pol, from, v, loc));
    }

    // ------------------------------------------------------------- values --

    STypeRef int_u() { return s_int(Policy::unlabeled()); }

    ValueRef zero_of(const STypeRef& t, const SourceLoc& loc) {
        if (!t) return v_int(0, int_u());
        switch (t->kind) {
            case SType::Kind::Unit: return v_unit();
            case SType::Kind::Int: return v_int(0, t);
            case SType::Kind::Ptr: return bind(t, e_new(zero_of(t->pointee, loc), t->pol, loc));
            case SType::Kind::Rec: {
                auto it = m.out.prog.records.find(t->rec);
                std::vector<ValueRef> fs;
                if (it != m.out.prog.records.end())
                    for (const auto& [n, ft] : it->second) fs.push_back(zero_of(ft, loc));
                return v_struct(t->rec, std::move(fs), t);
            }
            case SType::Kind::Fun: return v_int(0, int_u());
        }
        return v_int(0, int_u());
    }

    ValueRef rvalue(const CExprRef& e, const STypeRef& expected);
    ValueRef load_ident(const std::string& name, const SourceLoc& loc, bool* found = nullptr);
    ValueRef deref_value(ValueRef ptr, const SourceLoc& loc);
    ValueRef call_value(const CExpr& e);
    ValueRef member_value(const CExpr& e);

    // -------------------------------------------------------- statements --

    ExprRef map_stmts(const std::vector<CStmtRef>& ss, size_t i, bool top);
    ExprRef tail_default();
    ExprRef return_value(const CExprRef& e, const SourceLoc& loc);
};

ValueRef FnMapper::load_ident(const std::string& name, const SourceLoc& loc, bool* found) {
    if (found) *found = true;
    auto it = env.find(name);
    if (it != env.end())
        return bind(it->second, e_deref(v_var(name, s_ptr(it->second, Policy::unlabeled())), loc));
    auto git = m.global_cells.find(name);
    if (git != m.global_cells.end())
        return bind(git->second,
                    e_deref(v_var(name, s_ptr(git->second, Policy::unlabeled())), loc));
    auto fit = m.funs.find(name);
    if (fit != m.funs.end()) return v_fun(name, fit->second.type);
    if (found) {
        *found = false;
        return nullptr;
    }
    m.warn(DiagCode::UnknownSymbol, loc, "unknown symbol '" + name + "' treated as unlabeled");
    return bind(int_u(), e_val(v_int(0, int_u()), loc));
}

ValueRef FnMapper::deref_value(ValueRef ptr, const SourceLoc& loc) {
    STypeRef t = type_of(ptr);
    if (!t || t->kind != SType::Kind::Ptr) {
        m.warn(DiagCode::UnsupportedConstruct, loc, "dereference of a non-pointer value");
        return bind(int_u(), e_val(v_int(0, int_u()), loc));
    }
    ptr = relab_down(ptr, loc);  // pointer-level policy peeled before use
    return bind(type_of(ptr)->pointee, e_deref(ptr, loc));
}

ValueRef FnMapper::call_value(const CExpr& e) {
    auto it = m.funs.find(e.name);
    if (it == m.funs.end()) {
        // Unknown callee: arguments are mapped (effects kept) but unchecked.
        for (const auto& a : e.args) rvalue(a, nullptr);
        return bind(int_u(), e_val(v_int(0, int_u()), e.loc));
    }
    const FunInfo& fi = it->second;
    const auto& sig = fi.type->args;
    std::vector<ValueRef> args;
    for (size_t i = 0; i < e.args.size(); ++i) {
        STypeRef want = i < sig.size() ? sig[i] : nullptr;
        ValueRef v = rvalue(e.args[i], want);
        if (i < sig.size())
            args.push_back(v);  // extra variadic arguments are effect-only
    }
    while (args.size() < sig.size()) args.push_back(zero_of(sig[args.size()], e.loc));

    STypeRef rt = fi.type->ret;
    if (fi.type->de) {
        size_t di = fi.type->de_arg >= 1 ? (size_t)fi.type->de_arg - 1 : 0;
        if (di < args.size()) {
            STypeRef at = type_of(args[di]);
            if (at && meaningful(at->pol) && !fi.type->ret->pol.labels.empty()) {
                Policy rp;
                rp.labels.push_back(fi.type->ret->pol.labels.front());
                if (at->pol.labels.size() >= 2) {
                    rp.labels.insert(rp.labels.end(), at->pol.labels.begin() + 2,
                                     at->pol.labels.end());
                    rp.term = at->pol.term;
                } else {
                    rp.term = Terminal::Bottom;
                }
                rt = with_policy(fi.type->ret, rp);
            }
        }
    }
    auto app = e_app(v_fun(e.name, fi.type), std::move(args), e.loc);
    {
        auto copy = std::make_shared<Expr>(*app);
        copy->call_name = e.name;
        app = copy;
    }
    if (rt->kind == SType::Kind::Unit) {
        push(fresh(), s_unit(), app);
        return v_unit();
    }
    return bind(rt, app);
}

ValueRef FnMapper::member_value(const CExpr& e) {
    ValueRef recv = rvalue(e.e1, nullptr);
    if (e.is_arrow) recv = deref_value(recv, e.loc);
    STypeRef t = type_of(recv);
    if (!t || t->kind != SType::Kind::Rec) {
        m.warn(DiagCode::UnsupportedConstruct, e.loc, "member access on a non-record value");
        return bind(int_u(), e_val(v_int(0, int_u()), e.loc));
    }
    auto rit = m.out.prog.records.find(t->rec);
    if (rit == m.out.prog.records.end()) {
        m.warn(DiagCode::UnknownSymbol, e.loc, "unknown record '" + t->rec + "'");
        return bind(int_u(), e_val(v_int(0, int_u()), e.loc));
    }
    int idx = 0;
    STypeRef ft;
    for (size_t i = 0; i < rit->second.size(); ++i)
        if (rit->second[i].first == e.name) {
            idx = (int)i + 1;
            ft = rit->second[i].second;
        }
    if (!idx) {
        m.warn(DiagCode::UnknownSymbol, e.loc,
               "record '" + t->rec + "' has no field '" + e.name + "'");
        return bind(int_u(), e_val(v_int(0, int_u()), e.loc));
    }
    // Non-uniform field labels force the receiver down before projection.
    bool uniform = true;
    for (const auto& [n, f] : rit->second)
        if (!(lab_of(*f) == t->pol)) uniform = false;
    if (!uniform) recv = relab_down(recv, e.loc);
    return bind(ft, e_field(recv, idx, e.loc));
}

ValueRef FnMapper::rvalue(const CExprRef& e, const STypeRef& expected) {
    if (!e) return expected ? zero_of(expected, {}) : v_int(0, int_u());
    switch (e->kind) {
        case CExpr::Kind::IntLit:
            // Literals take the type the context asks for (labeling constants
            // is always permitted).
            if (expected && expected->kind == SType::Kind::Int) return v_int(e->num, expected);
            return v_int(e->num, int_u());
        case CExpr::Kind::CharLit:
            return v_int(0, int_u());
        case CExpr::Kind::StringLit: {
            STypeRef pt = with_cbase(s_int(Policy::unlabeled()), "char");
            STypeRef t = s_ptr(pt, Policy::unlabeled());
            return bind(t, e_new(v_int(0, pt), Policy::unlabeled(), e->loc));
        }
        case CExpr::Kind::Ident:
            return load_ident(e->name, e->loc);
        case CExpr::Kind::Unary: {
            ValueRef v = relab_down(rvalue(e->e1, nullptr), e->loc);
            STypeRef t = type_of(v);
            if (t && t->kind == SType::Kind::Ptr) return v;
            return bind(int_u(), e_bop(e->op == '-' ? '-' : '+',
                                       e->op == '-' ? v_int(0, int_u()) : v,
                                       e->op == '-' ? v : v_int(0, int_u()), e->loc));
        }
        case CExpr::Kind::Bin: {
            ValueRef a = relab_down(rvalue(e->e1, nullptr), e->loc);
            ValueRef b = relab_down(rvalue(e->e2, nullptr), e->loc);
            STypeRef ta = type_of(a);
            if (ta && ta->kind == SType::Kind::Ptr) return a;  // pointer offset
            char op = '+';
            if (e->op2 == "-") op = '-';
            else if (e->op2 == "*") op = '*';
            else if (e->op2 == "<" || e->op2 == ">" || e->op2 == "<=" || e->op2 == ">=" ||
                     e->op2 == "==" || e->op2 == "!=")
                op = '<';
            STypeRef tb = type_of(b);
            if (!ta || ta->kind != SType::Kind::Int) a = v_int(0, int_u());
            if (!tb || tb->kind != SType::Kind::Int) b = v_int(0, int_u());
            return bind(int_u(), e_bop(op, a, b, e->loc));
        }
        case CExpr::Kind::Call:
            return call_value(*e);
        case CExpr::Kind::Member:
            return member_value(*e);
        case CExpr::Kind::Index: {
            rvalue(e->e2, nullptr);  // index effects only
            return deref_value(rvalue(e->e1, nullptr), e->loc);
        }
        case CExpr::Kind::Deref:
            return deref_value(rvalue(e->e1, nullptr), e->loc);
        case CExpr::Kind::AddrOf: {
            if (e->e1 && e->e1->kind == CExpr::Kind::Ident) {
                auto it = env.find(e->e1->name);
                if (it != env.end())
                    return v_var(e->e1->name, s_ptr(it->second, Policy::unlabeled()));
                auto git = m.global_cells.find(e->e1->name);
                if (git != m.global_cells.end())
                    return v_var(e->e1->name, s_ptr(git->second, Policy::unlabeled()));
            }
            ValueRef v = rvalue(e->e1, nullptr);
            STypeRef t = type_of(v);
            STypeRef pt = s_ptr(t ? t : int_u(), Policy::unlabeled());
            return bind(pt, e_new(v, Policy::unlabeled(), e->loc));
        }
        case CExpr::Kind::Cast: {
            ValueRef v = rvalue(e->e1, nullptr);
            STypeRef t = type_of(v);
            if (t && meaningful(t->pol)) v = relab_down(v, e->loc);
            STypeRef ct = map_type(m.ctx, e->cast_type, nullptr);
            t = type_of(v);
            if (t && t->kind == ct->kind) return bind(ct, e_val(v, e->loc));
            return zero_of(ct, e->loc);
        }
        case CExpr::Kind::InitList: {
            if (expected && expected->kind == SType::Kind::Rec) {
                auto rit = m.out.prog.records.find(expected->rec);
                if (rit != m.out.prog.records.end()) {
                    std::vector<ValueRef> fields;
                    for (size_t i = 0; i < rit->second.size(); ++i) {
                        const auto& [fname, ftype] = rit->second[i];
                        CExprRef init;
                        for (size_t k = 0; k < e->items.size(); ++k) {
                            const auto& item = e->items[k];
                            if (item.designator.empty() ? k == i : item.designator == fname)
                                init = item.value;
                        }
                        fields.push_back(init ? rvalue(init, ftype) : zero_of(ftype, e->loc));
                    }
                    return v_struct(expected->rec, std::move(fields), expected);
                }
            }
            for (const auto& item : e->items) rvalue(item.value, nullptr);
            return expected ? zero_of(expected, e->loc) : v_int(0, int_u());
        }
    }
    return v_int(0, int_u());
}

ExprRef FnMapper::tail_default() {
    const STypeRef& rt = ftype->ret;
    if (rt->kind == SType::Kind::Unit) return e_val(v_unit());
    size_t mark = frames.size();
    ValueRef v = zero_of(with_policy(rt, Policy::unlabeled()), {});
    if (meaningful(rt->pol)) v = relab_up(v, rt, {});
    return wrap(mark, e_val(v));
}

ExprRef FnMapper::return_value(const CExprRef& e, const SourceLoc& loc) {
    const STypeRef& rt = ftype->ret;
    size_t mark = frames.size();
    if (rt->kind == SType::Kind::Unit) {
        if (e) rvalue(e, nullptr);
        return wrap(mark, e_val(v_unit(), loc));
    }
    // The body computes at the original (unlabeled) type; the boundary
    // relabel realizes the return annotation.
    bool value_level = rt->kind != SType::Kind::Ptr && meaningful(rt->pol);
    STypeRef want = value_level ? with_policy(rt, Policy::unlabeled()) : rt;
    ValueRef v = rvalue(e, want);
    if (value_level) v = relab_up(v, rt, loc);
    return wrap(mark, e_val(v, loc));
}

ExprRef FnMapper::map_stmts(const std::vector<CStmtRef>& ss, size_t i, bool top) {
    if (i >= ss.size()) return top ? tail_default() : e_val(v_unit());
    const CStmt& s = *ss[i];
    size_t mark = frames.size();
    switch (s.kind) {
        case CStmt::Kind::Pragma:
        case CStmt::Kind::Opaque:
            return map_stmts(ss, i + 1, top);
        case CStmt::Kind::Decl: {
            const CDecl& d = *s.decl;
            const PragmaDirective* req = nullptr;
            for (const auto& p : d.bound)
                if (p.kind == PragmaDirective::Kind::Requires) req = &p;
            STypeRef st;
            if (req && !req->field_set.empty()) {
                Policy pol = elaborate_policy(req->sequence);
                CType resolved = m.ctx.resolve(d.type);
                std::string rec = strip_tag_prefix(resolved.base);
                std::string derived = m.derive_field_record(rec, *req, pol);
                st = s_rec(derived, Policy::unlabeled());
            } else if (req) {
                Policy pol = elaborate_policy(req->sequence);
                st = map_type(m.ctx, d.type, &pol);
            } else {
                st = map_type(m.ctx, d.type, nullptr);
            }
            ValueRef init = d.init ? rvalue(d.init, st) : zero_of(st, s.loc);
            STypeRef cell = s_ptr(st, Policy::unlabeled());
            STypeRef saved;
            auto old = env.find(d.name);
            bool had = old != env.end();
            if (had) saved = old->second;
            env[d.name] = st;
            ExprRef rest = map_stmts(ss, i + 1, top);
            if (had) env[d.name] = saved; else env.erase(d.name);
            return wrap(mark, e_let(d.name, cell, e_new(init, Policy::unlabeled(), s.loc),
                                    rest, s.loc));
        }
        case CStmt::Kind::Assign: {
            const CExprRef& lhs = s.lhs;
            if (lhs && lhs->kind == CExpr::Kind::Ident) {
                STypeRef pointee;
                auto it = env.find(lhs->name);
                if (it != env.end()) pointee = it->second;
                else {
                    auto git = m.global_cells.find(lhs->name);
                    if (git != m.global_cells.end()) pointee = git->second;
                }
                if (pointee) {
                    ValueRef v = rvalue(s.rhs, pointee);
                    push(fresh(), s_unit(),
                         e_assign(v_var(lhs->name, s_ptr(pointee, Policy::unlabeled())), v,
                                  s.loc));
                } else {
                    m.warn(DiagCode::UnknownSymbol, s.loc,
                           "assignment to unknown symbol '" + lhs->name + "'");
                    rvalue(s.rhs, nullptr);
                }
            } else if (lhs && (lhs->kind == CExpr::Kind::Deref || lhs->kind == CExpr::Kind::Index)) {
                if (lhs->kind == CExpr::Kind::Index) rvalue(lhs->e2, nullptr);
                ValueRef p = rvalue(lhs->e1, nullptr);
                STypeRef pt = type_of(p);
                if (pt && pt->kind == SType::Kind::Ptr) {
                    p = relab_down(p, s.loc);
                    ValueRef v = rvalue(s.rhs, type_of(p)->pointee);
                    push(fresh(), s_unit(), e_assign(p, v, s.loc));
                } else {
                    m.warn(DiagCode::UnsupportedConstruct, s.loc,
                           "assignment through a non-pointer value");
                    rvalue(s.rhs, nullptr);
                }
            } else if (lhs && lhs->kind == CExpr::Kind::Member) {
                // No field update form exists downstream; the written value is
                // still checked against the field's type.
                ValueRef recv = rvalue(lhs->e1, nullptr);
                if (lhs->is_arrow) recv = deref_value(recv, s.loc);
                STypeRef rt = type_of(recv);
                STypeRef ftype_;
                if (rt && rt->kind == SType::Kind::Rec) {
                    auto rit = m.out.prog.records.find(rt->rec);
                    if (rit != m.out.prog.records.end())
                        for (const auto& [n, f] : rit->second)
                            if (n == lhs->name) ftype_ = f;
                }
                ValueRef v = rvalue(s.rhs, ftype_);
                if (ftype_) push(fresh(), ftype_, e_val(v, s.loc));
            } else {
                rvalue(s.rhs, nullptr);
            }
            ExprRef rest = map_stmts(ss, i + 1, top);
            return wrap(mark, rest);
        }
        case CStmt::Kind::If: {
            ValueRef c = relab_down(rvalue(s.cond, nullptr), s.loc);
            STypeRef ct = type_of(c);
            if (!ct || ct->kind != SType::Kind::Int) c = v_int(1, int_u());
            auto saved = env;
            ExprRef thn = map_stmts(s.then_body, 0, false);
            env = saved;
            ExprRef els = map_stmts(s.else_body, 0, false);
            env = saved;
            push(fresh(), s_unit(), e_if(c, thn, els, s.loc));
            ExprRef rest = map_stmts(ss, i + 1, top);
            return wrap(mark, rest);
        }
        case CStmt::Kind::Return: {
            if (top) return wrap(mark, return_value(s.rhs, s.loc));
            // Inside a branch: the computed value is checked against the
            // return type, then the branch continues at unit.
            const STypeRef& rt = ftype->ret;
            if (rt->kind != SType::Kind::Unit) {
                size_t m2 = frames.size();
                bool value_level = rt->kind != SType::Kind::Ptr && meaningful(rt->pol);
                STypeRef want = value_level ? with_policy(rt, Policy::unlabeled()) : rt;
                ValueRef v = rvalue(s.rhs, want);
                if (value_level) v = relab_up(v, rt, s.loc);
                else push(fresh(), rt, e_val(v, s.loc));
                (void)m2;
            } else if (s.rhs) {
                rvalue(s.rhs, nullptr);
            }
            return wrap(mark, e_val(v_unit(), s.loc));
        }
        case CStmt::Kind::ExprStmt: {
            rvalue(s.rhs, nullptr);
            ExprRef rest = map_stmts(ss, i + 1, top);
            return wrap(mark, rest);
        }
        case CStmt::Kind::Block: {
            auto saved = env;
            ExprRef blk = map_stmts(s.then_body, 0, false);
            env = saved;
            push(fresh(), s_unit(), blk);
            ExprRef rest = map_stmts(ss, i + 1, top);
            return wrap(mark, rest);
        }
    }
    return map_stmts(ss, i + 1, top);
}

ExprRef Mapper::map_body(const CDecl& d, const FunInfo& info) {
    FnMapper fm{*this, info.type.get(), {}, {}};
    // Parameter boundary: annotated value-level parameters are relabeled down
    // to their original types, then every parameter is boxed (shadowing the
    // incoming binding) so assignment works uniformly.
    for (size_t i = 0; i < d.params.size() && i < info.type->args.size(); ++i) {
        const std::string& name = d.params[i].name;
        if (name.empty()) continue;
        STypeRef at = info.type->args[i];
        ValueRef v = v_var(name, at);
        if (at->kind != SType::Kind::Ptr && meaningful(at->pol)) {
            v = fm.relab_down(v, d.loc);
            at = fm.type_of(v);
        }
        fm.push(name, s_ptr(at, Policy::unlabeled()), e_new(v, Policy::unlabeled(), d.loc));
        fm.env[name] = at;
    }
    ExprRef inner = fm.map_stmts(d.body, 0, true);
    return fm.wrap(0, inner);
}

}  // namespace

MappedUnit map_units(const std::vector<const CUnit*>& units) {
    Mapper m;
    // Declaration pass: typedefs, records, globals, function signatures.
    for (const CUnit* u : units) {
        for (const auto& item : u->items) {
            switch (item.kind) {
                case CTopItem::Kind::Typedef:
                    m.ctx.typedefs[item.tdef.name] = item.tdef.type;
                    break;
                case CTopItem::Kind::Record:
                    m.declare_record(item.record);
                    break;
                case CTopItem::Kind::Decl:
                    if (item.decl->is_function)
                        m.declare_function(item.decl);
                    else
                        m.declare_global(item.decl);
                    break;
                default:
                    break;
            }
        }
        for (const auto& dg : u->diags) m.out.diags.push_back(dg);
    }
    m.map_bodies(units);
    return std::move(m.out);
}

}  // namespace fln
