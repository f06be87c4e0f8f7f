#include "fln/translate.hpp"

#include <algorithm>

namespace fln {

namespace {

bool meaningful(const Policy& p) { return !p.labels.empty(); }

Policy norm(const Policy& p) { return p.is_unlabeled() ? Policy::bottom() : p; }

Policy njoin(const Policy& p, const Policy& q) {
    if (p.is_unlabeled()) return norm(q);
    if (q.is_unlabeled()) return norm(p);
    return policy_join(p, q);
}

STypeRef join_outer(const STypeRef& s, const Policy& p) {
    if (s->kind == SType::Kind::Unit) return s;
    if (norm(p) == Policy::bottom()) return s;
    return with_policy(s, njoin(s->pol, p));
}

std::string tag_word(const SecrecyTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "bot";
        case TagKind::Top: return "top";
        case TagKind::Atom: return t.atom;
    }
    return "bot";
}
std::string tag_word(const IntegrityTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "bot";
        case TagKind::Top: return "top";
        case TagKind::Atom: return t.atom;
    }
    return "bot";
}

std::string label_code(const Label& l) {
    bool sa = l.secrecy.kind == TagKind::Atom;
    bool ia = l.integrity.kind == TagKind::Atom;
    if (sa && ia) {
        if (l.secrecy.atom == l.integrity.atom) return l.secrecy.atom + "SI";
        return l.secrecy.atom + "S_" + l.integrity.atom + "I";
    }
    if (sa) return l.secrecy.atom + "S";
    if (ia) return l.integrity.atom + "I";
    return tag_word(l.secrecy) + "S_" + tag_word(l.integrity) + "I";
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ' ' || c == '*') c = '_';
    return s;
}

int fresh_counter = 0;
std::string fresh() { return "__fln_x" + std::to_string(fresh_counter++); }

}  // namespace

std::string gen_name(const std::string& base, const Policy& p) {
    std::string out = "__fln__";
    for (const Label& l : p.labels) out += label_code(l) + "_";
    return out + sanitize(base);
}

std::string base_token(const SType& s) {
    switch (s.kind) {
        case SType::Kind::Unit: return "void";
        case SType::Kind::Int: return s.cbase.empty() ? "int" : s.cbase;
        case SType::Kind::Rec: return s.rec;
        case SType::Kind::Ptr:
            // A labeled pointee changes the pointer's representation, so it
            // must be part of the name to keep wrapper names injective.
            if (s.pointee && !s.pointee->pol.labels.empty())
                return gen_name(base_token(*s.pointee), s.pointee->pol) + "p";
            return base_token(*s.pointee) + "p";
        case SType::Kind::Fun: return "fn";
    }
    return "int";
}

namespace {

void register_def(GeneratedDefs& defs, const std::string& name, const std::string& token,
                  const Policy& pol,
                  std::vector<std::pair<std::string, MTypeRef>> fields) {
    if (defs.defs.count(name)) return;
    defs.defs[name] = std::move(fields);
    defs.provenance[name] = {token, pol};
    defs.order.push_back(name);
    defs.aka[name] = "struct <anonymous>";
}

MTypeRef base_int(const SType& s) {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Int;
    if (!s.cbase.empty() && s.cbase != "int") t->cbase = s.cbase;
    return t;
}

}  // namespace

MTypeRef translate_type(const STypeRef& s, const PolcProgram& prog, GeneratedDefs& defs) {
    switch (s->kind) {
        case SType::Kind::Unit:
            return m_unit();
        case SType::Kind::Int: {
            if (!meaningful(s->pol)) return base_int(*s);
            std::string name = gen_name(base_token(*s), s->pol);
            register_def(defs, name, base_token(*s), s->pol, {{"d", base_int(*s)}});
            return m_rec(name);
        }
        case SType::Kind::Rec: {
            if (!meaningful(s->pol)) return m_rec(s->rec);
            auto it = prog.records.find(s->rec);
            if (it == prog.records.end())
                throw TypeError(DiagCode::UnknownSymbol, {}, "unknown record " + s->rec);
            std::string name = gen_name(base_token(*s), s->pol);
            if (!defs.defs.count(name)) {
                // Labeled record types share the field layout of the base
                // record, so relabels can reassemble the fields.
                std::vector<std::pair<std::string, MTypeRef>> fields;
                register_def(defs, name, base_token(*s), s->pol, {});
                for (const auto& [fn, ft] : it->second)
                    fields.emplace_back(fn, translate_type(ft, prog, defs));
                defs.defs[name] = std::move(fields);
            }
            return m_rec(name);
        }
        case SType::Kind::Ptr: {
            MTypeRef inner = translate_type(s->pointee, prog, defs);
            if (!meaningful(s->pol)) return m_ptr(inner);
            std::string name = gen_name(base_token(*s), s->pol);
            register_def(defs, name, base_token(*s), s->pol, {{"d", m_ptr(inner)}});
            return m_rec(name);
        }
        case SType::Kind::Fun: {
            std::vector<MTypeRef> args;
            for (const auto& a : s->args) args.push_back(translate_type(a, prog, defs));
            return m_fun(std::move(args), translate_type(s->ret, prog, defs));
        }
    }
    throw TypeError(DiagCode::Internal, {}, "unreachable type kind");
}

namespace {

// Type-directed translation. The translator re-runs the labeled typing rules
// as it walks so it can see every policy join and every use of subsumption,
// and it materializes exactly those as wrapper conversions. A conversion is
// only inserted where the labeled checker itself accepts the coercion; at any
// site the labeled rules reject (or cannot type), the operand is translated
// structurally and the nominal checker reports the mismatch.
struct Translator {
    const PolcProgram& prog;
    GeneratedDefs& defs;
    TranslateMode mode;
    CheckCtx ctx;

    bool faithful() const { return mode == TranslateMode::Faithful; }

    using Binds = std::vector<std::pair<std::string, ExprRef>>;

    MTypeRef type(const STypeRef& s) { return translate_type(s, prog, defs); }

    bool same_rep(const STypeRef& a, const STypeRef& b) {
        return mtype_equal(type(a), type(b));
    }

    std::string rec_name(const STypeRef& t) {
        MTypeRef m = type(t);
        return m->kind == MType::Kind::Rec ? m->rec : std::string();
    }

    STypeRef safe_vtype(const ValueRef& v) {
        try {
            return typecheck_value(ctx, v);
        } catch (const TypeError&) {
            return nullptr;
        }
    }

    ExprRef wrap_binds(const Binds& bs, ExprRef core, const SourceLoc& loc) {
        for (auto it = bs.rbegin(); it != bs.rend(); ++it)
            core = e_let(it->first, nullptr, it->second, std::move(core), loc);
        return core;
    }

    // Structural translation, used where no type information is available;
    // literal and ascription tags still drive wrapper construction.
    ValueRef raw_value(const ValueRef& v) {
        switch (v->kind) {
            case Value::Kind::Unit: return v_unit();
            case Value::Kind::Int:
                if (v->tag && v->tag->kind == SType::Kind::Int && meaningful(v->tag->pol)) {
                    type(v->tag);
                    return v_struct(gen_name(base_token(*v->tag), v->tag->pol), {v_int(v->n)});
                }
                return v_int(v->n);
            case Value::Kind::Var: return v_var(v->name);
            case Value::Kind::Fun: return v_fun(v->name);
            case Value::Kind::Loc: return v_loc(v->loc);
            case Value::Kind::Struct: {
                std::vector<ValueRef> fs;
                for (const auto& f : v->fields) fs.push_back(raw_value(f));
                std::string rec = v->rec;
                if (v->tag && v->tag->kind == SType::Kind::Rec && meaningful(v->tag->pol)) {
                    type(v->tag);
                    rec = gen_name(base_token(*v->tag), v->tag->pol);
                }
                return v_struct(rec, std::move(fs));
            }
            case Value::Kind::Pair:
                throw TypeError(DiagCode::Internal, {}, "pair value in translation");
        }
        throw TypeError(DiagCode::Internal, {}, "unreachable value kind");
    }

    // An already translated value known at type nat, repackaged at target.
    // Both types share a base; only policies differ. Intermediate projections
    // become let bindings collected in bs.
    ValueRef convert_raw(const ValueRef& tv, const STypeRef& nat, const STypeRef& target,
                         Binds& bs, const SourceLoc& loc) {
        if (same_rep(nat, target)) return tv;
        if (nat->kind == SType::Kind::Rec) {
            // Reassemble the fields into the target-named record; source and
            // target wrappers share the base record's translated layout.
            auto it = prog.records.find(nat->rec);
            if (it == prog.records.end()) return tv;
            std::vector<ValueRef> fs;
            for (size_t i = 0; i < it->second.size(); ++i) {
                std::string x = fresh();
                bs.emplace_back(x, e_field(tv, (int)i + 1, loc));
                fs.push_back(v_var(x));
            }
            std::string tn = rec_name(target);
            if (tn.empty()) tn = nat->rec;
            return v_struct(tn, std::move(fs));
        }
        bool mf = meaningful(norm(nat->pol)), mt = meaningful(norm(target->pol));
        if (mf && mt) {
            std::string x = fresh();
            bs.emplace_back(x, e_field(tv, 1, loc));
            return v_struct(rec_name(target), {v_var(x)});
        }
        if (!mf && mt) return v_struct(rec_name(target), {tv});
        if (mf && !mt) {
            std::string x = fresh();
            bs.emplace_back(x, e_field(tv, 1, loc));
            return v_var(x);
        }
        return tv;
    }

    // Translate v so its nominal type is the translation of t. Conversions
    // are applied only where the labeled subtyping rules sanction them.
    ValueRef value_at(const ValueRef& v, const STypeRef& t, Binds& bs, const SourceLoc& loc,
                      bool init_ok = false) {
        if (!t) return raw_value(v);
        switch (v->kind) {
            case Value::Kind::Unit:
                return v_unit();
            case Value::Kind::Int:
                if (t->kind == SType::Kind::Int && meaningful(norm(t->pol)) &&
                    (faithful() || init_ok)) {
                    type(t);
                    return v_struct(rec_name(t), {v_int(v->n)});
                }
                return v_int(v->n);
            case Value::Kind::Var: {
                // Representation follows the binding, not an ascription tag.
                STypeRef nat;
                auto it = ctx.vars.find(v->name);
                if (it != ctx.vars.end()) {
                    nat = it->second;
                } else {
                    auto git = prog.globals.find(v->name);
                    if (git != prog.globals.end()) nat = git->second;
                }
                if (!nat || same_rep(nat, t)) return v_var(v->name);
                if (faithful() && subtype(nat, t))
                    return convert_raw(v_var(v->name), nat, t, bs, loc);
                return v_var(v->name);  // mismatch left for the nominal checker
            }
            case Value::Kind::Fun:
                return v_fun(v->name);
            case Value::Kind::Loc:
                if (t->kind == SType::Kind::Ptr && meaningful(norm(t->pol)) && faithful()) {
                    type(t);
                    return v_struct(rec_name(t), {v_loc(v->loc)});
                }
                return v_loc(v->loc);
            case Value::Kind::Struct: {
                auto it = prog.records.find(v->rec);
                if (it == prog.records.end()) return raw_value(v);
                std::vector<ValueRef> fs;
                for (size_t i = 0; i < v->fields.size() && i < it->second.size(); ++i)
                    fs.push_back(value_at(v->fields[i], it->second[i].second, bs, loc, true));
                std::string rec = v->rec;
                if (t->kind == SType::Kind::Rec && t->rec == v->rec && meaningful(norm(t->pol))) {
                    type(t);
                    rec = rec_name(t);
                }
                return v_struct(rec, std::move(fs));
            }
            case Value::Kind::Pair:
                throw TypeError(DiagCode::Internal, loc, "pair value in translation");
        }
        throw TypeError(DiagCode::Internal, loc, "unreachable value kind");
    }

    // A value consumed as a raw integer or pointer (operator operand, branch
    // condition, dereference, assignment target). The labeled rules admit
    // any policy at these positions, so the wrapper is peeled
    // unconditionally; policy effects reappear on the result via joins.
    ValueRef bare(const ValueRef& v, const STypeRef& nat, Binds& bs, const SourceLoc& loc) {
        ValueRef tv = value_at(v, nat, bs, loc);
        if (!nat || !meaningful(norm(nat->pol))) return tv;
        return convert_raw(tv, nat, with_policy(nat, Policy::bottom()), bs, loc);
    }

    // Coerce a translated expression from type `from` to type `to` by
    // binding its result; inserted only at checker-sanctioned sites.
    ExprRef coerce_expr(ExprRef et, const STypeRef& from, const STypeRef& to,
                        const SourceLoc& loc) {
        if (same_rep(from, to)) return et;
        std::string x = fresh();
        Binds bs;
        ValueRef cv = convert_raw(v_var(x), from, to, bs, loc);
        return e_let(x, nullptr, std::move(et), wrap_binds(bs, e_val(cv, loc), loc), loc);
    }

    STypeRef fun_type_of(const ValueRef& fn) {
        STypeRef ft;
        if (fn->kind == Value::Kind::Fun || fn->kind == Value::Kind::Var) {
            auto it = prog.funs.find(fn->name);
            if (it != prog.funs.end()) ft = it->second.type;
            if (!ft && fn->kind == Value::Kind::Var) {
                auto vit = ctx.vars.find(fn->name);
                if (vit != ctx.vars.end()) ft = vit->second;
            }
        }
        if (ft && ft->kind != SType::Kind::Fun) ft = nullptr;
        return ft;
    }

    // Best-effort type when the labeled checker cannot type a value.
    STypeRef guess(const ValueRef& v) {
        if (v->tag) return v->tag;
        switch (v->kind) {
            case Value::Kind::Unit: return s_unit();
            case Value::Kind::Struct: return s_rec(v->rec, Policy::unlabeled());
            default: return s_int(Policy::unlabeled());
        }
    }

    std::pair<ExprRef, STypeRef> expr(const Policy& pc, const ExprRef& e,
                                      const STypeRef& expected) {
        const SourceLoc& loc = e->sloc;
        switch (e->kind) {
            case Expr::Kind::Val: {
                STypeRef nat = safe_vtype(e->v1);
                STypeRef chk;
                if (faithful()) {
                    try {
                        chk = typecheck_value(ctx, e->v1, expected);
                    } catch (const TypeError&) {
                        chk = nat;
                    }
                } else {
                    chk = nat;
                }
                if (!chk) chk = guess(e->v1);
                STypeRef r = join_outer(chk, pc);
                Binds bs;
                ValueRef tv = value_at(e->v1, r, bs, loc);
                return {wrap_binds(bs, e_val(tv, loc), loc), r};
            }
            case Expr::Kind::Bop: {
                STypeRef na = safe_vtype(e->v1), nb = safe_vtype(e->v2);
                Policy pi = njoin(njoin(na ? norm(na->pol) : Policy::bottom(),
                                        nb ? norm(nb->pol) : Policy::bottom()),
                                  norm(pc));
                Binds bs;
                ValueRef a = bare(e->v1, na, bs, loc);
                ValueRef b = bare(e->v2, nb, bs, loc);
                ExprRef core = e_bop(e->op, a, b, loc);
                STypeRef r = s_int(pi);
                if (meaningful(pi)) {
                    std::string x = fresh();
                    type(r);
                    core = e_let(x, nullptr, std::move(core),
                                 e_val(v_struct(rec_name(r), {v_var(x)}), loc), loc);
                }
                return {wrap_binds(bs, std::move(core), loc), r};
            }
            case Expr::Kind::Field: {
                STypeRef s = safe_vtype(e->v1);
                if (!s || s->kind != SType::Kind::Rec || !prog.records.count(s->rec))
                    return {e_field(raw_value(e->v1), e->field, loc), s_int(Policy::unlabeled())};
                const auto& fields = prog.records.at(s->rec);
                if (e->field < 1 || (size_t)e->field > fields.size())
                    return {e_field(raw_value(e->v1), e->field, loc), s_int(Policy::unlabeled())};
                STypeRef ft = fields[(size_t)e->field - 1].second;
                STypeRef r = join_outer(ft, njoin(norm(s->pol), norm(pc)));
                Binds bs;
                ValueRef rv = value_at(e->v1, s, bs, loc);
                ExprRef core = coerce_expr(e_field(rv, e->field, loc), ft, r, loc);
                return {wrap_binds(bs, std::move(core), loc), r};
            }
            case Expr::Kind::New: {
                STypeRef want = expected && expected->kind == SType::Kind::Ptr
                                    ? expected->pointee
                                    : nullptr;
                STypeRef s;
                try {
                    s = typecheck_value(ctx, e->v1, want);
                } catch (const TypeError&) {
                    s = safe_vtype(e->v1);
                }
                if (!s) s = guess(e->v1);
                Binds bs;
                ValueRef cv = value_at(e->v1, s, bs, loc, true);
                ExprRef core = e_new(cv, Policy::bottom(), loc);
                STypeRef r = s_ptr(s, e->new_pol);
                if (meaningful(norm(e->new_pol))) {
                    std::string x = fresh();
                    type(r);
                    core = e_let(x, nullptr, std::move(core),
                                 e_val(v_struct(rec_name(r), {v_var(x)}), loc), loc);
                }
                return {wrap_binds(bs, std::move(core), loc), r};
            }
            case Expr::Kind::Deref: {
                STypeRef s = safe_vtype(e->v1);
                if (!s || s->kind != SType::Kind::Ptr)
                    return {e_deref(raw_value(e->v1), loc), s_int(Policy::unlabeled())};
                Binds bs;
                ValueRef pv = bare(e->v1, s, bs, loc);
                STypeRef r = join_outer(s->pointee, njoin(norm(s->pol), norm(pc)));
                ExprRef core = coerce_expr(e_deref(pv, loc), s->pointee, r, loc);
                return {wrap_binds(bs, std::move(core), loc), r};
            }
            case Expr::Kind::Assign: {
                STypeRef t = safe_vtype(e->v1);
                if (!t || t->kind != SType::Kind::Ptr)
                    return {e_assign(raw_value(e->v1), raw_value(e->v2), loc), s_unit()};
                Binds bs;
                ValueRef pv = bare(e->v1, t, bs, loc);
                ValueRef rv = value_at(e->v2, t->pointee, bs, loc);
                return {wrap_binds(bs, e_assign(pv, rv, loc), loc), s_unit()};
            }
            case Expr::Kind::Let: {
                auto [e1t, s1] = expr(pc, e->e1, e->let_type);
                STypeRef bt = e->let_type ? e->let_type : s1;
                if (faithful() && e->let_type && !same_rep(s1, e->let_type) &&
                    subtype(s1, e->let_type))
                    e1t = coerce_expr(std::move(e1t), s1, e->let_type, loc);
                auto saved = ctx.vars.find(e->let_var);
                STypeRef old = saved != ctx.vars.end() ? saved->second : nullptr;
                ctx.vars[e->let_var] = bt;
                auto [e2t, r] = expr(pc, e->e2, expected);
                if (old)
                    ctx.vars[e->let_var] = old;
                else
                    ctx.vars.erase(e->let_var);
                auto out = std::make_shared<Expr>();
                out->kind = Expr::Kind::Let;
                out->sloc = loc;
                out->let_var = e->let_var;
                if (e->let_type) out->let_mtype = type(e->let_type);
                out->e1 = std::move(e1t);
                out->e2 = std::move(e2t);
                return {out, r};
            }
            case Expr::Kind::If: {
                STypeRef c = safe_vtype(e->v1);
                Binds bs;
                ValueRef cv = bare(e->v1, c, bs, loc);
                Policy inner = c ? njoin(norm(pc), norm(c->pol)) : norm(pc);
                auto [tt, ts] = expr(inner, e->e1, expected);
                auto [ff, fs] = expr(inner, e->e2, expected);
                STypeRef r = subtype(ts, fs) ? fs : ts;
                if (subtype(ts, r)) tt = coerce_expr(std::move(tt), ts, r, loc);
                if (subtype(fs, r)) ff = coerce_expr(std::move(ff), fs, r, loc);
                return {wrap_binds(bs, e_if(cv, std::move(tt), std::move(ff), loc), loc), r};
            }
            case Expr::Kind::App:
                return app(pc, e);
            case Expr::Kind::Relab: {
                STypeRef s = safe_vtype(e->v1);
                if (!s) s = e->v1->tag;
                if (!s)
                    throw TypeError(DiagCode::TagMissing, loc,
                                    "relabel operand lacks its type tag");
                STypeRef r = with_policy(s, e->to);
                Binds bs;
                ValueRef tv = value_at(e->v1, s, bs, loc);
                ValueRef cv = convert_raw(tv, s, r, bs, loc);
                return {wrap_binds(bs, e_val(cv, loc), loc), r};
            }
            case Expr::Kind::PairE:
                throw TypeError(DiagCode::Internal, loc, "pair expression in translation");
        }
        throw TypeError(DiagCode::Internal, loc, "unreachable expression kind");
    }

    std::pair<ExprRef, STypeRef> app(const Policy& pc, const ExprRef& e) {
        const SourceLoc& loc = e->sloc;
        STypeRef ft = fun_type_of(e->v1);
        if (!ft) {
            std::vector<ValueRef> args;
            for (const auto& a : e->app_args) args.push_back(raw_value(a));
            auto out = std::make_shared<Expr>(*e_app(raw_value(e->v1), std::move(args), loc));
            out->call_name = e->call_name;
            out->call_arg = e->call_arg;
            return {out, s_int(Policy::unlabeled())};
        }
        Policy rho_f = norm(ft->pol);
        size_t de_i = ft->de_arg >= 1 ? (size_t)ft->de_arg - 1 : 0;

        // Declassification/endorsement call sites: the designated argument's
        // policy starts with the label the function consumes; the call peels
        // it and the result resumes at the label the function produces,
        // followed by whatever the argument's policy still owes.
        if (ft->de && de_i < ft->args.size() && de_i < e->app_args.size() &&
            ft->args[de_i]->kind != SType::Kind::Unit && !ft->args[de_i]->pol.is_erasable() &&
            ft->ret->kind != SType::Kind::Unit && !ft->ret->pol.is_erasable()) {
            STypeRef sa = safe_vtype(e->app_args[de_i]);
            if (sa) {
                Policy pa = norm(sa->pol);
                const Label& l1 = ft->args[de_i]->pol.labels.front();
                const Label& l2 = ft->ret->pol.labels.front();
                bool shape_ok = !pa.labels.empty() && label_leq(pa.labels[0], l1) &&
                                (pa.labels.size() >= 2 ? label_leq(pa.labels[1], l2)
                                                       : pa.term == Terminal::Bottom);
                if (shape_ok && sa->kind == ft->args[de_i]->kind &&
                    (sa->kind != SType::Kind::Rec || sa->rec == ft->args[de_i]->rec)) {
                    Binds bs;
                    ValueRef fnv = value_at(e->v1, ft, bs, loc);
                    std::vector<ValueRef> args;
                    for (size_t i = 0; i < e->app_args.size(); ++i) {
                        STypeRef at = i < ft->args.size() ? ft->args[i] : nullptr;
                        if (i == de_i) {
                            ValueRef tv = value_at(e->app_args[i], sa, bs, loc);
                            args.push_back(convert_raw(tv, sa, ft->args[i], bs, loc));
                        } else {
                            args.push_back(value_at(e->app_args[i], at, bs, loc));
                        }
                    }
                    auto call = std::make_shared<Expr>(*e_app(fnv, std::move(args), loc));
                    call->call_name = e->call_name;
                    call->call_arg = e->call_arg;
                    Policy rest = pa.labels.size() >= 2 ? pa.tail().tail() : Policy::bottom();
                    STypeRef r = join_outer(with_policy(ft->ret, Policy::cons(l2, rest)),
                                            njoin(rho_f, norm(pc)));
                    std::string z = fresh();
                    bs.emplace_back(z, ExprRef(call));
                    ValueRef cv = convert_raw(v_var(z), ft->ret, r, bs, loc);
                    return {wrap_binds(bs, e_val(cv, loc), loc), r};
                }
            }
        }

        Binds bs;
        ValueRef fnv = value_at(e->v1, ft, bs, loc);
        std::vector<ValueRef> args;
        for (size_t i = 0; i < e->app_args.size(); ++i) {
            STypeRef at = i < ft->args.size() ? ft->args[i] : nullptr;
            args.push_back(value_at(e->app_args[i], at, bs, loc));
        }
        auto call = std::make_shared<Expr>(*e_app(fnv, std::move(args), loc));
        call->call_name = e->call_name;
        call->call_arg = e->call_arg;
        STypeRef r = join_outer(ft->ret, njoin(rho_f, norm(pc)));
        if (!same_rep(ft->ret, r)) {
            std::string z = fresh();
            bs.emplace_back(z, ExprRef(call));
            ValueRef cv = convert_raw(v_var(z), ft->ret, r, bs, loc);
            return {wrap_binds(bs, e_val(cv, loc), loc), r};
        }
        return {wrap_binds(bs, ExprRef(call), loc), r};
    }
};

}  // namespace

ExprRef translate_expr(const ExprRef& le, const PolcProgram& prog, GeneratedDefs& defs,
                       const std::map<std::string, STypeRef>& vars, const Policy& pc,
                       TranslateMode mode) {
    Translator t{prog, defs, mode, {}};
    t.ctx.prog = &prog;
    t.ctx.vars = vars;
    return t.expr(pc, le, nullptr).first;
}

MucProgram translate_program(const PolcProgram& prog, GeneratedDefs& defs,
                             TranslateMode mode) {
    MucProgram out;
    for (const auto& [name, fields] : prog.records) {
        std::vector<std::pair<std::string, MTypeRef>> fs;
        for (const auto& [fn, ft] : fields) fs.emplace_back(fn, translate_type(ft, prog, defs));
        out.records[name] = std::move(fs);
    }
    for (const auto& [name, t] : prog.globals)
        out.globals[name] = translate_type(t, prog, defs);
    for (const auto& [name, f] : prog.funs) {
        MFunDef mf;
        mf.name = name;
        mf.params = f.params;
        mf.sloc = f.sloc;
        mf.type = translate_type(f.type, prog, defs);
        if (f.body) {
            Translator t{prog, defs, mode, {}};
            t.ctx.prog = &prog;
            for (size_t i = 0; i < f.params.size() && i < f.type->args.size(); ++i)
                if (!f.params[i].empty()) t.ctx.vars[f.params[i]] = f.type->args[i];
            auto [body, rt] = t.expr(f.type->pc, f.body, f.type->ret);
            if (t.faithful() && !t.same_rep(rt, f.type->ret) && subtype(rt, f.type->ret))
                body = t.coerce_expr(std::move(body), rt, f.type->ret, f.sloc);
            mf.body = std::move(body);
        }
        out.funs[name] = std::move(mf);
    }
    for (const auto& [name, fields] : defs.defs) out.records[name] = fields;
    out.aka = defs.aka;
    return out;
}

}  // namespace fln
