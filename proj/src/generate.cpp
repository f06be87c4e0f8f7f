#include "fln/generate.hpp"

#include <algorithm>

namespace fln {

namespace {

struct Gen {
    std::mt19937_64& rng;
    const GenOptions& opts;
    PolcProgram prog;
    int next_var = 0;

    explicit Gen(std::mt19937_64& r, const GenOptions& o) : rng(r), opts(o) {}

    int pick(int n) { return n <= 1 ? 0 : (int)(rng() % (uint64_t)n); }
    bool chance(int pct) { return pick(100) < pct; }
    std::string fresh() { return "x" + std::to_string(next_var++); }

    SecrecyTag rand_secrecy() {
        int k = pick(opts.secrecy_atoms + 2);
        if (k == 0) return SecrecyTag::bottom();
        if (k == 1) return SecrecyTag::top();
        return SecrecyTag::make("s" + std::to_string(k - 2));
    }
    IntegrityTag rand_integrity() {
        int k = pick(opts.integrity_atoms + 2);
        if (k == 0) return IntegrityTag::bottom();
        if (k == 1) return IntegrityTag::top();
        return IntegrityTag::make("i" + std::to_string(k - 2));
    }
    Label rand_label() { return {rand_secrecy(), rand_integrity()}; }

    Policy rand_policy(int maxlen = -1) {
        if (maxlen < 0) maxlen = opts.max_policy_len;
        Policy p = chance(85) ? Policy::bottom() : Policy::top();
        int len = pick(maxlen + 1);
        for (int i = 0; i < len; ++i) p = Policy::cons(rand_label(), p);
        return p;
    }

    // Scope entries: variable name -> type.
    using Scope = std::vector<std::pair<std::string, STypeRef>>;

    std::vector<std::pair<std::string, STypeRef>> vars_of_kind(const Scope& scope,
                                                              SType::Kind k) {
        std::vector<std::pair<std::string, STypeRef>> out;
        for (const auto& e : scope)
            if (e.second->kind == k) out.push_back(e);
        return out;
    }

    // A random int-typed value available in scope (or a literal).
    ValueRef int_value(const Scope& scope, Policy* pol_out) {
        auto ints = vars_of_kind(scope, SType::Kind::Int);
        if (!ints.empty() && chance(70)) {
            auto& [n, t] = ints[(size_t)pick((int)ints.size())];
            if (pol_out) *pol_out = t->pol;
            return v_var(n, t);
        }
        if (pol_out) *pol_out = Policy::bottom();
        return v_int((long long)pick(17) - 8, s_int(Policy::bottom()));
    }

    void make_records() {
        if (!opts.allow_records || !chance(60)) return;
        int nfields = 1 + pick(3);
        std::vector<std::pair<std::string, STypeRef>> fields;
        for (int i = 0; i < nfields; ++i)
            fields.emplace_back("f" + std::to_string(i + 1), s_int(rand_policy(1)));
        prog.records["R1"] = std::move(fields);
    }

    void make_functions() {
        int nfuns = pick(3);
        for (int i = 0; i < nfuns; ++i) {
            std::string name = "fn" + std::to_string(i);
            FunDef def;
            def.name = name;
            def.params = {"p"};
            if (opts.allow_de && chance(35)) {
                // d&e shape: int l1::Top -> int l2::Bottom with a relabeling body.
                Label l1 = rand_label();
                Label l2 = rand_label();
                STypeRef arg = s_int(Policy::single(l1, Terminal::Top));
                STypeRef ret = s_int(Policy::single(l2, Terminal::Bottom));
                def.type = s_fun(Policy::bottom(), {arg}, ret, Policy::bottom(), true);
                def.body = e_let("r", ret,
                                 e_relab(ret->pol, arg->pol, v_var("p", arg)),
                                 e_val(v_var("r", ret)));
            } else {
                STypeRef arg = s_int(rand_policy(1));
                Policy rp = policy_join(arg->pol.is_unlabeled() ? Policy::bottom() : arg->pol,
                                        rand_policy(1));
                STypeRef ret = s_int(rp);
                def.type = s_fun(Policy::bottom(), {arg}, ret, Policy::bottom(), false);
                // Body: a small arithmetic expression over the parameter.
                def.body = e_let("r", ret, e_bop('+', v_var("p", arg), v_int(1, s_int(rp))),
                                 e_val(v_var("r", ret)));
            }
            prog.funs[name] = std::move(def);
        }
    }

    // Policy of a type for join purposes (Unlabeled behaves as Bottom).
    static Policy pol_of(const STypeRef& t) {
        if (t->kind == SType::Kind::Unit) return Policy::bottom();
        return t->pol.is_unlabeled() ? Policy::bottom() : t->pol;
    }

    // One generated binding: returns the rhs expression and its type, or
    // nullptr when the drawn shape is not constructible from scope.
    std::pair<ExprRef, STypeRef> gen_binding(const Scope& scope, const Policy& pc, int depth) {
        switch (pick(9)) {
            case 0: {  // arithmetic
                Policy p1, p2;
                ValueRef a = int_value(scope, &p1);
                ValueRef b = int_value(scope, &p2);
                char ops[] = {'+', '-', '*', '<'};
                Policy rp = policy_join(policy_join(p1.is_unlabeled() ? Policy::bottom() : p1,
                                                    p2.is_unlabeled() ? Policy::bottom() : p2),
                                        pc);
                return {e_bop(ops[pick(4)], a, b), s_int(rp)};
            }
            case 1: {  // allocation
                Policy p;
                ValueRef v = int_value(scope, &p);
                Policy cell_pol = chance(70) ? pc : policy_join(pc, rand_policy(1));
                STypeRef pointee = s_int(p.is_unlabeled() ? Policy::bottom() : p);
                return {e_new(with_tag(v, pointee), cell_pol), s_ptr(pointee, cell_pol)};
            }
            case 2: {  // dereference
                auto ptrs = vars_of_kind(scope, SType::Kind::Ptr);
                if (ptrs.empty()) return {nullptr, nullptr};
                auto& [n, t] = ptrs[(size_t)pick((int)ptrs.size())];
                if (!policy_leq(pc, t->pol)) return {nullptr, nullptr};
                STypeRef rt = with_policy(t->pointee, policy_join(pol_of(t->pointee),
                                                                  policy_join(t->pol, pc)));
                return {e_deref(v_var(n, t)), rt};
            }
            case 3: {  // store
                auto ptrs = vars_of_kind(scope, SType::Kind::Ptr);
                if (ptrs.empty()) return {nullptr, nullptr};
                auto& [n, t] = ptrs[(size_t)pick((int)ptrs.size())];
                // Find something assignable: policy below the pointee's.
                Policy bound = pol_of(t->pointee);
                if (!policy_leq(policy_join(t->pol, pc), bound)) return {nullptr, nullptr};
                Policy vp;
                for (int tries = 0; tries < 4; ++tries) {
                    ValueRef v = int_value(scope, &vp);
                    if (policy_leq(vp.is_unlabeled() ? Policy::bottom() : vp, bound))
                        return {e_assign(v_var(n, t), with_tag(v, t->pointee)), s_unit()};
                }
                return {nullptr, nullptr};
            }
            case 4: {  // record literal
                if (prog.records.empty()) return {nullptr, nullptr};
                const auto& [rname, fields] = *prog.records.begin();
                std::vector<ValueRef> fs;
                for (const auto& [fn, ft] : fields) {
                    Policy bound = pol_of(ft);
                    Policy vp;
                    ValueRef v;
                    bool ok = false;
                    for (int tries = 0; tries < 4 && !ok; ++tries) {
                        v = int_value(scope, &vp);
                        ok = policy_leq(vp.is_unlabeled() ? Policy::bottom() : vp, bound);
                    }
                    if (!ok) v = v_int(0, ft);
                    fs.push_back(with_tag(v, ft));
                }
                STypeRef rt = s_rec(rname, pc);
                return {e_val(v_struct(rname, fs, rt)), rt};
            }
            case 5: {  // field projection
                auto recs = vars_of_kind(scope, SType::Kind::Rec);
                if (recs.empty()) return {nullptr, nullptr};
                auto& [n, t] = recs[(size_t)pick((int)recs.size())];
                if (!policy_leq(pc, t->pol)) return {nullptr, nullptr};
                const auto& fields = prog.records.at(t->rec);
                int idx = 1 + pick((int)fields.size());
                STypeRef ft = fields[(size_t)idx - 1].second;
                return {e_field(v_var(n, t), idx),
                        with_policy(ft, policy_join(pol_of(ft), policy_join(t->pol, pc)))};
            }
            case 6: {  // call
                if (prog.funs.empty()) return {nullptr, nullptr};
                auto it = prog.funs.begin();
                std::advance(it, pick((int)prog.funs.size()));
                const FunDef& f = it->second;
                const STypeRef& ft = f.type;
                if (!policy_leq(pc, ft->pc)) return {nullptr, nullptr};
                if (ft->de) {
                    // Need an argument whose policy starts l1::l2.
                    const Label& l1 = ft->args[0]->pol.labels.front();
                    const Label& l2 = ft->ret->pol.labels.front();
                    for (const auto& [n, t] : scope) {
                        if (t->kind != SType::Kind::Int || t->pol.is_unlabeled()) continue;
                        const Policy& p = t->pol;
                        bool shaped = !p.labels.empty() && label_leq(p.labels[0], l1) &&
                                      (p.labels.size() >= 2 ? label_leq(p.labels[1], l2)
                                                            : p.term == Terminal::Bottom);
                        if (!shaped) continue;
                        Policy rest = p.labels.size() >= 2 ? p.tail().tail() : Policy::bottom();
                        STypeRef rt = s_int(policy_join(Policy::cons(l2, rest), pc));
                        return {e_app(v_fun(f.name, ft), {v_var(n, t)}), rt};
                    }
                    return {nullptr, nullptr};
                }
                Policy bound = pol_of(ft->args[0]);
                Policy vp;
                for (int tries = 0; tries < 4; ++tries) {
                    ValueRef v = int_value(scope, &vp);
                    if (!policy_leq(vp.is_unlabeled() ? Policy::bottom() : vp, bound)) continue;
                    STypeRef rt = with_policy(ft->ret, policy_join(pol_of(ft->ret), pc));
                    return {e_app(v_fun(f.name, ft), {with_tag(v, ft->args[0])}), rt};
                }
                return {nullptr, nullptr};
            }
            case 7: {  // relabel
                if (!opts.allow_relabel) return {nullptr, nullptr};
                auto ints = vars_of_kind(scope, SType::Kind::Int);
                if (ints.empty()) return {nullptr, nullptr};
                auto& [n, t] = ints[(size_t)pick((int)ints.size())];
                Policy from = t->pol.is_unlabeled() ? Policy::bottom() : t->pol;
                Policy to = policy_join(policy_join(from, pc), rand_policy(1));
                return {e_relab(to, from, v_var(n, t)), s_int(to)};
            }
            case 8: {  // conditional
                if (depth >= opts.max_depth) return {nullptr, nullptr};
                Policy cp;
                ValueRef c = int_value(scope, &cp);
                Policy inner_pc = policy_join(pc, cp.is_unlabeled() ? Policy::bottom() : cp);
                STypeRef bt = s_int(policy_join(inner_pc, rand_policy(1)));
                ExprRef t = gen_chain(scope, inner_pc, bt, depth + 1, opts.max_steps / 3);
                ExprRef f = gen_chain(scope, inner_pc, bt, depth + 1, opts.max_steps / 3);
                return {e_if(c, t, f), bt};
            }
        }
        return {nullptr, nullptr};
    }

    // A let-chain of random bindings ending in a value of exactly type want.
    ExprRef gen_chain(Scope scope, const Policy& pc, const STypeRef& want, int depth, int steps) {
        std::vector<std::pair<std::string, STypeRef>> bound;  // emitted in order
        std::vector<ExprRef> rhss;
        for (int i = 0; i < steps; ++i) {
            auto [rhs, t] = gen_binding(scope, pc, depth);
            if (!rhs) continue;
            std::string name = fresh();
            bound.emplace_back(name, t);
            rhss.push_back(rhs);
            scope.emplace_back(name, t);
        }
        // Result: a value below the wanted type, or a defaulted literal.
        ValueRef result;
        if (want->kind == SType::Kind::Int) {
            for (const auto& [n, t] : scope)
                if (t->kind == SType::Kind::Int &&
                    policy_leq(t->pol.is_unlabeled() ? Policy::bottom() : t->pol, want->pol) &&
                    chance(60)) {
                    result = v_var(n, want);
                    break;
                }
            if (!result) result = v_int((long long)pick(9), want);
        } else {
            result = v_int(0, want);  // only int goals are requested
        }
        ExprRef body = e_val(result);
        for (size_t i = bound.size(); i-- > 0;)
            body = e_let(bound[i].first, bound[i].second, rhss[i], body);
        return body;
    }
};

}  // namespace

Generated generate_program(std::mt19937_64& rng, const GenOptions& opts) {
    Gen g(rng, opts);
    g.make_records();
    g.make_functions();

    Generated out;
    Gen::Scope scope;
    int nparams = 1 + g.pick(3);
    for (int i = 0; i < nparams; ++i) {
        std::string name = "a" + std::to_string(i);
        STypeRef t = s_int(opts.low_result && i > 0 ? Policy::bottom() : g.rand_policy(1));
        scope.emplace_back(name, t);
        out.params[name] = t;
    }
    if (opts.low_result) {
        // One distinguished secret input; everything else unrestricted.
        std::string hv = "h";
        Label secret{SecrecyTag::make("s0"), IntegrityTag::bottom()};
        STypeRef ht = s_int(Policy::single(secret));
        scope.emplace_back(hv, ht);
        out.params[hv] = ht;
        out.high_var = hv;
        // Make the first parameter unrestricted so a low result always exists.
        out.params["a0"] = s_int(Policy::bottom());
        scope[0].second = out.params["a0"];
    }

    STypeRef goal = s_int(opts.low_result ? Policy::bottom() : g.rand_policy(1));
    out.body = g.gen_chain(scope, Policy::bottom(), goal, 0, opts.max_steps);
    out.prog = std::move(g.prog);
    return out;
}

ValueRef generate_value(std::mt19937_64& rng, const PolcProgram& prog, const STypeRef& t,
                        Store& store, std::vector<STypeRef>& store_typing) {
    switch (t->kind) {
        case SType::Kind::Unit: return v_unit();
        case SType::Kind::Int: return v_int((long long)(rng() % 17) - 8);
        case SType::Kind::Ptr: {
            ValueRef inner = generate_value(rng, prog, t->pointee, store, store_typing);
            store.cells.push_back(inner);
            store_typing.push_back(t->pointee);
            return v_loc((int)store.cells.size() - 1);
        }
        case SType::Kind::Rec: {
            std::vector<ValueRef> fs;
            for (const auto& [_, ft] : prog.records.at(t->rec))
                fs.push_back(generate_value(rng, prog, ft, store, store_typing));
            return v_struct(t->rec, std::move(fs));
        }
        case SType::Kind::Fun: throw EvalError("cannot generate a function value", false);
    }
    return v_unit();
}

ExprRef erase_expr(const ExprRef& e) {
    if (!e) return e;
    if (e->kind == Expr::Kind::Relab) return e_val(e->v1, e->sloc);
    auto copy = std::make_shared<Expr>(*e);
    if (copy->e1) copy->e1 = erase_expr(copy->e1);
    if (copy->e2) copy->e2 = erase_expr(copy->e2);
    copy->let_type = nullptr;
    copy->let_mtype = nullptr;
    return copy;
}

MTypeRef erase_type(const STypeRef& t) {
    switch (t->kind) {
        case SType::Kind::Unit: return m_unit();
        case SType::Kind::Int: return m_int();
        case SType::Kind::Ptr: return m_ptr(erase_type(t->pointee));
        case SType::Kind::Rec: return m_rec(t->rec);
        case SType::Kind::Fun: {
            std::vector<MTypeRef> args;
            for (const auto& a : t->args) args.push_back(erase_type(a));
            return m_fun(std::move(args), erase_type(t->ret));
        }
    }
    return m_int();
}

MucProgram erase_program(const PolcProgram& prog) {
    MucProgram out;
    for (const auto& [name, fields] : prog.records) {
        std::vector<std::pair<std::string, MTypeRef>> fs;
        for (const auto& [fn, ft] : fields) fs.emplace_back(fn, erase_type(ft));
        out.records[name] = std::move(fs);
    }
    for (const auto& [name, t] : prog.globals) out.globals[name] = erase_type(t);
    for (const auto& [name, f] : prog.funs) {
        MFunDef mf;
        mf.name = name;
        mf.params = f.params;
        mf.type = erase_type(f.type);
        mf.body = f.body ? erase_expr(f.body) : nullptr;
        mf.sloc = f.sloc;
        out.funs[name] = std::move(mf);
    }
    return out;
}

}  // namespace fln
