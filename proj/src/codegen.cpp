#include "fln/codegen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fln/translate.hpp"

namespace fln {

namespace {

std::string strip_tag_prefix(const std::string& base) {
    if (base.rfind("struct ", 0) == 0) return base.substr(7);
    if (base.rfind("union ", 0) == 0) return base.substr(6);
    return base;
}

bool record_base(const SurfaceCtx& ctx, const CType& resolved) {
    return resolved.base.rfind("struct ", 0) == 0 || resolved.base.rfind("union ", 0) == 0 ||
           ctx.records.count(resolved.base) != 0;
}

std::string stars(int n) { return std::string(n, '*'); }

}  // namespace

// ------------------------------------------------------------ header plan --

std::string HeaderEntry::name() const { return gen_name(strip_tag_prefix(base), pol); }

void HeaderPlan::add(const HeaderEntry& e) {
    for (const auto& have : entries)
        if (have.kind == e.kind && have.name() == e.name() && have.fields == e.fields) return;
    entries.push_back(e);
}

// --------------------------------------------------------------- emission --

std::string emit_policy_typedef(const std::string& base, const Policy& p) {
    return "typedef struct {" + base + " d;} " + gen_name(strip_tag_prefix(base), p) + ";\n";
}

std::string emit_field_typedef(const std::string& record, const Policy& p,
                               const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out = "typedef struct {";
    for (const auto& [f, ct] : fields) out += " " + gen_name(ct, p) + " " + f + ";";
    out += " " + record + " d; } " + gen_name(strip_tag_prefix(record), p) + ";\n";
    return out;
}

std::string emit_relabel_fns(const std::string& base, const Policy& p) {
    std::string n = gen_name(strip_tag_prefix(base), p);
    std::string out;
    out += n + " " + n + "_w(" + base + " x) {\n";
    out += "    " + n + " r;\n";
    out += "    r.d = x;\n";
    out += "    return r;\n";
    out += "}\n";
    out += base + " " + n + "_r(" + n + " x) {\n";
    out += "    return x.d;\n";
    out += "}\n";
    return out;
}

static std::string emit_field_relabel_fns(const HeaderEntry& e) {
    std::string n = e.name();
    std::string out;
    out += n + " " + n + "_w(" + e.base + " x) {\n";
    out += "    " + n + " r;\n";
    out += "    r.d = x;\n";
    for (const auto& [f, ct] : e.fields) out += "    r." + f + ".d = x." + f + ";\n";
    out += "    return r;\n";
    out += "}\n";
    out += e.base + " " + n + "_r(" + n + " x) {\n";
    out += "    " + e.base + " r = x.d;\n";
    for (const auto& [f, ct] : e.fields) out += "    r." + f + " = x." + f + ".d;\n";
    out += "    return r;\n";
    out += "}\n";
    return out;
}

std::string header_name_for(const std::string& path) {
    std::filesystem::path p(path);
    return p.stem().string() + "__fln.h";
}

std::string generate_header(const HeaderPlan& plan, const std::string& header_name) {
    // Guard token: deterministic content hash, uppercased (FNV-1a 64).
    unsigned long long h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    mix(header_name);
    for (const auto& e : plan.entries) mix(e.name());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llX", h);
    std::string guard = "FLN_" + std::string(buf) + "_H";

    std::string out = "#ifndef " + guard + "\n#define " + guard + "\n";
    if (!plan.entries.empty()) {
        out += "\n";
        for (const auto& e : plan.entries) {
            if (e.kind == HeaderEntry::Kind::FieldRecord)
                out += emit_field_typedef(e.base, e.pol, e.fields);
            else
                out += emit_policy_typedef(e.base, e.pol);
        }
        out += "\n";
        for (const auto& e : plan.entries) {
            if (e.kind == HeaderEntry::Kind::FieldRecord)
                out += emit_field_relabel_fns(e);
            else
                out += emit_relabel_fns(e.base, e.pol);
        }
    }
    out += "\n#endif\n";
    return out;
}

// ---------------------------------------------------- expression rewriting --

namespace {

CExprRef with_member(const CExprRef& base, const std::string& field, const SourceLoc& loc,
                     bool arrow = false) {
    auto m = std::make_shared<CExpr>();
    m->kind = CExpr::Kind::Member;
    m->e1 = base;
    m->name = field;
    m->is_arrow = arrow;
    m->loc = loc;
    return m;
}

}  // namespace

CExprRef rewrite_member_access(const CExprRef& e,
                               const std::map<std::string, InstanceLayout>& layouts) {
    if (!e) return e;
    auto rw = [&](const CExprRef& sub) { return rewrite_member_access(sub, layouts); };

    if (e->kind == CExpr::Kind::Member && e->e1 && e->e1->kind == CExpr::Kind::Ident) {
        auto it = layouts.find(e->e1->name);
        if (it != layouts.end()) {
            const InstanceLayout& lay = it->second;
            bool direct = !lay.whole && std::find(lay.annotated.begin(), lay.annotated.end(),
                                                  e->name) != lay.annotated.end();
            if (!direct) {
                // x.f -> x.d.f (x->f -> x->d.f): the unannotated payload
                // lives in the nested data member.
                CExprRef inner = with_member(e->e1, "d", e->loc, e->is_arrow);
                return with_member(inner, e->name, e->loc, false);
            }
            return e;
        }
    }

    auto copy = std::make_shared<CExpr>(*e);
    bool changed = false;
    auto step = [&](CExprRef& slot) {
        if (!slot) return;
        CExprRef r = rw(slot);
        if (r != slot) {
            slot = r;
            changed = true;
        }
    };
    step(copy->e1);
    step(copy->e2);
    for (auto& a : copy->args) step(a);
    for (auto& item : copy->items) {
        CExprRef r = rw(item.value);
        if (r != item.value) {
            item.value = r;
            changed = true;
        }
    }
    return changed ? CExprRef(copy) : e;
}

CExprRef rewrite_initializer(const CExprRef& init, const InstanceLayout& layout) {
    if (!init || init->kind != CExpr::Kind::InitList) return init;
    auto out = std::make_shared<CExpr>();
    out->kind = CExpr::Kind::InitList;
    out->loc = init->loc;
    std::vector<CInitItem> inner;
    for (const auto& item : init->items) {
        bool direct = !layout.whole && !item.designator.empty() &&
                      std::find(layout.annotated.begin(), layout.annotated.end(),
                                item.designator) != layout.annotated.end();
        if (direct)
            out->items.push_back(item);
        else
            inner.push_back(item);
    }
    if (!inner.empty()) {
        auto d = std::make_shared<CExpr>();
        d->kind = CExpr::Kind::InitList;
        d->loc = init->loc;
        d->items = std::move(inner);
        out->items.push_back({"d", d});
    }
    return out;
}

// ----------------------------------------------------------- unit rewriting --

namespace {

// A span replacement over the original source text.
struct Edit {
    size_t offset = 0, length = 0;
    std::string text;
};

const PragmaDirective* requires_of(const CDecl& d) {
    for (const auto& p : d.bound)
        if (p.kind == PragmaDirective::Kind::Requires) return &p;
    return nullptr;
}

std::string render_init(const CExpr& e);

std::string render_stmt(const CStmt& s, int indent);

std::string render_init(const CExpr& e) { return to_string(e); }

std::string render_decl(const CDecl& d, const std::string& type_spelling) {
    std::string out = type_spelling + d.name;
    if (d.init) out += " = " + render_init(*d.init);
    return out + ";";
}

std::string render_stmt(const CStmt& s, int indent) {
    std::string pad(indent, ' ');
    switch (s.kind) {
        case CStmt::Kind::Assign:
            return pad + to_string(*s.lhs) + " = " + to_string(*s.rhs) + ";";
        case CStmt::Kind::ExprStmt: return pad + to_string(*s.rhs) + ";";
        case CStmt::Kind::Return:
            return pad + (s.rhs ? "return " + to_string(*s.rhs) + ";" : "return;");
        case CStmt::Kind::Decl:
            return pad + render_decl(*s.decl, to_string(s.decl->type) + " ");
        case CStmt::Kind::If: {
            std::string out = pad + "if (" + to_string(*s.cond) + ") {\n";
            for (const auto& t : s.then_body) out += render_stmt(*t, indent + 4) + "\n";
            out += pad + "}";
            if (!s.else_body.empty()) {
                out += " else {\n";
                for (const auto& t : s.else_body) out += render_stmt(*t, indent + 4) + "\n";
                out += pad + "}";
            }
            return out;
        }
        case CStmt::Kind::Block: {
            std::string out = pad + "{\n";
            for (const auto& t : s.then_body) out += render_stmt(*t, indent + 4) + "\n";
            return out + pad + "}";
        }
        default: return s.text;
    }
}

struct UnitRewriter {
    const CUnit& unit;
    SurfaceCtx& ctx;
    HeaderPlan& plan;
    RewrittenFile out;
    std::vector<Edit> edits;
    std::vector<size_t> line_starts;
    std::map<std::string, InstanceLayout> layouts;
    // Relabel boundaries: callee -> (head label, wrapper expected at the
    // designated argument, argument position).
    struct DeSig {
        Label l1;
        std::string param_wrapper;
        size_t arg_index = 0;
    };
    std::map<std::string, DeSig> de_sigs;
    // Annotated scalar symbols: wrapper name + elaborated policy.
    std::map<std::string, std::pair<std::string, Policy>> var_wrap;

    UnitRewriter(const CUnit& u, SurfaceCtx& c, HeaderPlan& p) : unit(u), ctx(c), plan(p) {
        out.path = u.path;
        line_starts.push_back(0);
        for (size_t i = 0; i < u.text.size(); ++i)
            if (u.text[i] == '\n') line_starts.push_back(i + 1);
    }

    size_t loc_offset(const SourceLoc& l) const {
        if (l.line <= 0 || (size_t)l.line > line_starts.size()) return 0;
        return line_starts[l.line - 1] + (l.col > 0 ? l.col - 1 : 0);
    }

    void error(DiagCode c, const SourceLoc& l, const std::string& msg) {
        out.diags.push_back(Diagnostic::error(c, l, msg));
    }

    void plan_add(const HeaderEntry& e) {
        std::string n = e.name();
        for (const auto& have : plan.entries)
            if (have.kind == e.kind && have.name() == n && have.fields == e.fields) return;
        plan.add(e);
        out.contributed.add(e);
    }

    void erase_line(size_t offset, size_t length) {
        size_t end = offset + length;
        if (end < unit.text.size() && unit.text[end] == '\n') ++end;
        edits.push_back({offset, end - offset, ""});
    }

    void check_reserved(const std::string& name, const SourceLoc& loc) {
        if (name.rfind("__fln__", 0) == 0)
            error(DiagCode::ReservedIdentifier, loc,
                  "identifier '" + name + "' uses the reserved '__fln__' prefix");
    }

    // Wrapper spelling for an annotated surface type; registers the needed
    // plan entries. Pointer annotations describe the pointee, so the wrapper
    // applies inside and the pointer levels stay outside.
    std::string annotated_spelling(const CType& t, const Policy& pol) {
        CType resolved = ctx.resolve(t);
        HeaderEntry e;
        e.base = t.base;
        e.pol = pol;
        e.kind = record_base(ctx, resolved) ? HeaderEntry::Kind::WholeRecord
                                            : HeaderEntry::Kind::Scalar;
        plan_add(e);
        return e.name() + " " + stars(t.pointers) + (t.pointers ? " " : "");
    }

    // Replaces the type spelling that precedes `name` starting at `from`.
    void replace_type_spelling(size_t from, const std::string& name,
                               const std::string& replacement) {
        size_t at = unit.text.find(name, from);
        if (at == std::string::npos || at <= from) return;
        edits.push_back({from, at - from, replacement});
    }

    void handle_field_annot(const CDecl& d, const PragmaDirective& req, size_t type_from,
                            size_t length) {
        Policy pol = elaborate_policy(req.sequence);
        CType resolved = ctx.resolve(d.type);
        HeaderEntry rec;
        rec.kind = HeaderEntry::Kind::FieldRecord;
        rec.base = d.type.base;
        rec.pol = pol;
        rec.fields = req.field_set;
        for (const auto& [f, ct] : req.field_set) {
            HeaderEntry fe;
            fe.base = ct;
            fe.pol = pol;
            plan_add(fe);
        }
        plan_add(rec);
        InstanceLayout lay;
        for (const auto& [f, ct] : req.field_set) lay.annotated.push_back(f);
        if (d.init && d.init->kind == CExpr::Kind::InitList) {
            // The designated initializer splits with the layout: annotated
            // fields stay top-level, the rest nest under the data member.
            edits.push_back({type_from, length,
                             rec.name() + " " + d.name + " = " +
                                 to_string(*rewrite_initializer(d.init, lay)) + ";"});
        } else {
            replace_type_spelling(type_from, d.name, rec.name() + " ");
        }
        layouts[d.name] = lay;
        (void)resolved;
    }

    // Annotated variable (global or local): swap the type spelling, record
    // the layout for member rewriting, and brace a scalar initializer so the
    // wrapper is populated through C's initializer semantics.
    void handle_var(CDeclRef d, size_t offset, size_t length) {
        const PragmaDirective* req = requires_of(*d);
        if (!req) return;
        if (!req->field_set.empty()) {
            handle_field_annot(*d, *req, offset, length);
            return;
        }
        Policy pol = elaborate_policy(req->sequence);
        std::string spelling = annotated_spelling(d->type, pol);
        CType resolved = ctx.resolve(d->type);
        if (d->type.pointers == 0 && !record_base(ctx, resolved))
            var_wrap[d->name] = {gen_name(strip_tag_prefix(d->type.base), pol), pol};
        if (record_base(ctx, resolved) && d->type.pointers == 0) {
            InstanceLayout lay;
            lay.whole = true;
            layouts[d->name] = lay;
        }
        if (d->init && d->type.pointers == 0) {
            // Re-render the whole declaration: the initializer nests under
            // the wrapper's data member (designated for records, brace
            // elision for scalars).
            std::string init_text;
            if (d->init->kind == CExpr::Kind::InitList) {
                InstanceLayout whole;
                whole.whole = true;
                init_text = to_string(*rewrite_initializer(d->init, whole));
            } else {
                init_text = "{" + to_string(*d->init) + "}";
            }
            edits.push_back({offset, length, spelling + d->name + " = " + init_text + ";"});
        } else {
            replace_type_spelling(offset, d->name, spelling);
        }
    }

    void handle_function(const CDeclRef& d) {
        const PragmaDirective* ret_dir = nullptr;
        std::vector<const PragmaDirective*> param_dirs(d->params.size(), nullptr);
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
        if (ret_dir) {
            for (size_t i = 0; i < d->params.size(); ++i) {
                if (!param_dirs[i]) continue;
                const CType& pt = d->params[i].type;
                if (pt.pointers > 0 || d->type.pointers > 0 || d->type.is_void) continue;
                if (ctx.resolve(pt).base != ctx.resolve(d->type).base) continue;
                Policy pp = elaborate_policy(param_dirs[i]->sequence);
                if (pp.labels.empty()) continue;
                // Sanctioned relabel boundary: callers may peel the head
                // label of a longer policy through the conversion pair.
                de_sigs[d->name] = {pp.labels.front(),
                                    gen_name(strip_tag_prefix(pt.base), pp), i};
                break;
            }
        }
        if (ret_dir) {
            Policy pol = elaborate_policy(ret_dir->sequence);
            if (d->type.is_void && d->type.pointers == 0)
                error(DiagCode::VoidReturnAnnotation, ret_dir->loc,
                      "return annotation on void function '" + d->name + "'");
            else
                replace_type_spelling(d->offset, d->name, annotated_spelling(d->type, pol));
        }
        for (size_t i = 0; i < d->params.size(); ++i) {
            if (!param_dirs[i]) continue;
            Policy pol = elaborate_policy(param_dirs[i]->sequence);
            size_t from = loc_offset(d->params[i].loc);
            replace_type_spelling(from, d->params[i].name,
                                  annotated_spelling(d->params[i].type, pol));
        }
        if (d->has_body) body(d->body);
    }

    // Inserts `<param>_w(<arg>_r(arg))` where a sequenced value crosses a
    // declared relabel boundary with a matching head label; every other
    // mismatch is left for the type checker (internal or external).
    CExprRef rewrite_de(const CExprRef& e) {
        if (!e) return e;
        auto copy = std::make_shared<CExpr>(*e);
        bool changed = false;
        auto step = [&](CExprRef& slot) {
            CExprRef r = rewrite_de(slot);
            if (r != slot) {
                slot = r;
                changed = true;
            }
        };
        if (copy->e1) step(copy->e1);
        if (copy->e2) step(copy->e2);
        for (auto& arg : copy->args) step(arg);
        for (auto& item : copy->items)
            if (item.value) step(item.value);
        if (copy->kind == CExpr::Kind::Call) {
            auto it = de_sigs.find(copy->name);
            if (it != de_sigs.end() && it->second.arg_index < copy->args.size()) {
                const CExprRef& arg = copy->args[it->second.arg_index];
                if (arg && arg->kind == CExpr::Kind::Ident) {
                    auto v = var_wrap.find(arg->name);
                    if (v != var_wrap.end() && !v->second.second.labels.empty() &&
                        label_leq(v->second.second.labels.front(), it->second.l1) &&
                        v->second.first != it->second.param_wrapper) {
                        auto unwrap = std::make_shared<CExpr>();
                        unwrap->kind = CExpr::Kind::Call;
                        unwrap->name = v->second.first + "_r";
                        unwrap->args = {arg};
                        unwrap->loc = arg->loc;
                        auto wrap = std::make_shared<CExpr>();
                        wrap->kind = CExpr::Kind::Call;
                        wrap->name = it->second.param_wrapper + "_w";
                        wrap->args = {unwrap};
                        wrap->loc = arg->loc;
                        copy->args[it->second.arg_index] = wrap;
                        changed = true;
                    }
                }
            }
        }
        return changed ? CExprRef(copy) : e;
    }

    CExprRef rex(const CExprRef& e) { return rewrite_de(rewrite_member_access(e, layouts)); }

    void body(const std::vector<CStmtRef>& stmts) {
        for (const auto& s : stmts) stmt(*s);
    }

    void stmt(const CStmt& s) {
        switch (s.kind) {
            case CStmt::Kind::Pragma:
                erase_line(s.pragma.offset, s.pragma.length);
                break;
            case CStmt::Kind::Decl: {
                check_reserved(s.decl->name, s.decl->loc);
                handle_var(s.decl, s.offset, s.length);
                if (!requires_of(*s.decl) && s.decl->init) {
                    CExprRef r = rex(s.decl->init);
                    if (r != s.decl->init) {
                        CDecl copy = *s.decl;
                        copy.init = r;
                        edits.push_back({s.offset, s.length,
                                         render_decl(copy, to_string(copy.type) + " ")});
                    }
                }
                break;
            }
            case CStmt::Kind::Assign: {
                CExprRef l = rex(s.lhs);
                CExprRef r = rex(s.rhs);
                if (l != s.lhs || r != s.rhs)
                    edits.push_back(
                        {s.offset, s.length, to_string(*l) + " = " + to_string(*r) + ";"});
                break;
            }
            case CStmt::Kind::ExprStmt:
            case CStmt::Kind::Return: {
                if (!s.rhs) break;
                CExprRef r = rex(s.rhs);
                if (r != s.rhs) {
                    std::string text = s.kind == CStmt::Kind::Return
                                           ? "return " + to_string(*r) + ";"
                                           : to_string(*r) + ";";
                    edits.push_back({s.offset, s.length, text});
                }
                break;
            }
            case CStmt::Kind::If: {
                CExprRef c = rex(s.cond);
                if (c != s.cond) {
                    CStmt copy = s;
                    copy.cond = c;
                    edits.push_back({s.offset, s.length, render_stmt(copy, 0)});
                    break;  // the re-render covers the nested statements
                }
                body(s.then_body);
                body(s.else_body);
                break;
            }
            case CStmt::Kind::Block:
                body(s.then_body);
                break;
            default: break;
        }
    }

    void run() {
        for (const auto& item : unit.items) {
            switch (item.kind) {
                case CTopItem::Kind::Typedef:
                    check_reserved(item.tdef.name, item.tdef.loc);
                    ctx.typedefs[item.tdef.name] = item.tdef.type;
                    break;
                case CTopItem::Kind::Record:
                    check_reserved(item.record.name, item.record.loc);
                    ctx.records.insert(item.record.name);
                    ctx.records.insert("struct " + item.record.name);
                    break;
                case CTopItem::Kind::Pragma:
                    if (item.pragma.length) erase_line(item.pragma.offset, item.pragma.length);
                    break;
                case CTopItem::Kind::Decl:
                    check_reserved(item.decl->name, item.decl->loc);
                    if (item.decl->is_function)
                        handle_function(item.decl);
                    else
                        handle_var(item.decl, item.offset, item.length);
                    break;
                default: break;
            }
        }

        std::stable_sort(edits.begin(), edits.end(),
                         [](const Edit& a, const Edit& b) { return a.offset < b.offset; });
        std::string text = unit.text;
        for (auto it = edits.rbegin(); it != edits.rend(); ++it)
            text.replace(it->offset, it->length, it->text);

        if (!out.contributed.entries.empty()) {
            std::string inc = "#include \"" + header_name_for(unit.path) + "\"\n";
            out.includes.push_back(inc.substr(0, inc.size() - 1));
            text.insert(0, inc);
        }
        out.text = std::move(text);
    }
};

}  // namespace

RewrittenFile rewrite_unit(const CUnit& unit, SurfaceCtx& ctx, HeaderPlan& plan) {
    UnitRewriter rw(unit, ctx, plan);
    rw.run();
    return std::move(rw.out);
}

// ------------------------------------------------------------ feature rules --

namespace {

struct SymbolInfo {
    bool annotated = false;
    int pointers = 0;
    Policy pol;
};

struct FeatureChecker {
    std::map<std::string, SymbolInfo> env;
    std::vector<Diagnostic> diags;

    const SymbolInfo* lookup(const CExprRef& e) const {
        if (!e || e->kind != CExpr::Kind::Ident) return nullptr;
        auto it = env.find(e->name);
        return it == env.end() ? nullptr : &it->second;
    }

    void declare(const CDecl& d) {
        const PragmaDirective* req = requires_of(d);
        SymbolInfo info;
        info.pointers = d.type.pointers;
        if (req && req->field_set.empty()) {
            info.annotated = true;
            info.pol = elaborate_policy(req->sequence);
        }
        env[d.name] = info;
    }

    static bool arith_op(const std::string& op) {
        return op == "+" || op == "-" || op == "*" || op == "/" || op == "%" || op == "+=" ||
               op == "-=";
    }

    void expr(const CExprRef& e) {
        if (!e) return;
        switch (e->kind) {
            case CExpr::Kind::Cast: {
                const SymbolInfo* s = lookup(e->e1);
                // Casting an annotated pointer silently discards the pointee
                // policy; that blind spot is inherent to the scheme, so only
                // non-pointer casts are reported.
                if (s && s->annotated && s->pointers == 0)
                    diags.push_back(Diagnostic::error(
                        DiagCode::CastOnAnnotated, e->loc,
                        "cast discards the policy on '" + e->e1->name + "'"));
                break;
            }
            case CExpr::Kind::Bin: {
                const SymbolInfo* a = lookup(e->e1);
                const SymbolInfo* b = lookup(e->e2);
                if (arith_op(e->op2)) {
                    if ((a && a->annotated && a->pointers > 0) ||
                        (b && b->annotated && b->pointers > 0)) {
                        diags.push_back(Diagnostic::error(
                            DiagCode::PointerArithOnAnnotated, e->loc,
                            "pointer arithmetic on an annotated pointer"));
                        break;
                    }
                    if (a && a->annotated && a->pointers == 0 && b && b->annotated &&
                        b->pointers == 0) {
                        Diagnostic d = Diagnostic::error(
                            DiagCode::OperatorOnAnnotated, e->loc,
                            "builtin operator '" + e->op2 + "' on annotated operands");
                        d.notes.push_back(
                            "define a function over the annotated type instead of using a "
                            "builtin operator");
                        diags.push_back(std::move(d));
                        break;
                    }
                }
                break;
            }
            case CExpr::Kind::Index: {
                const SymbolInfo* a = lookup(e->e1);
                if (a && a->annotated && a->pointers > 0)
                    diags.push_back(Diagnostic::error(
                        DiagCode::PointerArithOnAnnotated, e->loc,
                        "pointer arithmetic on an annotated pointer"));
                break;
            }
            default: break;
        }
        expr(e->e1);
        expr(e->e2);
        for (const auto& a : e->args) expr(a);
        for (const auto& item : e->items) expr(item.value);
    }

    // Pointee policy of a pointer-valued expression, when determinable.
    // Returns (known, annotated, policy).
    struct Pointee {
        bool known = false, annotated = false;
        Policy pol;
    };
    Pointee pointee(const CExprRef& e) const {
        if (!e) return {};
        if (e->kind == CExpr::Kind::AddrOf) {
            const SymbolInfo* s = lookup(e->e1);
            if (s && s->pointers == 0) return {true, s->annotated, s->pol};
            return {};
        }
        const SymbolInfo* s = lookup(e);
        if (s && s->pointers > 0) return {true, s->annotated, s->pol};
        return {};
    }

    void check_alias(const CExprRef& lhs_sym, const CExprRef& rhs, const SourceLoc& loc) {
        Pointee l = pointee(lhs_sym);
        Pointee r = pointee(rhs);
        if (!l.known || !r.known) return;
        bool mismatch = l.annotated != r.annotated || (l.annotated && !(l.pol == r.pol));
        if (mismatch)
            diags.push_back(Diagnostic::error(
                DiagCode::AliasMismatch, loc,
                "aliasing a location through a pointer with a different policy"));
    }

    void stmt(const CStmt& s) {
        switch (s.kind) {
            case CStmt::Kind::Decl:
                declare(*s.decl);
                if (s.decl->init) {
                    expr(s.decl->init);
                    if (s.decl->type.pointers > 0) {
                        auto id = std::make_shared<CExpr>();
                        id->kind = CExpr::Kind::Ident;
                        id->name = s.decl->name;
                        check_alias(id, s.decl->init, s.decl->loc);
                    }
                }
                break;
            case CStmt::Kind::Assign:
                expr(s.lhs);
                expr(s.rhs);
                check_alias(s.lhs, s.rhs, s.loc);
                break;
            case CStmt::Kind::ExprStmt:
            case CStmt::Kind::Return: expr(s.rhs); break;
            case CStmt::Kind::If:
                expr(s.cond);
                for (const auto& t : s.then_body) stmt(*t);
                for (const auto& t : s.else_body) stmt(*t);
                break;
            case CStmt::Kind::Block:
                for (const auto& t : s.then_body) stmt(*t);
                break;
            default: break;
        }
    }
};

}  // namespace

std::vector<Diagnostic> enforce_feature_rules(const CUnit& unit, const SurfaceInfo& surface) {
    FeatureChecker fc;
    for (const auto& [name, ct] : surface.globals) {
        SymbolInfo info;
        info.pointers = ct.pointers;
        auto it = surface.policies.find(name);
        if (it != surface.policies.end()) {
            info.annotated = true;
            info.pol = it->second;
        }
        fc.env[name] = info;
    }
    for (const auto& item : unit.items) {
        if (item.kind != CTopItem::Kind::Decl) continue;
        fc.declare(*item.decl);
        if (item.decl->is_function) {
            auto saved = fc.env;
            for (size_t i = 0; i < item.decl->params.size(); ++i) {
                SymbolInfo info;
                info.pointers = item.decl->params[i].type.pointers;
                for (const auto& p : item.decl->bound) {
                    if (p.kind != PragmaDirective::Kind::Param) continue;
                    if (p.param_index && *p.param_index != (int)i + 1) continue;
                    info.annotated = true;
                    info.pol = elaborate_policy(p.sequence);
                }
                fc.env[item.decl->params[i].name] = info;
            }
            for (const auto& s : item.decl->body) fc.stmt(*s);
            fc.env = std::move(saved);
        } else if (item.decl->init) {
            fc.expr(item.decl->init);
        }
    }
    return fc.diags;
}

// ----------------------------------------------------------- reconstruction --

std::vector<std::string> reconstruct_program(const DependencyGraph& graph,
                                             const std::vector<RewrittenFile>& files,
                                             const HeaderPlan& plan,
                                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    (void)plan;
    fs::path root_dir = fs::path(graph.root).parent_path();
    fs::path out_root(out_dir);
    std::vector<std::string> written;

    auto write = [&](const fs::path& rel, const std::string& text) {
        fs::path dest = out_root / rel;
        std::error_code ec;
        fs::create_directories(dest.parent_path(), ec);
        std::ofstream f(dest, std::ios::binary);
        if (!f || !(f << text))
            throw FrontendError(DiagCode::WriteFailure, SourceLoc{dest.string(), 0, 0},
                                "cannot write '" + dest.string() + "'");
        written.push_back(dest.string());
    };

    for (const auto& rf : files) {
        fs::path rel = fs::relative(rf.path, root_dir);
        if (rel.empty() || rel.native().rfind("..", 0) == 0) rel = fs::path(rf.path).filename();
        write(rel, rf.text);
        fs::path hrel = rel.parent_path() / header_name_for(rf.path);
        write(hrel, generate_header(rf.contributed, header_name_for(rf.path)));
    }
    return written;
}

}  // namespace fln
