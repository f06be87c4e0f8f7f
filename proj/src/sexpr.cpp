// Textual S-expression form of labeled programs, used by golden tests and the
// --dump-labeled flag.  The format is stable: policies print as
// (pol (lab <secrecy> <integrity>)* <terminal>), types and expressions as
// tagged lists mirroring the constructor names.
#include "fln/polc.hpp"

namespace fln {

namespace {

std::string sx(const SecrecyTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "botS";
        case TagKind::Top: return "topS";
        default: return t.atom;
    }
}

std::string sx(const IntegrityTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "botI";
        case TagKind::Top: return "topI";
        default: return t.atom;
    }
}

}  // namespace

std::string to_sexpr(const Policy& p) {
    std::string s = "(pol";
    for (const auto& l : p.labels) s += " (lab " + sx(l.secrecy) + " " + sx(l.integrity) + ")";
    switch (p.term) {
        case Terminal::Top: s += " top"; break;
        case Terminal::Bottom: s += " bot"; break;
        case Terminal::Unlabeled: s += " unlabeled"; break;
    }
    return s + ")";
}

std::string to_sexpr(const STypeRef& t) {
    if (!t) return "()";
    switch (t->kind) {
        case SType::Kind::Unit: return "(unit)";
        case SType::Kind::Int: return "(int " + to_sexpr(t->pol) + ")";
        case SType::Kind::Ptr:
            return "(ptr " + to_sexpr(t->pointee) + " " + to_sexpr(t->pol) + ")";
        case SType::Kind::Rec: return "(rec " + t->rec + " " + to_sexpr(t->pol) + ")";
        case SType::Kind::Fun:
        {
            std::string out = std::string("(fun ") + (t->de ? "de " : "") + to_sexpr(t->pc) + " (";
            for (size_t i = 0; i < t->args.size(); ++i)
                out += (i ? " " : "") + to_sexpr(t->args[i]);
            return out + ") " + to_sexpr(t->ret) + " " + to_sexpr(t->pol) + ")";
        }
    }
    return "()";
}

std::string to_sexpr(const ValueRef& v) {
    if (!v) return "()";
    std::string tag = v->tag ? " @" + to_sexpr(v->tag) : "";
    switch (v->kind) {
        case Value::Kind::Var: return "(var " + v->name + tag + ")";
        case Value::Kind::Int: return "(num " + std::to_string(v->n) + tag + ")";
        case Value::Kind::Unit: return "(unitv)";
        case Value::Kind::Fun: return "(funref " + v->name + tag + ")";
        case Value::Kind::Loc: return "(loc " + std::to_string(v->loc) + ")";
        case Value::Kind::Pair:
            return "(pair " + to_sexpr(v->left) + " " + to_sexpr(v->right) + ")";
        case Value::Kind::Struct: {
            std::string s = "(struct " + v->rec;
            for (const auto& f : v->fields) s += " " + to_sexpr(f);
            return s + tag + ")";
        }
    }
    return "()";
}

std::string to_sexpr(const ExprRef& e) {
    if (!e) return "()";
    switch (e->kind) {
        case Expr::Kind::Val: return "(val " + to_sexpr(e->v1) + ")";
        case Expr::Kind::Bop:
            return std::string("(bop ") + e->op + " " + to_sexpr(e->v1) + " " + to_sexpr(e->v2) +
                   ")";
        case Expr::Kind::Field:
            return "(field " + to_sexpr(e->v1) + " " + std::to_string(e->field) + ")";
        case Expr::Kind::New:
            return "(new " + to_sexpr(e->v1) + " " + to_sexpr(e->new_pol) + ")";
        case Expr::Kind::Deref: return "(deref " + to_sexpr(e->v1) + ")";
        case Expr::Kind::Assign:
            return "(assign " + to_sexpr(e->v1) + " " + to_sexpr(e->v2) + ")";
        case Expr::Kind::Let:
            return "(let " + e->let_var + (e->let_type ? " " + to_sexpr(e->let_type) : "") + " " +
                   to_sexpr(e->e1) + " " + to_sexpr(e->e2) + ")";
        case Expr::Kind::If:
            return "(if " + to_sexpr(e->v1) + " " + to_sexpr(e->e1) + " " + to_sexpr(e->e2) + ")";
        case Expr::Kind::App: {
            std::string out = "(app " + to_sexpr(e->v1);
            for (const auto& a : e->app_args) out += " " + to_sexpr(a);
            return out + ")";
        }
        case Expr::Kind::Relab:
            return "(relab " + to_sexpr(e->to) + " " + to_sexpr(e->from) + " " + to_sexpr(e->v1) +
                   ")";
        case Expr::Kind::PairE:
            return "(paire " + to_sexpr(e->e1) + " " + to_sexpr(e->e2) + ")";
    }
    return "()";
}

std::string to_sexpr(const PolcProgram& prog) {
    std::string s = "(program\n";
    for (const auto& [name, fields] : prog.records) {
        s += "  (record " + name;
        for (const auto& [fname, ft] : fields) s += " (" + fname + " " + to_sexpr(ft) + ")";
        s += ")\n";
    }
    for (const auto& [name, t] : prog.globals)
        s += "  (global " + name + " " + to_sexpr(t) + ")\n";
    for (const auto& [name, f] : prog.funs) {
        s += "  (defun " + name + " (";
        for (size_t i = 0; i < f.params.size(); ++i) s += (i ? " " : "") + f.params[i];
        s += ") " + to_sexpr(f.type);
        if (f.body) s += "\n    " + to_sexpr(f.body);
        s += ")\n";
    }
    return s + ")\n";
}

}  // namespace fln
