#include "fln/ast.hpp"

namespace fln {

// ---------------------------------------------------------------- types ----

STypeRef s_unit() {
    static STypeRef u = std::make_shared<SType>(SType{});
    return u;
}

STypeRef s_int(Policy p) {
    auto t = std::make_shared<SType>();
    t->kind = SType::Kind::Int;
    t->pol = std::move(p);
    return t;
}

STypeRef s_ptr(STypeRef pointee, Policy p) {
    auto t = std::make_shared<SType>();
    t->kind = SType::Kind::Ptr;
    t->pointee = std::move(pointee);
    t->pol = std::move(p);
    return t;
}

STypeRef s_rec(std::string name, Policy p) {
    auto t = std::make_shared<SType>();
    t->kind = SType::Kind::Rec;
    t->rec = std::move(name);
    t->pol = std::move(p);
    return t;
}

STypeRef s_fun(Policy pc, std::vector<STypeRef> args, STypeRef ret, Policy label, bool de) {
    auto t = std::make_shared<SType>();
    t->kind = SType::Kind::Fun;
    t->pc = std::move(pc);
    t->args = std::move(args);
    t->ret = std::move(ret);
    t->pol = std::move(label);
    t->de = de;
    return t;
}

STypeRef with_policy(const STypeRef& s, Policy p) {
    auto t = std::make_shared<SType>(*s);
    t->pol = std::move(p);
    return t;
}

Policy lab_of(const SType& s) {
    if (s.kind == SType::Kind::Unit) throw LatticeError("lab_of(unit)");
    return s.pol;
}

std::string to_string(const SType& s) {
    switch (s.kind) {
        case SType::Kind::Unit: return "unit";
        case SType::Kind::Int: return "int " + to_string(s.pol);
        case SType::Kind::Ptr: return "ptr(" + to_string(*s.pointee) + ") " + to_string(s.pol);
        case SType::Kind::Rec: return s.rec + " " + to_string(s.pol);
        case SType::Kind::Fun: {
            std::string out = std::string(s.de ? "(d&e)" : "") + "[" + to_string(s.pc) + "](";
            for (size_t i = 0; i < s.args.size(); ++i)
                out += (i ? ", " : "") + to_string(*s.args[i]);
            return out + " -> " + to_string(*s.ret) + ")^" + to_string(s.pol);
        }
    }
    return "?";
}

bool stype_equal(const STypeRef& a, const STypeRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SType::Kind::Unit: return true;
        case SType::Kind::Int: return a->pol == b->pol;
        case SType::Kind::Ptr: return a->pol == b->pol && stype_equal(a->pointee, b->pointee);
        case SType::Kind::Rec: return a->pol == b->pol && a->rec == b->rec;
        case SType::Kind::Fun: {
            if (a->pol != b->pol || a->pc != b->pc || a->de != b->de ||
                a->args.size() != b->args.size() || !stype_equal(a->ret, b->ret))
                return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!stype_equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

MTypeRef m_unit() {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Unit;
    return t;
}

MTypeRef m_int() {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Int;
    return t;
}

MTypeRef m_ptr(MTypeRef pointee) {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Ptr;
    t->pointee = std::move(pointee);
    return t;
}

MTypeRef m_rec(std::string name) {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Rec;
    t->rec = std::move(name);
    return t;
}

MTypeRef m_fun(std::vector<MTypeRef> args, MTypeRef ret) {
    auto t = std::make_shared<MType>();
    t->kind = MType::Kind::Fun;
    t->args = std::move(args);
    t->ret = std::move(ret);
    return t;
}

bool mtype_equal(const MTypeRef& a, const MTypeRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case MType::Kind::Unit:
        case MType::Kind::Int: return true;
        case MType::Kind::Ptr: return mtype_equal(a->pointee, b->pointee);
        case MType::Kind::Rec: return a->rec == b->rec;
        case MType::Kind::Fun: {
            if (a->args.size() != b->args.size() || !mtype_equal(a->ret, b->ret)) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!mtype_equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

std::string to_string(const MType& t) {
    switch (t.kind) {
        case MType::Kind::Unit: return "void";
        case MType::Kind::Int: return t.cbase.empty() ? "int" : t.cbase;
        case MType::Kind::Ptr: return to_string(*t.pointee) + " *";
        case MType::Kind::Rec: return t.rec;
        case MType::Kind::Fun: {
            std::string out = "(";
            for (size_t i = 0; i < t.args.size(); ++i)
                out += (i ? ", " : "") + to_string(*t.args[i]);
            return out + ") -> " + to_string(*t.ret);
        }
    }
    return "?";
}

// --------------------------------------------------------------- values ----

static ValueRef mk_value(Value v) { return std::make_shared<Value>(std::move(v)); }

ValueRef v_var(std::string name, STypeRef tag) {
    Value v;
    v.kind = Value::Kind::Var;
    v.name = std::move(name);
    v.tag = std::move(tag);
    return mk_value(std::move(v));
}

ValueRef v_int(long long n, STypeRef tag) {
    Value v;
    v.kind = Value::Kind::Int;
    v.n = n;
    v.tag = std::move(tag);
    return mk_value(std::move(v));
}

ValueRef v_unit() {
    static ValueRef u = mk_value(Value{});
    return u;
}

ValueRef v_fun(std::string name, STypeRef tag) {
    Value v;
    v.kind = Value::Kind::Fun;
    v.name = std::move(name);
    v.tag = std::move(tag);
    return mk_value(std::move(v));
}

ValueRef v_struct(std::string rec, std::vector<ValueRef> fields, STypeRef tag) {
    Value v;
    v.kind = Value::Kind::Struct;
    v.rec = std::move(rec);
    v.fields = std::move(fields);
    v.tag = std::move(tag);
    return mk_value(std::move(v));
}

ValueRef v_loc(int loc) {
    Value v;
    v.kind = Value::Kind::Loc;
    v.loc = loc;
    return mk_value(std::move(v));
}

ValueRef v_pair(ValueRef l, ValueRef r) {
    Value v;
    v.kind = Value::Kind::Pair;
    v.left = std::move(l);
    v.right = std::move(r);
    return mk_value(std::move(v));
}

ValueRef with_tag(const ValueRef& v, STypeRef tag) {
    auto copy = std::make_shared<Value>(*v);
    copy->tag = std::move(tag);
    return copy;
}

bool value_equal(const ValueRef& a, const ValueRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Value::Kind::Var:
        case Value::Kind::Fun: return a->name == b->name;
        case Value::Kind::Int: return a->n == b->n;
        case Value::Kind::Unit: return true;
        case Value::Kind::Loc: return a->loc == b->loc;
        case Value::Kind::Pair: return value_equal(a->left, b->left) && value_equal(a->right, b->right);
        case Value::Kind::Struct: {
            if (a->rec != b->rec || a->fields.size() != b->fields.size()) return false;
            for (size_t i = 0; i < a->fields.size(); ++i)
                if (!value_equal(a->fields[i], b->fields[i])) return false;
            return true;
        }
    }
    return false;
}

std::string to_string(const Value& v) {
    switch (v.kind) {
        case Value::Kind::Var:
        case Value::Kind::Fun: return v.name;
        case Value::Kind::Int: return std::to_string(v.n);
        case Value::Kind::Unit: return "()";
        case Value::Kind::Loc: return "loc" + std::to_string(v.loc);
        case Value::Kind::Pair: return "<" + to_string(*v.left) + "|" + to_string(*v.right) + ">";
        case Value::Kind::Struct: {
            std::string s = "(" + v.rec + "){";
            for (size_t i = 0; i < v.fields.size(); ++i)
                s += (i ? "," : "") + to_string(*v.fields[i]);
            return s + "}";
        }
    }
    return "?";
}

// ---------------------------------------------------------- expressions ----

static ExprRef mk_expr(Expr e) { return std::make_shared<Expr>(std::move(e)); }

ExprRef e_val(ValueRef v, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Val;
    e.v1 = std::move(v);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_bop(char op, ValueRef a, ValueRef b, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Bop;
    e.op = op;
    e.v1 = std::move(a);
    e.v2 = std::move(b);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_field(ValueRef v, int i, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Field;
    e.v1 = std::move(v);
    e.field = i;
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_new(ValueRef v, Policy pol, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::New;
    e.v1 = std::move(v);
    e.new_pol = std::move(pol);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_deref(ValueRef v, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Deref;
    e.v1 = std::move(v);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_assign(ValueRef target, ValueRef val, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Assign;
    e.v1 = std::move(target);
    e.v2 = std::move(val);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_let(std::string var, STypeRef t, ExprRef rhs, ExprRef body, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Let;
    e.let_var = std::move(var);
    e.let_type = std::move(t);
    e.e1 = std::move(rhs);
    e.e2 = std::move(body);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_if(ValueRef cond, ExprRef then_e, ExprRef else_e, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::If;
    e.v1 = std::move(cond);
    e.e1 = std::move(then_e);
    e.e2 = std::move(else_e);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_app(ValueRef fn, std::vector<ValueRef> args, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::App;
    e.v1 = std::move(fn);
    e.app_args = std::move(args);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_relab(Policy to, Policy from, ValueRef v, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::Relab;
    e.to = std::move(to);
    e.from = std::move(from);
    e.v1 = std::move(v);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

ExprRef e_pair(ExprRef l, ExprRef r, SourceLoc loc) {
    Expr e;
    e.kind = Expr::Kind::PairE;
    e.e1 = std::move(l);
    e.e2 = std::move(r);
    e.sloc = std::move(loc);
    return mk_expr(std::move(e));
}

bool expr_equal(const ExprRef& a, const ExprRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Val: return value_equal(a->v1, b->v1);
        case Expr::Kind::Bop:
            return a->op == b->op && value_equal(a->v1, b->v1) && value_equal(a->v2, b->v2);
        case Expr::Kind::Field: return a->field == b->field && value_equal(a->v1, b->v1);
        case Expr::Kind::New: return a->new_pol == b->new_pol && value_equal(a->v1, b->v1);
        case Expr::Kind::Deref: return value_equal(a->v1, b->v1);
        case Expr::Kind::Assign: return value_equal(a->v1, b->v1) && value_equal(a->v2, b->v2);
        case Expr::Kind::Let:
            return a->let_var == b->let_var && expr_equal(a->e1, b->e1) && expr_equal(a->e2, b->e2);
        case Expr::Kind::If:
            return value_equal(a->v1, b->v1) && expr_equal(a->e1, b->e1) && expr_equal(a->e2, b->e2);
        case Expr::Kind::App: {
            if (!value_equal(a->v1, b->v1) || a->app_args.size() != b->app_args.size())
                return false;
            for (size_t i = 0; i < a->app_args.size(); ++i)
                if (!value_equal(a->app_args[i], b->app_args[i])) return false;
            return true;
        }
        case Expr::Kind::Relab:
            return a->to == b->to && a->from == b->from && value_equal(a->v1, b->v1);
        case Expr::Kind::PairE: return expr_equal(a->e1, b->e1) && expr_equal(a->e2, b->e2);
    }
    return false;
}

std::string to_string(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Val: return to_string(*e.v1);
        case Expr::Kind::Bop:
            return to_string(*e.v1) + " " + e.op + " " + to_string(*e.v2);
        case Expr::Kind::Field: return to_string(*e.v1) + "." + std::to_string(e.field);
        case Expr::Kind::New: return "new(" + to_string(*e.v1) + ")@" + to_string(e.new_pol);
        case Expr::Kind::Deref: return "*" + to_string(*e.v1);
        case Expr::Kind::Assign: return to_string(*e.v1) + " := " + to_string(*e.v2);
        case Expr::Kind::Let:
            return "let " + e.let_var + (e.let_type ? ":" + to_string(*e.let_type) : "") + " = " +
                   to_string(*e.e1) + " in " + to_string(*e.e2);
        case Expr::Kind::If:
            return "if " + to_string(*e.v1) + " then " + to_string(*e.e1) + " else " + to_string(*e.e2);
        case Expr::Kind::App: {
            std::string out = to_string(*e.v1) + "(";
            for (size_t i = 0; i < e.app_args.size(); ++i)
                out += (i ? ", " : "") + to_string(*e.app_args[i]);
            return out + ")";
        }
        case Expr::Kind::Relab:
            return "reLab(" + to_string(e.to) + "<=" + to_string(e.from) + ") " + to_string(*e.v1);
        case Expr::Kind::PairE: return "<" + to_string(*e.e1) + " | " + to_string(*e.e2) + ">";
    }
    return "?";
}

// --------------------------------------------------------- substitution ----

ValueRef subst(const ValueRef& val, const std::string& var, const ValueRef& v) {
    if (!val) return val;
    switch (val->kind) {
        case Value::Kind::Var:
            if (val->name == var) {
                // Keep the use-site tag: the expectation belongs to the
                // position, not to the substituted value.
                if (val->tag && !v->tag) return with_tag(v, val->tag);
                return v;
            }
            return val;
        case Value::Kind::Struct: {
            std::vector<ValueRef> fs;
            fs.reserve(val->fields.size());
            bool changed = false;
            for (const auto& f : val->fields) {
                auto nf = subst(f, var, v);
                changed |= nf != f;
                fs.push_back(std::move(nf));
            }
            if (!changed) return val;
            auto copy = std::make_shared<Value>(*val);
            copy->fields = std::move(fs);
            return copy;
        }
        case Value::Kind::Pair: {
            auto l = subst(val->left, var, v);
            auto r = subst(val->right, var, v);
            if (l == val->left && r == val->right) return val;
            return v_pair(std::move(l), std::move(r));
        }
        default: return val;
    }
}

ExprRef subst(const ExprRef& e, const std::string& var, const ValueRef& v) {
    if (!e) return e;
    auto copy = std::make_shared<Expr>(*e);
    if (copy->v1) copy->v1 = subst(copy->v1, var, v);
    if (copy->v2) copy->v2 = subst(copy->v2, var, v);
    for (ValueRef& a : copy->app_args) a = subst(a, var, v);
    if (e->kind == Expr::Kind::Let) {
        copy->e1 = subst(e->e1, var, v);
        if (e->let_var != var) copy->e2 = subst(e->e2, var, v);
    } else {
        if (copy->e1) copy->e1 = subst(copy->e1, var, v);
        if (copy->e2) copy->e2 = subst(copy->e2, var, v);
    }
    return copy;
}

}  // namespace fln
