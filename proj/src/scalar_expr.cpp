#include "analogc/scalar_expr.hpp"

#include <cmath>
#include <cstdio>

namespace analogc {

struct ScalarExpr::Node {
    Op op = Op::Const;
    double value = 0.0;
    VarRef ref{VarKind::Global, 0};
    // Null until make() fills them; a default ScalarExpr would recurse into zero_node().
    ScalarExpr a{std::shared_ptr<const Node>{}};
    ScalarExpr b{std::shared_ptr<const Node>{}};
};

namespace {

std::shared_ptr<const ScalarExpr::Node> const_node(double v) {
    auto n = std::make_shared<ScalarExpr::Node>();
    n->op = ScalarExpr::Op::Const;
    n->value = v;
    return n;
}

const std::shared_ptr<const ScalarExpr::Node>& zero_node() {
    static const auto zero = const_node(0.0);
    return zero;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

ScalarExpr::ScalarExpr() : node_(zero_node()) {}

ScalarExpr::ScalarExpr(double value) : node_(value == 0.0 ? zero_node() : const_node(value)) {}

ScalarExpr ScalarExpr::var(VarRef ref) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->ref = ref;
    return ScalarExpr(std::shared_ptr<const Node>(std::move(n)));
}

ScalarExpr ScalarExpr::make(Op op, ScalarExpr a, ScalarExpr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return ScalarExpr(std::shared_ptr<const Node>(std::move(n)));
}

ScalarExpr::Op ScalarExpr::op() const { return node_->op; }
bool ScalarExpr::is_zero() const { return node_->op == Op::Const && node_->value == 0.0; }
double ScalarExpr::const_value() const { return node_->value; }
VarRef ScalarExpr::var_ref() const { return node_->ref; }
const ScalarExpr& ScalarExpr::lhs() const { return node_->a; }
const ScalarExpr& ScalarExpr::rhs() const { return node_->b; }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_const() && b.is_const()) return a.const_value() + b.const_value();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return ScalarExpr::make(ScalarExpr::Op::Add, a, b);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_const() && b.is_const()) return a.const_value() - b.const_value();
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return ScalarExpr::make(ScalarExpr::Op::Sub, a, b);
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_const() && b.is_const()) return a.const_value() * b.const_value();
    if (a.is_zero() || b.is_zero()) return ScalarExpr{};
    if (b.is_const()) return b * a;
    if (a.is_const()) {
        if (a.const_value() == 1.0) return b;
        // Merge nested constant factors: c1*(c2*x) -> (c1*c2)*x.
        if (b.op() == ScalarExpr::Op::Mul && b.lhs().is_const()) return (a.const_value() * b.lhs().const_value()) * b.rhs();
    }
    return ScalarExpr::make(ScalarExpr::Op::Mul, a, b);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    if (b.is_const() && b.const_value() != 0.0) {
        if (a.is_const()) return a.const_value() / b.const_value();
        if (b.const_value() == 1.0) return a;
        return (1.0 / b.const_value()) * a;
    }
    if (a.is_zero() && !b.is_const()) return ScalarExpr{};
    return ScalarExpr::make(ScalarExpr::Op::Div, a, b);
}

ScalarExpr operator-(const ScalarExpr& a) { return ScalarExpr(-1.0) * a; }

ScalarExpr exp(const ScalarExpr& a) {
    if (a.is_const()) return std::exp(a.const_value());
    return ScalarExpr::make(ScalarExpr::Op::Exp, a);
}

ScalarExpr cos(const ScalarExpr& a) {
    if (a.is_const()) return std::cos(a.const_value());
    return ScalarExpr::make(ScalarExpr::Op::Cos, a);
}

ScalarExpr sin(const ScalarExpr& a) {
    if (a.is_const()) return std::sin(a.const_value());
    return ScalarExpr::make(ScalarExpr::Op::Sin, a);
}

double ScalarExpr::eval(const VarEnv& env) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: {
            const auto& vec = n.ref.kind == VarKind::Global ? env.globals : env.locals;
            if (n.ref.index >= vec.size()) {
                throw EvalError(std::string(n.ref.kind == VarKind::Global ? "global" : "local") + " variable index " +
                                std::to_string(n.ref.index) + " out of range");
            }
            return vec[n.ref.index];
        }
        case Op::Add: return n.a.eval(env) + n.b.eval(env);
        case Op::Sub: return n.a.eval(env) - n.b.eval(env);
        case Op::Mul: return n.a.eval(env) * n.b.eval(env);
        case Op::Div: {
            double den = n.b.eval(env);
            if (den == 0.0) throw EvalError("division by zero");
            return n.a.eval(env) / den;
        }
        case Op::Exp: return std::exp(n.a.eval(env));
        case Op::Cos: return std::cos(n.a.eval(env));
        case Op::Sin: return std::sin(n.a.eval(env));
    }
    return 0.0;
}

ScalarExpr ScalarExpr::diff(VarRef wrt) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::Const: return {};
        case Op::Var: return n.ref == wrt ? ScalarExpr(1.0) : ScalarExpr{};
        case Op::Add: return n.a.diff(wrt) + n.b.diff(wrt);
        case Op::Sub: return n.a.diff(wrt) - n.b.diff(wrt);
        case Op::Mul: return n.a.diff(wrt) * n.b + n.a * n.b.diff(wrt);
        case Op::Div: {
            ScalarExpr da = n.a.diff(wrt), db = n.b.diff(wrt);
            if (db.is_zero()) return da / n.b;
            return (da * n.b - n.a * db) / (n.b * n.b);
        }
        case Op::Exp: return *this * n.a.diff(wrt);
        case Op::Cos: return -(sin(n.a)) * n.a.diff(wrt);
        case Op::Sin: return cos(n.a) * n.a.diff(wrt);
    }
    return {};
}

void ScalarExpr::collect_vars(std::set<VarRef>& out) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::Const: return;
        case Op::Var: out.insert(n.ref); return;
        case Op::Exp:
        case Op::Cos:
        case Op::Sin: n.a.collect_vars(out); return;
        default:
            n.a.collect_vars(out);
            n.b.collect_vars(out);
    }
}

bool ScalarExpr::uses(VarKind kind) const {
    std::set<VarRef> vars;
    collect_vars(vars);
    for (const auto& v : vars)
        if (v.kind == kind) return true;
    return false;
}

std::string ScalarExpr::str(const Namer& namer) const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::Const: return format_number(n.value);
        case Op::Var: return namer(n.ref);
        case Op::Add: return "(" + n.a.str(namer) + " + " + n.b.str(namer) + ")";
        case Op::Sub: return "(" + n.a.str(namer) + " - " + n.b.str(namer) + ")";
        case Op::Mul: return n.a.str(namer) + "*" + n.b.str(namer);
        case Op::Div: return n.a.str(namer) + "/(" + n.b.str(namer) + ")";
        case Op::Exp: return "exp(" + n.a.str(namer) + ")";
        case Op::Cos: return "cos(" + n.a.str(namer) + ")";
        case Op::Sin: return "sin(" + n.a.str(namer) + ")";
    }
    return "?";
}

std::string ScalarExpr::str() const {
    return str([](VarRef r) { return std::string(r.kind == VarKind::Global ? "g" : "v") + std::to_string(r.index); });
}

}  // namespace analogc
