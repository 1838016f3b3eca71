#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace analogc {

enum class VarKind : std::uint8_t { Global, Local };

struct VarRef {
    VarKind kind;
    std::uint32_t index;

    auto operator<=>(const VarRef&) const = default;
    bool operator==(const VarRef&) const = default;
};

struct VarEnv {
    std::vector<double> globals;
    std::vector<double> locals;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable real-valued expression tree. Nodes are shared; the smart
// constructors fold constants and trivial identities (x+0, x*1, x*0, ...).
class ScalarExpr {
public:
    enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Exp, Cos, Sin };

    ScalarExpr();                 // constant 0
    ScalarExpr(double value);     // NOLINT: implicit by intent, constants mix freely

    static ScalarExpr var(VarRef ref);
    static ScalarExpr global(std::uint32_t index) { return var({VarKind::Global, index}); }
    static ScalarExpr local(std::uint32_t index) { return var({VarKind::Local, index}); }

    Op op() const;
    bool is_const() const { return op() == Op::Const; }
    // Literal zero only; an expression that vanishes at some points is not zero.
    bool is_zero() const;
    double const_value() const;
    VarRef var_ref() const;
    const ScalarExpr& lhs() const;
    const ScalarExpr& rhs() const;

    double eval(const VarEnv& env) const;
    ScalarExpr diff(VarRef wrt) const;
    void collect_vars(std::set<VarRef>& out) const;
    bool uses(VarKind kind) const;

    using Namer = std::function<std::string(VarRef)>;
    std::string str(const Namer& namer) const;
    std::string str() const;

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a);
    friend ScalarExpr exp(const ScalarExpr& a);
    friend ScalarExpr cos(const ScalarExpr& a);
    friend ScalarExpr sin(const ScalarExpr& a);

    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }

    struct Node;

private:
    explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static ScalarExpr make(Op op, ScalarExpr a, ScalarExpr b = {});

    std::shared_ptr<const Node> node_;
};

}  // namespace analogc
