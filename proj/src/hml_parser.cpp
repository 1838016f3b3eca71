#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "analogc/hml.hpp"
#include "hml_lexer.hpp"

namespace analogc {

double QuantumSystem::total_duration() const {
    double s = 0.0;
    for (const auto& seg : segments) s += seg.duration;
    return s;
}

std::vector<Segment> discretize(const TimeDependentSegment& seg) {
    if (seg.steps < 1) throw std::invalid_argument("discretize: steps must be >= 1");
    std::vector<Segment> out;
    out.reserve(seg.steps);
    double dt = seg.duration / seg.steps;
    for (std::uint32_t d = 0; d < seg.steps; ++d) {
        VarEnv env;
        env.locals = {d * dt};
        out.push_back({evaluate(seg.ham, env), dt});
    }
    return out;
}

double discretization_bound(double D, double M, double K, double T, double C1) {
    return C1 * M * K * T * T / D;
}

namespace hml {

SourceError::SourceError(std::string message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

const std::set<std::string> kReserved = {"system", "sites", "evolve", "for", "steps", "under", "t", "n", "exp", "cos", "sin"};

struct Node {
    enum class Kind { Num, Time, SiteOp, Number, Func, Add, Sub, Mul, Div, Neg } kind;
    double value = 0.0;
    SiteId site = 0;
    PauliOp op = PauliOp::I;
    std::string func;
    std::unique_ptr<Node> a, b;
    int line = 0, column = 0;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(Node::Kind kind, const Token& at) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->line = at.line;
    n->column = at.column;
    return n;
}

// Scalar or operator value during evaluation, for either coefficient kind.
template <class S, class H>
struct Value {
    bool is_scalar = true;
    S scalar{};
    H ham;

    H as_ham() const {
        if (!is_scalar) return ham;
        return H::identity(typename H::Coefficient(scalar));
    }
};

template <class S, class H>
class Evaluator {
public:
    using V = Value<S, H>;

    V eval(const Node& n) const {
        using std::cos;
        using std::exp;
        using std::sin;
        switch (n.kind) {
            case Node::Kind::Num: return scalar(S(n.value));
            case Node::Kind::Time: return scalar(time_value());
            case Node::Kind::SiteOp: return op(pauli_term<typename H::Coefficient>(n.site, n.op));
            case Node::Kind::Number: return op(number_op<typename H::Coefficient>(n.site));
            case Node::Kind::Func: {
                V arg = eval(*n.a);
                if (!arg.is_scalar) throw SourceError("site operator inside " + n.func + "()", n.line, n.column);
                if (n.func == "exp") return scalar(exp(arg.scalar));
                if (n.func == "cos") return scalar(cos(arg.scalar));
                return scalar(sin(arg.scalar));
            }
            case Node::Kind::Neg: {
                V v = eval(*n.a);
                if (v.is_scalar) return scalar(S(-1.0) * v.scalar);
                return op(typename H::Coefficient(-1.0) * v.ham);
            }
            case Node::Kind::Add:
            case Node::Kind::Sub: {
                V l = eval(*n.a), r = eval(*n.b);
                bool add = n.kind == Node::Kind::Add;
                if (l.is_scalar && r.is_scalar) return scalar(add ? l.scalar + r.scalar : l.scalar - r.scalar);
                return op(add ? l.as_ham() + r.as_ham() : l.as_ham() - r.as_ham());
            }
            case Node::Kind::Mul: {
                V l = eval(*n.a), r = eval(*n.b);
                if (l.is_scalar && r.is_scalar) return scalar(l.scalar * r.scalar);
                if (l.is_scalar) return op(typename H::Coefficient(l.scalar) * r.ham);
                if (r.is_scalar) return op(typename H::Coefficient(r.scalar) * l.ham);
                try {
                    return op(l.ham * r.ham);
                } catch (const std::domain_error&) {
                    throw SourceError("non-Hermitian product of site operators", n.line, n.column);
                }
            }
            case Node::Kind::Div: {
                V l = eval(*n.a), r = eval(*n.b);
                if (!r.is_scalar) throw SourceError("division by an operator", n.b->line, n.b->column);
                if (is_literal_zero(r.scalar)) throw SourceError("division by zero", n.b->line, n.b->column);
                if (l.is_scalar) return scalar(l.scalar / r.scalar);
                return op(typename H::Coefficient(S(1.0) / r.scalar) * l.ham);
            }
        }
        return {};
    }

private:
    static V scalar(S s) {
        V v;
        v.scalar = std::move(s);
        return v;
    }
    static V op(H h) {
        V v;
        v.is_scalar = false;
        v.ham = std::move(h);
        return v;
    }
    static S time_value();
    static bool is_literal_zero(const S& s);
};

template <>
double Evaluator<double, ConcreteHamiltonian>::time_value() {
    throw std::logic_error("time variable in a constant segment");
}
template <>
bool Evaluator<double, ConcreteHamiltonian>::is_literal_zero(const double& s) {
    return s == 0.0;
}
template <>
ScalarExpr Evaluator<ScalarExpr, ParamHamiltonian>::time_value() {
    return ScalarExpr::local(0);
}
template <>
bool Evaluator<ScalarExpr, ParamHamiltonian>::is_literal_zero(const ScalarExpr& s) {
    return s.is_zero();
}

std::string describe(const ConcreteHamiltonian& h) {
    for (const auto& [p, c] : h.terms()) {
        if (std::abs(c.imag()) > 1e-12) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "coefficient %.6g%+.6gi on %s", c.real(), c.imag(), p.str().c_str());
            return buf;
        }
    }
    return "";
}

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options) : toks_(tokenize(text)), options_(options) {}

    QuantumSystem parse() {
        expect_keyword("system");
        sys_.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) error("expected '}' to close system");
            const Token& kw = peek();
            if (kw.kind == Tok::Ident && kw.text == "sites") {
                parse_sites();
            } else if (kw.kind == Tok::Ident && kw.text == "evolve") {
                parse_evolve();
            } else {
                error("expected 'sites' or 'evolve', found " + show(kw));
            }
        }
        expect(Tok::RBrace);
        if (!at(Tok::End)) error("trailing input after system");
        return std::move(sys_);
    }

    std::uint32_t max_steps() const { return max_steps_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ParseOptions options_;
    QuantumSystem sys_;
    bool time_allowed_ = false;
    std::uint32_t max_steps_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_keyword(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    static std::string show(const Token& t) {
        if (t.kind == Tok::Ident || t.kind == Tok::Number) return "'" + t.text + "'";
        return token_name(t.kind);
    }

    [[noreturn]] void error(const std::string& msg) const { throw SourceError(msg, peek().line, peek().column); }

    const Token& expect(Tok k) {
        if (!at(k)) error(std::string("expected ") + token_name(k) + ", found " + show(peek()));
        return next();
    }

    void expect_keyword(const char* kw) {
        if (!at_keyword(kw)) error(std::string("expected '") + kw + "', found " + show(peek()));
        next();
    }

    double parse_number() {
        const Token& t = expect(Tok::Number);
        return std::strtod(t.text.c_str(), nullptr);
    }

    std::uint32_t parse_int() {
        const Token& t = peek();
        if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
            error("expected integer, found " + show(t));
        }
        next();
        unsigned long v = std::strtoul(t.text.c_str(), nullptr, 10);
        if (v > 1u << 20) throw SourceError("integer too large", t.line, t.column);
        return static_cast<std::uint32_t>(v);
    }

    void parse_sites() {
        next();
        const Token& name = expect(Tok::Ident);
        if (kReserved.count(name.text)) throw SourceError("'" + name.text + "' is reserved", name.line, name.column);
        for (const auto& r : sys_.registers)
            if (r.name == name.text) throw SourceError("register '" + name.text + "' declared twice", name.line, name.column);
        expect(Tok::LBracket);
        const Token& size_tok = peek();
        std::uint32_t size = parse_int();
        if (size == 0) throw SourceError("register size must be positive", size_tok.line, size_tok.column);
        expect(Tok::RBracket);
        expect(Tok::Semi);
        SiteRegister reg{name.text, size, static_cast<SiteId>(sys_.site_names.size())};
        for (std::uint32_t k = 0; k < size; ++k) sys_.site_names.push_back(name.text + "[" + std::to_string(k) + "]");
        sys_.registers.push_back(reg);
    }

    void parse_evolve() {
        const Token& start = next();
        expect_keyword("for");
        const Token& dur_tok = peek();
        double duration = parse_number();
        if (!(duration > 0.0) || !std::isfinite(duration)) {
            throw SourceError("evolution duration must be positive", dur_tok.line, dur_tok.column);
        }
        std::optional<std::uint32_t> steps;
        if (at_keyword("steps")) {
            next();
            const Token& st = peek();
            std::uint32_t d = parse_int();
            if (d == 0) throw SourceError("steps must be at least 1", st.line, st.column);
            steps = options_.steps_override.value_or(d);
        }
        expect_keyword("under");
        time_allowed_ = steps.has_value();
        NodePtr expr = parse_hexpr();
        time_allowed_ = false;
        expect(Tok::Semi);

        if (!steps) {
            Evaluator<double, ConcreteHamiltonian> ev;
            ConcreteHamiltonian h = ev.eval(*expr).as_ham();
            if (!is_hermitian(h)) throw SourceError("non-Hermitian segment Hamiltonian (" + describe(h) + ")", start.line, start.column);
            check_finite(h, start);
            sys_.segments.push_back({real_part(h), duration});
            return;
        }
        max_steps_ = std::max(max_steps_, *steps);
        Evaluator<ScalarExpr, ParamHamiltonian> ev;
        TimeDependentSegment tds{ev.eval(*expr).as_ham(), duration, *steps};
        std::vector<Segment> pieces;
        try {
            pieces = discretize(tds);
        } catch (const EvalError& e) {
            throw SourceError(std::string("cannot evaluate time-dependent coefficient: ") + e.what(), start.line, start.column);
        }
        for (auto& p : pieces) {
            check_finite(p.ham, start);
            sys_.segments.push_back(std::move(p));
        }
    }

    static void check_finite(const ConcreteHamiltonian& h, const Token& at) {
        for (const auto& [p, c] : h.terms())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw SourceError("non-finite coefficient on " + p.str(), at.line, at.column);
    }

    NodePtr parse_hexpr() {
        NodePtr lhs;
        if (at(Tok::Minus)) {
            const Token& m = next();
            auto neg = make_node(Node::Kind::Neg, m);
            neg->a = parse_hterm();
            lhs = std::move(neg);
        } else {
            lhs = parse_hterm();
        }
        while (at(Tok::Plus) || at(Tok::Minus)) {
            const Token& op = next();
            auto n = make_node(op.kind == Tok::Plus ? Node::Kind::Add : Node::Kind::Sub, op);
            n->a = std::move(lhs);
            n->b = parse_hterm();
            lhs = std::move(n);
        }
        return lhs;
    }

    NodePtr parse_hterm() {
        NodePtr lhs = parse_sfactor();
        while (at(Tok::Star) || at(Tok::Slash)) {
            const Token& op = next();
            auto n = make_node(op.kind == Tok::Star ? Node::Kind::Mul : Node::Kind::Div, op);
            n->a = std::move(lhs);
            n->b = parse_sfactor();
            lhs = std::move(n);
        }
        return lhs;
    }

    SiteId parse_site_ref() {
        const Token& name = expect(Tok::Ident);
        const SiteRegister* reg = nullptr;
        for (const auto& r : sys_.registers)
            if (r.name == name.text) reg = &r;
        if (!reg) throw SourceError("unknown site register '" + name.text + "'", name.line, name.column);
        expect(Tok::LBracket);
        const Token& idx_tok = peek();
        std::uint32_t idx = parse_int();
        if (idx >= reg->size) {
            throw SourceError("site " + name.text + "[" + std::to_string(idx) + "] out of range (size " + std::to_string(reg->size) + ")",
                              idx_tok.line, idx_tok.column);
        }
        expect(Tok::RBracket);
        return reg->first + idx;
    }

    NodePtr parse_sfactor() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            auto n = make_node(Node::Kind::Num, t);
            n->value = parse_number();
            return n;
        }
        if (t.kind == Tok::LParen) {
            next();
            NodePtr inner = parse_hexpr();
            expect(Tok::RParen);
            return inner;
        }
        if (t.kind != Tok::Ident) error("expected a factor, found " + show(t));
        if (t.text == "t") {
            if (!time_allowed_) error("time variable 't' is only allowed in 'evolve ... steps D'");
            auto n = make_node(Node::Kind::Time, t);
            next();
            return n;
        }
        if ((t.text == "exp" || t.text == "cos" || t.text == "sin") && peek(1).kind == Tok::LParen) {
            auto n = make_node(Node::Kind::Func, t);
            n->func = t.text;
            next();
            next();
            n->a = parse_hexpr();
            expect(Tok::RParen);
            return n;
        }
        if (t.text == "n" && peek(1).kind == Tok::LParen) {
            auto n = make_node(Node::Kind::Number, t);
            next();
            next();
            n->site = parse_site_ref();
            expect(Tok::RParen);
            return n;
        }
        auto n = make_node(Node::Kind::SiteOp, t);
        n->site = parse_site_ref();
        expect(Tok::Dot);
        const Token& op = expect(Tok::Ident);
        if (op.text == "I") {
            n->op = PauliOp::I;
        } else if (op.text == "X") {
            n->op = PauliOp::X;
        } else if (op.text == "Y") {
            n->op = PauliOp::Y;
        } else if (op.text == "Z") {
            n->op = PauliOp::Z;
        } else {
            throw SourceError("expected I, X, Y or Z after '.', found '" + op.text + "'", op.line, op.column);
        }
        if (n->op == PauliOp::I) {
            // q[k].I is the identity on that site.
            auto one = make_node(Node::Kind::Num, t);
            one->value = 1.0;
            return one;
        }
        return n;
    }
};

}  // namespace

QuantumSystem parse_system(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).parse();
}

std::uint32_t max_steps(std::string_view text, const ParseOptions& options) {
    Parser p(text, options);
    p.parse();
    return p.max_steps();
}

QuantumSystem parse_system_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str(), options);
}

}  // namespace hml
}  // namespace analogc
