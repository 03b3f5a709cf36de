/*
 Copyright 2026 The optload Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "optload/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "optload/errors.hpp"

namespace optload {

namespace {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tanh, Exp, Log, Sqrt };

}  // namespace

struct Expr::Node {
    Op op = Op::Const;
    double value = 0.0;      // literal, or exponent of Pow
    std::size_t slot = 0;    // Var: index into [x, u]
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0.0,
                  std::size_t slot = 0) {
    auto node = std::make_shared<Expr::Node>();
    node->op = op;
    node->a = std::move(a);
    node->b = std::move(b);
    node->value = value;
    node->slot = slot;
    return node;
}

NodePtr make_const(double v) { return make_node(Op::Const, nullptr, nullptr, v); }

bool is_const(const NodePtr& p, double v) { return p->op == Op::Const && p->value == v; }

NodePtr make_neg(const NodePtr& a) {
    if (a->op == Op::Const) return make_const(-a->value);
    return make_node(Op::Neg, a);
}

// Smart constructors used for programmatic construction (derivatives,
// lowering). The parser builds raw nodes so the AST mirrors the input.
NodePtr s_add(const NodePtr& a, const NodePtr& b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_node(Op::Add, a, b);
}

NodePtr s_sub(const NodePtr& a, const NodePtr& b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return make_neg(b);
    return make_node(Op::Sub, a, b);
}

NodePtr s_mul(const NodePtr& a, const NodePtr& b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make_node(Op::Mul, a, b);
}

NodePtr s_div(const NodePtr& a, const NodePtr& b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0)) return make_const(0.0);
    return make_node(Op::Div, a, b);
}

NodePtr s_pow(const NodePtr& a, double c) {
    if (c == 0.0) return make_const(1.0);
    if (c == 1.0) return a;
    return make_node(Op::Pow, a, nullptr, c);
}

bool is_integer(double c) { return std::isfinite(c) && std::floor(c) == c; }

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), res.ptr);
    if (v < 0.0 || (v == 0.0 && std::signbit(v))) return "(" + s + ")";
    return s;
}

const char* function_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tanh: return "tanh";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        default: return nullptr;
    }
}

std::optional<Op> function_from_name(std::string_view name) {
    for (Op op : {Op::Sin, Op::Cos, Op::Tanh, Op::Exp, Op::Log, Op::Sqrt}) {
        if (name == function_name(op)) return op;
    }
    return std::nullopt;
}

void print_node(const Expr::Node& node, std::size_t n, std::string& out) {
    switch (node.op) {
        case Op::Const:
            out += format_number(node.value);
            return;
        case Op::Var:
            if (node.slot < n) {
                out += "x" + std::to_string(node.slot);
            } else {
                out += "u" + std::to_string(node.slot - n);
            }
            return;
        case Op::Neg:
            out += "(-";
            print_node(*node.a, n, out);
            out += ")";
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const char sym = node.op == Op::Add   ? '+'
                             : node.op == Op::Sub ? '-'
                             : node.op == Op::Mul ? '*'
                                                  : '/';
            out += "(";
            print_node(*node.a, n, out);
            out += sym;
            print_node(*node.b, n, out);
            out += ")";
            return;
        }
        case Op::Pow:
            out += "(";
            print_node(*node.a, n, out);
            out += "^";
            out += format_number(node.value);
            out += ")";
            return;
        default:
            out += function_name(node.op);
            out += "(";
            print_node(*node.a, n, out);
            out += ")";
            return;
    }
}

std::string print(const Expr::Node& node, std::size_t n) {
    std::string s;
    print_node(node, n, s);
    return s;
}

template <class T>
T evaluate(const Expr::Node& node, std::span<const T> vars, std::size_t n) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    using std::tanh;
    switch (node.op) {
        case Op::Const:
            return T(node.value);
        case Op::Var:
            return vars[node.slot];
        case Op::Neg:
            return -evaluate(*node.a, vars, n);
        case Op::Add:
            return evaluate(*node.a, vars, n) + evaluate(*node.b, vars, n);
        case Op::Sub:
            return evaluate(*node.a, vars, n) - evaluate(*node.b, vars, n);
        case Op::Mul:
            return evaluate(*node.a, vars, n) * evaluate(*node.b, vars, n);
        case Op::Div: {
            T den = evaluate(*node.b, vars, n);
            if (primal(den) == 0.0) throw DomainError("division by zero", print(node, n));
            return evaluate(*node.a, vars, n) / den;
        }
        case Op::Pow: {
            T base = evaluate(*node.a, vars, n);
            const double b = primal(base);
            if (!is_integer(node.value) && b <= 0.0) {
                throw DomainError("non-integer power of nonpositive base", print(node, n));
            }
            if (node.value < 0.0 && b == 0.0) {
                throw DomainError("division by zero", print(node, n));
            }
            return pow(base, node.value);
        }
        case Op::Sin:
            return sin(evaluate(*node.a, vars, n));
        case Op::Cos:
            return cos(evaluate(*node.a, vars, n));
        case Op::Tanh:
            return tanh(evaluate(*node.a, vars, n));
        case Op::Exp:
            return exp(evaluate(*node.a, vars, n));
        case Op::Log: {
            T arg = evaluate(*node.a, vars, n);
            if (primal(arg) <= 0.0) throw DomainError("log of nonpositive value", print(node, n));
            return log(arg);
        }
        case Op::Sqrt: {
            T arg = evaluate(*node.a, vars, n);
            if (primal(arg) < 0.0) throw DomainError("sqrt of negative value", print(node, n));
            return sqrt(arg);
        }
    }
    return T(0.0);
}

NodePtr differentiate(const NodePtr& p, std::size_t slot) {
    const Expr::Node& node = *p;
    switch (node.op) {
        case Op::Const:
            return make_const(0.0);
        case Op::Var:
            return make_const(node.slot == slot ? 1.0 : 0.0);
        case Op::Neg: {
            auto da = differentiate(node.a, slot);
            return is_const(da, 0.0) ? da : make_neg(da);
        }
        case Op::Add:
            return s_add(differentiate(node.a, slot), differentiate(node.b, slot));
        case Op::Sub:
            return s_sub(differentiate(node.a, slot), differentiate(node.b, slot));
        case Op::Mul:
            return s_add(s_mul(differentiate(node.a, slot), node.b),
                         s_mul(node.a, differentiate(node.b, slot)));
        case Op::Div: {
            auto da = differentiate(node.a, slot);
            auto db = differentiate(node.b, slot);
            return s_sub(s_div(da, node.b),
                         s_div(s_mul(node.a, db), s_mul(node.b, node.b)));
        }
        case Op::Pow: {
            auto da = differentiate(node.a, slot);
            return s_mul(s_mul(make_const(node.value), s_pow(node.a, node.value - 1.0)), da);
        }
        case Op::Sin:
            return s_mul(make_node(Op::Cos, node.a), differentiate(node.a, slot));
        case Op::Cos:
            return s_mul(make_neg(make_node(Op::Sin, node.a)), differentiate(node.a, slot));
        case Op::Tanh: {
            auto t = make_node(Op::Tanh, node.a);
            return s_mul(s_sub(make_const(1.0), s_mul(t, t)), differentiate(node.a, slot));
        }
        case Op::Exp:
            return s_mul(p, differentiate(node.a, slot));
        case Op::Log:
            return s_div(differentiate(node.a, slot), node.a);
        case Op::Sqrt:
            return s_div(differentiate(node.a, slot), s_mul(make_const(2.0), p));
    }
    return make_const(0.0);
}

bool any_var(const Expr::Node& node, const std::function<bool(std::size_t)>& pred) {
    if (node.op == Op::Var) return pred(node.slot);
    if (node.a && any_var(*node.a, pred)) return true;
    if (node.b && any_var(*node.b, pred)) return true;
    return false;
}

bool same_tree(const Expr::Node& a, const Expr::Node& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
        case Op::Const:
            return a.value == b.value;
        case Op::Var:
            return a.slot == b.slot;
        case Op::Pow:
            return a.value == b.value && same_tree(*a.a, *b.a);
        default:
            break;
    }
    if (!same_tree(*a.a, *b.a)) return false;
    if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
    return !a.b || same_tree(*a.b, *b.b);
}

class Parser {
public:
    Parser(std::string_view src, std::size_t n, std::size_t m, const ConstantMap& constants)
        : src_(src), n_(n), m_(m), constants_(constants) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "empty expression");
        auto node = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) {
            throw ParseError(pos_, std::string("unexpected character '") + src_[pos_] + "'");
        }
        return node;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail_here(const std::string& what) {
        if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
        throw ParseError(pos_, what);
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(Op::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = make_node(Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(Op::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_node(Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_neg(parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t at = pos_;
        auto exponent = parse_unary();
        if (any_var(*exponent, [](std::size_t) { return true; })) {
            throw ParseError(at, "exponent must not depend on variables");
        }
        double c = 0.0;
        try {
            c = evaluate<double>(*exponent, std::span<const double>{}, n_);
        } catch (const DomainError& e) {
            throw ParseError(at, std::string("invalid exponent: ") + e.what());
        }
        if (!std::isfinite(c)) throw ParseError(at, "exponent is not finite");
        return make_node(Op::Pow, base, nullptr, c);
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail_here("");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_expr();
            if (!accept(')')) fail_here("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail_here(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        double v = 0.0;
        auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
        if (res.ec != std::errc{} || res.ptr == src_.data() + pos_) {
            throw ParseError(start, "malformed number");
        }
        pos_ = static_cast<std::size_t>(res.ptr - src_.data());
        if (!std::isfinite(v)) throw ParseError(start, "number out of range");
        return make_const(v);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);

        const std::size_t save = pos_;
        if (accept('(')) {
            auto fn = function_from_name(name);
            if (!fn) throw ParseError(start, "unknown function '" + std::string(name) + "'");
            auto arg = parse_expr();
            if (!accept(')')) fail_here("expected ')'");
            return make_node(*fn, arg);
        }
        pos_ = save;

        if (name.size() > 1 && (name[0] == 'x' || name[0] == 'u') &&
            name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            std::size_t index = 0;
            auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (res.ec != std::errc{}) throw ParseError(start, "invalid variable index");
            const bool is_state = name[0] == 'x';
            const std::size_t limit = is_state ? n_ : m_;
            if (index >= limit) {
                throw ParseError(start, "variable index out of range: '" + std::string(name) +
                                            "' (dimension " + std::to_string(limit) + ")");
            }
            return make_node(Op::Var, nullptr, nullptr, 0.0, is_state ? index : n_ + index);
        }
        if (auto it = constants_.find(name); it != constants_.end()) {
            if (!std::isfinite(it->second)) {
                throw ParseError(start, "constant '" + std::string(name) + "' is not finite");
            }
            return make_const(it->second);
        }
        if (name == "pi") return make_const(std::numbers::pi);
        if (function_from_name(name)) {
            throw ParseError(start, "function '" + std::string(name) + "' requires '('");
        }
        throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t n_;
    std::size_t m_;
    const ConstantMap& constants_;
};

}  // namespace

std::size_t variable_slot(Variable var, std::size_t n) {
    return var.kind == Variable::Kind::State ? var.index : n + var.index;
}

Expr::Expr(std::size_t n, std::size_t m) : root_(make_const(0.0)), n_(n), m_(m) {}

Expr::Expr(std::shared_ptr<const Node> root, std::size_t n, std::size_t m)
    : root_(std::move(root)), n_(n), m_(m) {}

Expr Expr::parse(std::string_view source, std::size_t n, std::size_t m,
                 const ConstantMap& constants) {
    Parser parser(source, n, m, constants);
    return Expr(parser.run(), n, m);
}

Expr Expr::constant(double value, std::size_t n, std::size_t m) {
    return Expr(make_const(value), n, m);
}

Expr Expr::variable(Variable var, std::size_t n, std::size_t m) {
    const std::size_t limit = var.kind == Variable::Kind::State ? n : m;
    if (var.index >= limit) throw DimensionError("variable index out of range");
    return Expr(make_node(Op::Var, nullptr, nullptr, 0.0, variable_slot(var, n)), n, m);
}

double Expr::eval(std::span<const double> x, std::span<const double> u) const {
    if (x.size() != n_ || u.size() != m_) {
        throw DimensionError("expression expects " + std::to_string(n_) + " states and " +
                             std::to_string(m_) + " inputs, got " + std::to_string(x.size()) +
                             " and " + std::to_string(u.size()));
    }
    std::vector<double> vars(x.begin(), x.end());
    vars.insert(vars.end(), u.begin(), u.end());
    return evaluate<double>(*root_, vars, n_);
}

Dual2 Expr::eval_d2(std::span<const double> x, std::span<const double> u,
                    std::span<const Variable> active) const {
    if (x.size() != n_ || u.size() != m_) {
        throw DimensionError("expression dimension mismatch in eval_d2");
    }
    const std::size_t k = active.size();
    std::vector<Dual2Scalar> vars;
    vars.reserve(n_ + m_);
    for (double xi : x) vars.emplace_back(xi);
    for (double ui : u) vars.emplace_back(ui);
    std::vector<bool> seen(n_ + m_, false);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t limit = active[i].kind == Variable::Kind::State ? n_ : m_;
        if (active[i].index >= limit) throw DimensionError("active variable out of range");
        const std::size_t slot = variable_slot(active[i], n_);
        if (seen[slot]) throw InvalidArgument("duplicate active variable");
        seen[slot] = true;
        vars[slot] = seed_second(primal(vars[slot]), i, k);
    }
    const Dual2Scalar r = evaluate<Dual2Scalar>(*root_, vars, n_);

    Dual2 out;
    out.value = primal(r);
    out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    out.hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const Dual1& row = r.partial(i);
        out.grad(static_cast<Eigen::Index>(i)) = row.v;
        for (std::size_t j = i; j < k; ++j) {
            const double hij = row.partial(j);
            out.hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
            out.hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = hij;
        }
    }
    return out;
}

template <class T>
T Expr::eval_as(std::span<const T> vars) const {
    if (vars.size() != n_ + m_) throw DimensionError("expression dimension mismatch");
    return evaluate<T>(*root_, vars, n_);
}

template double Expr::eval_as<double>(std::span<const double>) const;
template Dual1 Expr::eval_as<Dual1>(std::span<const Dual1>) const;
template Dual<Dual1> Expr::eval_as<Dual<Dual1>>(std::span<const Dual<Dual1>>) const;
template Dual<Dual<Dual1>> Expr::eval_as<Dual<Dual<Dual1>>>(
    std::span<const Dual<Dual<Dual1>>>) const;

Expr Expr::derivative(Variable var) const {
    const std::size_t limit = var.kind == Variable::Kind::State ? n_ : m_;
    if (var.index >= limit) throw DimensionError("derivative variable out of range");
    return Expr(differentiate(root_, variable_slot(var, n_)), n_, m_);
}

bool Expr::depends_on(Variable var) const {
    const std::size_t slot = variable_slot(var, n_);
    return any_var(*root_, [slot](std::size_t s) { return s == slot; });
}

bool Expr::depends_on_state() const {
    const std::size_t n = n_;
    return any_var(*root_, [n](std::size_t s) { return s < n; });
}

bool Expr::depends_on_input() const {
    const std::size_t n = n_;
    return any_var(*root_, [n](std::size_t s) { return s >= n; });
}

bool Expr::is_constant() const { return root_->op == Op::Const; }

std::string Expr::to_string() const { return print(*root_, n_); }

bool operator==(const Expr& a, const Expr& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && same_tree(*a.root_, *b.root_);
}

namespace {
void require_same_dims(const Expr& a, const Expr& b) {
    if (a.state_dim() != b.state_dim() || a.input_dim() != b.input_dim()) {
        throw DimensionError("combining expressions over different variable sets");
    }
}
}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
    require_same_dims(a, b);
    return Expr(s_add(a.root_, b.root_), a.n_, a.m_);
}

Expr operator-(const Expr& a, const Expr& b) {
    require_same_dims(a, b);
    return Expr(s_sub(a.root_, b.root_), a.n_, a.m_);
}

Expr operator*(const Expr& a, const Expr& b) {
    require_same_dims(a, b);
    return Expr(s_mul(a.root_, b.root_), a.n_, a.m_);
}

Expr operator/(const Expr& a, const Expr& b) {
    require_same_dims(a, b);
    return Expr(s_div(a.root_, b.root_), a.n_, a.m_);
}

Expr operator-(const Expr& a) { return Expr(make_neg(a.root_), a.n_, a.m_); }

Expr operator*(double c, const Expr& e) { return Expr(s_mul(make_const(c), e.root_), e.n_, e.m_); }

}  // namespace optload
