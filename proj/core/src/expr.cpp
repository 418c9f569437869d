#include "switchexit/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "switchexit/error.hpp"

namespace switchexit::expr {

struct Node {
  Op op;
  double value;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  bool has_var;
  std::size_t size;
  std::size_t depth;
};

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr std::array<FunctionName, 9> kFunctions{{
    {"exp", Op::kExp},
    {"log", Op::kLog},
    {"sin", Op::kSin},
    {"cos", Op::kCos},
    {"sinh", Op::kSinh},
    {"cosh", Op::kCosh},
    {"tanh", Op::kTanh},
    {"sqrt", Op::kSqrt},
    {"abs", Op::kAbs},
}};

std::shared_ptr<const Node> make_node(Op op, double value, std::shared_ptr<const Node> lhs,
                                      std::shared_ptr<const Node> rhs) {
  bool has_var = op == Op::kVar;
  std::size_t size = 1;
  std::size_t depth = 0;
  for (const auto* child : {lhs.get(), rhs.get()}) {
    if (child == nullptr) continue;
    has_var = has_var || child->has_var;
    size += child->size;
    depth = std::max(depth, child->depth);
  }
  return std::make_shared<const Node>(
      Node{op, value, std::move(lhs), std::move(rhs), has_var, size, depth + 1});
}

const std::shared_ptr<const Node>& zero_node() {
  static const auto zero = make_node(Op::kConst, 0.0, nullptr, nullptr);
  return zero;
}

}  // namespace

int arity(Op op) noexcept {
  switch (op) {
    case Op::kConst:
    case Op::kVar:
      return 0;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
    case Op::kPow:
      return 2;
    default:
      return 1;
  }
}

bool is_function(Op op) noexcept { return arity(op) == 1 && op != Op::kNeg; }

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::kConst: return "const";
    case Op::kVar: return "x";
    case Op::kNeg: return "-";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kPow: return "^";
    default: break;
  }
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : node_(zero_node()) {}

Expr Expr::constant(double value) { return Expr(make_node(Op::kConst, value, nullptr, nullptr)); }

Expr Expr::var() { return Expr(make_node(Op::kVar, 0.0, nullptr, nullptr)); }

Expr Expr::neg(Expr operand) {
  if (operand.op() == Op::kConst) return constant(-operand.value());
  return Expr(make_node(Op::kNeg, 0.0, std::move(operand.node_), nullptr));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (arity(op) != 2) throw PreconditionError("binary(): operator is not binary");
  return Expr(make_node(op, 0.0, std::move(lhs.node_), std::move(rhs.node_)));
}

Expr Expr::function(Op op, Expr arg) {
  if (!is_function(op)) throw PreconditionError("function(): operator is not a function");
  return Expr(make_node(op, 0.0, std::move(arg.node_), nullptr));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
Expr Expr::lhs() const { return node_->lhs ? Expr(node_->lhs) : Expr(); }
Expr Expr::rhs() const { return node_->rhs ? Expr(node_->rhs) : Expr(); }
bool Expr::depends_on_x() const noexcept { return node_->has_var; }
std::size_t Expr::size() const noexcept { return node_->size; }
std::size_t Expr::depth() const noexcept { return node_->depth; }

namespace {

bool same_tree(const Node* a, const Node* b) noexcept {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->op != b->op || a->size != b->size) return false;
  if (a->op == Op::kConst) return a->value == b->value;
  return same_tree(a->lhs.get(), b->lhs.get()) && same_tree(a->rhs.get(), b->rhs.get());
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) noexcept {
  return same_tree(a.node_.get(), b.node_.get());
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::kAdd, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::kSub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::kMul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::kDiv, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::neg(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Op::kPow, std::move(base), parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ == text_.size()) fail("missing operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("missing operand before '") + c + "'");
  }

  Expr parse_number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::var();
    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      Expr arg = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::function(f.op, std::move(arg));
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Serialization

namespace {

void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void write(std::string& out, const Expr& e) {
  const Op op = e.op();
  switch (op) {
    case Op::kConst:
      if (std::signbit(e.value())) {
        out += "(-";
        append_number(out, -e.value());
        out += ')';
      } else {
        append_number(out, e.value());
      }
      return;
    case Op::kVar:
      out += 'x';
      return;
    case Op::kNeg:
      out += "(-";
      write(out, e.lhs());
      out += ')';
      return;
    default:
      break;
  }
  if (arity(op) == 2) {
    out += '(';
    write(out, e.lhs());
    out += op_name(op);
    write(out, e.rhs());
    out += ')';
    return;
  }
  out += op_name(op);
  out += '(';
  write(out, e.lhs());
  out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  write(out, e);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

inline double checked(double v, Op op, double x) {
  if (!std::isfinite(v)) throw DomainError(std::string(op_name(op)), x);
  return v;
}

// Shared kernel for tree and compiled evaluation. Returns the raw result; the
// caller decides how to report a domain failure.
inline bool apply_unary(Op op, double u, double& out) noexcept {
  switch (op) {
    case Op::kNeg: out = -u; return true;
    case Op::kExp: out = std::exp(u); break;
    case Op::kLog:
      if (!(u > 0.0)) return false;
      out = std::log(u);
      break;
    case Op::kSin: out = std::sin(u); break;
    case Op::kCos: out = std::cos(u); break;
    case Op::kSinh: out = std::sinh(u); break;
    case Op::kCosh: out = std::cosh(u); break;
    case Op::kTanh: out = std::tanh(u); break;
    case Op::kSqrt:
      if (u < 0.0) return false;
      out = std::sqrt(u);
      break;
    case Op::kAbs: out = std::fabs(u); break;
    default: return false;
  }
  return std::isfinite(out);
}

inline bool apply_binary(Op op, double u, double v, double& out) noexcept {
  switch (op) {
    case Op::kAdd: out = u + v; break;
    case Op::kSub: out = u - v; break;
    case Op::kMul: out = u * v; break;
    case Op::kDiv:
      if (v == 0.0) return false;
      out = u / v;
      break;
    case Op::kPow: out = std::pow(u, v); break;
    default: return false;
  }
  return std::isfinite(out);
}

double eval_node(const Expr& e, double x) {
  const Op op = e.op();
  double out = 0.0;
  switch (op) {
    case Op::kConst: return e.value();
    case Op::kVar: return x;
    default: break;
  }
  if (arity(op) == 2) {
    const double u = eval_node(e.lhs(), x);
    const double v = eval_node(e.rhs(), x);
    if (!apply_binary(op, u, v, out)) throw DomainError(to_string(e), x);
    return out;
  }
  const double u = eval_node(e.lhs(), x);
  if (!apply_unary(op, u, out)) throw DomainError(to_string(e), x);
  return out;
}

}  // namespace

double eval(const Expr& e, double x) { return checked(eval_node(e, x), e.op(), x); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

bool is_const(const Expr& e, double v) { return e.op() == Op::kConst && e.value() == v; }

Expr c(double v) { return Expr::constant(v); }

Expr add(Expr a, Expr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::binary(Op::kAdd, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return Expr::neg(std::move(b));
  return Expr::binary(Op::kSub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return c(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::binary(Op::kMul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
  if (is_const(a, 0.0)) return c(0.0);
  if (is_const(b, 1.0)) return a;
  return Expr::binary(Op::kDiv, std::move(a), std::move(b));
}

Expr pow(Expr a, Expr b) {
  if (is_const(b, 1.0)) return a;
  return Expr::binary(Op::kPow, std::move(a), std::move(b));
}

Expr fn(Op op, Expr a) { return Expr::function(op, std::move(a)); }

}  // namespace

Expr differentiate(const Expr& e) {
  if (!e.depends_on_x()) return c(0.0);
  const Op op = e.op();
  switch (op) {
    case Op::kConst: return c(0.0);
    case Op::kVar: return c(1.0);
    case Op::kNeg: {
      Expr du = differentiate(e.lhs());
      return is_const(du, 0.0) ? du : Expr::neg(std::move(du));
    }
    case Op::kAdd: return add(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::kSub: return sub(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::kMul: {
      const Expr u = e.lhs();
      const Expr v = e.rhs();
      return add(mul(differentiate(u), v), mul(u, differentiate(v)));
    }
    case Op::kDiv: {
      const Expr u = e.lhs();
      const Expr v = e.rhs();
      return div(sub(mul(differentiate(u), v), mul(u, differentiate(v))), mul(v, v));
    }
    case Op::kPow: {
      const Expr u = e.lhs();
      const Expr v = e.rhs();
      if (!v.depends_on_x()) {
        Expr lowered = v.op() == Op::kConst ? c(v.value() - 1.0) : sub(v, c(1.0));
        return mul(mul(v, pow(u, std::move(lowered))), differentiate(u));
      }
      if (!u.depends_on_x()) return mul(mul(e, fn(Op::kLog, u)), differentiate(v));
      return mul(e, add(mul(differentiate(v), fn(Op::kLog, u)),
                        div(mul(v, differentiate(u)), u)));
    }
    default: break;
  }

  const Expr u = e.lhs();
  Expr du = differentiate(u);
  switch (op) {
    case Op::kExp: return mul(e, std::move(du));
    case Op::kLog: return div(std::move(du), u);
    case Op::kSin: return mul(fn(Op::kCos, u), std::move(du));
    case Op::kCos: return mul(Expr::neg(fn(Op::kSin, u)), std::move(du));
    case Op::kSinh: return mul(fn(Op::kCosh, u), std::move(du));
    case Op::kCosh: return mul(fn(Op::kSinh, u), std::move(du));
    case Op::kTanh: return mul(sub(c(1.0), mul(e, e)), std::move(du));
    case Op::kSqrt: return div(std::move(du), mul(c(2.0), e));
    case Op::kAbs: throw NotDifferentiableError("abs() is not differentiable");
    default: break;
  }
  throw NotDifferentiableError("unsupported node '" + std::string(op_name(op)) + "'");
}

// ---------------------------------------------------------------------------
// CompiledExpr

namespace {

std::size_t emit(const Expr& e, std::vector<std::pair<Op, double>>& code) {
  const Op op = e.op();
  if (op == Op::kConst || op == Op::kVar) {
    code.emplace_back(op, e.value());
    return 1;
  }
  if (arity(op) == 2) {
    const std::size_t left = emit(e.lhs(), code);
    const std::size_t right = emit(e.rhs(), code);
    code.emplace_back(op, 0.0);
    return std::max(left, right + 1);
  }
  const std::size_t need = emit(e.lhs(), code);
  code.emplace_back(op, 0.0);
  return need;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) : source_(e) {
  std::vector<std::pair<Op, double>> raw;
  raw.reserve(e.size());
  const std::size_t need = emit(e, raw);
  use_tree_ = need > kMaxStack;
  code_.reserve(raw.size());
  for (const auto& [op, v] : raw) code_.push_back(Instr{op, v});
}

double CompiledExpr::operator()(double x) const {
  if (use_tree_) return eval(source_, x);
  std::array<double, kMaxStack> stack;
  std::size_t top = 0;
  bool ok = true;
  for (const Instr& in : code_) {
    double* arg = top > 0 ? &stack[top - 1] : nullptr;
    switch (in.op) {
      case Op::kConst: stack[top++] = in.value; continue;
      case Op::kVar: stack[top++] = x; continue;
      case Op::kNeg: *arg = -*arg; continue;
      case Op::kAdd: --top; stack[top - 1] += stack[top]; break;
      case Op::kSub: --top; stack[top - 1] -= stack[top]; break;
      case Op::kMul: --top; stack[top - 1] *= stack[top]; break;
      case Op::kDiv:
        --top;
        ok = ok && stack[top] != 0.0;
        stack[top - 1] /= stack[top];
        break;
      case Op::kPow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::kExp: *arg = std::exp(*arg); break;
      case Op::kLog:
        ok = ok && *arg > 0.0;
        *arg = std::log(*arg);
        break;
      case Op::kSin: *arg = std::sin(*arg); break;
      case Op::kCos: *arg = std::cos(*arg); break;
      case Op::kSinh: *arg = std::sinh(*arg); break;
      case Op::kCosh: *arg = std::cosh(*arg); break;
      case Op::kTanh: *arg = std::tanh(*arg); break;
      case Op::kSqrt:
        ok = ok && *arg >= 0.0;
        *arg = std::sqrt(*arg);
        break;
      case Op::kAbs: *arg = std::fabs(*arg); break;
    }
    ok = ok && std::isfinite(stack[top - 1]);
  }
  // Re-run on the tree to report the offending sub-expression.
  if (!ok) return eval(source_, x);
  return stack[0];
}

}  // namespace switchexit::expr
