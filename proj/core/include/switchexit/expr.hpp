#pragma once

// One-variable arithmetic expressions: parsing, evaluation, symbolic
// differentiation and a flat compiled form for hot loops.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sin | cos | sinh | cosh | tanh | sqrt | abs
//
// Binding strength is ^ > unary minus > * / > + -, so "-2^2" is -(2^2).

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace switchexit::expr {

enum class Op : std::uint8_t {
  kConst,
  kVar,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kExp,
  kLog,
  kSin,
  kCos,
  kSinh,
  kCosh,
  kTanh,
  kSqrt,
  kAbs,
};

int arity(Op op) noexcept;
bool is_function(Op op) noexcept;
std::string_view op_name(Op op) noexcept;

struct Node;

// Immutable expression tree with shared structure. Copies are cheap and
// safe to share between threads.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr var();
  // Negation of a constant folds into a negative constant, so an AST never
  // holds Neg(Const) and serialization round-trips exactly.
  static Expr neg(Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr function(Op op, Expr arg);

  Op op() const noexcept;
  double value() const noexcept;  // only meaningful for kConst
  Expr lhs() const;  // operand of unary nodes
  Expr rhs() const;

  bool depends_on_x() const noexcept;
  std::size_t size() const noexcept;   // node count
  std::size_t depth() const noexcept;  // 1 for leaves

  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Throws ParseError with the character offset of the failure.
Expr parse(std::string_view text);

// Fully parenthesised text that parse() maps back to an identical tree.
std::string to_string(const Expr& e);

// Throws DomainError on division by zero, log/sqrt outside their domain, or
// any non-finite intermediate.
double eval(const Expr& e, double x);

// Exact derivative with respect to x. abs() is rejected with
// NotDifferentiableError. Only identities with literal 0 and 1 are elided.
Expr differentiate(const Expr& e);

// Postfix program evaluated on a fixed-size stack. Same semantics and error
// behaviour as eval(); used where a field is evaluated millions of times.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(double x) const;
  const Expr& source() const noexcept { return source_; }

  static constexpr std::size_t kMaxStack = 64;

 private:
  struct Instr {
    Op op;
    double value;
  };

  Expr source_;
  std::vector<Instr> code_;
  bool use_tree_ = false;
};

}  // namespace switchexit::expr
