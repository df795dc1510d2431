#include "kb/expr.hpp"

#include <cctype>
#include <vector>

namespace kb {

struct Expr::Node {
  enum class Kind { Constant, VarN, VarI, Add, Sub, Mul, Div, Log2, Pow };
  Kind kind;
  ExtendedNonNeg constant;
  mpq_class exponent;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_binary(Node::Kind k, NodePtr l, NodePtr r) {
  auto node = std::make_shared<Node>();
  node->kind = k;
  node->lhs = std::move(l);
  node->rhs = std::move(r);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_i) : text_(text), allow_i_(allow_i) {}

  NodePtr parse() {
    auto root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

  bool saw_i = false;
  bool saw_n = false;

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto left = term();
    for (;;) {
      if (accept('+')) {
        left = make_binary(Node::Kind::Add, left, term());
      } else if (accept('-')) {
        left = make_binary(Node::Kind::Sub, left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    auto left = factor();
    for (;;) {
      if (accept('*')) {
        left = make_binary(Node::Kind::Mul, left, factor());
      } else if (accept('/')) {
        left = make_binary(Node::Kind::Div, left, factor());
      } else {
        return left;
      }
    }
  }

  std::string number_token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected number");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  mpq_class signed_rational() {
    bool neg = accept('-');
    mpq_class v = ExtendedNonNeg::parse(number_token()).value();
    if (accept('/')) {
      mpq_class d = ExtendedNonNeg::parse(number_token()).value();
      if (sgn(d) == 0) fail("zero denominator");
      v /= d;
    }
    return neg ? mpq_class(-v) : v;
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::Constant;
      try {
        node->constant = ExtendedNonNeg::parse(number_token());
      } catch (const DomainError& e) {
        fail(e.what());
      }
      return node;
    }
    std::size_t id_pos = pos_;
    std::string id = identifier();
    auto node = std::make_shared<Node>();
    if (id == "n") {
      saw_n = true;
      node->kind = Node::Kind::VarN;
      return node;
    }
    if (id == "i") {
      if (!allow_i_) {
        pos_ = id_pos;
        fail("variable 'i' is only allowed in weight expressions");
      }
      saw_i = true;
      node->kind = Node::Kind::VarI;
      return node;
    }
    if (id == "inf") {
      node->kind = Node::Kind::Constant;
      node->constant = ExtendedNonNeg::infinity();
      return node;
    }
    if (id == "log2") {
      expect('(');
      node->kind = Node::Kind::Log2;
      node->lhs = expr();
      expect(')');
      return node;
    }
    if (id == "pow") {
      expect('(');
      node->kind = Node::Kind::Pow;
      node->lhs = expr();
      expect(',');
      node->exponent = signed_rational();
      expect(')');
      return node;
    }
    pos_ = id_pos;
    fail(id.empty() ? "unexpected character" : "unknown identifier '" + id + "'");
  }

  std::string_view text_;
  bool allow_i_;
  std::size_t pos_ = 0;
};

ExtendedNonNeg divide_endpoint(const ExtendedNonNeg& num, const ExtendedNonNeg& den) {
  if (num.is_infinite() && den.is_infinite()) throw DomainError("inf / inf is undefined");
  if (den.is_infinite()) return ExtendedNonNeg();
  if (den.is_zero()) return num.is_zero() ? ExtendedNonNeg() : ExtendedNonNeg::infinity();
  if (num.is_infinite()) return num;
  return ExtendedNonNeg(num.value() / den.value());
}

ExtendedNonNeg clamp_log(const mpq_class& v, const EvalEnv& env) {
  if (sgn(v) < 0) {
    if (env.warnings) ++env.warnings->clamped_logs;
    return ExtendedNonNeg();
  }
  return ExtendedNonNeg(v);
}

Interval evaluate(const Node& node, const EvalEnv& env) {
  using K = Node::Kind;
  switch (node.kind) {
    case K::Constant: return Interval(node.constant);
    case K::VarN: return Interval(ExtendedNonNeg(mpq_class(static_cast<unsigned long>(env.n))));
    case K::VarI: return Interval(ExtendedNonNeg(mpq_class(static_cast<unsigned long>(env.i))));
    case K::Add: return evaluate(*node.lhs, env) + evaluate(*node.rhs, env);
    case K::Mul: return evaluate(*node.lhs, env) * evaluate(*node.rhs, env);
    case K::Sub: {
      Interval a = evaluate(*node.lhs, env), b = evaluate(*node.rhs, env);
      if (a.exact() && b.exact() && a.lo().is_infinite() && b.lo().is_infinite()) {
        throw DomainError("inf - inf is undefined");
      }
      if (a.lo() < b.hi() && env.warnings) ++env.warnings->clamped_subtractions;
      ExtendedNonNeg lo = b.hi().is_infinite() ? ExtendedNonNeg() : monus(a.lo(), b.hi());
      ExtendedNonNeg hi = a.hi().is_infinite() ? a.hi() : monus(a.hi(), b.lo());
      return Interval(lo, hi);
    }
    case K::Div: {
      Interval a = evaluate(*node.lhs, env), b = evaluate(*node.rhs, env);
      if (b.hi().is_zero()) throw DomainError("division by zero");
      return Interval(divide_endpoint(a.lo(), b.hi()), divide_endpoint(a.hi(), b.lo()));
    }
    case K::Log2: {
      Interval a = evaluate(*node.lhs, env);
      if (a.lo().is_zero()) throw DomainError("log2 of zero");
      ExtendedNonNeg lo = a.lo().is_infinite()
                              ? a.lo()
                              : clamp_log(log2_enclosure(a.lo().value(), env.precision_bits).first, env);
      ExtendedNonNeg hi = a.hi().is_infinite()
                              ? a.hi()
                              : clamp_log(log2_enclosure(a.hi().value(), env.precision_bits).second, env);
      return Interval(lo, hi);
    }
    case K::Pow: {
      Interval a = evaluate(*node.lhs, env);
      const mpq_class& r = node.exponent;
      auto endpoint = [&](const ExtendedNonNeg& x, bool upper) -> ExtendedNonNeg {
        if (x.is_infinite()) {
          if (sgn(r) > 0) return x;
          if (sgn(r) == 0) return ExtendedNonNeg(1);
          return ExtendedNonNeg();
        }
        auto [lo, hi] = pow_enclosure(x.value(), r, env.precision_bits);
        return ExtendedNonNeg(upper ? hi : lo);
      };
      if (sgn(r) >= 0) return Interval(endpoint(a.lo(), false), endpoint(a.hi(), true));
      return Interval(endpoint(a.hi(), false), endpoint(a.lo(), true));
    }
  }
  throw DomainError("corrupt expression node");
}

}  // namespace

Expr Expr::parse(std::string_view text, bool allow_i) {
  Parser parser(text, allow_i);
  Expr e;
  e.root_ = parser.parse();
  e.text_ = std::string(text);
  e.uses_i_ = parser.saw_i;
  e.uses_n_ = parser.saw_n;
  return e;
}

Interval Expr::eval(const EvalEnv& env) const {
  if (!root_) throw DomainError("evaluating an empty expression");
  return evaluate(*root_, env);
}

mpq_class eval_exact(const Expr& e, std::uint64_t n, std::uint64_t i) {
  Interval v = e.eval(EvalEnv{n, i, 128, nullptr});
  if (!v.exact() || v.lo().is_infinite()) {
    throw DomainError("expression '" + e.text() + "' is not exact and finite at n=" +
                      std::to_string(n) + (e.uses_i() ? ", i=" + std::to_string(i) : "") +
                      " (value " + v.str() + ")");
  }
  return v.lo().value();
}

}  // namespace kb
