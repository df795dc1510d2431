#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kb/numeric.hpp"

namespace kb {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Counters for value clamps performed during evaluation. Values are
/// nonnegative, so negative intermediate results are clamped to 0.
struct ExprWarnings {
  std::atomic<std::size_t> clamped_subtractions{0};
  std::atomic<std::size_t> clamped_logs{0};

  std::size_t total() const { return clamped_subtractions.load() + clamped_logs.load(); }
};

struct EvalEnv {
  std::uint64_t n = 0;
  std::uint64_t i = 0;
  unsigned precision_bits = 128;
  ExprWarnings* warnings = nullptr;
};

/// Candidate-function expression over the variables n (and i, for weights).
///
///   expr := rational | "n" | "i" | "inf" | expr ("+"|"-"|"*"|"/") expr
///         | "log2" "(" expr ")" | "pow" "(" expr "," rational ")" | "(" expr ")"
///
/// Evaluation is exact on rationals and outward-rounded for log2 and
/// fractional powers; subtraction and log2 clamp at 0.
class Expr {
 public:
  struct Node;

  static Expr parse(std::string_view text, bool allow_i = false);

  Interval eval(const EvalEnv& env) const;
  Interval operator()(std::uint64_t n, unsigned precision_bits = 128) const {
    return eval(EvalEnv{n, 0, precision_bits, nullptr});
  }

  bool uses_i() const { return uses_i_; }
  bool uses_n() const { return uses_n_; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_i_ = false;
  bool uses_n_ = false;
};

/// Evaluates and requires an exact finite result (used for recurrence
/// drivers and weights, which must stay exact).
mpq_class eval_exact(const Expr& e, std::uint64_t n, std::uint64_t i = 0);

}  // namespace kb
