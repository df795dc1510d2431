#include "kb/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kb::rec {

namespace {

using json = nlohmann::json;

mpq_class rational(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) {
      auto v = ExtendedNonNeg::parse(j.get<std::string>());
      if (v.is_infinite()) throw InvalidSpec(field + " must be finite");
      return v.value();
    }
  } catch (const DomainError& e) {
    throw InvalidSpec(field + ": " + e.what());
  }
  throw InvalidSpec(field + " must be an integer or a rational string");
}

std::uint64_t positive_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw InvalidSpec(field + " must be a positive integer");
  return j.get<std::uint64_t>();
}

std::vector<mpq_class> rationals(const json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidSpec(field + " must be an array");
  std::vector<mpq_class> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

const json& member(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidSpec("missing field '" + key + "'");
  return j.at(key);
}

Expr expression(const json& j, const std::string& field, bool allow_i) {
  if (!j.is_string()) throw InvalidSpec(field + " must be an expression string");
  try {
    return Expr::parse(j.get<std::string>(), allow_i);
  } catch (const ParseError& e) {
    throw InvalidSpec(field + ": " + e.what());
  }
}

}  // namespace

Recurrence parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed spec document: ") + e.what());
  }
  const std::string family = member(doc, "family").is_string() ? doc["family"].get<std::string>() : "";
  const json& params = member(doc, "parameters");
  Driver h = Driver::from_expr(expression(member(doc, "h"), "h", false));
  if (family == "dc") {
    DivideAndConquer dc{rational(member(params, "c"), "c"), positive_integer(member(params, "a"), "a"),
                        positive_integer(member(params, "b"), "b"), std::move(h)};
    return Recurrence(std::move(dc));
  }
  if (family == "linear") {
    Linear lin{rationals(member(params, "base"), "base"), rationals(member(params, "coeffs"), "coeffs"), std::move(h)};
    if (params.contains("k") && positive_integer(params["k"], "k") != lin.base.size()) {
      throw InvalidSpec("linear: k does not match the number of base values");
    }
    return Recurrence(std::move(lin));
  }
  if (family == "prob") {
    Probabilistic p;
    p.k = positive_integer(member(params, "k"), "k");
    p.base = rationals(member(params, "base"), "base");
    p.K = rational(member(params, "K"), "K");
    p.weights = WeightFn::from_expr(expression(member(doc, "weights"), "weights", true));
    p.h = std::move(h);
    return Recurrence(std::move(p));
  }
  throw InvalidSpec("family must be one of dc, linear, prob");
}

Recurrence load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot read spec file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

namespace {

Driver driver(const char* text) { return Driver::from_expr(Expr::parse(text)); }

}  // namespace

Recurrence mergesort(const mpq_class& c) { return Recurrence(DivideAndConquer{c, 2, 2, driver("n/2")}); }

Recurrence divide_three_halves(const mpq_class& c) { return Recurrence(DivideAndConquer{c, 3, 2, driver("n")}); }

Recurrence hanoi() { return Recurrence(Linear{{1}, {2}, driver("1")}); }

Recurrence fibonacci() { return Recurrence(Linear{{1, 1}, {1, 1}, driver("1")}); }

Recurrence largetwo() { return Recurrence(Linear{{1}, {1}, driver("2")}); }

Recurrence quicksort() {
  Probabilistic p;
  p.k = 2;
  p.base = {0};
  p.weights = WeightFn::from_expr(Expr::parse("2/n", true));
  p.K = 2;
  p.h = driver("n-1");
  return Recurrence(std::move(p));
}

}  // namespace kb::rec
