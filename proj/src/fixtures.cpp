#include "kb/fixtures.hpp"

#include <algorithm>
#include <stdexcept>

namespace kb::poset {

namespace {

mpq_class q(long num, long den = 1) {
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

bool usual_leq(const mpq_class& x, const mpq_class& y) { return x <= y; }

}  // namespace

RationalOrbitReport rational_orbit_check(const RationalMapFixture& fx, const mpq_class& x0,
                                         std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("steps must be at least 1");
  RationalOrbitReport r;
  r.points.reserve(steps);
  mpq_class x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    r.points.push_back(x);
    if (k + 1 < steps) x = fx.map(x);
  }
  for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
    r.increasing = r.increasing && fx.order(r.points[k], r.points[k + 1]);
    r.decreasing = r.decreasing && fx.order(r.points[k + 1], r.points[k]);
  }
  if (fx.candidate_supremum) r.candidate = fx.candidate_supremum(x0);
  if (r.candidate) {
    r.candidate_is_upper_bound =
        std::all_of(r.points.begin(), r.points.end(), [&](const mpq_class& p) { return fx.order(p, *r.candidate); });
    r.distance_to_candidate = abs(*r.candidate - r.points.back());
    r.within_tolerance = r.candidate_is_upper_bound && *r.distance_to_candidate <= fx.tolerance;
  }
  return r;
}

bool order_is_partial_on_orbits(const RationalMapFixture& fx, std::size_t steps) {
  std::vector<mpq_class> pts;
  for (const auto& s : fx.seed_points) {
    for (const auto& p : rational_orbit_check(fx, s, steps).points) {
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
  }
  for (const auto& x : pts) {
    if (!fx.order(x, x)) return false;
    for (const auto& y : pts) {
      if (x != y && fx.order(x, y) && fx.order(y, x)) return false;
      for (const auto& z : pts) {
        if (fx.order(x, y) && fx.order(y, z) && !fx.order(x, z)) return false;
      }
    }
  }
  return true;
}

RationalMapFixture non_order_continuous_fixture() {
  RationalMapFixture fx;
  fx.name = "non_order_continuous";
  fx.domain_description = "[0,1] with the usual order";
  fx.order = usual_leq;
  fx.map = [](const mpq_class& x) -> mpq_class {
    if (x < q(1, 2)) return q(1) - x / 2;
    return (q(1) + x) / 2;
  };
  fx.seed_points = {q(1, 2), q(0), q(1, 4), q(1)};
  fx.candidate_supremum = [](const mpq_class&) -> std::optional<mpq_class> { return q(1); };
  return fx;
}

RationalMapFixture decreasing_orbit_fixture() {
  RationalMapFixture fx;
  fx.name = "decreasing_orbit";
  fx.domain_description = "[0,1] with the usual order";
  fx.order = usual_leq;
  fx.map = [](const mpq_class& x) -> mpq_class { return x / 2; };
  fx.seed_points = {q(1), q(1, 2), q(3, 4)};
  fx.candidate_supremum = [](const mpq_class& x0) -> std::optional<mpq_class> { return x0; };
  return fx;
}

RationalMapFixture flat_with_top_fixture() {
  RationalMapFixture fx;
  fx.name = "flat_with_top";
  fx.domain_description = "[0,1] with x <= y iff x = y or y = 1";
  fx.order = [](const mpq_class& x, const mpq_class& y) { return x == y || y == 1; };
  fx.map = [](const mpq_class& x) -> mpq_class { return x / 2; };
  fx.seed_points = {q(1), q(1, 2)};
  fx.candidate_supremum = [](const mpq_class&) -> std::optional<mpq_class> { return q(1); };
  return fx;
}

RationalMapFixture reversed_with_two_fixture() {
  RationalMapFixture fx;
  fx.name = "reversed_with_two";
  fx.domain_description = "[0,1] u {2}; reversed order on [0,1], ]0,1] u {2} below 2";
  fx.order = [](const mpq_class& x, const mpq_class& y) {
    bool x_unit = x >= 0 && x <= 1;
    bool y_unit = y >= 0 && y <= 1;
    if (x_unit && y_unit && y <= x) return true;
    return ((x > 0 && x <= 1) || x == 2) && y == 2;
  };
  fx.map = [](const mpq_class& x) -> mpq_class { return x == 2 ? q(2) : q(0); };
  fx.seed_points = {q(1), q(1, 2), q(0), q(2)};
  return fx;
}

RationalMapFixture identity_fixture() {
  RationalMapFixture fx;
  fx.name = "identity";
  fx.domain_description = "[0,1] with the usual order";
  fx.order = usual_leq;
  fx.map = [](const mpq_class& x) { return x; };
  fx.seed_points = {q(0), q(1, 3), q(1)};
  fx.candidate_supremum = [](const mpq_class& x0) -> std::optional<mpq_class> { return x0; };
  fx.tolerance = 0;
  return fx;
}

RationalMapFixture half_open_fixture() {
  RationalMapFixture fx;
  fx.name = "half_open";
  fx.domain_description = "[0,2[ with the usual order";
  fx.order = usual_leq;
  fx.map = [](const mpq_class& x) -> mpq_class { return (x + 1) / 2; };
  fx.seed_points = {q(0), q(1, 2), q(3, 2)};
  fx.candidate_supremum = [](const mpq_class& x0) -> std::optional<mpq_class> {
    if (x0 <= 1) return q(1);
    return x0;
  };
  return fx;
}

std::vector<RationalMapFixture> all_rational_fixtures() {
  return {non_order_continuous_fixture(), decreasing_orbit_fixture(), flat_with_top_fixture(),
          reversed_with_two_fixture(),    identity_fixture(),         half_open_fixture()};
}

FiniteFixture restrict_fixture(const RationalMapFixture& fx, const std::vector<mpq_class>& points) {
  const std::size_t n = points.size();
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  SelfMap f;
  f.image.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    names.push_back(points[x].get_str());
    for (std::size_t y = 0; y < n; ++y) leq[x][y] = fx.order(points[x], points[y]);
    auto it = std::find(points.begin(), points.end(), fx.map(points[x]));
    if (it == points.end()) throw std::invalid_argument("point set is not closed under the map");
    f.image[x] = static_cast<Index>(it - points.begin());
  }
  return {fx.name + "_finite", FinitePoset::validate(std::move(names), leq), std::move(f)};
}

FiniteFixture reversed_with_two_finite() {
  return restrict_fixture(reversed_with_two_fixture(), {q(1), q(1, 2), q(0), q(2)});
}

FiniteFixture flat_with_top_finite() {
  auto fx = flat_with_top_fixture();
  auto inner = fx.map;
  fx.map = [inner](const mpq_class& x) -> mpq_class { return x == q(1, 8) ? x : inner(x); };
  return restrict_fixture(fx, {q(1), q(1, 2), q(1, 4), q(1, 8)});
}

FiniteFixture continuous_not_orbital_finite() {
  // a=0, b=1, c=2
  std::vector<std::vector<bool>> leq = {{true, false, true}, {false, true, true}, {false, false, true}};
  return {"continuous_not_orbital", FinitePoset::validate({"a", "b", "c"}, leq), SelfMap{{1, 1, 2}}};
}

FiniteFixture three_chain_finite() {
  std::vector<std::vector<bool>> leq = {{true, true, true}, {false, true, true}, {false, false, true}};
  return {"three_chain", FinitePoset::validate({"a", "b", "c"}, leq), SelfMap{{1, 2, 2}}};
}

FiniteFixture diamond_finite() {
  // bot=0, x=1, y=2, top=3
  std::vector<std::vector<bool>> leq = {{true, true, true, true},
                                        {false, true, false, true},
                                        {false, false, true, true},
                                        {false, false, false, true}};
  return {"diamond", FinitePoset::validate({"bot", "x", "y", "top"}, leq), SelfMap::identity(4)};
}

}  // namespace kb::poset
