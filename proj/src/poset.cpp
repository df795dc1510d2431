#include "kb/poset.hpp"

#include <bit>

namespace kb::poset {

namespace {

Index lowest(Mask m) { return static_cast<Index>(std::countr_zero(m)); }

template <class Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    fn(lowest(m));
    m &= m - 1;
  }
}

bool is_transitive(const std::vector<Mask>& up) {
  for (Index x = 0; x < up.size(); ++x) {
    Mask reach = up[x];
    bool ok = true;
    for_each_bit(reach, [&](Index y) { ok = ok && (up[y] & ~reach) == 0; });
    if (!ok) return false;
  }
  return true;
}

bool is_antisymmetric(const std::vector<Mask>& up) {
  for (Index x = 0; x < up.size(); ++x) {
    Mask others = up[x] & ~bit(x);
    bool ok = true;
    for_each_bit(others, [&](Index y) { ok = ok && !contains(up[y], x); });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "e" + std::to_string(i));
  }
  return names;
}

FinitePoset FinitePoset::validate(std::vector<std::string> carrier,
                                  const std::vector<std::vector<bool>>& leq) {
  if (leq.size() != carrier.size()) throw std::invalid_argument("relation matrix is not square over the carrier");
  std::vector<Mask> up(carrier.size(), 0);
  for (Index x = 0; x < leq.size(); ++x) {
    if (leq[x].size() != carrier.size()) throw std::invalid_argument("relation matrix is not square over the carrier");
    for (Index y = 0; y < leq[x].size(); ++y) {
      if (leq[x][y]) up[x] |= bit(y);
    }
  }
  return validate(std::move(carrier), std::move(up));
}

FinitePoset FinitePoset::validate(std::vector<std::string> carrier, std::vector<Mask> up) {
  const std::size_t n = carrier.size();
  if (n == 0) throw std::invalid_argument("carrier must be nonempty");
  if (n > kMaxCarrier) throw std::invalid_argument("carrier larger than 64 elements");
  if (up.size() != n) throw std::invalid_argument("relation matrix is not square over the carrier");
  auto nm = [&](Index i) { return carrier[i]; };
  for (Index x = 0; x < n; ++x) {
    if (!contains(up[x], x)) {
      throw PosetAxiomError(PosetAxiomError::Kind::NotReflexive, {x}, "NotReflexive(" + nm(x) + ")");
    }
  }
  for (Index x = 0; x < n; ++x) {
    for (Index y = x + 1; y < n; ++y) {
      if (contains(up[x], y) && contains(up[y], x)) {
        throw PosetAxiomError(PosetAxiomError::Kind::NotAntisymmetric, {x, y},
                              "NotAntisymmetric(" + nm(x) + "," + nm(y) + ")");
      }
    }
  }
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (!contains(up[x], y)) continue;
      for (Index z = 0; z < n; ++z) {
        if (contains(up[y], z) && !contains(up[x], z)) {
          throw PosetAxiomError(PosetAxiomError::Kind::NotTransitive, {x, y, z},
                                "NotTransitive(" + nm(x) + "," + nm(y) + "," + nm(z) + ")");
        }
      }
    }
  }
  FinitePoset p;
  p.names_ = std::move(carrier);
  p.up_ = std::move(up);
  p.down_.assign(n, 0);
  for (Index x = 0; x < n; ++x) {
    for_each_bit(p.up_[x], [&](Index y) { p.down_[y] |= bit(x); });
  }
  return p;
}

std::optional<Index> FinitePoset::index_of(const std::string& name) const {
  for (Index i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

SelfMap SelfMap::identity(std::size_t n) {
  SelfMap f;
  f.image.resize(n);
  for (Index i = 0; i < n; ++i) f.image[i] = i;
  return f;
}

Mask OrbitReport::point_set() const {
  Mask m = 0;
  for (Index x : points) m |= bit(x);
  return m;
}

Mask OrbitReport::shifted_set() const {
  Mask m = 0;
  for (std::size_t k = 1; k < points.size(); ++k) m |= bit(points[k]);
  if (entered_cycle_at == 0) m |= bit(points.front());
  return m;
}

std::optional<Index> supremum(const FinitePoset& p, Mask subset) {
  Mask ub = p.all();
  for_each_bit(subset, [&](Index s) { ub &= p.up(s); });
  std::optional<Index> least;
  for_each_bit(ub, [&](Index u) {
    if (!least && (ub & ~p.up(u)) == 0) least = u;
  });
  return least;
}

std::vector<Mask> chains(const FinitePoset& p) {
  // Grow chains by adding elements above the current maximum, which lists
  // every chain exactly once.
  std::vector<Mask> out;
  std::vector<std::pair<Mask, Index>> stack;
  for (Index x = 0; x < p.size(); ++x) stack.emplace_back(bit(x), x);
  while (!stack.empty()) {
    auto [chain, top] = stack.back();
    stack.pop_back();
    out.push_back(chain);
    for_each_bit(p.up(top) & ~bit(top), [&](Index y) { stack.emplace_back(chain | bit(y), y); });
  }
  return out;
}

ChainCompleteness is_chain_complete(const FinitePoset& p) {
  ChainCompleteness result;
  for (Mask c : chains(p)) {
    ++result.chains_checked;
    auto s = supremum(p, c);
    // The supremum of a finite chain is its largest element.
    if (!s || !contains(c, *s)) {
      result.holds = false;
      result.witness = c;
      return result;
    }
  }
  return result;
}

MonotonicityResult is_monotone(const FinitePoset& p, const SelfMap& f) {
  for (Index x = 0; x < p.size(); ++x) {
    for (Index y = 0; y < p.size(); ++y) {
      if (p.leq(x, y) && !p.leq(f(x), f(y))) return {false, PairWitness{x, y}};
    }
  }
  return {};
}

OrbitReport orbit(const FinitePoset& p, const SelfMap& f, Index x0) {
  OrbitReport r;
  std::vector<std::ptrdiff_t> seen(p.size(), -1);
  Index x = x0;
  while (seen[x] < 0) {
    seen[x] = static_cast<std::ptrdiff_t>(r.points.size());
    r.points.push_back(x);
    x = f(x);
  }
  r.entered_cycle_at = static_cast<std::size_t>(seen[x]);
  r.cycle_length = r.points.size() - r.entered_cycle_at;
  r.is_increasing = true;
  for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
    r.is_increasing = r.is_increasing && p.leq(r.points[k], r.points[k + 1]);
  }
  r.is_increasing = r.is_increasing && p.leq(r.points.back(), r.points[r.entered_cycle_at]);
  r.supremum = supremum(p, r.point_set());
  return r;
}

bool is_orbitally_continuous_at(const FinitePoset& p, const SelfMap& f, const OrbitReport& o) {
  if (!o.supremum) return true;
  auto shifted = supremum(p, o.shifted_set());
  return shifted && *shifted == f(*o.supremum);
}

bool is_orbitally_continuous_at(const FinitePoset& p, const SelfMap& f, Index x0) {
  return is_orbitally_continuous_at(p, f, orbit(p, f, x0));
}

bool is_order_continuous(const FinitePoset& p, const SelfMap& f, const std::vector<Mask>& cs) {
  for (Mask c : cs) {
    auto s = supremum(p, c);
    if (!s) continue;
    Mask image = 0;
    for_each_bit(c, [&](Index x) { image |= bit(f(x)); });
    auto t = supremum(p, image);
    if (!t || *t != f(*s)) return false;
  }
  return true;
}

bool is_order_continuous(const FinitePoset& p, const SelfMap& f) {
  return is_order_continuous(p, f, chains(p));
}

Mask fixed_points(const SelfMap& f) {
  Mask m = 0;
  for (Index x = 0; x < f.size(); ++x) {
    if (f(x) == x) m |= bit(x);
  }
  return m;
}

TheoremReport evaluate_kleene_equivalence(const FinitePoset& p, const SelfMap& f) {
  TheoremReport r;
  r.fixed_points = fixed_points(f);
  for (Index x0 = 0; x0 < p.size(); ++x0) {
    OrbitReport o = orbit(p, f, x0);
    if (!o.supremum) continue;
    bool oc = is_orbitally_continuous_at(p, f, o);
    if (!oc) continue;
    if (o.is_increasing) r.route2_limits |= bit(*o.supremum);
    if (p.leq(x0, f(x0))) r.route3_limits |= bit(*o.supremum);
  }
  r.fixed_point_exists = r.fixed_points != 0;
  r.increasing_orbit_route = r.route2_limits != 0;
  r.post_fixed_orbit_route = r.route3_limits != 0;
  Mask disagreement = (r.fixed_points ^ r.route2_limits) | (r.fixed_points ^ r.route3_limits);
  r.consistent = disagreement == 0 && r.fixed_point_exists == r.increasing_orbit_route &&
                 r.increasing_orbit_route == r.post_fixed_orbit_route;
  if (disagreement != 0) r.witness = lowest(disagreement);
  return r;
}

TheoremReport check_kleene_equivalence(const FinitePoset& p, const SelfMap& f) {
  TheoremReport r = evaluate_kleene_equivalence(p, f);
  if (!r.consistent) {
    throw CounterexampleFound("fixed point characterization violated at x*=" +
                              (r.witness ? p.name(*r.witness) : std::string("?")));
  }
  return r;
}

LeastFixedPoint least_fixed_point_above(const FinitePoset& p, const SelfMap& f, Index x0) {
  auto mono = is_monotone(p, f);
  if (!mono.holds) {
    auto [x, y] = *mono.witness;
    throw HypothesisUnmet("monotone", {x, y},
                          "HypothesisUnmet(monotone, (" + p.name(x) + "," + p.name(y) + "))");
  }
  if (!p.leq(x0, f(x0))) {
    throw HypothesisUnmet("x0 <= f(x0)", {x0}, "HypothesisUnmet(x0 <= f(x0), " + p.name(x0) + ")");
  }
  OrbitReport o = orbit(p, f, x0);
  if (!o.supremum) {
    throw HypothesisUnmet("orbit supremum", {x0}, "HypothesisUnmet(orbit supremum, " + p.name(x0) + ")");
  }
  if (!is_orbitally_continuous_at(p, f, o)) {
    throw HypothesisUnmet("orbital continuity", {x0},
                          "HypothesisUnmet(orbital continuity, " + p.name(x0) + ")");
  }
  Index star = *o.supremum;
  if (f(star) != star) throw CounterexampleFound("orbit supremum is not a fixed point");
  LeastFixedPoint r{star, true, true};
  for (Index y = 0; y < p.size(); ++y) {
    if (!p.leq(x0, y)) continue;
    if (f(y) == y && !p.leq(star, y)) r.minimum_of_fixed_points_above = false;
    if (p.leq(f(y), y) && !p.leq(star, y)) r.below_post_fixed_points = false;
  }
  return r;
}

std::vector<FinitePoset> enumerate_labeled_posets(std::size_t n) {
  if (n == 0 || n > 5) throw std::invalid_argument("labeled enumeration supports 1..5 elements");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (x != y) pairs.emplace_back(x, y);
    }
  }
  std::vector<FinitePoset> out;
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  std::vector<Mask> up(n);
  for (std::uint64_t rel = 0; rel < total; ++rel) {
    for (Index x = 0; x < n; ++x) up[x] = bit(x);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((rel >> k) & 1U) up[pairs[k].first] |= bit(pairs[k].second);
    }
    if (is_antisymmetric(up) && is_transitive(up)) {
      out.push_back(FinitePoset::validate(default_names(n), up));
    }
  }
  return out;
}

FinitePoset random_poset(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> density(0.05, 0.4);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Mask> up(n);
  for (;;) {
    double p = density(rng);
    for (Index x = 0; x < n; ++x) {
      up[x] = bit(x);
      for (Index y = 0; y < n; ++y) {
        if (x != y && coin(rng) < p) up[x] |= bit(y);
      }
    }
    // Reflexive-transitive closure.
    for (Index k = 0; k < n; ++k) {
      for (Index x = 0; x < n; ++x) {
        if (contains(up[x], k)) up[x] |= up[k];
      }
    }
    if (is_antisymmetric(up)) return FinitePoset::validate(default_names(n), up);
  }
}

SelfMap random_self_map(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> pick(0, n - 1);
  SelfMap f;
  f.image.resize(n);
  for (auto& v : f.image) v = pick(rng);
  return f;
}

SelfMap self_map_by_index(std::size_t n, std::uint64_t index) {
  SelfMap f;
  f.image.assign(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    f.image[k] = static_cast<Index>(index % n);
    index /= n;
  }
  return f;
}

}  // namespace kb::poset
