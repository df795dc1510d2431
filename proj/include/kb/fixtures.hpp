#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kb/poset.hpp"

namespace kb::poset {

/// A self-map on an infinite rational carrier, checked through exact orbit
/// prefixes. Supremum claims are only certified as "candidate is an upper
/// bound of the computed prefix and lies within the tolerance of the last
/// point".
struct RationalMapFixture {
  std::string name;
  std::string domain_description;
  std::function<bool(const mpq_class&, const mpq_class&)> order;
  std::function<mpq_class(const mpq_class&)> map;
  std::vector<mpq_class> seed_points;
  /// Declared supremum of the orbit from x0, when one is claimed.
  std::function<std::optional<mpq_class>(const mpq_class&)> candidate_supremum;
  mpq_class tolerance{1};
};

struct RationalOrbitReport {
  std::vector<mpq_class> points;
  bool increasing = true;
  bool decreasing = true;
  std::optional<mpq_class> candidate;
  bool candidate_is_upper_bound = false;
  std::optional<mpq_class> distance_to_candidate;  ///< |candidate − last point|
  bool within_tolerance = false;
};

/// `steps` orbit points f^0(x0), ..., f^{steps-1}(x0).
RationalOrbitReport rational_orbit_check(const RationalMapFixture& fixture, const mpq_class& x0,
                                         std::size_t steps);

/// Checks the three partial-order axioms of `fixture.order` on the union of
/// the seed orbits (each `steps` long). Returns false on any violation.
bool order_is_partial_on_orbits(const RationalMapFixture& fixture, std::size_t steps);

// Fixtures for the examples that motivate orbital continuity.

/// [0,1] with ≤; 1 − x/2 below 1/2 and (1+x)/2 from 1/2 on. Not monotone,
/// orbit from 1/2 increases to the fixed point 1.
RationalMapFixture non_order_continuous_fixture();
/// [0,1] with ≤ and halving: orbits decrease, x0 is their supremum.
RationalMapFixture decreasing_orbit_fixture();
/// [0,1] with x ⪯ y iff x = y or y = 1, and halving.
RationalMapFixture flat_with_top_fixture();
/// [0,1] ∪ {2}: reversed ≤ on [0,1], ]0,1] ∪ {2} below 2; f ≡ 0 on [0,1], f(2) = 2.
RationalMapFixture reversed_with_two_fixture();
/// Identity on [0,1] with ≤: every point is fixed.
RationalMapFixture identity_fixture();
/// [0,2[ with ≤ and (x+1)/2: not chain complete, fixed point 1.
RationalMapFixture half_open_fixture();

std::vector<RationalMapFixture> all_rational_fixtures();

/// A finite poset with a self-map and the seed points of interest.
struct FiniteFixture {
  std::string name;
  FinitePoset poset;
  SelfMap map;
};

/// Restriction of a rational fixture to `points`, which must be closed
/// under the map. Element names are the rationals' canonical strings.
FiniteFixture restrict_fixture(const RationalMapFixture& fixture, const std::vector<mpq_class>& points);

/// {1, 1/2, 0, 2} restriction of reversed_with_two_fixture (listed bottom
/// first). Not monotone with witness (1, 2); orbitally continuous at every seed.
FiniteFixture reversed_with_two_finite();
/// Flat order plus top 1 over {1, 1/2, 1/4, 1/8}, halving with 1/8 ↦ 1/8.
/// Not orbitally continuous at 1.
FiniteFixture flat_with_top_finite();
/// a, b incomparable below top c; f(a) = b, f(b) = b, f(c) = c. Order
/// continuous, yet not orbitally continuous at a.
FiniteFixture continuous_not_orbital_finite();
/// a ⪯ b ⪯ c with f(a) = b, f(b) = c, f(c) = c.
FiniteFixture three_chain_finite();
/// ⊥ ⪯ x, y ⪯ ⊤ with the identity map.
FiniteFixture diamond_finite();

}  // namespace kb::poset
