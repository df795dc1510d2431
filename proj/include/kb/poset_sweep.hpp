#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kb/poset.hpp"

namespace kb::poset {

/// Property verdicts for one (poset, self-map) case. Each flag is true when
/// the property holds (a false flag is a counterexample).
struct CaseAudit {
  bool kleene_consistent = true;             ///< (1) ⇔ (2) ⇔ (3) per x*
  bool continuity_implies_monotone = true;
  bool minimality = true;                    ///< monotone maps: x* = min Fix ∩ ↑x0, x* ⪯ post-fixed y0
  bool monotone_orbit_increasing = true;     ///< monotone, x0 ⪯ f(x0) ⇒ orbit increasing
  bool continuity_implies_orbital = true;    ///< continuous, x0 ⪯ f(x0) ⇒ orbitally continuous at x0

  bool monotone = false;
  bool continuous = false;
  bool has_fixed_point = false;

  bool ok() const {
    return kleene_consistent && continuity_implies_monotone && minimality &&
           monotone_orbit_increasing && continuity_implies_orbital;
  }
};

struct SweepSummary {
  std::uint64_t cases = 0;
  std::uint64_t posets = 0;
  std::uint64_t kleene_violations = 0;
  std::uint64_t continuity_monotone_violations = 0;
  std::uint64_t minimality_violations = 0;
  std::uint64_t monotone_orbit_violations = 0;
  std::uint64_t continuity_orbital_violations = 0;
  std::uint64_t monotone_cases = 0;
  std::uint64_t continuous_cases = 0;
  std::uint64_t fixed_point_cases = 0;
  std::optional<std::uint64_t> first_violation;  ///< smallest failing case index

  std::uint64_t violations() const {
    return kleene_violations + continuity_monotone_violations + minimality_violations +
           monotone_orbit_violations + continuity_orbital_violations;
  }
  void add(std::uint64_t case_index, const CaseAudit& audit);
  void merge(const SweepSummary& other);
  friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

CaseAudit audit_case(const FinitePoset& p, const SelfMap& f, const std::vector<Mask>& chains);

/// Every labeled poset on n elements against every one of its n^n self-maps.
SweepSummary sweep_exhaustive_serial(std::size_t n);
SweepSummary sweep_exhaustive_parallel(std::size_t n);

/// `count` seeded random (poset, map) cases with sizes in [min_size, max_size].
/// Case k is generated from its own stream, so results do not depend on the
/// thread schedule.
SweepSummary sweep_random_serial(std::uint64_t count, std::size_t min_size, std::size_t max_size,
                                 std::uint64_t seed);
SweepSummary sweep_random_parallel(std::uint64_t count, std::size_t min_size, std::size_t max_size,
                                   std::uint64_t seed);

}  // namespace kb::poset
