#include "kb/poset_sweep.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kb::poset {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct RandomCase {
  FinitePoset poset;
  SelfMap map;
};

RandomCase make_random_case(std::uint64_t seed, std::uint64_t k, std::size_t min_size,
                            std::size_t max_size) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(k)));
  std::uniform_int_distribution<std::size_t> size(min_size, max_size);
  std::size_t n = size(rng);
  FinitePoset p = random_poset(n, rng);
  SelfMap f = random_self_map(n, rng);
  return {std::move(p), std::move(f)};
}

std::uint64_t map_count(std::size_t n) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < n; ++i) c *= n;
  return c;
}

}  // namespace

void SweepSummary::add(std::uint64_t case_index, const CaseAudit& a) {
  ++cases;
  kleene_violations += !a.kleene_consistent;
  continuity_monotone_violations += !a.continuity_implies_monotone;
  minimality_violations += !a.minimality;
  monotone_orbit_violations += !a.monotone_orbit_increasing;
  continuity_orbital_violations += !a.continuity_implies_orbital;
  monotone_cases += a.monotone;
  continuous_cases += a.continuous;
  fixed_point_cases += a.has_fixed_point;
  if (!a.ok() && (!first_violation || case_index < *first_violation)) first_violation = case_index;
}

void SweepSummary::merge(const SweepSummary& o) {
  cases += o.cases;
  posets += o.posets;
  kleene_violations += o.kleene_violations;
  continuity_monotone_violations += o.continuity_monotone_violations;
  minimality_violations += o.minimality_violations;
  monotone_orbit_violations += o.monotone_orbit_violations;
  continuity_orbital_violations += o.continuity_orbital_violations;
  monotone_cases += o.monotone_cases;
  continuous_cases += o.continuous_cases;
  fixed_point_cases += o.fixed_point_cases;
  if (o.first_violation && (!first_violation || *o.first_violation < *first_violation)) {
    first_violation = o.first_violation;
  }
}

CaseAudit audit_case(const FinitePoset& p, const SelfMap& f, const std::vector<Mask>& cs) {
  CaseAudit a;
  TheoremReport thm = evaluate_kleene_equivalence(p, f);
  a.kleene_consistent = thm.consistent;
  a.has_fixed_point = thm.fixed_point_exists;
  a.monotone = is_monotone(p, f).holds;
  a.continuous = is_order_continuous(p, f, cs);
  a.continuity_implies_monotone = !a.continuous || a.monotone;

  for (Index x0 = 0; x0 < p.size(); ++x0) {
    if (!p.leq(x0, f(x0))) continue;
    OrbitReport o = orbit(p, f, x0);
    bool oc = is_orbitally_continuous_at(p, f, o);
    if (a.continuous && !oc) a.continuity_implies_orbital = false;
    if (!a.monotone) continue;
    if (!o.is_increasing) a.monotone_orbit_increasing = false;
    if (!o.supremum || !oc) continue;
    Index star = *o.supremum;
    if (f(star) != star) {
      a.minimality = false;
      continue;
    }
    for (Index y = 0; y < p.size(); ++y) {
      if (!p.leq(x0, y)) continue;
      bool fixed = f(y) == y;
      bool post_fixed = p.leq(f(y), y);
      if ((fixed || post_fixed) && !p.leq(star, y)) a.minimality = false;
    }
  }
  return a;
}

SweepSummary sweep_exhaustive_serial(std::size_t n) {
  auto posets = enumerate_labeled_posets(n);
  const std::uint64_t maps = map_count(n);
  SweepSummary total;
  total.posets = posets.size();
  for (std::size_t pi = 0; pi < posets.size(); ++pi) {
    auto cs = chains(posets[pi]);
    for (std::uint64_t mi = 0; mi < maps; ++mi) {
      total.add(pi * maps + mi, audit_case(posets[pi], self_map_by_index(n, mi), cs));
    }
  }
  return total;
}

SweepSummary sweep_exhaustive_parallel(std::size_t n) {
  auto posets = enumerate_labeled_posets(n);
  const std::uint64_t maps = map_count(n);
  const auto count = static_cast<std::int64_t>(posets.size());
  SweepSummary total;
#pragma omp parallel
  {
    SweepSummary local;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::int64_t pi = 0; pi < count; ++pi) {
      const auto& p = posets[static_cast<std::size_t>(pi)];
      auto cs = chains(p);
      for (std::uint64_t mi = 0; mi < maps; ++mi) {
        local.add(static_cast<std::uint64_t>(pi) * maps + mi, audit_case(p, self_map_by_index(n, mi), cs));
      }
    }
#pragma omp critical
    total.merge(local);
  }
  total.posets = posets.size();
  return total;
}

SweepSummary sweep_random_serial(std::uint64_t count, std::size_t min_size, std::size_t max_size,
                                 std::uint64_t seed) {
  SweepSummary total;
  for (std::uint64_t k = 0; k < count; ++k) {
    auto c = make_random_case(seed, k, min_size, max_size);
    total.add(k, audit_case(c.poset, c.map, chains(c.poset)));
  }
  total.posets = count;
  return total;
}

SweepSummary sweep_random_parallel(std::uint64_t count, std::size_t min_size, std::size_t max_size,
                                   std::uint64_t seed) {
  SweepSummary total;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    SweepSummary local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t k = 0; k < n; ++k) {
      auto c = make_random_case(seed, static_cast<std::uint64_t>(k), min_size, max_size);
      local.add(static_cast<std::uint64_t>(k), audit_case(c.poset, c.map, chains(c.poset)));
    }
#pragma omp critical
    total.merge(local);
  }
  total.posets = count;
  return total;
}

}  // namespace kb::poset
