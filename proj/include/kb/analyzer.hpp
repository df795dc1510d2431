#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kb/complexity.hpp"
#include "kb/recurrence.hpp"

namespace kb::analysis {

using rec::Recurrence;
using rec::Table;

class NotIncreasing : public std::runtime_error {
 public:
  NotIncreasing(std::size_t iteration, std::uint64_t n)
      : std::runtime_error("orbit decreases between iterates " + std::to_string(iteration) + " and " +
                           std::to_string(iteration + 1) + " at n=" + std::to_string(n)),
        iteration_(iteration),
        n_(n) {}
  std::size_t iteration() const { return iteration_; }
  std::uint64_t n() const { return n_; }

 private:
  std::size_t iteration_;
  std::uint64_t n_;
};

class MaxItersExceeded : public std::runtime_error {
 public:
  MaxItersExceeded(std::size_t iters, std::uint64_t n)
      : std::runtime_error("no stabilization after " + std::to_string(iters) + " iterations; first unstable n=" +
                           std::to_string(n)),
        n_(n) {}
  std::uint64_t first_unstable() const { return n_; }

 private:
  std::uint64_t n_;
};

struct IterateOptions {
  std::size_t max_iters = 256;
  bool keep_snapshots = false;
  bool parallel = true;
};

struct StepSummary {
  std::size_t iteration = 0;       ///< m, for the step x_m → x_{m+1}
  std::uint64_t first_changed = 0;  ///< 0 when x_{m+1} = x_m
  std::uint64_t changed = 0;
};

template <class V>
struct IterationReport {
  std::uint64_t N = 0;
  std::vector<Table<V>> iterates;  ///< x_0 … x_m, only with keep_snapshots
  std::vector<StepSummary> steps;
  Tri increasing = Tri::True;
  std::optional<std::pair<std::size_t, std::uint64_t>> undecided;  ///< first (m, n) left open
  std::size_t stabilized_at = 0;  ///< m with Φ(x_m) = x_m on [1, N]
  Table<V> limit_prefix;
};

/// Kleene orbit x_{m+1} = Φ(x_m) on [1, N] until exact stabilization.
template <class V>
IterationReport<V> kleene_iterate(const Recurrence& r, Table<V> x0, const IterateOptions& opts = {});

IterationReport<Interval> kleene_iterate(const Recurrence& r, const ComplexityFunction& x0, std::uint64_t N,
                                         const IterateOptions& opts = {});

struct CertifyConfig {
  std::uint64_t N = 128;
  std::size_t max_iters = 256;
  SearchGrid grid = SearchGrid::standard();
  std::size_t monotone_samples = 8;
  std::uint64_t seed = 1;
};

struct HypothesisVerdict {
  std::string name;
  Status status = Status::Certified;
  std::string evidence;
  std::optional<std::uint64_t> n;
  std::optional<Interval> lhs;
  std::optional<Interval> rhs;
};

struct BoundCertificate {
  std::string recurrence;
  std::string lower_name;
  std::string upper_name;
  std::uint64_t N = 0;
  std::vector<HypothesisVerdict> audit;
  std::string continuity;  ///< how orbital continuity at g is justified
  Status verdict = Status::Unknown;
  std::optional<HypothesisVerdict> refuted;  ///< first refuted hypothesis
  std::string note;

  std::optional<IterationReport<Interval>> iteration;
  Table<Interval> g_values;
  Table<Interval> f_values;
  Table<Interval> oracle;
  bool oracle_agreement = false;
  bool fixed_point_verified = false;
  Tri sandwich = Tri::Unknown;  ///< g ≤ limit ≤ f on [1, N]
  std::optional<AsymptoticCertificate> lower;  ///< limit ∈ Ω(g)
  std::optional<AsymptoticCertificate> upper;  ///< limit ∈ O(f)
  bool certificates_rescanned = false;
};

/// Audits the four hypotheses (Φ monotone; g ⪯ Φ(g); Φ(f) ⪯ f; g ⪯ f) plus
/// anchoring on [1, N], iterates from g, and emits limit ∈ Ω(g) ∩ O(f)
/// when every hypothesis is certified.
BoundCertificate certify_bounds(const Recurrence& r, const ComplexityFunction& g, const ComplexityFunction& f,
                                const CertifyConfig& cfg = {});

/// certify_bounds with g = g_h for the probabilistic family.
BoundCertificate audit_theorem_R(const Recurrence& r, const ComplexityFunction& f, const CertifyConfig& cfg = {});

std::string render_text(const BoundCertificate& c);
/// "n,g(n),limit(n),f(n),oracle(n)" then one row per n.
std::string render_table(const BoundCertificate& c);

std::string render_text(const IterationReport<Interval>& it);
/// "n,x0(n),limit(n)" then one row per n.
std::string render_table(const IterationReport<Interval>& it, const Table<Interval>& x0);

}  // namespace kb::analysis
