#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "kb/analyzer.hpp"
#include "kb/complexity.hpp"
#include "kb/quasimetric.hpp"
#include "kb/recurrence.hpp"
#include "kb/spec_io.hpp"

using namespace kb;

namespace {

using Table = std::vector<Interval>;

/// Two-point space {0, 1} with d(0,1) = 0 and d(1,0) = 1.
qm::Distance<int> two_point() {
  return [](const int& x, const int& y) { return Interval(x == 1 && y == 0 ? 1 : 0); };
}

qm::Distance<Table> prefix_distance() {
  return [](const Table& f, const Table& g) { return d_C_prefix(f, g); };
}

qm::Distance<ComplexityFunction> prefix_distance(std::uint64_t N) {
  return [N](const ComplexityFunction& f, const ComplexityFunction& g) { return d_C_prefix(f, g, N); };
}

}  // namespace

TEST(Conjugate, ComplexityExample) {
  auto two = ComplexityFunction::constant(ExtendedNonNeg(2));
  auto one = ComplexityFunction::constant(ExtendedNonNeg(1));
  auto d = prefix_distance(30);
  auto inv = qm::conjugate(d);
  auto sym = qm::symmetrize(d);
  mpq_class half_partial = (1 - pow2(-30)) / 2;
  EXPECT_EQ(d(two, one), Interval(half_partial));
  EXPECT_EQ(d(one, two), Interval(0));
  EXPECT_EQ(inv(one, two), Interval(half_partial));
  EXPECT_EQ(sym(two, one), Interval(half_partial));
  EXPECT_EQ(sym(one, two), Interval(half_partial));
  EXPECT_EQ(inv(two, two), Interval(0));
  EXPECT_EQ(sym(two, two), Interval(0));
}

TEST(Conjugate, TwoPointSpace) {
  auto d = two_point();
  auto sym = qm::symmetrize(d);
  EXPECT_EQ(sym(0, 1), Interval(1));
  EXPECT_EQ(sym(1, 0), Interval(1));
  auto cc = qm::conjugate(qm::conjugate(d));
  for (int x : {0, 1}) {
    for (int y : {0, 1}) EXPECT_EQ(cc(x, y), d(x, y));
  }
}

TEST(Conjugate, InvolutionAndSymmetryOnRandomTables) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> v(1, 40);
  std::vector<Table> sample;
  for (int k = 0; k < 8; ++k) {
    Table t(17);
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = Interval(v(rng));
    sample.push_back(t);
  }
  auto d = prefix_distance();
  auto cc = qm::conjugate(qm::conjugate(d));
  auto sym = qm::symmetrize(d);
  for (const auto& x : sample) {
    for (const auto& y : sample) {
      EXPECT_EQ(cc(x, y), d(x, y));
      EXPECT_EQ(sym(x, y), sym(y, x));
      EXPECT_GE(sym(x, y).lo(), d(x, y).lo());
      EXPECT_GE(sym(x, y).lo(), d(y, x).lo());
    }
  }
}

TEST(Specialization, OrderAxiomsOnExactSample) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> v(1, 4);
  std::vector<Table> sample;
  for (int k = 0; k < 12; ++k) {
    Table t(5);
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = Interval(v(rng));
    sample.push_back(t);
  }
  auto d = prefix_distance();
  for (const auto& x : sample) EXPECT_EQ(qm::specialization_leq(d, x, x), Tri::True);
  for (const auto& x : sample) {
    for (const auto& y : sample) {
      Tri xy = qm::specialization_leq(d, x, y);
      ASSERT_NE(xy, Tri::Unknown);
      if (xy == Tri::True && qm::specialization_leq(d, y, x) == Tri::True) EXPECT_EQ(x, y);
      for (const auto& z : sample) {
        if (xy == Tri::True && qm::specialization_leq(d, y, z) == Tri::True) {
          EXPECT_EQ(qm::specialization_leq(d, x, z), Tri::True);
        }
      }
    }
  }
}

TEST(Specialization, UnknownWhenEnclosureStraddlesZero) {
  qm::Distance<int> d = [](const int&, const int&) { return Interval(ExtendedNonNeg(0), ExtendedNonNeg(1)); };
  EXPECT_EQ(qm::specialization_leq(d, 0, 1), Tri::Unknown);
}

TEST(Axioms, TwoPointSpacePasses) {
  auto r = qm::check_axioms_on_sample(two_point(), std::vector<int>{0, 1});
  EXPECT_EQ(r.pairs_checked, 4U);
  EXPECT_EQ(r.triples_checked, 8U);
}

TEST(Axioms, CorruptedTriangle) {
  qm::Distance<int> d = [](const int& x, const int& y) {
    if (x == y) return Interval(0);
    if (x == 0 && y == 2) return Interval(5);
    return Interval(1);
  };
  try {
    qm::check_axioms_on_sample(d, std::vector<int>{0, 1, 2});
    FAIL() << "expected a violation";
  } catch (const qm::AxiomViolation& e) {
    EXPECT_EQ(e.axiom(), qm::AxiomViolation::Axiom::Triangle);
    EXPECT_EQ(e.witness(), (std::vector<std::size_t>{0, 1, 2}));
  }
}

TEST(Axioms, SeparationFailure) {
  qm::Distance<int> d = [](const int&, const int&) { return Interval(0); };
  try {
    qm::check_axioms_on_sample(d, std::vector<int>{0, 1});
    FAIL() << "expected a violation";
  } catch (const qm::AxiomViolation& e) {
    EXPECT_EQ(e.axiom(), qm::AxiomViolation::Axiom::Separation);
    EXPECT_EQ(e.witness(), (std::vector<std::size_t>{0, 1}));
  }
}

TEST(LemmaLeast, ConstantSequence) {
  auto d = two_point();
  auto r = qm::lemma_least_check(d, std::vector<int>{1, 1, 1}, 1, {0, 1}, 0);
  EXPECT_TRUE(r.prefix_certified());
  EXPECT_EQ(r.candidate_bounds, 1U);  // 0 is not above 1
}

TEST(LemmaLeast, MergesortOrbitConvergesToOracle) {
  auto r = rec::mergesort(1);
  const std::uint64_t N = 32;
  analysis::IterateOptions opts;
  opts.keep_snapshots = true;
  auto it = analysis::kleene_iterate(r, rec::bottom_element(r), N, opts);
  auto o = rec::oracle_solve(r, N);
  Table oracle(o.begin(), o.end());
  Table above = oracle;
  for (std::uint64_t n = 2; n <= N; ++n) above[n] = above[n] + Interval(1);
  Table bottom = rec::bottom_element(r).tabulate(N);

  auto rep = qm::lemma_least_check(prefix_distance(), it.iterates, oracle, {above, oracle, bottom}, 0);
  EXPECT_TRUE(rep.upper_bound);
  EXPECT_TRUE(rep.below_candidate_bounds);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.candidate_bounds, 2U);
  EXPECT_TRUE(rep.prefix_certified());

  auto fwd = qm::lemma_least_check(prefix_distance(), it.iterates, oracle, {above}, 0, qm::Convergence::Forward);
  EXPECT_TRUE(fwd.prefix_certified());
}

TEST(LemmaLeast, NonIncreasingSequence) {
  Table a{0, 2, 2}, b{0, 1, 2};
  try {
    qm::lemma_least_check(prefix_distance(), std::vector<Table>{a, b}, a, {}, 0);
    FAIL() << "expected PreconditionFailed";
  } catch (const qm::PreconditionFailed& e) {
    EXPECT_EQ(e.index(), 0U);
  }
}

TEST(Contraction, MergesortFunctionalOnPrefix) {
  auto r = rec::mergesort(1);
  const std::uint64_t N = 64;
  r.prepare(N);
  std::mt19937_64 rng(41);
  std::vector<ComplexityFunction> sample;
  for (int k = 0; k < 8; ++k) sample.push_back(rec::random_member(r, N, rng));
  sample.push_back(rec::bottom_element(r));
  auto o = rec::oracle_solve(r, N);
  sample.push_back(ComplexityFunction::from_table("oracle", Table(o.begin(), o.end()), Interval(1)));

  std::function<ComplexityFunction(const ComplexityFunction&)> phi = [&r](const ComplexityFunction& f) {
    return rec::apply(r, f);
  };
  auto rep = qm::contractive_map_properties(prefix_distance(N), phi, sample, mpq_class(1, 2));
  EXPECT_EQ(rep.pairs_checked, 90U);
  ASSERT_TRUE(rep.worst_ratio);
  EXPECT_LE(*rep.worst_ratio, ExtendedNonNeg(mpq_class(1, 2)));
  EXPECT_GT(rep.monotonicity_premises, 0U);
  EXPECT_GT(rep.pre_post_premises, 0U);
  EXPECT_EQ(rep.undecided, 0U);
}

TEST(Contraction, IdentityIsNotContractive) {
  Table a{0, 1, 1}, b{0, 2, 1};
  std::function<Table(const Table&)> id = [](const Table& t) { return t; };
  EXPECT_THROW(qm::contractive_map_properties(prefix_distance(), id, std::vector<Table>{a, b}, mpq_class(1, 2)),
               qm::ContractionViolated);
}

TEST(Contraction, ConstantMap) {
  Table a{0, 1, 1}, b{0, 2, 1}, c{0, 3, 5};
  std::function<Table(const Table&)> k = [c](const Table&) { return c; };
  for (mpq_class cst : {mpq_class(0), mpq_class(1, 2)}) {
    auto rep = qm::contractive_map_properties(prefix_distance(), k, std::vector<Table>{a, b}, cst);
    EXPECT_EQ(rep.pairs_checked, 2U);
  }
  EXPECT_THROW(qm::contractive_map_properties(prefix_distance(), k, std::vector<Table>{a, b}, mpq_class(1)),
               std::invalid_argument);
}
