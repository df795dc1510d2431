#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "kb/complexity.hpp"
#include "kb/quasimetric.hpp"
#include "kb/recurrence.hpp"
#include "kb/spec_io.hpp"

using namespace kb;

namespace {

ComplexityFunction constant(long v) { return ComplexityFunction::constant(ExtendedNonNeg(v)); }

ComplexityFunction expr(const char* text) { return ComplexityFunction::from_expr(Expr::parse(text)); }

/// Random function with values in [1, 32] (occasionally ∞) on [1, N] and 1 beyond.
ComplexityFunction random_function(std::mt19937_64& rng, std::uint64_t N) {
  std::uniform_int_distribution<long> num(1, 128);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> inf(0, 15);
  std::vector<Interval> t(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) {
    mpq_class q(mpz_class(num(rng)), mpz_class(den(rng)));
    q.canonicalize();
    t[n] = inf(rng) == 0 ? Interval::infinity() : Interval(mpq_class(q / 4 + 1));
  }
  return ComplexityFunction::from_table("random", std::move(t), Interval(1), ExponentialWitness{8});
}

std::vector<Interval> oracle_table(const rec::Recurrence& r, std::uint64_t N) {
  auto o = rec::oracle_solve(r, N);
  return {o.begin(), o.end()};
}

SearchGrid grid(std::vector<mpq_class> c) {
  SearchGrid g;
  g.c = std::move(c);
  for (std::uint64_t n0 = 1; n0 <= 16; ++n0) g.n0.push_back(n0);
  return g;
}

}  // namespace

TEST(DistanceC, IdenticalFunctionsHaveZeroLowerEnd) {
  auto f = expr("n + 1");
  auto d = d_C(f, f, 16);
  EXPECT_TRUE(d.lo().is_zero());
  EXPECT_EQ(d.hi(), ExtendedNonNeg(pow2(-16)));
}

TEST(DistanceC, GeometricPartialSums) {
  auto two = constant(2), one = constant(1);
  auto d = d_C(two, one, 20);
  mpq_class lower = (1 - pow2(-20)) / 2;
  EXPECT_EQ(d.lo(), ExtendedNonNeg(lower));
  EXPECT_EQ(d.hi(), ExtendedNonNeg(lower + pow2(-20)));
  EXPECT_TRUE(d_C(one, two, 20).lo().is_zero());
}

TEST(DistanceC, InfiniteValuesContributeNothingOnTheLeft) {
  auto inf = ComplexityFunction::constant(ExtendedNonNeg::infinity());
  auto one = constant(1);
  // max(1/1 − 1/∞, 0) = 1 at every n.
  EXPECT_EQ(d_C(inf, one, 10).lo(), ExtendedNonNeg(1 - pow2(-10)));
  EXPECT_TRUE(d_C(one, inf, 10, 1).lo().is_zero());
}

TEST(DistanceC, Errors) {
  auto zero = constant(0), one = constant(1);
  EXPECT_THROW(d_C(one, zero, 4), ZeroValueReciprocal);
  EXPECT_THROW(d_C(zero, one, 4), ZeroValueReciprocal);
  auto half = ComplexityFunction::constant(ExtendedNonNeg(mpq_class(1, 2)));
  EXPECT_THROW(d_C(one, half, 8, 1), TailFloorViolated);
  EXPECT_NO_THROW(d_C(one, half, 8, mpq_class(1, 2)));
}

TEST(DistanceC, TruncationBoundsTighten) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    auto f = random_function(rng, 64), g = random_function(rng, 64);
    Interval prev = d_C(f, g, 4);
    for (std::uint64_t N : {8, 16, 32, 64}) {
      Interval cur = d_C(f, g, N);
      EXPECT_LE(prev.lo(), cur.lo());
      EXPECT_GE(prev.hi(), cur.hi());
      prev = cur;
    }
  }
}

TEST(DistanceC, AxiomsOnRandomSample) {
  std::mt19937_64 rng(5);
  std::vector<ComplexityFunction> sample;
  for (int k = 0; k < 20; ++k) sample.push_back(random_function(rng, 64));
  qm::Distance<ComplexityFunction> d = [](const ComplexityFunction& f, const ComplexityFunction& g) {
    return d_C(f, g, 64);
  };
  auto r = qm::check_axioms_on_sample(d, sample);
  EXPECT_EQ(r.triples_checked, 8000U);
}

TEST(DistanceC, SpecializationAgreesWithPointwiseOrder) {
  std::mt19937_64 rng(9);
  qm::Distance<ComplexityFunction> d = [](const ComplexityFunction& f, const ComplexityFunction& g) {
    return d_C_prefix(f, g, 32);
  };
  for (int k = 0; k < 40; ++k) {
    auto f = random_function(rng, 32);
    auto g = (k % 2 == 0) ? ComplexityFunction("above", [f](std::uint64_t n) { return f(n) + Interval(n % 3); })
                          : random_function(rng, 32);
    bool pointwise = leq_prefix(f, g, 32).status == Status::Certified;
    Tri spec = qm::specialization_leq(d, f, g);
    EXPECT_EQ(spec == Tri::True, pointwise);
    EXPECT_NE(spec, Tri::Unknown);
    if (pointwise) EXPECT_TRUE(d_C(f, g, 32).lo().is_zero());
  }
}

TEST(DistanceC, SingleTermDifference) {
  auto f = ComplexityFunction("f", [](std::uint64_t n) { return Interval(n == 1 ? 2 : 5); });
  auto g = ComplexityFunction("g", [](std::uint64_t n) { return Interval(n == 1 ? 1 : 5); });
  qm::Distance<ComplexityFunction> d = [](const ComplexityFunction& a, const ComplexityFunction& b) {
    return d_C_prefix(a, b, 16);
  };
  EXPECT_EQ(qm::specialization_leq(d, f, g), Tri::False);
  EXPECT_EQ(d(f, g).lo(), ExtendedNonNeg(mpq_class(1, 4)));
  EXPECT_EQ(qm::specialization_leq(d, g, f), Tri::True);
}

TEST(LeqPrefix, RefutationTakesPrecedence) {
  auto f = expr("n");
  EXPECT_EQ(leq_prefix(f, f, 16).status, Status::Certified);
  std::vector<Interval> a{0, Interval(ExtendedNonNeg(1), ExtendedNonNeg(3)), 5};
  std::vector<Interval> b{0, 2, 4};
  auto v = leq_prefix(a, b);
  EXPECT_EQ(v.status, Status::Refuted);
  EXPECT_EQ(v.n, 2U);
  std::vector<Interval> c{0, 2, 6};
  auto u = leq_prefix(a, c);
  EXPECT_EQ(u.status, Status::Unknown);
  EXPECT_EQ(u.n, 1U);
}

TEST(LeqPrefix, InfinityIsTop) {
  auto inf = ComplexityFunction::constant(ExtendedNonNeg::infinity());
  EXPECT_EQ(leq_prefix(expr("n"), inf, 8).status, Status::Certified);
  EXPECT_EQ(leq_prefix(inf, expr("n"), 8).status, Status::Refuted);
}

TEST(Asymptotic, IdenticalFunctions) {
  auto f = expr("n*n + 1");
  auto o = in_O(f, f, SearchGrid::standard(), 64);
  EXPECT_EQ(o.status, Status::Certified);
  EXPECT_EQ(o.c, 1);
  EXPECT_EQ(o.n0, 1U);
  auto w = in_Omega(f, f, SearchGrid::standard(), 64);
  EXPECT_EQ(w.status, Status::Certified);
  EXPECT_EQ(w.c, 1);
  EXPECT_EQ(w.n0, 1U);
}

TEST(Asymptotic, InexactEnclosuresNeedSlackInTheConstant) {
  // log2(3) is only enclosed, so f(3) <= 1*f(3) is undecided; c = 2 separates the intervals.
  auto f = expr("n*log2(n) + 1");
  auto o = in_O(f, f, SearchGrid::standard(), 64);
  EXPECT_EQ(o.status, Status::Certified);
  EXPECT_EQ(o.c, 2);
  EXPECT_EQ(o.n0, 1U);
  auto w = in_Omega(f, f, SearchGrid::standard(), 64);
  EXPECT_EQ(w.c, mpq_class(1, 2));
}

TEST(Asymptotic, MergesortAgainstHalfNLogN) {
  // Oracle: T(n) = n + n log2(n) / 2 on powers of two, so T(n) / (n log2(n) / 2) = 1 + 2 / log2(n) <= 3.
  auto T = oracle_table(rec::mergesort(1), 1024);
  auto g = expr("n*log2(n)/2").tabulate(1024);
  auto o = in_O(T, g, grid({1, 2, 3}), powers_of(2));
  EXPECT_EQ(o.status, Status::Certified);
  EXPECT_EQ(o.c, 3);
  EXPECT_EQ(o.n0, 2U);
  EXPECT_TRUE(verify_certificate(o, T, g, powers_of(2)));
  auto w = in_Omega(T, g, grid({1, 2, 3}), powers_of(2));
  EXPECT_EQ(w.status, Status::Certified);
  EXPECT_EQ(w.c, 1);
  EXPECT_EQ(w.n0, 2U);
  EXPECT_TRUE(verify_certificate(w, T, g, powers_of(2)));
}

TEST(Asymptotic, QuadraticIsNotLinear) {
  auto sq = expr("n*n"), lin = expr("n");
  auto small = in_O(sq, lin, grid({1, 2, 4, 8, 16, 32}), 64);
  EXPECT_EQ(small.status, Status::Refuted);
  EXPECT_EQ(small.witness, 64U);
  EXPECT_EQ(in_O(sq, lin, SearchGrid::standard(), 1024).status, Status::Refuted);
  // On the short prefix the standard grid still contains a constant that works.
  auto prefix = in_O(sq, lin, SearchGrid::standard(), 64);
  EXPECT_EQ(prefix.status, Status::Certified);
  EXPECT_EQ(prefix.c, 64);
}

TEST(Asymptotic, LogIsNotOmegaOfLinear) {
  auto w = in_Omega(expr("log2(n)"), expr("n"), SearchGrid::standard(), 1024);
  EXPECT_EQ(w.status, Status::Refuted);
}

TEST(Asymptotic, InfinityConventions) {
  std::vector<Interval> f{0, 1, Interval::infinity(), 3};
  std::vector<Interval> g{0, 1, Interval::infinity(), 3};
  EXPECT_EQ(in_O(f, g, SearchGrid::standard()).status, Status::Certified);
  std::vector<Interval> h{0, 1, 2, 3};
  auto o = in_O(f, h, grid({1, 2}));
  EXPECT_EQ(o.status, Status::Certified);
  EXPECT_EQ(o.n0, 3U);
}

TEST(Asymptotic, Duality) {
  std::vector<mpq_class> cs{mpq_class(1, 4), mpq_class(1, 2), 1, 2, 4};
  std::vector<mpq_class> inv;
  for (const auto& c : cs) inv.push_back(1 / c);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    auto f = random_function(rng, 48).tabulate(48), g = random_function(rng, 48).tabulate(48);
    auto o = in_O(f, g, grid(cs));
    auto w = in_Omega(g, f, grid(inv));
    ASSERT_EQ(o.status, w.status);
    if (o.status == Status::Certified) {
      EXPECT_EQ(o.n0, w.n0);
      EXPECT_EQ(o.c, 1 / w.c);
    }
  }
}

TEST(Asymptotic, EmptyGridIsRejected) {
  SearchGrid g;
  EXPECT_THROW(in_O(expr("n"), expr("n"), g, 8), std::invalid_argument);
}

TEST(Asymptotic, UndecidedComparisonsGiveUnknown) {
  std::vector<Interval> f{0, Interval(ExtendedNonNeg(1), ExtendedNonNeg(3))};
  std::vector<Interval> g{0, 2};
  auto o = in_O(f, g, grid({1}));
  EXPECT_EQ(o.status, Status::Unknown);
  EXPECT_EQ(o.witness, 1U);
}

TEST(SeriesWeight, GeometricAndFlags) {
  auto w = series_weight(constant(1), 10);
  EXPECT_EQ(w.partial, Interval(mpq_class(1 - pow2(-10))));
  ASSERT_TRUE(w.tail_bound);
  EXPECT_EQ(*w.tail_bound, pow2(-10));
  EXPECT_FALSE(w.upper_unbounded);

  auto lin = series_weight(expr("n"), 10);
  // Σ_{n≤N} n 2^-n = 2 − (N + 2) 2^-N
  EXPECT_EQ(lin.partial, Interval(mpq_class(2 - mpq_class(12) * pow2(-10))));
  EXPECT_TRUE(lin.upper_unbounded);

  auto inf = series_weight(ComplexityFunction::constant(ExtendedNonNeg::infinity()), 4);
  EXPECT_TRUE(inf.partial.lo().is_infinite());
}

TEST(GrowthWitness, ViolationsAreErrors) {
  auto big = ComplexityFunction::from_expr(Expr::parse("pow(n, 70)"));
  EXPECT_NO_THROW(big(63));
  EXPECT_THROW(big(64), WitnessViolated);
  auto five = ComplexityFunction("five", [](std::uint64_t) { return Interval(5); }, BoundedWitness{4, 1});
  EXPECT_THROW(five(1), WitnessViolated);
}

TEST(ComplexityFunction, MemoizedAcrossThreads) {
  std::atomic<int> calls{0};
  ComplexityFunction f("counted", [&calls](std::uint64_t n) {
    ++calls;
    return Interval(static_cast<long>(n));
  });
  std::vector<Interval> got(64);
#pragma omp parallel for
  for (int k = 0; k < 64; ++k) got[k] = f(static_cast<std::uint64_t>(k % 8 + 1));
  for (int k = 0; k < 64; ++k) EXPECT_EQ(got[k], Interval(k % 8 + 1));
  EXPECT_LE(calls.load(), 64);
  int before = calls.load();
  for (std::uint64_t n = 1; n <= 8; ++n) f(n);
  EXPECT_EQ(calls.load(), before);
}
