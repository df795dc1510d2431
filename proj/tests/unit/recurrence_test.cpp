#include <gtest/gtest.h>

#include <random>

#include "kb/recurrence.hpp"
#include "kb/spec_io.hpp"

using namespace kb;
using namespace kb::rec;

namespace {

using ETable = Table<ExtendedNonNeg>;
using ITable = Table<Interval>;

ComplexityFunction table_fn(std::vector<long> values) {
  ITable t(values.size() + 1);
  for (std::size_t n = 0; n < values.size(); ++n) t[n + 1] = Interval(values[n]);
  return ComplexityFunction::from_table("t", std::move(t), Interval(1));
}

std::vector<Recurrence> all_fixtures() {
  return {mergesort(1), mergesort(mpq_class(1, 2)), divide_three_halves(1), hanoi(), fibonacci(), largetwo(),
          quicksort()};
}

ETable exact_table(const ComplexityFunction& f, std::uint64_t N) {
  ETable t(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) {
    Interval v = f(n);
    t[n] = v.lo();
  }
  return t;
}

std::uint64_t first_difference(const ETable& a, const ETable& b) {
  for (std::uint64_t n = 1; n < a.size(); ++n) {
    if (!(a[n] == b[n])) return n;
  }
  return 0;
}

}  // namespace

TEST(Functional, MergesortPoints) {
  auto r = mergesort(1);
  auto g = table_fn({9, 5, 7, 11});
  auto phi = apply(r, g);
  EXPECT_EQ(phi(4), Interval(12));  // 2 g(2) + 4/2
  EXPECT_EQ(phi(2), Interval(19));  // 2 g(1) + 1
  EXPECT_EQ(phi(1), Interval(1));
  EXPECT_EQ(phi(3), Interval::infinity());
  EXPECT_EQ(phi(6), Interval::infinity());
}

TEST(Functional, LinearPoints) {
  auto hn = apply(hanoi(), table_fn({4, 7, 2}));
  EXPECT_EQ(hn(3), Interval(15));
  EXPECT_EQ(hn(1), Interval(1));
  auto fib = apply(fibonacci(), table_fn({8, 6, 4, 3}));
  EXPECT_EQ(fib(4), Interval(11));
  EXPECT_EQ(fib(1), Interval(1));
  EXPECT_EQ(fib(2), Interval(1));
  auto lt = apply(largetwo(), table_fn({5, 5}));
  EXPECT_EQ(lt(2), Interval(7));
}

TEST(Functional, QuicksortPoints) {
  auto q = apply(quicksort(), table_fn({3, 5, 1}));
  EXPECT_EQ(q(3), Interval(mpq_class(22, 3)));  // 2/3 (3 + 5) + 2
  EXPECT_EQ(q(1), Interval(0));
  EXPECT_EQ(q(2), Interval(4));  // (2/2) 3 + 1
}

TEST(Functional, AnchorsArePreserved) {
  std::mt19937_64 rng(2);
  for (auto r : all_fixtures()) {
    r.prepare(40);
    for (int k = 0; k < 5; ++k) {
      auto f = random_member(r, 40, rng);
      auto phi = apply(r, f);
      for (std::uint64_t n = 1; n <= 40; ++n) {
        if (r.is_anchor(n)) EXPECT_EQ(phi(n), Interval(r.anchor_value(n))) << r.tag() << " n=" << n;
      }
    }
  }
}

TEST(Functional, WeightSums) {
  auto q = quicksort();
  q.prepare(512);
  EXPECT_FALSE(q.weights_depend_on_i());
  for (std::uint64_t n = 2; n <= 512; ++n) {
    mpq_class expect(2 * (n - 1), n);
    expect.canonicalize();
    EXPECT_EQ(q.weight_sum(n), expect);
    EXPECT_LE(q.weight_sum(n), 2);
  }
}

TEST(Functional, WeightSumExceededIsEager) {
  Probabilistic p;
  p.k = 2;
  p.base = {1};
  p.weights = WeightFn::from_expr(Expr::parse("1", true));
  p.K = 1;
  p.h = Driver::from_expr(Expr::parse("1"));
  Recurrence r(p);
  try {
    r.prepare(10);
    FAIL() << "expected WeightSumExceeded";
  } catch (const WeightSumExceeded& e) {
    EXPECT_EQ(e.n(), 3U);
    EXPECT_EQ(e.sum(), 2);
  }
}

TEST(Functional, InvalidParameters) {
  auto h = Driver::from_expr(Expr::parse("n"));
  EXPECT_THROW(Recurrence(DivideAndConquer{1, 1, 2, h}), InvalidSpec);
  EXPECT_THROW(Recurrence(DivideAndConquer{1, 2, 1, h}), InvalidSpec);
  EXPECT_THROW(Recurrence(DivideAndConquer{0, 2, 2, h}), InvalidSpec);
  EXPECT_THROW(Recurrence(Linear{{1}, {mpq_class(1, 2)}, h}), InvalidSpec);
  EXPECT_THROW(Recurrence(Linear{{1, 1}, {1}, h}), InvalidSpec);
  EXPECT_THROW(Driver::from_expr(Expr::parse("i + n", true)), InvalidSpec);
}

TEST(Oracle, SpotValues) {
  auto m = oracle_solve(mergesort(1), 8);
  EXPECT_EQ(m[1], ExtendedNonNeg(1));
  EXPECT_EQ(m[2], ExtendedNonNeg(3));
  EXPECT_EQ(m[4], ExtendedNonNeg(8));
  EXPECT_EQ(m[8], ExtendedNonNeg(20));
  EXPECT_TRUE(m[3].is_infinite());
  EXPECT_TRUE(m[6].is_infinite());

  auto hn = oracle_solve(hanoi(), 7);
  for (std::uint64_t n = 1; n <= 7; ++n) EXPECT_EQ(hn[n], ExtendedNonNeg((1L << n) - 1));

  auto fib = oracle_solve(fibonacci(), 9);
  std::vector<long> fv{1, 1, 3, 5, 9, 15, 25, 41, 67};
  for (std::uint64_t n = 1; n <= 9; ++n) EXPECT_EQ(fib[n], ExtendedNonNeg(fv[n - 1]));

  auto lt = oracle_solve(largetwo(), 6);
  for (std::uint64_t n = 1; n <= 6; ++n) EXPECT_EQ(lt[n], ExtendedNonNeg(static_cast<long>(2 * n - 1)));

  auto th = oracle_solve(divide_three_halves(1), 32);
  std::vector<long> tv{1, 5, 19, 65, 211, 665};
  for (std::size_t j = 0; j < tv.size(); ++j) EXPECT_EQ(th[1U << j], ExtendedNonNeg(tv[j]));
}

TEST(Oracle, MergesortClosedForm) {
  for (mpq_class c : {mpq_class(1), mpq_class(1, 2), mpq_class(3)}) {
    auto t = oracle_solve(mergesort(c), 1U << 12);
    for (long m = 0; m <= 12; ++m) {
      mpq_class expect = c * (1L << m) + (m == 0 ? mpq_class(0) : mpq_class(m * (1L << (m - 1))));
      EXPECT_EQ(t[1U << m], ExtendedNonNeg(expect)) << "m=" << m;
    }
  }
}

TEST(Oracle, QuicksortHarmonicForm) {
  auto t = oracle_solve(quicksort(), 64);
  mpq_class H = 0;
  for (std::uint64_t n = 1; n <= 64; ++n) {
    H += mpq_class(1, n);
    mpq_class expect = 2 * mpq_class(n + 1) * H - 4 * mpq_class(n);
    EXPECT_EQ(t[n], ExtendedNonNeg(expect)) << "n=" << n;
  }
}

TEST(Oracle, IsAFixedPoint) {
  for (auto r : all_fixtures()) {
    r.prepare(256);
    auto t = oracle_solve(r, 256);
    EXPECT_EQ(phi_step_serial(r, t), t) << r.tag();
    ITable ti(t.begin(), t.end());
    EXPECT_EQ(phi_step_parallel(r, ti), ti) << r.tag();
  }
}

TEST(Transform, MergesortToLinear) {
  auto lt = dc_to_linear(std::get<DivideAndConquer>(mergesort(1).family()));
  EXPECT_EQ(lt.b, 2U);
  const auto& lin = std::get<Linear>(lt.linear.family());
  EXPECT_EQ(lin.k(), 1U);
  EXPECT_EQ(lin.base[0], 1);
  EXPECT_EQ(lin.coeffs[0], 2);
  for (std::uint64_t m = 2; m <= 12; ++m) EXPECT_EQ(lt.linear.h(m), pow2(static_cast<long>(m) - 2));
  EXPECT_EQ(lt.to_dc_index(1), 1U);
  EXPECT_EQ(lt.to_dc_index(5), 16U);
  EXPECT_EQ(lt.to_linear_index(16), 5U);
  EXPECT_FALSE(lt.to_linear_index(12));
}

TEST(Transform, SolutionsAgreeAcrossTheBijection) {
  for (auto r : {mergesort(1), mergesort(mpq_class(5, 2)), divide_three_halves(1)}) {
    auto lt = dc_to_linear(std::get<DivideAndConquer>(r.family()));
    auto s = oracle_solve(lt.linear, 12);
    auto t = oracle_solve(r, lt.to_dc_index(12));
    for (std::uint64_t m = 1; m <= 12; ++m) EXPECT_EQ(s[m], t[lt.to_dc_index(m)]) << r.tag() << " m=" << m;
  }
}

TEST(BottomElement, QuicksortGh) {
  auto q = quicksort();
  auto g = bottom_element(q);
  EXPECT_EQ(g(5), Interval(4));
  EXPECT_EQ(g(1), Interval(0));
  q.prepare(256);
  EXPECT_EQ(leq_prefix(g, apply(q, g), 256).status, Status::Certified);
}

TEST(BottomElement, BelowEveryImage) {
  std::mt19937_64 rng(8);
  for (auto r : all_fixtures()) {
    r.prepare(64);
    auto g = bottom_element(r);
    for (int k = 0; k < 5; ++k) {
      auto f = random_member(r, 64, rng);
      EXPECT_EQ(leq_prefix(g, apply(r, f), 64).status, Status::Certified) << r.tag();
    }
  }
}

TEST(Kernels, ParallelMatchesSerial) {
  std::mt19937_64 rng(13);
  for (auto r : all_fixtures()) {
    const std::uint64_t N = 200;
    r.prepare(N);
    for (int k = 0; k < 3; ++k) {
      auto f = random_member(r, N, rng);
      ITable x = f.tabulate(N);
      EXPECT_EQ(phi_step_parallel(r, x), phi_step_serial(r, x)) << r.tag();
      ETable e = exact_table(f, N);
      EXPECT_EQ(phi_step_parallel(r, e), phi_step_serial(r, e)) << r.tag();
    }
  }
}

TEST(Kernels, FrontierCopyMatchesFullRecompute) {
  std::mt19937_64 rng(19);
  for (auto r : all_fixtures()) {
    const std::uint64_t N = 128;
    r.prepare(N);
    ETable prev = exact_table(bottom_element(r), N);
    for (int step = 0; step < 6; ++step) {
      ETable x = phi_step_serial(r, prev);
      std::uint64_t d = first_difference(prev, x);
      if (d == 0) break;
      EXPECT_EQ(phi_step_parallel(r, x, d), phi_step_serial(r, x)) << r.tag() << " step " << step;
      prev = x;
    }
  }
}

TEST(Kernels, MonotoneOnRandomPairs) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> bump(0, 5);
  for (auto r : all_fixtures()) {
    const std::uint64_t N = 64;
    r.prepare(N);
    for (int k = 0; k < 10; ++k) {
      ETable f = exact_table(random_member(r, N, rng), N);
      ETable g = f;
      for (std::uint64_t n = 1; n <= N; ++n) g[n] += ExtendedNonNeg(bump(rng));
      ETable pf = phi_step_serial(r, f), pg = phi_step_serial(r, g);
      for (std::uint64_t n = 1; n <= N; ++n) EXPECT_LE(pf[n], pg[n]) << r.tag() << " n=" << n;
    }
  }
}

TEST(Contraction, MergesortHalf) {
  auto r = mergesort(1);
  EXPECT_EQ(*r.contraction_constant(), mpq_class(1, 2));
  auto rep = contraction_check(r, sample_pairs(r, 100, 64, 7), 64);
  EXPECT_EQ(rep.pairs, 100U);
  EXPECT_EQ(rep.violations, 0U);
  ASSERT_TRUE(rep.worst_ratio);
  EXPECT_LE(*rep.worst_ratio, mpq_class(1, 2));
}

TEST(Contraction, FibonacciThreeQuarters) {
  auto r = fibonacci();
  EXPECT_EQ(*r.contraction_constant(), mpq_class(3, 4));
  auto rep = contraction_check(r, sample_pairs(r, 100, 64, 7), 64);
  EXPECT_EQ(rep.violations, 0U);
  ASSERT_TRUE(rep.worst_ratio);
  EXPECT_LE(*rep.worst_ratio, mpq_class(3, 4));
  EXPECT_EQ(*hanoi().contraction_constant(), mpq_class(1, 4));
  EXPECT_FALSE(quicksort().contraction_constant());
}

TEST(Contraction, EqualPairs) {
  auto r = mergesort(1);
  std::mt19937_64 rng(1);
  auto f = random_member(r, 32, rng);
  auto rep = contraction_check(r, {{f, f}}, 32);
  EXPECT_EQ(rep.violations, 0U);
  EXPECT_FALSE(rep.worst_ratio);
}

TEST(Sampling, SeededPairsAreReproducible) {
  auto r = fibonacci();
  auto a = sample_pairs(r, 4, 16, 99), b = sample_pairs(r, 4, 16, 99);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].first.tabulate(16), b[k].first.tabulate(16));
    EXPECT_EQ(a[k].second.tabulate(16), b[k].second.tabulate(16));
  }
}
