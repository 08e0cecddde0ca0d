#include <gtest/gtest.h>

#include "generators.hpp"

using namespace finefn;

namespace {

const RationalFunction q = var_fn(Var::q), a = var_fn(Var::a), b = var_fn(Var::b), t = var_fn(Var::t);
const RationalFunction one(1);

TruncatedQSeries random_series(std::mt19937_64& rng, int D) {
  std::vector<RationalFunction> cs;
  for (int k = 0; k <= D; ++k) {
    // coefficients in a, b, t only
    RationalFunction c = gen::ratfunc(rng, 2, 1);
    cs.push_back(c.substitute(Var::q, RationalFunction(gen::nonzero_rational(rng, 3))));
  }
  return TruncatedQSeries(D, cs);
}

}  // namespace

TEST(SeriesFromRatfunc, ConstantInQ) {
  TruncatedQSeries s = series_from_ratfunc(one / (one - t), 4);
  EXPECT_EQ(s, TruncatedQSeries::constant(4, one / (one - t)));
}

TEST(SeriesFromRatfunc, Geometric) {
  TruncatedQSeries s = series_from_ratfunc(one / (one - t * q), 5);
  for (int k = 0; k <= 5; ++k) EXPECT_EQ(s.coeff(k), ipow(t, k));
}

TEST(SeriesFromRatfunc, PoleAtQZero) {
  EXPECT_THROW(series_from_ratfunc(one / q, 3), NonInvertibleAtQZero);
}

TEST(SeriesFromRatfunc, FineThreeLeadingCoefficient) {
  TruncatedQSeries s = series_from_ratfunc(fine_N(3), 3);
  EXPECT_EQ(s.coeff(0), one / (one - t));
  EXPECT_EQ(s.coeff(0), fine_series(3).coeff(0));
}

TEST(QPochInf, Examples) {
  EXPECT_EQ(qpoch_inf(q, 2).str(), "1 - q - q^2 + O(q^3)");
  EXPECT_EQ(qpoch_inf(a * q, 1), series_from_ratfunc(one - a * q, 1));
  EXPECT_EQ(qpoch_inf(t, 0).coeff(0), one - t);
  EXPECT_THROW(qpoch_inf(a / q, 3), NegativeQDegree);
}

TEST(QPochInf, EulerPentagonal) {
  TruncatedQSeries e = qpoch_inf(q, 12);
  std::vector<int> expected(13, 0);
  for (int k : {0, 5, 7}) expected[static_cast<std::size_t>(k)] = 1;
  for (int k : {1, 2, 12}) expected[static_cast<std::size_t>(k)] = -1;
  for (int k = 0; k <= 12; ++k) EXPECT_EQ(e.coeff(k), RationalFunction(expected[static_cast<std::size_t>(k)])) << k;
}

TEST(QPochInf, PartitionCounts) {
  // 1/(q)_inf generates partition numbers
  TruncatedQSeries p = qpoch_inf(q, 10).inverse();
  const int partitions[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (int k = 0; k <= 10; ++k) EXPECT_EQ(p.coeff(k), RationalFunction(partitions[k]));
}

TEST(FineSeries, ConstantTerm) { EXPECT_EQ(fine_series(5).coeff(0), one / (one - t)); }

TEST(FineSeries, BEqualsOne) {
  const int D = 6;
  TruncatedQSeries lhs = fine_series(D).substitute(Var::b, one);
  TruncatedQSeries rhs = qpoch_inf(a * t * q, D) / qpoch_inf(t, D);
  EXPECT_EQ(lhs, rhs);
}

TEST(FineSeries, TZero) {
  EXPECT_EQ(fine_series(6).substitute(Var::t, RationalFunction(0)), TruncatedQSeries::constant(6, one));
}

TEST(Limits, Examples) {
  EXPECT_EQ(verify_limit("L43", 6).outcome, Outcome::pass);
  EXPECT_EQ(verify_limit("L41", 0).outcome, Outcome::pass);
  EXPECT_EQ(verify_limit("LRF", 6).outcome, Outcome::pass);
  EXPECT_THROW(verify_limit("L99", 2), std::invalid_argument);
}

TEST(Limits, EveryIdAtSmallOrders) {
  for (const auto& id : limit_ids())
    for (int D = 0; D <= 4; ++D) {
      auto r = verify_limit(id, D);
      EXPECT_EQ(r.outcome, Outcome::pass) << id << " D=" << D << " " << r.witness;
      EXPECT_EQ(r.record().find("mode=series params=D=" + std::to_string(D)) != std::string::npos, true);
    }
}

TEST(Limits, BrokenRightSideIsCaught) {
  auto [lhs, rhs] = limit_sides("L43", 4);
  EXPECT_FALSE((lhs - rhs * series_from_ratfunc(one + q, 4)).is_zero());
}

TEST(Stabilization, Examples) {
  EXPECT_TRUE(stabilization_check(8, 4));
  EXPECT_TRUE(stabilization_check(1, 0));
  EXPECT_THROW(stabilization_check(0, 0), ConstraintViolation);
  EXPECT_THROW(stabilization_check(3, 4), ConstraintViolation);
}

TEST(Stabilization, WindowIsNMinusOne) {
  for (int N = 1; N <= 6; ++N) {
    EXPECT_EQ(stabilization_window(N, N + 1), N - 1) << "N=" << N;
    EXPECT_TRUE(stabilization_check(N, N - 1));
    EXPECT_FALSE(stabilization_check(N, N));
  }
}

TEST(Stabilization, DirectRouteAgrees) {
  for (int N = 2; N <= 6; ++N)
    for (int D = 0; D < N; ++D) EXPECT_EQ(stabilization_check_direct(N, D), stabilization_check(N, D));
  EXPECT_TRUE(stabilization_check_direct(20, 8));
}

TEST(Properties, RingLaws) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 25; ++i) {
    TruncatedQSeries x = random_series(rng, 3), y = random_series(rng, 3), z = random_series(rng, 3);
    ASSERT_EQ((x + y) + z, x + (y + z));
    ASSERT_EQ((x * y) * z, x * (y * z));
    ASSERT_EQ(x * (y + z), x * y + x * z);
    ASSERT_EQ(x * y, y * x);
    if (!x.coeff(0).is_zero()) {
      ASSERT_EQ(x * x.inverse(), scalar_like(x, Rational(1)));
    }
  }
}

TEST(Properties, TruncationCoherence) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const int D = 4, Dp = 2;
    TruncatedQSeries x = random_series(rng, D), y = random_series(rng, D);
    TruncatedQSeries xs = x.truncated(Dp), ys = y.truncated(Dp);
    ASSERT_EQ((x + y).truncated(Dp), xs + ys);
    ASSERT_EQ((x * y).truncated(Dp), xs * ys);
    if (!y.coeff(0).is_zero()) {
      ASSERT_EQ((x / y).truncated(Dp), xs / ys);
    }
  }
  for (int D = 1; D <= 5; ++D) {
    ASSERT_EQ(fine_series(D).truncated(D - 1), fine_series(D - 1));
    ASSERT_EQ(qpoch_inf(a * q, D).truncated(D - 1), qpoch_inf(a * q, D - 1));
    ASSERT_EQ(series_from_ratfunc(fine_N(3), D).truncated(D - 1), series_from_ratfunc(fine_N(3), D - 1));
  }
}

TEST(Properties, Telescoping) {
  const std::vector<RationalFunction> As{q, a * q, b * q * q, a * t * q, t * q * q * q};
  for (const auto& A : As)
    for (int D = 0; D <= 6; ++D) {
      TruncatedQSeries lhs = qpoch_inf(A * q, D) * series_from_ratfunc(one - A, D);
      ASSERT_EQ(lhs, qpoch_inf(A, D)) << A.str() << " D=" << D;
    }
}

TEST(Properties, OracleTriangle) {
  for (int D = 0; D <= 6; ++D) {
    int N = D + 1;
    auto x = series_symbols(D);
    TruncatedQSeries rf = rogers_fine_value(N, x.a, x.b, x.t, x.q);
    ASSERT_EQ(rf, fine_series(D)) << "D=" << D;
    if (D <= 4) {
      ASSERT_EQ(series_from_ratfunc(rogers_fine_finite_rhs(N + 2), D), fine_series(D)) << "D=" << D;
    }
  }
}

TEST(QSeries, Printing) {
  EXPECT_EQ(qpoch_inf(q, 6).str(), "1 - q - q^2 + q^5 + O(q^7)");
  EXPECT_EQ(TruncatedQSeries(2).str(), "0 + O(q^3)");
}
