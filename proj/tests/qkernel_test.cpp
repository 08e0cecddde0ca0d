#include <gtest/gtest.h>

#include "generators.hpp"

using namespace finefn;

namespace {

const RationalFunction q = var_fn(Var::q), a = var_fn(Var::a), b = var_fn(Var::b), t = var_fn(Var::t);
const RationalFunction one(1);

RationalFunction qp(int e) { return RationalFunction(var_poly(Var::q, static_cast<unsigned>(e))); }

}  // namespace

TEST(QPoch, EmptyProduct) {
  EXPECT_EQ(qpoch(a * q, 0), one);
  EXPECT_EQ(qpoch(t, 0, 3), one);
}

TEST(QPoch, Unrolled) { EXPECT_EQ(qpoch(a * q, 2), (one - a * q) * (one - a * q * q)); }

TEST(QPoch, MixedBase) {
  // r = 2, m = 3
  EXPECT_EQ(qpoch(qp(2), 3, 3), (one - qp(2)) * (one - qp(5)) * (one - qp(8)));
}

TEST(QPoch, NegativeLengthIsReciprocal) {
  EXPECT_EQ(qpoch(a, -1, q), one / (one - a / q));
  EXPECT_EQ(qpoch(a, -2, q) * qpoch(a / (q * q), 2, q), one);
}

TEST(QBinom, Small) {
  const Polynomial pq = var_poly(Var::q);
  EXPECT_EQ(qbinom(2, 1), Polynomial(1) + pq);
  EXPECT_EQ(qbinom(4, 2).str(), "1 + q + 2*q^2 + q^3 + q^4");
  for (int N = 0; N <= 6; ++N) EXPECT_EQ(qbinom(N, 0), Polynomial(1));
  EXPECT_TRUE(qbinom(3, 4).is_zero());
  EXPECT_TRUE(qbinom(3, -1).is_zero());
}

TEST(QBinom, BaseQm) {
  // [3,1] in base q^2 is 1 + q^2 + q^4
  EXPECT_EQ(qbinom(3, 1, 2), Polynomial(1) + var_poly(Var::q, 2) + var_poly(Var::q, 4));
}

TEST(QBinom, EvaluatedAtPoint) {
  EXPECT_EQ(qbinom_at(4, 2, Rational(2)), Rational(1 + 2 + 8 + 8 + 16));
  EXPECT_EQ(qbinom_at(4, 2, q), RationalFunction(qbinom(4, 2)));
}

TEST(ElemShift, Examples) {
  EXPECT_TRUE(check_elem_shift(0, 0, a));
  EXPECT_TRUE(check_elem_shift(3, 2, b));
  EXPECT_TRUE(check_elem_shift(5, 5, t));
  EXPECT_THROW(check_elem_shift(2, 3, a), std::invalid_argument);
}

TEST(Gr11, Examples) {
  EXPECT_TRUE(check_gr11(a, b, 3, 0));
  EXPECT_TRUE(check_gr11(t, q, 4, 2));
  EXPECT_TRUE(check_gr11(b, q, 5, 3));
}

TEST(Properties, QPochRecurrence) {
  const std::vector<RationalFunction> bases{a, a * q, b * t, t / q, a * b * q * q};
  for (const auto& A : bases)
    for (int m = 1; m <= 3; ++m)
      for (int n = 0; n <= 12; ++n)
        ASSERT_EQ(qpoch(A, n + 1, m), qpoch(A, n, m) * (one - A * qp(m * n))) << A.str() << " n=" << n;
}

TEST(Properties, QBinomSymmetryPositivityDegree) {
  for (int N = 0; N <= 10; ++N)
    for (int n = 0; n <= N; ++n) {
      Polynomial p = qbinom(N, n);
      ASSERT_EQ(p, qbinom(N, N - n));
      ASSERT_EQ(p.degree(Var::q), static_cast<unsigned>(n * (N - n)));
      for (const auto& term : p.terms()) ASSERT_GT(term.coeff.sign(), 0);
    }
}

TEST(Properties, QPascal) {
  const Polynomial pq = var_poly(Var::q);
  for (int N = 2; N <= 10; ++N)
    for (int n = 1; n <= N - 1; ++n)
      ASSERT_EQ(qbinom(N, n), qbinom(N - 1, n - 1) + var_poly(Var::q, static_cast<unsigned>(n)) * qbinom(N - 1, n))
          << N << "," << n;
}

TEST(Properties, QBinomAtOneIsBinomial) {
  auto binom = [](int N, int n) {
    long r = 1;
    for (int k = 1; k <= n; ++k) r = r * (N - n + k) / k;
    return r;
  };
  for (int N = 0; N <= 10; ++N)
    for (int n = 0; n <= N; ++n) ASSERT_EQ(qbinom_at(N, n, Rational(1)), Rational(binom(N, n)));
}

TEST(Properties, ElementaryGrid) {
  std::mt19937_64 rng(3);
  std::vector<RationalFunction> cs{a, b, t, a * b};
  for (int k = 0; k < 3; ++k) {
    // random monomials free of q and t
    std::uniform_int_distribution<int> e(1, 2);
    cs.push_back(ipow(a, e(rng)) * ipow(b, e(rng) - 1) * RationalFunction(gen::nonzero_rational(rng, 3)));
  }
  for (int N = 0; N <= 8; ++N)
    for (int n = 0; n <= N; ++n)
      for (const auto& c : cs) ASSERT_TRUE(check_elem_shift(N, n, c)) << N << " " << n << " " << c.str();
}

TEST(Properties, Gr11Grid) {
  const std::vector<std::pair<RationalFunction, RationalFunction>> subs{
      {t, q}, {b, q}, {a, b}, {a * b, t}, {t, a * b}, {a, t}};
  for (int N = 0; N <= 8; ++N)
    for (int n = 0; n <= N; ++n)
      for (const auto& [x, y] : subs) ASSERT_TRUE(check_gr11(x, y, N, n)) << N << " " << n << " " << x.str();
}
