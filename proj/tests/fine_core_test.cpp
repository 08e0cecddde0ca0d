#include <gtest/gtest.h>

#include "generators.hpp"

using namespace finefn;

namespace {

const RationalFunction q = var_fn(Var::q), a = var_fn(Var::a), b = var_fn(Var::b), t = var_fn(Var::t);
const RationalFunction one(1);

}  // namespace

TEST(FineN, Small) {
  EXPECT_EQ(fine_N(0), one);
  EXPECT_EQ(fine_N(1), one + (one - q) * (one - a * q) * t / ((one - b * q) * (one - t)));
  EXPECT_THROW(fine_N(-1), std::invalid_argument);
}

TEST(FineN, BEqualsOne) {
  for (int N = 0; N <= 6; ++N)
    EXPECT_EQ(fine_N(N).substitute(Var::b, one), qpoch(a * t * q, N) / qpoch(t, N)) << "N=" << N;
}

TEST(FineN, PointMatchesSymbolic) {
  std::mt19937_64 rng(5);
  for (int N = 0; N <= 5; ++N) {
    RationalFunction f = fine_N(N);
    for (int i = 0; i < 5; ++i) {
      Point p = gen::point(rng);
      try {
        ASSERT_EQ(f.eval_at(p), fine_value(N, at_point(p)));
      } catch (const DivisionByZero&) {
      } catch (const PoleError&) {
      }
    }
  }
}

TEST(AndrewsBell, Small) {
  EXPECT_EQ(andrews_bell_F(0), one);
  EXPECT_EQ(andrews_bell_F(1), one + (one - a * q) * t / (one - b * q));
}

TEST(R1N, DefinitionUnrolled) {
  RationalFunction expected = (one - (b - a * t * q) / (one - t)) +
                              (one - a * q) / (one - b * q) * t * (one - (b - a * t * q) * q / (one - t)) +
                              (b - one) / (one - t);
  EXPECT_EQ(r1N(1), expected);
  EXPECT_THROW(r1N(0), std::invalid_argument);
}

TEST(R1N, FunctionalEquationWithShiftedTail) {
  // F(a,b,t,N) = (1-atq)/(1-t) + (1-aq)(b-atq)tq/((1-bq)(1-t)) F(aq,bq,tq,N-1) + R_(1,N)
  for (int N = 1; N <= 5; ++N) {
    RationalFunction tail = andrews_bell_value(N - 1, a * q, b * q, t * q, q);
    RationalFunction rhs = (one - a * t * q) / (one - t) +
                           (one - a * q) * (b - a * t * q) * t * q / ((one - b * q) * (one - t)) * tail + r1N(N);
    EXPECT_EQ(andrews_bell_F(N), rhs) << "N=" << N;
  }
  // same F on both sides does not balance
  RationalFunction same = andrews_bell_F(1) * (one - t * q * (one - a * q) * (b - a * t * q) / ((one - b * q) * (one - t))) -
                          (one - a * t * q) / (one - t);
  EXPECT_NE(r1N(1), same);
}

TEST(Phi32, ZeroTerms) {
  Phi32Spec<RationalFunction> s{{a, b, t}, {a * q, b * q}, t, 0};
  EXPECT_EQ(phi32(s), one);
}

TEST(Phi32, BridgeToFineN) {
  for (int N = 0; N <= 6; ++N) EXPECT_EQ(phi32(fine_phi32_spec(N, symbols(), N)), fine_N(N)) << "N=" << N;
}

TEST(Phi32, TerminatesPastN) {
  for (int N = 0; N <= 5; ++N)
    EXPECT_EQ(phi32(fine_phi32_spec(N, symbols(), N + 3)), phi32(fine_phi32_spec(N, symbols(), N)));
}

TEST(Phi32, VanishingLowerParameter) {
  // (q^-1; q)_2 = 0 in the denominator with a nonzero numerator
  Phi32Spec<RationalFunction> s{{a, b, t}, {one / q, b}, t, 2};
  EXPECT_THROW(phi32(s), IdenticallyZeroDenominator);
}

TEST(PartialFraction, Examples) {
  EXPECT_EQ(partial_fraction_rhs(0), one);
  for (int N = 0; N <= 5; ++N) EXPECT_EQ(partial_fraction_rhs(N), fine_N(N)) << "N=" << N;
}

TEST(PartialFraction, ClearedProductAtAZero) {
  // prod_(k<n) (a - b q^k) at a = 0 is (-b)^n q^(n(n-1)/2)
  for (int n = 0; n <= 5; ++n) {
    RationalFunction cleared = one;
    for (int k = 0; k < n; ++k) cleared = cleared * (a - b * ipow(q, k));
    EXPECT_EQ(cleared.substitute(Var::a, RationalFunction(0)), ipow(-b, n) * triangular_q_power(n));
  }
  for (int N = 0; N <= 4; ++N)
    EXPECT_EQ(partial_fraction_value(N, RationalFunction(0), b, t, q), fine_N(N).substitute(Var::a, RationalFunction(0)));
}

TEST(RogersFine, BEqualsT) {
  RationalFunction lhs = fine_N(1).substitute(Var::b, t);
  RationalFunction rhs = rogers_fine_finite_rhs(1).substitute(Var::b, t);
  EXPECT_EQ(lhs, rhs);
}

TEST(RogersFine, MatchesFineN) {
  for (int N = 1; N <= 5; ++N) EXPECT_EQ(rogers_fine_finite_rhs(N), fine_N(N)) << "N=" << N;
}

TEST(RogersFine, ZeroUsesReciprocalConvention) {
  // (atq^2)_(-1) = 1 / (1 - atq) makes the N = 0 instance hold.
  EXPECT_EQ(rogers_fine_finite_rhs(0), fine_N(0));
}

TEST(Properties, TailOfAndrewsBellIsHighOrderInT) {
  // Below q^N both truncations agree with each other up to t^(N+1).
  for (int N = 1; N <= 8; ++N) {
    TruncatedQSeries d = series_from_ratfunc(fine_N(N) - andrews_bell_F(N), N);
    for (int k = 0; k < N; ++k) {
      const RationalFunction& c = d.coeff(k);
      ASSERT_GE(c.integer_numerator().min_degree(Var::t), static_cast<unsigned>(N + 1)) << N << " q^" << k;
      ASSERT_EQ(c.integer_denominator().min_degree(Var::t), 0u);
    }
  }
}

TEST(Properties, DenominatorDivides) {
  for (int N = 0; N <= 8; ++N) {
    RationalFunction f = fine_N(N);
    RationalFunction bound = qpoch(b * q, N) * qpoch(t, N);
    RationalFunction ratio = bound / RationalFunction(f.denominator());
    EXPECT_TRUE(ratio.is_polynomial()) << "N=" << N << ": " << ratio.str();
  }
}

TEST(Properties, TZeroGivesOne) {
  for (int N = 0; N <= 10; ++N) EXPECT_EQ(fine_N(N).substitute(Var::t, RationalFunction(0)), one) << "N=" << N;
}

TEST(Properties, TOneLimit) {
  for (int N = 1; N <= 8; ++N) {
    RationalFunction lhs = ((one - t) * fine_N(N)).substitute(Var::t, one);
    EXPECT_EQ(lhs, (one - ipow(q, N)) * qpoch(a * q, N) / qpoch(b * q, N)) << "N=" << N;
  }
}
