#pragma once

#include <array>
#include <string>
#include <type_traits>

#include "finefn/qkernel.hpp"

namespace finefn {

/// Values for q, a, b, t in a field K. Every series constructor below is a
/// template over K, so the same code builds exact rational functions,
/// exact values at a rational point, or truncated q-expansions.
template <class K>
struct Args {
  K q, a, b, t;

  K one() const { return scalar_like(q, Rational(1)); }
  K constant(const Rational& r) const { return scalar_like(q, r); }
};

/// q, a, b, t as symbols.
inline Args<RationalFunction> symbols() {
  return {var_fn(Var::q), var_fn(Var::a), var_fn(Var::b), var_fn(Var::t)};
}

/// q, a, b, t at a rational point.
inline Args<Rational> at_point(const Point& p) {
  return {p[index_of(Var::q)], p[index_of(Var::a)], p[index_of(Var::b)], p[index_of(Var::t)]};
}

/// Finite Fine function
///   F_N(a, b; t) = sum_n [N, n] (aq)_n (t)_(N-n) (q)_n t^n / ((bq)_n (t)_N).
template <class K>
K fine_value(int N, const K& a, const K& b, const K& t, const K& q) {
  K sum = scalar_like(q, Rational(0));
  K tN = qpoch(t, N, q);
  for (int n = 0; n <= N; ++n) {
    K num = qbinom_at(N, n, q) * qpoch(a * q, n, q) * qpoch(t, N - n, q) * qpoch(q, n, q) * ipow(t, n);
    sum = sum + num / (qpoch(b * q, n, q) * tN);
  }
  return sum;
}

template <class K>
K fine_value(int N, const Args<K>& x) {
  return fine_value(N, x.a, x.b, x.t, x.q);
}

/// Andrews-Bell truncation F(a, b, t, N) = sum_(n<=N) (aq)_n t^n / (bq)_n.
template <class K>
K andrews_bell_value(int N, const K& a, const K& b, const K& t, const K& q) {
  K sum = scalar_like(q, Rational(0));
  for (int n = 0; n <= N; ++n) sum = sum + qpoch(a * q, n, q) * ipow(t, n) / qpoch(b * q, n, q);
  return sum;
}

/// Remainder term R_(1,N)(a, b, t) of the Andrews-Bell functional equation.
template <class K>
K r1n_value(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  K sum = scalar_like(q, Rational(0));
  for (int j = 0; j <= N; ++j) {
    K factor = one - (b - a * t * q) * ipow(q, j) / (one - t);
    sum = sum + qpoch(a * q, j, q) * ipow(t, j) / qpoch(b * q, j, q) * factor;
  }
  return sum + (b - one) / (one - t);
}

/// Terminating 3phi2 summed over n = 0..terms, whether or not an upper
/// parameter already forces the tail to vanish.
template <class K>
struct Phi32Spec {
  std::array<K, 3> upper;
  std::array<K, 2> lower;
  K argument;
  int terms = 0;
};

template <class K>
K phi32_value(const Phi32Spec<K>& s, const K& q) {
  K sum = scalar_like(q, Rational(0));
  for (int n = 0; n <= s.terms; ++n) {
    K num = qpoch(s.upper[0], n, q) * qpoch(s.upper[1], n, q) * qpoch(s.upper[2], n, q) *
            ipow(s.argument, n);
    if constexpr (std::is_same_v<K, RationalFunction>) {
      if (num.is_zero()) continue;
      K den = qpoch(q, n, q) * qpoch(s.lower[0], n, q) * qpoch(s.lower[1], n, q);
      if (den.is_zero())
        throw IdenticallyZeroDenominator("3phi2 denominator vanishes identically at n = " + std::to_string(n));
      sum = sum + num / den;
    } else {
      sum = sum + num / (qpoch(q, n, q) * qpoch(s.lower[0], n, q) * qpoch(s.lower[1], n, q));
    }
  }
  return sum;
}

/// Right side of the finite partial-fraction decomposition
///   (1 - t q^N) (aq)_N / (bq)_N sum_n [N, n] (b/a)_n (aq)_(N-n) (aq)^n / ((aq)_N (1 - t q^n)),
/// with (b/a)_n a^n written as prod_(k<n) (a - b q^k) so that a = 0 is a plain
/// substitution.
template <class K>
K partial_fraction_value(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  K aqN = qpoch(a * q, N, q);
  K sum = scalar_like(q, Rational(0));
  K cleared = one;  // prod_(k<n) (a - b q^k)
  for (int n = 0; n <= N; ++n) {
    if (n > 0) cleared = cleared * (a - b * ipow(q, n - 1));
    K num = qbinom_at(N, n, q) * cleared * qpoch(a * q, N - n, q) * ipow(q, n);
    sum = sum + num / (aqN * (one - t * ipow(q, n)));
  }
  return (one - t * ipow(q, N)) * aqN / qpoch(b * q, N, q) * sum;
}

/// Right side of the finite Rogers-Fine identity
///   (1 - t q^N) sum_n [N, n] (aq)_n (q)_n (atq/b)_n (atq^2)_(N-1) (tb)^n q^(n^2) (1 - a t q^(2n+1))
///                    / ((bq)_n (t)_(n+1) (atq^2)_(N+n)),
/// with (atq/b)_n b^n cleared to prod_(k<n) (b - a t q^(k+1)). At N = 0 the
/// factor (atq^2)_(-1) uses the reciprocal convention 1 / (1 - a t q).
template <class K>
K rogers_fine_value(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  K atq2 = a * t * q * q;
  K head = qpoch(atq2, N - 1, q);
  K sum = scalar_like(q, Rational(0));
  K cleared = one;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) cleared = cleared * (b - a * t * ipow(q, n));
    K num = qbinom_at(N, n, q) * qpoch(a * q, n, q) * qpoch(q, n, q) * cleared * head * ipow(t, n) *
            ipow(q, n * n) * (one - a * t * ipow(q, 2 * n + 1));
    sum = sum + num / (qpoch(b * q, n, q) * qpoch(t, n + 1, q) * qpoch(atq2, N + n, q));
  }
  return (one - t * ipow(q, N)) * sum;
}

// Symbolic constructors.

inline RationalFunction fine_N(int N) {
  if (N < 0) throw std::invalid_argument("fine_N needs N >= 0");
  return fine_value(N, symbols());
}

inline RationalFunction andrews_bell_F(int N) {
  if (N < 0) throw std::invalid_argument("andrews_bell_F needs N >= 0");
  auto x = symbols();
  return andrews_bell_value(N, x.a, x.b, x.t, x.q);
}

inline RationalFunction r1N(int N) {
  if (N < 1) throw std::invalid_argument("r1N needs N >= 1");
  auto x = symbols();
  return r1n_value(N, x.a, x.b, x.t, x.q);
}

inline RationalFunction phi32(const Phi32Spec<RationalFunction>& spec) {
  if (spec.terms < 0) throw std::invalid_argument("phi32 needs a nonnegative term count");
  return phi32_value(spec, var_fn(Var::q));
}

/// The 3phi2 with upper (q^-N, q, aq), lower (bq, q^(1-N)/t), argument q.
template <class K>
Phi32Spec<K> fine_phi32_spec(int N, const Args<K>& x, int terms) {
  return {{ipow(x.q, -N), x.q, x.a * x.q}, {x.b * x.q, ipow(x.q, 1 - N) / x.t}, x.q, terms};
}

inline RationalFunction partial_fraction_rhs(int N) {
  if (N < 0) throw std::invalid_argument("partial_fraction_rhs needs N >= 0");
  auto x = symbols();
  return partial_fraction_value(N, x.a, x.b, x.t, x.q);
}

inline RationalFunction rogers_fine_finite_rhs(int N) {
  if (N < 0) throw std::invalid_argument("rogers_fine_finite_rhs needs N >= 0");
  auto x = symbols();
  return rogers_fine_value(N, x.a, x.b, x.t, x.q);
}

}  // namespace finefn
