#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "finefn/rational_function.hpp"

namespace finefn {

/// (A; base)_n = (1 - A)(1 - A base) ... (1 - A base^(n-1)) in any field K.
/// n = 0 gives 1. Negative n follows the reciprocal convention
/// (A; base)_(-n) = 1 / ((1 - A/base) ... (1 - A/base^n)).
template <class K>
K qpoch(const K& A, int n, const K& base) {
  K one = scalar_like(A, Rational(1));
  K acc = one;
  if (n >= 0) {
    K shifted = A;
    for (int k = 0; k < n; ++k) {
      acc = acc * (one - shifted);
      if (k + 1 < n) shifted = shifted * base;
    }
    return acc;
  }
  K shifted = A / base;
  for (int k = 1; k <= -n; ++k) {
    acc = acc * (one - shifted);
    if (k < -n) shifted = shifted / base;
  }
  return one / acc;
}

/// Mixed-base q-Pochhammer over the rational functions: prod (1 - A q^(m k)).
inline RationalFunction qpoch(const RationalFunction& A, int n, int m = 1) {
  if (m < 1) throw std::invalid_argument("qpoch base exponent must be positive");
  return qpoch(A, n, RationalFunction(var_poly(Var::q, static_cast<unsigned>(m))));
}

/// Gaussian binomial in q with base q^m, computed as
/// (q^m;q^m)_N / ((q^m;q^m)_n (q^m;q^m)_(N-n)); zero outside 0 <= n <= N.
inline Polynomial qbinom(int N, int n, int m = 1) {
  if (m < 1) throw std::invalid_argument("qbinom base exponent must be positive");
  if (N < 0 || n < 0 || n > N) return {};
  auto falling = [m](int len) {
    Polynomial acc(1);
    for (int k = 1; k <= len; ++k)
      acc = acc * (Polynomial(1) - var_poly(Var::q, static_cast<unsigned>(m * k)));
    return acc;
  };
  auto quotient = falling(N).divide_exact(falling(n) * falling(N - n));
  if (!quotient) throw InternalError("q-binomial division left a remainder");
  return *quotient;
}

namespace detail {

/// Integer coefficients of qbinom(N, n) in q, lowest degree first. Cached.
inline const std::vector<Integer>& qbinom_coefficients(int N, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Integer>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({N, n});
  if (inserted) {
    Polynomial p = qbinom(N, n);
    std::vector<Integer> cs(p.degree(Var::q) + 1);
    for (const auto& t : p.terms()) cs[t.mono.exponent(Var::q)] = t.coeff.numerator();
    it->second = std::move(cs);
  }
  return it->second;
}

}  // namespace detail

/// Gaussian binomial [N, n] evaluated with `base` in place of q.
template <class K>
K qbinom_at(int N, int n, const K& base) {
  if (N < 0 || n < 0 || n > N) return scalar_like(base, Rational(0));
  const auto& cs = detail::qbinom_coefficients(N, n);
  K acc = scalar_like(base, Rational(cs.back()));
  for (std::size_t i = cs.size() - 1; i-- > 0;)
    acc = acc * base + scalar_like(base, Rational(cs[i]));
  return acc;
}

/// Integer power, negative exponents through division.
template <class K>
K ipow(const K& x, int e) {
  K one = scalar_like(x, Rational(1));
  if (e < 0) return one / ipow(x, -e);
  K r = one, b = x;
  for (unsigned k = static_cast<unsigned>(e); k; k >>= 1) {
    if (k & 1) r = r * b;
    if (k > 1) b = b * b;
  }
  return r;
}

/// q^(n(n-1)/2).
inline RationalFunction triangular_q_power(int n) {
  return RationalFunction(var_poly(Var::q, static_cast<unsigned>(n * (n - 1) / 2)));
}

/// Checks (q^-N / c)_n = (-1)^n (c q^(N-n+1))_n q^(n(n-1)/2) / (c^n q^(N n)).
inline bool check_elem_shift(int N, int n, const RationalFunction& c) {
  if (N < 0 || n < 0 || n > N) throw std::invalid_argument("check_elem_shift needs 0 <= n <= N");
  const RationalFunction q = var_fn(Var::q);
  RationalFunction lhs = qpoch(ipow(q, -N) / c, n);
  RationalFunction rhs = ipow(RationalFunction(-1), n) * qpoch(c * ipow(q, N - n + 1), n) *
                         triangular_q_power(n) / (ipow(c, n) * ipow(q, N * n));
  return lhs == rhs;
}

/// Checks the finite reversal identity
/// (b)_N (a)_(N-n) a^n / ((a)_N (b)_(N-n) b^n) = (q^(1-N)/b)_n / (q^(1-N)/a)_n.
inline bool check_gr11(const RationalFunction& a, const RationalFunction& b, int N, int n) {
  if (N < 0 || n < 0 || n > N) throw std::invalid_argument("check_gr11 needs 0 <= n <= N");
  const RationalFunction q = var_fn(Var::q);
  try {
    RationalFunction lhs = qpoch(b, N) * qpoch(a, N - n) * ipow(a, n) /
                           (qpoch(a, N) * qpoch(b, N - n) * ipow(b, n));
    RationalFunction rhs = qpoch(ipow(q, 1 - N) / b, n) / qpoch(ipow(q, 1 - N) / a, n);
    return lhs == rhs;
  } catch (const DivisionByZero& e) {
    throw IdenticallyZeroDenominator(std::string("check_gr11: ") + e.what());
  }
}

}  // namespace finefn
