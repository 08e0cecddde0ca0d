#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finefn/monomial.hpp"
#include "finefn/rational.hpp"

namespace finefn {

namespace detail {

inline bool coeff_is_zero(const Integer& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(const Rational& c) { return c.is_zero(); }
inline int coeff_sign(const Integer& c) { return sgn(c); }
inline int coeff_sign(const Rational& c) { return c.sign(); }

inline bool coeff_divide(const Integer& x, const Integer& y, Integer& out) {
  if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t())) return false;
  mpz_divexact(out.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return true;
}
inline bool coeff_divide(const Rational& x, const Rational& y, Rational& out) {
  out = x / y;
  return true;
}

inline void coeff_addmul(Integer& acc, const Integer& x, const Integer& y) {
  mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}
inline void coeff_submul(Integer& acc, const Integer& x, const Integer& y) {
  mpz_submul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}
inline void coeff_addmul(Rational& acc, const Rational& x, const Rational& y) { acc += x * y; }
inline void coeff_submul(Rational& acc, const Rational& x, const Rational& y) { acc -= x * y; }

inline std::string coeff_str(const Integer& c) { return c.get_str(); }
inline std::string coeff_str(const Rational& c) { return c.str(); }

}  // namespace detail

/// Sparse multivariate polynomial in (q, a, b, t).
///
/// Terms are kept sorted by decreasing monomial in graded lex order
/// (q > a > b > t); no stored coefficient is zero.
template <class Coeff>
class basic_polynomial {
 public:
  struct Term {
    Monomial mono;
    Coeff coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  basic_polynomial() = default;
  basic_polynomial(const Coeff& c) {
    if (!detail::coeff_is_zero(c)) terms_.push_back({Monomial{}, c});
  }
  basic_polynomial(int c) : basic_polynomial(Coeff(c)) {}

  static basic_polynomial variable(Var v, unsigned e = 1) {
    return monomial(Monomial::of(v, e), Coeff(1));
  }

  static basic_polynomial monomial(Monomial m, const Coeff& c) {
    basic_polynomial p;
    if (!detail::coeff_is_zero(c)) p.terms_.push_back({m, c});
    return p;
  }

  /// Sorts, merges equal monomials and drops zeros.
  static basic_polynomial from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.mono > y.mono; });
    basic_polynomial p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff += t.coeff;
      } else {
        if (!p.terms_.empty() && detail::coeff_is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && detail::coeff_is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
    return p;
  }

  /// Takes terms already in canonical order with no zeros and no repeats.
  static basic_polynomial from_sorted_terms(std::vector<Term> terms) {
    basic_polynomial p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }

  const Term& leading() const { return terms_.front(); }
  const Term& trailing() const { return terms_.back(); }
  Coeff leading_coeff() const { return terms_.empty() ? Coeff(0) : terms_.front().coeff; }
  Coeff constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
    return Coeff(0);
  }

  Coeff coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial x) { return t.mono > x; });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return Coeff(0);
  }

  unsigned degree(Var v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
  }
  unsigned min_degree(Var v) const {
    if (terms_.empty()) return 0;
    unsigned d = Monomial::kMaxExponent;
    for (const auto& t : terms_) d = std::min(d, t.mono.exponent(v));
    return d;
  }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }
  bool contains(Var v) const { return degree(v) > 0; }

  /// Largest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return Monomial{};
    Monomial g = terms_.front().mono;
    for (const auto& t : terms_) g = Monomial::gcd(g, t.mono);
    return g;
  }

  basic_polynomial operator-() const {
    basic_polynomial p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
  }

  friend basic_polynomial operator+(const basic_polynomial& x, const basic_polynomial& y) {
    return merge(x, y, false);
  }
  friend basic_polynomial operator-(const basic_polynomial& x, const basic_polynomial& y) {
    return merge(x, y, true);
  }
  basic_polynomial& operator+=(const basic_polynomial& y) { return *this = *this + y; }
  basic_polynomial& operator-=(const basic_polynomial& y) { return *this = *this - y; }
  basic_polynomial& operator*=(const basic_polynomial& y) { return *this = *this * y; }

  friend basic_polynomial operator*(const basic_polynomial& x, const basic_polynomial& y) {
    if (x.is_zero() || y.is_zero()) return {};
    if (x.size() == 1) return y.scaled(x.terms_[0].coeff, x.terms_[0].mono);
    if (y.size() == 1) return x.scaled(y.terms_[0].coeff, y.terms_[0].mono);
    const auto& big = x.size() >= y.size() ? x : y;
    const auto& small = x.size() >= y.size() ? y : x;
    // Degree bounds are checked once so that the packed additions below
    // cannot carry between exponent fields.
    for (Var v : kAllVars)
      if (x.degree(v) + y.degree(v) > Monomial::kMaxExponent)
        throw std::overflow_error("polynomial product exceeds exponent range");
    std::unordered_map<std::uint64_t, Coeff> acc;
    acc.reserve(std::min<std::size_t>(x.size() * y.size(), 1u << 22));
    for (const auto& s : small.terms_)
      for (const auto& b : big.terms_) {
        auto key = s.mono.packed() + b.mono.packed();
        detail::coeff_addmul(acc[key], s.coeff, b.coeff);
      }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [k, c] : acc)
      if (!detail::coeff_is_zero(c)) out.push_back({Monomial::from_packed(k), std::move(c)});
    std::sort(out.begin(), out.end(), [](const Term& l, const Term& r) { return l.mono > r.mono; });
    return from_sorted_terms(std::move(out));
  }

  /// this * c * m
  basic_polynomial scaled(const Coeff& c, Monomial m = Monomial{}) const {
    if (detail::coeff_is_zero(c)) return {};
    basic_polynomial p;
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) p.terms_.push_back({t.mono * m, t.coeff * c});
    return p;
  }

  /// Exact quotient this / d, or nullopt when d does not divide this.
  std::optional<basic_polynomial> divide_exact(const basic_polynomial& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (is_zero()) return basic_polynomial{};
    if (d.size() == 1) return divide_by_term(d.terms_[0]);
    for (Var v : kAllVars)
      if (d.degree(v) > degree(v) || d.min_degree(v) > min_degree(v)) return std::nullopt;
    if (!d.trailing().mono.divides(trailing().mono)) return std::nullopt;
    {
      Coeff tmp;
      if (!detail::coeff_divide(trailing().coeff, d.trailing().coeff, tmp)) return std::nullopt;
    }

    // Johnson's heap division: the heap merges the products quotient[j]*d[i]
    // for i >= 1 in decreasing monomial order.
    struct Entry {
      std::uint64_t mono;
      std::uint32_t i, j;
      bool operator<(const Entry& o) const { return mono < o.mono; }
    };
    std::priority_queue<Entry> heap;
    std::vector<Term> quotient;
    const Term& lead = d.terms_[0];
    std::size_t k = 0;
    Coeff c;
    while (k < terms_.size() || !heap.empty()) {
      std::uint64_t m = 0;
      bool have = false;
      if (k < terms_.size()) { m = terms_[k].mono.packed(); have = true; }
      if (!heap.empty() && (!have || heap.top().mono > m)) m = heap.top().mono;
      c = Coeff(0);
      if (k < terms_.size() && terms_[k].mono.packed() == m) c = terms_[k++].coeff;
      while (!heap.empty() && heap.top().mono == m) {
        Entry e = heap.top();
        heap.pop();
        detail::coeff_submul(c, quotient[e.j].coeff, d.terms_[e.i].coeff);
        if (e.i + 1 < d.terms_.size())
          heap.push({quotient[e.j].mono.packed() + d.terms_[e.i + 1].mono.packed(), e.i + 1, e.j});
      }
      if (detail::coeff_is_zero(c)) continue;
      Monomial mm = Monomial::from_packed(m);
      if (!lead.mono.divides(mm)) return std::nullopt;
      Coeff qc;
      if (!detail::coeff_divide(c, lead.coeff, qc)) return std::nullopt;
      quotient.push_back({mm / lead.mono, std::move(qc)});
      auto j = static_cast<std::uint32_t>(quotient.size() - 1);
      heap.push({quotient[j].mono.packed() + d.terms_[1].mono.packed(), 1u, j});
    }
    return from_sorted_terms(std::move(quotient));
  }

  /// Coefficients with respect to `v`: exponent -> polynomial free of v.
  std::map<unsigned, basic_polynomial> collect(Var v) const {
    std::map<unsigned, std::vector<Term>> parts;
    for (const auto& t : terms_) {
      unsigned e = t.mono.exponent(v);
      parts[e].push_back({t.mono.with(v, 0), t.coeff});
    }
    std::map<unsigned, basic_polynomial> out;
    for (auto& [e, ts] : parts) out.emplace(e, from_terms(std::move(ts)));
    return out;
  }

  /// Evaluates in any commutative ring T. `lift` maps a coefficient into T.
  template <class T, class Lift>
  T evaluate(const std::array<T, kVarCount>& values, Lift lift) const {
    std::array<unsigned, kVarCount> maxdeg{};
    for (Var v : kAllVars) maxdeg[index_of(v)] = degree(v);
    std::array<std::vector<T>, kVarCount> powers;
    for (std::size_t i = 0; i < kVarCount; ++i) {
      powers[i].reserve(maxdeg[i] + 1);
      powers[i].push_back(lift(Coeff(1)));
      for (unsigned e = 1; e <= maxdeg[i]; ++e) powers[i].push_back(powers[i].back() * values[i]);
    }
    T acc = lift(Coeff(0));
    for (const auto& t : terms_) {
      T term = lift(t.coeff);
      for (std::size_t i = 0; i < kVarCount; ++i) {
        unsigned e = t.mono.exponent(i);
        if (e) term = term * powers[i][e];
      }
      acc = acc + term;
    }
    return acc;
  }

  template <class F>
  auto map_coeffs(F f) const {
    using Out = decltype(f(std::declval<Coeff>()));
    std::vector<typename basic_polynomial<Out>::Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Out c = f(t.coeff);
      if (!detail::coeff_is_zero(c)) out.push_back({t.mono, std::move(c)});
    }
    return basic_polynomial<Out>::from_sorted_terms(std::move(out));
  }

  friend bool operator==(const basic_polynomial&, const basic_polynomial&) = default;

  /// Ascending canonical order, e.g. "1 + q + 2*q^2 - 1/2*a*t".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      bool neg = detail::coeff_sign(it->coeff) < 0;
      Coeff mag = neg ? Coeff(-it->coeff) : it->coeff;
      if (out.empty()) {
        if (neg) out += '-';
      } else {
        out += neg ? " - " : " + ";
      }
      std::string cs = detail::coeff_str(mag);
      if (it->mono.is_one()) {
        out += cs;
      } else {
        if (cs != "1") out += cs + "*";
        out += it->mono.str();
      }
    }
    return out;
  }

 private:
  static basic_polynomial merge(const basic_polynomial& x, const basic_polynomial& y, bool subtract) {
    basic_polynomial p;
    p.terms_.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x.terms_[i].mono > y.terms_[j].mono)) {
        p.terms_.push_back(x.terms_[i++]);
      } else if (i == x.size() || y.terms_[j].mono > x.terms_[i].mono) {
        p.terms_.push_back(y.terms_[j++]);
        if (subtract) p.terms_.back().coeff = -p.terms_.back().coeff;
      } else {
        Coeff c = subtract ? Coeff(x.terms_[i].coeff - y.terms_[j].coeff)
                           : Coeff(x.terms_[i].coeff + y.terms_[j].coeff);
        if (!detail::coeff_is_zero(c)) p.terms_.push_back({x.terms_[i].mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return p;
  }

  std::optional<basic_polynomial> divide_by_term(const Term& d) const {
    basic_polynomial p;
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!d.mono.divides(t.mono)) return std::nullopt;
      Coeff c;
      if (!detail::coeff_divide(t.coeff, d.coeff, c)) return std::nullopt;
      p.terms_.push_back({t.mono / d.mono, std::move(c)});
    }
    return p;
  }

  std::vector<Term> terms_;
};

using Polynomial = basic_polynomial<Rational>;
using IntPolynomial = basic_polynomial<Integer>;

/// gcd of the integer coefficients, signed so that content * primitive part
/// has a positive leading coefficient. Zero for the zero polynomial.
inline Integer content(const IntPolynomial& p) {
  Integer g = 0;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  if (!p.is_zero() && sgn(p.leading_coeff()) < 0) g = -g;
  return g;
}

/// p / content(p); the result has a positive leading coefficient.
inline IntPolynomial primitive_part(const IntPolynomial& p) {
  if (p.is_zero()) return p;
  Integer c = content(p);
  if (c == 1) return p;
  return p.map_coeffs([&](const Integer& x) {
    Integer out;
    mpz_divexact(out.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    return out;
  });
}

inline Polynomial to_rational(const IntPolynomial& p) {
  return p.map_coeffs([](const Integer& c) { return Rational(c); });
}

/// Writes p = ip / scale with ip integral and scale > 0 the lcm of the
/// coefficient denominators.
inline IntPolynomial clear_denominators(const Polynomial& p, Integer& scale) {
  scale = 1;
  for (const auto& t : p.terms()) {
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), t.coeff.denominator().get_mpz_t());
  }
  return p.map_coeffs([&](const Rational& c) {
    Integer n = c.numerator() * scale;
    Integer out;
    mpz_divexact(out.get_mpz_t(), n.get_mpz_t(), c.denominator().get_mpz_t());
    return out;
  });
}

inline Polynomial var_poly(Var v, unsigned e = 1) { return Polynomial::variable(v, e); }

}  // namespace finefn
