#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>

#include "finefn/gcd.hpp"
#include "finefn/polynomial.hpp"

namespace finefn {

/// Assignment of a rational value to every variable.
using Point = std::array<Rational, kVarCount>;

inline Point make_point(const Rational& q, const Rational& a, const Rational& b, const Rational& t) {
  return Point{q, a, b, t};
}

/// Quotient of two polynomials in canonical form.
///
/// Numerator and denominator are integer polynomials with no common factor
/// (integer content included) and the denominator's leading coefficient is
/// positive. Equal values therefore compare equal structurally, and the
/// zero function is 0/1.
class RationalFunction {
 public:
  RationalFunction() : den_(Integer(1)) {}
  RationalFunction(int c) : RationalFunction(Rational(c)) {}
  RationalFunction(const Rational& c) : num_(c.numerator()), den_(c.denominator()) {}
  RationalFunction(const Polynomial& p) {
    Integer scale;
    num_ = clear_denominators(p, scale);
    den_ = IntPolynomial(scale);
    reduce_integer_content();
  }
  RationalFunction(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) throw IdenticallyZeroDenominator("rational function with zero denominator");
    Integer sn, sd;
    IntPolynomial n = clear_denominators(num, sn), d = clear_denominators(den, sd);
    *this = from_integer_parts(n.scaled(sd), d.scaled(sn));
  }

  static RationalFunction variable(Var v) { return RationalFunction(var_poly(v)); }

  /// num / den reduced to canonical form.
  static RationalFunction from_integer_parts(IntPolynomial num, IntPolynomial den) {
    if (den.is_zero()) throw IdenticallyZeroDenominator("rational function with zero denominator");
    RationalFunction r;
    if (num.is_zero()) return r;
    auto g = gcd_with_cofactors(num, den);
    r.num_ = std::move(g.cofactor_f);
    r.den_ = std::move(g.cofactor_g);
    r.fix_sign();
    return r;
  }

  const IntPolynomial& integer_numerator() const { return num_; }
  const IntPolynomial& integer_denominator() const { return den_; }
  Polynomial numerator() const { return to_rational(num_); }
  Polynomial denominator() const { return to_rational(den_); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }

  /// Value of a constant function.
  Rational constant_value() const {
    if (!is_constant()) throw std::logic_error("rational function is not constant");
    return Rational(num_.constant_term(), den_.constant_term());
  }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
    return add(x, y, false);
  }
  friend RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) {
    return add(x, y, true);
  }

  friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
    if (x.is_zero() || y.is_zero()) return {};
    // Cross-cancel; the two inputs are already reduced, so no further gcd is
    // needed afterwards.
    auto g1 = gcd_with_cofactors(x.num_, y.den_);
    auto g2 = gcd_with_cofactors(y.num_, x.den_);
    RationalFunction r;
    r.num_ = g1.cofactor_f * g2.cofactor_f;
    r.den_ = g2.cofactor_g * g1.cofactor_g;
    r.fix_sign();
    return r;
  }

  friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
    return x * y.inverse();
  }

  RationalFunction inverse() const {
    if (is_zero()) throw DivisionByZero("division by the zero rational function");
    RationalFunction r;
    r.num_ = den_;
    r.den_ = num_;
    r.fix_sign();
    return r;
  }

  RationalFunction& operator+=(const RationalFunction& y) { return *this = *this + y; }
  RationalFunction& operator-=(const RationalFunction& y) { return *this = *this - y; }
  RationalFunction& operator*=(const RationalFunction& y) { return *this = *this * y; }
  RationalFunction& operator/=(const RationalFunction& y) { return *this = *this / y; }

  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

  /// Replaces `v` by `value` and renormalizes.
  RationalFunction substitute(Var v, const RationalFunction& value) const {
    unsigned dn = num_.degree(v), dd = den_.degree(v);
    if (dn == 0 && dd == 0) return *this;
    const IntPolynomial& u = value.num_;
    const IntPolynomial& w = value.den_;
    IntPolynomial n = homogenized(num_, v, u, w, dn);
    IntPolynomial d = homogenized(den_, v, u, w, dd);
    if (d.is_zero())
      throw IdenticallyZeroDenominator(std::string("substituting ") + var_name(v) +
                                       " annihilates the denominator");
    // num(u/w) = n / w^dn and den(u/w) = d / w^dd.
    if (dn >= dd) d = d * power(w, dn - dd);
    else n = n * power(w, dd - dn);
    return from_integer_parts(std::move(n), std::move(d));
  }

  /// Simultaneous substitution; variables not in the map are kept.
  RationalFunction substitute(const std::map<Var, RationalFunction>& values) const {
    std::array<RationalFunction, kVarCount> vals;
    for (Var v : kAllVars) {
      auto it = values.find(v);
      vals[index_of(v)] = it == values.end() ? variable(v) : it->second;
    }
    auto lift = [](const Integer& c) { return RationalFunction(Rational(c)); };
    RationalFunction d = den_.evaluate(vals, lift);
    if (d.is_zero()) throw IdenticallyZeroDenominator("substitution annihilates the denominator");
    return num_.evaluate(vals, lift) / d;
  }

  /// Exact value at a point; PoleError when the denominator vanishes there.
  Rational eval_at(const Point& point) const {
    auto lift = [](const Integer& c) { return Rational(c); };
    Rational d = den_.evaluate(point, lift);
    if (d.is_zero()) throw PoleError("denominator vanishes at the evaluation point");
    return num_.evaluate(point, lift) / d;
  }

  /// "num" for polynomials, "(num)/(den)" otherwise.
  std::string str() const {
    if (den_ == IntPolynomial(Integer(1))) return num_.str();
    auto wrap = [](const IntPolynomial& p) {
      return p.size() == 1 && sgn(p.leading_coeff()) > 0 && p.leading().mono.is_one()
                 ? p.str()
                 : "(" + p.str() + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
  }

 private:
  static RationalFunction add(const RationalFunction& x, const RationalFunction& y, bool subtract) {
    if (y.is_zero()) return x;
    if (x.is_zero()) return subtract ? -y : y;
    if (x.den_ == y.den_) {
      IntPolynomial n = subtract ? x.num_ - y.num_ : x.num_ + y.num_;
      if (x.den_.is_constant() && x.den_.leading_coeff() == 1) {
        RationalFunction r;
        r.num_ = std::move(n);
        return r;
      }
      return from_integer_parts(std::move(n), x.den_);
    }
    // With d = gcd(dx, dy) the sum's numerator can only share factors with d.
    auto g = gcd_with_cofactors(x.den_, y.den_);
    IntPolynomial n = x.num_ * g.cofactor_g;
    n = subtract ? n - y.num_ * g.cofactor_f : n + y.num_ * g.cofactor_f;
    RationalFunction r;
    if (n.is_zero()) return r;
    auto h = gcd_with_cofactors(n, g.gcd);
    r.num_ = std::move(h.cofactor_f);
    r.den_ = g.cofactor_f * g.cofactor_g * h.cofactor_g;
    r.fix_sign();
    return r;
  }

  static IntPolynomial power(const IntPolynomial& p, unsigned e) {
    IntPolynomial r(Integer(1));
    for (unsigned i = 0; i < e; ++i) r = r * p;
    return r;
  }

  /// sum_e c_e u^e w^(d-e) for p = sum_e c_e v^e.
  static IntPolynomial homogenized(const IntPolynomial& p, Var v, const IntPolynomial& u,
                                   const IntPolynomial& w, unsigned d) {
    auto parts = p.collect(v);
    std::vector<IntPolynomial> upow{IntPolynomial(Integer(1))}, wpow{IntPolynomial(Integer(1))};
    for (unsigned e = 1; e <= d; ++e) {
      upow.push_back(upow.back() * u);
      wpow.push_back(wpow.back() * w);
    }
    IntPolynomial out;
    for (const auto& [e, c] : parts) out += c * upow[e] * wpow[d - e];
    return out;
  }

  void fix_sign() {
    if (sgn(den_.leading_coeff()) < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  void reduce_integer_content() {
    Integer cn = content(num_), cd = content(den_), g;
    mpz_gcd(g.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (g != 1 && g != 0) {
      num_ = detail::divide_by_integer(num_, g);
      den_ = detail::divide_by_integer(den_, g);
    }
    fix_sign();
  }

  IntPolynomial num_;
  IntPolynomial den_;
};

inline RationalFunction scalar_like(const RationalFunction&, const Rational& v) { return RationalFunction(v); }

inline RationalFunction pow(const RationalFunction& base, int e) {
  if (e < 0) return pow(base, -e).inverse();
  RationalFunction r(1), b = base;
  for (unsigned k = static_cast<unsigned>(e); k; k >>= 1) {
    if (k & 1) r = r * b;
    if (k > 1) b = b * b;
  }
  return r;
}

inline RationalFunction var_fn(Var v) { return RationalFunction::variable(v); }

}  // namespace finefn
