#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "finefn/fine.hpp"
#include "finefn/report.hpp"

namespace finefn {

/// Power series in q truncated after q^D. Coefficients are rational
/// functions of a, b, t only. Binary operations on series of different order
/// work at the smaller order.
class TruncatedQSeries {
 public:
  explicit TruncatedQSeries(int order = 0) : c_(check_order(order) + 1) {}

  TruncatedQSeries(int order, std::vector<RationalFunction> coeffs) : c_(std::move(coeffs)) {
    c_.resize(static_cast<std::size_t>(check_order(order)) + 1);
    for (const auto& x : c_)
      if (x.contains(Var::q)) throw std::invalid_argument("series coefficients must be free of q");
  }

  static TruncatedQSeries constant(int order, const RationalFunction& c) {
    TruncatedQSeries s(order);
    s.set(0, c);
    return s;
  }

  /// c * q^k (zero when k > order).
  static TruncatedQSeries q_power(int order, int k, const RationalFunction& c = RationalFunction(1)) {
    if (k < 0) throw NegativeQDegree("negative power of q in a power series");
    TruncatedQSeries s(order);
    if (k <= order) s.set(k, c);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const RationalFunction& coeff(int k) const { return c_.at(static_cast<std::size_t>(k)); }
  const std::vector<RationalFunction>& coeffs() const { return c_; }

  void set(int k, RationalFunction v) {
    if (v.contains(Var::q)) throw std::invalid_argument("series coefficients must be free of q");
    c_.at(static_cast<std::size_t>(k)) = std::move(v);
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const RationalFunction& x) { return x.is_zero(); });
  }

  TruncatedQSeries truncated(int order) const {
    if (order > this->order()) throw std::invalid_argument("cannot extend a truncated series");
    return TruncatedQSeries(order, std::vector<RationalFunction>(c_.begin(), c_.begin() + order + 1));
  }

  TruncatedQSeries operator-() const {
    TruncatedQSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend TruncatedQSeries operator+(const TruncatedQSeries& x, const TruncatedQSeries& y) {
    int d = std::min(x.order(), y.order());
    TruncatedQSeries r(d);
    for (int k = 0; k <= d; ++k) r.c_[k] = x.c_[k] + y.c_[k];
    return r;
  }
  friend TruncatedQSeries operator-(const TruncatedQSeries& x, const TruncatedQSeries& y) { return x + (-y); }

  friend TruncatedQSeries operator*(const TruncatedQSeries& x, const TruncatedQSeries& y) {
    int d = std::min(x.order(), y.order());
    TruncatedQSeries r(d);
    for (int i = 0; i <= d; ++i) {
      if (x.c_[i].is_zero()) continue;
      for (int j = 0; i + j <= d; ++j)
        if (!y.c_[j].is_zero()) r.c_[i + j] += x.c_[i] * y.c_[j];
    }
    return r;
  }

  friend TruncatedQSeries operator/(const TruncatedQSeries& x, const TruncatedQSeries& y) { return x * y.inverse(); }

  /// Multiplicative inverse; needs a nonzero q^0 coefficient.
  TruncatedQSeries inverse() const {
    if (c_[0].is_zero()) throw NonInvertibleAtQZero("series has zero constant term");
    int d = order();
    RationalFunction inv0 = c_[0].inverse();
    TruncatedQSeries r(d);
    r.c_[0] = inv0;
    for (int k = 1; k <= d; ++k) {
      RationalFunction acc;
      for (int j = 1; j <= k; ++j)
        if (!c_[j].is_zero() && !r.c_[k - j].is_zero()) acc += c_[j] * r.c_[k - j];
      r.c_[k] = -(acc * inv0);
    }
    return r;
  }

  TruncatedQSeries& operator+=(const TruncatedQSeries& y) { return *this = *this + y; }
  TruncatedQSeries& operator-=(const TruncatedQSeries& y) { return *this = *this - y; }
  TruncatedQSeries& operator*=(const TruncatedQSeries& y) { return *this = *this * y; }

  friend bool operator==(const TruncatedQSeries&, const TruncatedQSeries&) = default;

  /// Applies f to every coefficient.
  template <class F>
  TruncatedQSeries map_coeffs(F f) const {
    std::vector<RationalFunction> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(f(x));
    return TruncatedQSeries(order(), std::move(out));
  }

  /// Coefficient-wise substitution of a, b or t.
  TruncatedQSeries substitute(Var v, const RationalFunction& value) const {
    if (v == Var::q) throw std::invalid_argument("substitute q through series composition, not coefficients");
    return map_coeffs([&](const RationalFunction& x) { return x.substitute(v, value); });
  }

  /// "c0 + c1*q + (c2)*q^2 + ... + O(q^(D+1))".
  std::string str() const {
    std::string s;
    for (int k = 0; k <= order(); ++k) {
      if (c_[k].is_zero()) continue;
      std::string c = c_[k].str(), term;
      std::string mono = k == 0 ? "" : k == 1 ? "q" : "q^" + std::to_string(k);
      bool bare = c.find_first_of("+/ ", 1) == std::string::npos && c.find('-', 1) == std::string::npos;
      if (k == 0) term = c;
      else if (c == "1") term = mono;
      else if (c == "-1") term = "-" + mono;
      else term = (bare ? c : "(" + c + ")") + "*" + mono;
      if (s.empty()) s = term;
      else if (term[0] == '-') s += " - " + term.substr(1);
      else s += " + " + term;
    }
    if (s.empty()) s = "0";
    return s + " + O(q^" + std::to_string(order() + 1) + ")";
  }

 private:
  static int check_order(int d) {
    if (d < 0) throw std::invalid_argument("series order must be nonnegative");
    return d;
  }

  std::vector<RationalFunction> c_;
};

inline TruncatedQSeries scalar_like(const TruncatedQSeries& x, const Rational& v) {
  return TruncatedQSeries::constant(x.order(), RationalFunction(v));
}

/// The q-adic expansion of f to order D.
inline TruncatedQSeries series_from_ratfunc(const RationalFunction& f, int D) {
  auto lift = [D](const IntPolynomial& p) {
    TruncatedQSeries s(D);
    for (const auto& [e, c] : p.collect(Var::q))
      if (static_cast<int>(e) <= D) s.set(static_cast<int>(e), RationalFunction(to_rational(c)));
    return s;
  };
  TruncatedQSeries den = lift(f.integer_denominator());
  if (den.coeff(0).is_zero()) throw NonInvertibleAtQZero("denominator vanishes at q = 0");
  return lift(f.integer_numerator()) * den.inverse();
}

/// prod_(k=0..D) (1 - A q^k) truncated after q^D. A needs q-valuation >= 0.
inline TruncatedQSeries qpoch_inf(const TruncatedQSeries& A) {
  int D = A.order();
  TruncatedQSeries one = scalar_like(A, Rational(1));
  TruncatedQSeries acc = one;
  TruncatedQSeries shifted = A;
  for (int k = 0; k <= D; ++k) {
    acc = acc * (one - shifted);
    shifted = shifted * TruncatedQSeries::q_power(D, 1);
  }
  return acc;
}

inline TruncatedQSeries qpoch_inf(const RationalFunction& A, int D) {
  if (D < 0) throw std::invalid_argument("series order must be nonnegative");
  if (!A.is_zero()) {
    int val = static_cast<int>(A.integer_numerator().min_degree(Var::q)) -
              static_cast<int>(A.integer_denominator().min_degree(Var::q));
    if (val < 0) throw NegativeQDegree("(A)_inf needs A of nonnegative q-degree");
  }
  return qpoch_inf(series_from_ratfunc(A, D));
}

/// The variables as series of order D.
inline Args<TruncatedQSeries> series_symbols(int D) {
  return {TruncatedQSeries::q_power(D, 1), TruncatedQSeries::constant(D, var_fn(Var::a)),
          TruncatedQSeries::constant(D, var_fn(Var::b)), TruncatedQSeries::constant(D, var_fn(Var::t))};
}

/// F(A, B; T) from the partial-fraction form
///   (Aq)_inf / (Bq)_inf sum_n prod_(k<n) (A - B q^k) q^n / ((q)_n (1 - T q^n)).
/// The n-th term has q-valuation >= n, so n <= D suffices.
inline TruncatedQSeries fine_series_at(const TruncatedQSeries& A, const TruncatedQSeries& B,
                                       const TruncatedQSeries& T) {
  int D = std::min({A.order(), B.order(), T.order()});
  TruncatedQSeries q = TruncatedQSeries::q_power(D, 1);
  TruncatedQSeries one = scalar_like(q, Rational(1));
  TruncatedQSeries sum(D), cleared = one, qn = one, qq = one;
  for (int n = 0; n <= D; ++n) {
    if (n > 0) {
      cleared = cleared * (A - B * ipow(q, n - 1));
      qq = qq * (one - qn * q);
      qn = qn * q;
    }
    sum += cleared * qn / (qq * (one - T * qn));
  }
  return qpoch_inf(A * q) / qpoch_inf(B * q) * sum;
}

/// F(a, b; t) to order D.
inline TruncatedQSeries fine_series(int D) {
  auto x = series_symbols(D);
  return fine_series_at(x.a, x.b, x.t);
}

/// F_N(a, b; t) built directly in the series ring.
inline TruncatedQSeries fine_N_series(int N, int D) {
  if (N < 0) throw std::invalid_argument("fine_N_series needs N >= 0");
  return fine_value(N, series_symbols(D));
}

struct LimitInfo {
  std::string id;
  std::string title;
  std::string anchor;
};

/// The N -> infinity statements, sorted by id.
inline const std::vector<LimitInfo>& limit_catalog() {
  static const std::vector<LimitInfo> entries{
      {"L41", "F(a,b;t) -> F(aq,bq;tq)", "Letting $N\\to\\infty$ in Theorem"},
      {"L43", "F(a,b;t) -> F(a,bq;tq)", "F(a,b;t) = \\frac{1}{1-t}"},
      {"L44", "F(a,b;t) -> F(a,bq;t)", "F(a,b;t) = \\frac{b}{b-at}"},
      {"L45", "F(a,b;t) -> F(aq,b;t)", "F(a,b;t) = -\\frac{(1-b)aq}{b-aq}"},
      {"L46", "F(a,b;t) -> F(aq,b;tq)", "\\frac{(1-aq)(b-atq)(b-atq^2)}{(1-t)(b-aq)}F(aq,b;tq)"},
      {"L63", "F(a,b;t) -> F(at/b,t;b)", "F(a,b;t) = \\frac{1-b}{1-t}F(\\frac{at}{b},t;b)"},
      {"L631", "t -> 1 limit of (1 - t) F(a,b;t)", "\\lim_{t\\rightarrow{1} }(1-t)F(a,b;t)=\\frac{(aq)_\\infty}{(bq)_\\infty}"},
      {"LHE", "infinite Heine form", "Letting $N\\to\\infty$ gives"},
      {"LRF", "Rogers-Fine identity", "F(a, b; t)=\\sum_{n=0}^{\\infty}"},
  };
  return entries;
}

/// Ids accepted by verify_limit.
inline const std::vector<std::string>& limit_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : limit_catalog()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

/// Both sides of a limit identity to order D.
inline std::pair<TruncatedQSeries, TruncatedQSeries> limit_sides(const std::string& id, int D) {
  auto x = series_symbols(D);
  const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
  TruncatedQSeries one = scalar_like(q, Rational(1));
  TruncatedQSeries F = fine_series_at(a, b, t);
  if (id == "L41")
    return {F, (one - a * t * q) / (one - t) +
                   (one - a * q) * (b - a * t * q) * t * q / ((one - b * q) * (one - t)) *
                       fine_series_at(a * q, b * q, t * q)};
  if (id == "L43")
    return {F, one / (one - t) + (b - a) * t * q / ((one - t) * (one - b * q)) * fine_series_at(a, b * q, t * q)};
  if (id == "L44")
    return {F, b / (b - a * t) + (b - a) * t / ((one - b * q) * (b - a * t)) * fine_series_at(a, b * q, t)};
  if (id == "L45")
    return {F, -(one - b) * a * q / (b - a * q) + (one - a * q) * (b - a * t * q) / (b - a * q) *
                                                        fine_series_at(a * q, b, t)};
  if (id == "L46")
    return {F, (one - b) / (one - t) * (one - (b - a * t * q) / (b - a * q) * a * q) +
                   (one - a * q) * (b - a * t * q) * (b - a * t * q * q) / ((one - t) * (b - a * q)) *
                       fine_series_at(a * q, b, t * q)};
  if (id == "L63") return {F, (one - b) / (one - t) * fine_series_at(a * t / b, t, b)};
  if (id == "L631") {
    auto lhs = ((one - t) * F).substitute(Var::t, RationalFunction(1));
    return {lhs, qpoch_inf(a * q) / qpoch_inf(b * q)};
  }
  if (id == "LHE") {
    TruncatedQSeries sum(D);
    for (int n = 0; n <= D; ++n)
      sum += qpoch(b, n, q) * qpoch(t, n, q) * ipow(q, n) / (qpoch(a * t * q, n, q) * qpoch(q, n, q));
    return {F, qpoch_inf(a * t * q) * qpoch_inf(q) / (qpoch_inf(t) * qpoch_inf(b * q)) * sum};
  }
  if (id == "LRF") {
    // (atq/b)_n b^n cleared to prod_(k<n) (b - a t q^(k+1)); q^(n^2) bounds n.
    TruncatedQSeries sum(D), cleared = one;
    for (int n = 0; n * n <= D; ++n) {
      if (n > 0) cleared = cleared * (b - a * t * ipow(q, n));
      sum += qpoch(a * q, n, q) * cleared * (one - a * t * ipow(q, 2 * n + 1)) * ipow(t, n) * ipow(q, n * n) /
             (qpoch(b * q, n, q) * qpoch(t, n + 1, q));
    }
    return {F, sum};
  }
  throw std::invalid_argument("unknown limit id: " + id);
}

/// Compares both sides of a limit identity coefficient by coefficient.
inline VerificationReport verify_limit(const std::string& id, int D) {
  if (D < 0) throw std::invalid_argument("series order must be nonnegative");
  auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.id = id;
  r.mode = "series";
  r.params = {{"D", std::to_string(D)}};
  auto [lhs, rhs] = limit_sides(id, D);
  TruncatedQSeries diff = lhs - rhs;
  r.outcome = diff.is_zero() ? Outcome::pass : Outcome::fail;
  if (r.outcome == Outcome::fail) r.witness = diff.str();
  r.millis = static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  return r;
}

/// series_from_ratfunc(fine_N(N), D) == fine_series(D). Needs D <= N.
inline bool stabilization_check(int N, int D) {
  if (N < 1 || D < 0 || D > N) throw ConstraintViolation("stabilization_check needs 0 <= D <= N, N >= 1");
  return series_from_ratfunc(fine_N(N), D) == fine_series(D);
}

/// Same comparison with F_N expanded directly in the series ring.
inline bool stabilization_check_direct(int N, int D) {
  if (N < 1 || D < 0 || D > N) throw ConstraintViolation("stabilization_check needs 0 <= D <= N, N >= 1");
  return fine_N_series(N, D) == fine_series(D);
}

/// Largest D <= D_max with fine_N_series(N, D) matching fine_series(D), or -1.
inline int stabilization_window(int N, int D_max) {
  TruncatedQSeries diff = fine_N_series(N, D_max) - fine_series(D_max);
  for (int k = 0; k <= D_max; ++k)
    if (!diff.coeff(k).is_zero()) return k - 1;
  return D_max;
}

}  // namespace finefn
