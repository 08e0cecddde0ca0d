#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "finefn/fine.hpp"
#include "finefn/report.hpp"

namespace finefn {

/// Concrete parameters of one identity instance. `c` selects the
/// instantiation of the extra slot (0: c = atq, 1: c = bt); `form` names the
/// printed or corrected variant, empty for the default.
struct Params {
  int N = 0;
  int m = 1;
  int r = 1;
  int c = 0;
  std::string form;
};

inline const char* c_slot_name(int c) { return c == 0 ? "atq" : "bt"; }

template <class K>
using SidePair = std::pair<K, K>;

/// One way of writing an identity: as printed, or as re-derived.
struct Form {
  std::string name;
  bool authoritative = true;
  int n_min = 0;
  std::function<SidePair<RationalFunction>(const Params&)> symbolic;
  std::function<SidePair<Rational>(const Params&, const Point&)> sampled;
};

/// A point excluded by a visible denominator factor.
struct Exclusion {
  std::string text;
  std::function<bool(const Point&)> hit;
};

struct Identity {
  std::string id;
  std::string title;
  std::string anchor;
  enum class Aux { none, c_slot, mixed_base } aux = Aux::none;
  std::vector<Exclusion> exclusions;
  std::vector<Form> forms;
  std::string note;

  bool erratum_candidate() const { return forms.size() > 1; }

  int n_min() const {
    int n = forms.front().n_min;
    for (const auto& f : forms) n = std::min(n, f.n_min);
    return n;
  }

  const Form& form(std::string_view name) const {
    if (name.empty()) {
      for (const auto& f : forms)
        if (f.authoritative) return f;
      return forms.front();
    }
    for (const auto& f : forms)
      if (f.name == name) return f;
    throw ConstraintViolation(id + " has no form named " + std::string(name));
  }

  /// Every parameter combination with N <= n_max, forms expanded.
  std::vector<Params> grid(int n_max) const {
    std::vector<Params> out;
    for (int N = 0; N <= n_max; ++N) {
      std::vector<Params> base;
      if (aux == Aux::c_slot) {
        for (int c : {0, 1}) base.push_back({N, 1, 1, c, {}});
      } else if (aux == Aux::mixed_base) {
        for (int m = 1; m <= 3; ++m)
          for (int r = 1; r <= 3; ++r) base.push_back({N, m, r, 0, {}});
      } else {
        base.push_back({N, 1, 1, 0, {}});
      }
      for (auto& p : base) {
        if (erratum_candidate()) {
          for (const auto& f : forms) {
            p.form = f.name;
            out.push_back(p);
          }
        } else {
          out.push_back(p);
        }
      }
    }
    return out;
  }

  ParamList param_list(const Params& p) const {
    ParamList l{{"N", std::to_string(p.N)}};
    if (aux == Aux::c_slot) l.push_back({"c", c_slot_name(p.c)});
    if (aux == Aux::mixed_base) {
      l.push_back({"m", std::to_string(p.m)});
      l.push_back({"r", std::to_string(p.r)});
    }
    if (erratum_candidate()) l.push_back({"form", form(p.form).name});
    return l;
  }

  void check(const Params& p) const {
    if (p.N < 0) throw ConstraintViolation(id + ": N must be nonnegative");
    if (aux == Aux::c_slot && (p.c < 0 || p.c > 1)) throw ConstraintViolation(id + ": c selects atq (0) or bt (1)");
    if (aux == Aux::mixed_base && (p.m < 1 || p.r < 1))
      throw ConstraintViolation(id + ": m and r must be positive");
    const Form& f = form(p.form);
    if (p.N < f.n_min)
      throw ConstraintViolation(id + " (" + f.name + ") needs N >= " + std::to_string(f.n_min));
  }
};

namespace detail {

template <class Body>
Form make_form(std::string name, bool authoritative, int n_min, Body body) {
  Form f;
  f.name = std::move(name);
  f.authoritative = authoritative;
  f.n_min = n_min;
  f.symbolic = [body](const Params& p) { return body(symbols(), p); };
  f.sampled = [body](const Params& p, const Point& pt) { return body(at_point(pt), p); };
  return f;
}

template <class K>
K fN(int N, const K& a, const K& b, const K& t, const K& q) {
  return fine_value(N, a, b, t, q);
}

// Coefficients of the one-step relations, shared by the composite ones.
//   F_(N+1)(a,b;t) = A_N + B_N F_N(a,b;tq)
//   F_(N+1)(a,b;t) = alpha_N + beta_N F_(N+1)(a,bq;t)
//   F_(N+1)(a,b;t) = 1 + gamma_N F_N(aq,bq;t)
template <class K>
K coef_A(int N, const K& /*a*/, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  return (one - b) * (one - t * ipow(q, N + 1)) / ((one - t) * (one - b * ipow(q, N + 1)));
}

template <class K>
K coef_B(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  return (one - ipow(q, N + 1)) * (b - a * t * q) / ((one - b * ipow(q, N + 1)) * (one - t));
}

template <class K>
K coef_alpha(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  K tq = one - t * ipow(q, N + 1);
  return tq / (one - t) - (b - a) * tq * t / ((one - t) * (b - a * t));
}

template <class K>
K coef_beta(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  return (b - a) * (one - b * ipow(q, N + 2)) * t / ((one - b * q) * (b - a * t));
}

template <class K>
K coef_gamma(int N, const K& a, const K& b, const K& t, const K& q) {
  K one = scalar_like(q, Rational(1));
  return t * (one - a * q) * (one - ipow(q, N + 1)) / ((one - b * q) * (one - t * ipow(q, N)));
}

/// 3phi2 over the slots (a, b, c, t) with q^-N on top, summed to N.
template <class K>
K phi(int N, std::array<K, 3> upper, std::array<K, 2> lower, const K& z, const K& q) {
  return phi32_value(Phi32Spec<K>{std::move(upper), std::move(lower), z, N}, q);
}

/// Both sides of the finite Heine corollary
///   3phi2[q^-N, abt/c, b; bt, bq^(1-N)/c; q] = (c,t)_N/(c/b,bt)_N 3phi2[q^-N, a, b; c, q^(1-N)/t; q]
/// with the four slots supplied as values.
template <class K>
SidePair<K> ac3_sides(int N, const K& a, const K& b, const K& c, const K& t, const K& q) {
  K qN = ipow(q, -N);
  K lhs = phi<K>(N, {qN, a * b * t / c, b}, {b * t, b * ipow(q, 1 - N) / c}, q, q);
  K rhs = qpoch(c, N, q) * qpoch(t, N, q) / (qpoch(c / b, N, q) * qpoch(b * t, N, q)) *
          phi<K>(N, {qN, a, b}, {c, ipow(q, 1 - N) / t}, q, q);
  return {lhs, rhs};
}

template <class K>
K c_slot(int c, const Args<K>& x) {
  return c == 0 ? x.a * x.t * x.q : x.b * x.t;
}

}  // namespace detail

/// The catalog, sorted by id.
inline const std::vector<Identity>& catalog() {
  static const std::vector<Identity> entries = [] {
    using detail::fN;
    using detail::make_form;
    std::vector<Identity> v;

    auto add = [&v](Identity e) { v.push_back(std::move(e)); };

    // Andrews-Bell functional equation.
    {
      auto ab = [](int shift_args, int n_shift) {
        return [=](const auto& x, const Params& p) {
          const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
          auto one = x.one();
          auto lhs = andrews_bell_value(p.N, a, b, t, q);
          auto inner = shift_args ? andrews_bell_value(p.N - n_shift, a * q, b * q, t * q, q) : lhs;
          auto rhs = (one - a * t * q) / (one - t) + (one - a * q) * (b - a * t * q) / ((one - b * q) * (one - t)) *
                                                         t * q * inner +
                     r1n_value(p.N, a, b, t, q);
          return SidePair<std::decay_t<decltype(q)>>{lhs, rhs};
        };
      };
      add({"AB1", "Andrews-Bell functional equation with remainder R_(1,N)", "that for $N\\geq1$",
           Identity::Aux::none, {},
           {make_form("printed", false, 1, ab(0, 0)), make_form("shifted", false, 1, ab(1, 0)),
            make_form("corrected", true, 1, ab(1, 1))},
           "printed form has F(a,b,t,N) on the right; holds with F(aq,bq,tq,N-1)"});
    }

    add({"PF1", "finite partial fraction decomposition", "partial fraction decomposition of", Identity::Aux::none,
         {{"a = 0", [](const Point& p) { return p[index_of(Var::a)].is_zero(); }}},
         {make_form("printed", true, 0, [](const auto& x, const Params& p) {
           return SidePair<std::decay_t<decltype(x.q)>>{fN(p.N, x.a, x.b, x.t, x.q),
                                                       partial_fraction_value(p.N, x.a, x.b, x.t, x.q)};
         })},
         {}});

    add({"RF1", "finite Rogers-Fine identity", "finite analogue of the Rogers-Fine identity", Identity::Aux::none,
         {{"b = 0", [](const Point& p) { return p[index_of(Var::b)].is_zero(); }}},
         {make_form("printed", true, 1, [](const auto& x, const Params& p) {
           return SidePair<std::decay_t<decltype(x.q)>>{fN(p.N, x.a, x.b, x.t, x.q),
                                                       rogers_fine_value(p.N, x.a, x.b, x.t, x.q)};
         })},
         {}});

    add({"BR1", "F_N as a terminating 3phi2", "as can be easily seen from", Identity::Aux::none, {},
         {make_form("printed", true, 0, [](const auto& x, const Params& p) {
           return SidePair<std::decay_t<decltype(x.q)>>{fN(p.N, x.a, x.b, x.t, x.q),
                                                       phi32_value(fine_phi32_spec(p.N, x, p.N), x.q)};
         })},
         {}});

    add({"AC3", "finite Heine corollary, 3phi2 to 3phi2", "\\frac{(c,t;q)_N}{(c/b, bt; q)_N}", Identity::Aux::c_slot, {},
         {make_form("printed", true, 0, [](const auto& x, const Params& p) {
           auto c = detail::c_slot(p.c, x);
           return detail::ac3_sides(p.N, x.a, x.b, c, x.t, x.q);
         })},
         {}});

    add({"HN1", "F_N(a,b;t) through (atq/b)_n and (b)_(N-n)", "we are led to", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
                      K one = x.one();
                      int N = p.N;
                      K sum = x.constant(0), cleared = one;
                      for (int n = 0; n <= N; ++n) {
                        if (n > 0) cleared = cleared * (b - a * t * ipow(q, n));
                        sum = sum + qbinom_at(N, n, q) * cleared * qpoch(q, n, q) * qpoch(b, N - n, q) /
                                        (qpoch(t * q, n, q) * qpoch(b, N, q));
                      }
                      K rhs = (one - b) * (one - t * ipow(q, N)) / ((one - t) * (one - b * ipow(q, N))) * sum;
                      return SidePair<K>{fN(N, a, b, t, q), rhs};
                    })},
         {}});

    add({"AL1", "Andrews' 3phi2 to 3phi2 transformation with argument btq^N", "Lemma 1 of", Identity::Aux::c_slot, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
                      int N = p.N;
                      K c = detail::c_slot(p.c, x);
                      K qN = ipow(q, -N);
                      K lhs = detail::phi<K>(N, {qN, a, b}, {c, ipow(q, 1 - N) / t}, q, q);
                      K rhs = qpoch(a * t, N, q) / qpoch(t, N, q) *
                              detail::phi<K>(N, {qN, c / b, a}, {c, a * t}, b * t * ipow(q, N), q);
                      return SidePair<K>{lhs, rhs};
                    })},
         {}});

    // (b/a)_n (at)^n cleared to prod_(k<n) (a - b q^k) t^n.
    auto hn2_sum = [](const auto& x, int N) {
      using K = std::decay_t<decltype(x.q)>;
      const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
      K one = x.one();
      K sum = x.constant(0), cleared = one;
      for (int n = 0; n <= N; ++n) {
        if (n > 0) cleared = cleared * (a - b * ipow(q, n - 1));
        K term = qbinom_at(N, n, q) * cleared * qpoch(q, n, q) * ipow(t, n) * ipow(q, n * (n + 1) / 2) /
                 (qpoch(b * q, n, q) * qpoch(t * q, n, q));
        sum = n % 2 ? sum - term : sum + term;
      }
      return (one - t * ipow(q, N)) / (one - t) * sum;
    };

    add({"HN2", "F_N(a,b;t) as an alternating q-binomial sum", "Letting $a \\rightarrow q$", Identity::Aux::none,
         {},
         {make_form("printed", true, 0,
                    [hn2_sum](const auto& x, const Params& p) {
                      return SidePair<std::decay_t<decltype(x.q)>>{fN(p.N, x.a, x.b, x.t, x.q), hn2_sum(x, p.N)};
                    })},
         {}});

    add({"HN2Q", "F_N(a,b;t) as a 3phi2 with argument atq^(N+1)", "q^{-N}, &b/a, & q& ;q, atq^{N+1}",
         Identity::Aux::none,
         {{"a = 0", [](const Point& p) { return p[index_of(Var::a)].is_zero(); }}},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
                      int N = p.N;
                      K rhs = qpoch(t * q, N, q) / qpoch(t, N, q) *
                              detail::phi<K>(N, {ipow(q, -N), b / a, q}, {b * q, t * q}, a * t * ipow(q, N + 1), q);
                      return SidePair<K>{fN(N, a, b, t, q), rhs};
                    })},
         {}});

    add({"B0", "b = 0 case", "Letting $b=0$ in the above result", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &a = x.a, &t = x.t;
                      K one = x.one(), zero = x.constant(0);
                      int N = p.N;
                      K sum = zero;
                      for (int n = 0; n <= N; ++n) {
                        K term = qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(a * t, n) * ipow(q, n * (n + 1) / 2) /
                                 qpoch(t * q, n, q);
                        sum = n % 2 ? sum - term : sum + term;
                      }
                      return SidePair<K>{fN(N, a, zero, t, q), (one - t * ipow(q, N)) / (one - t) * sum};
                    })},
         {}});

    // (1 - t) F_N(0, b; t) as a q^(n^2) sum.
    auto a0_rhs = [](const auto& x, const auto& b, int N) {
      using K = std::decay_t<decltype(x.q)>;
      const auto &q = x.q, &t = x.t;
      K sum = x.constant(0);
      for (int n = 0; n <= N; ++n)
        sum = sum + qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(b * t, n) * ipow(q, n * n) /
                        (qpoch(b * q, n, q) * qpoch(t * q, n, q));
      return (x.one() - t * ipow(q, N)) * sum;
    };

    add({"A0", "a = 0 case", "if we let $a\\to0$", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [a0_rhs](const auto& x, const Params& p) {
                      auto zero = x.constant(0);
                      return SidePair<std::decay_t<decltype(x.q)>>{
                          (x.one() - x.t) * fN(p.N, zero, x.b, x.t, x.q), a0_rhs(x, x.b, p.N)};
                    })},
         {}});

    // b = 1/t; with t = e^(i theta), 2 cos(theta) = t + 1/t.
    auto theta = [](bool printed) {
      return [printed](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &t = x.t;
        K one = x.one(), zero = x.constant(0);
        int N = p.N;
        K lhs = (one - t) * fN(N, zero, one / t, t, q);
        K sum = zero, den = one;
        for (int n = 0; n <= N; ++n) {
          if (n > 0) den = den * (one - (t + one / t) * ipow(q, n) + ipow(q, 2 * n));
          if (printed && n == 0) continue;
          sum = sum + qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(q, n * n) / den;
        }
        K head = one - t * ipow(q, N);
        return SidePair<K>{lhs, printed ? head + sum : head * sum};
      };
    };
    add({"BT", "b = t case", "letting $b\\to t$ in", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [a0_rhs](const auto& x, const Params& p) {
                      return SidePair<std::decay_t<decltype(x.q)>>{
                          (x.one() - x.t) * fN(p.N, x.constant(0), x.t, x.t, x.q), a0_rhs(x, x.t, p.N)};
                    })},
         {}});

    add({"B1", "b = 1 evaluation", "Letting $b=1$ in", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      const auto &q = x.q, &a = x.a, &t = x.t;
                      return SidePair<std::decay_t<decltype(q)>>{
                          fN(p.N, a, x.one(), t, q), qpoch(a * t * q, p.N, q) / qpoch(t, p.N, q)};
                    })},
         {}});

    add({"FB0", "a = b/t, then b = 0, Heine side", "then let $b\\to0$ to get", Identity::Aux::none,
         {{"t = 0", [](const Point& p) { return p[index_of(Var::t)].is_zero(); }}},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &b = x.b, &t = x.t;
                      int N = p.N;
                      K sum = x.constant(0);
                      for (int n = 0; n <= N; ++n)
                        sum = sum + qpoch(t, n, q) * ipow(q, n) / (qpoch(b * q, n, q) * qpoch(q, n, q));
                      K rhs = qpoch(b * q, N, q) * qpoch(q, N, q) / qpoch(t, N, q) * sum;
                      return SidePair<K>{fN(N, b / t, x.constant(0), t, q), rhs};
                    })},
         {}});

    add({"FB0b", "a = b/t, then b = 0, alternating side", "if we replace $a$ by $b/t$", Identity::Aux::none,
         {{"t = 0", [](const Point& p) { return p[index_of(Var::t)].is_zero(); }}},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &b = x.b, &t = x.t;
                      K one = x.one();
                      int N = p.N;
                      K sum = x.constant(0);
                      for (int n = 0; n <= N; ++n)
                        sum = sum + qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(-b, n) * ipow(q, n * (n + 1) / 2) /
                                        qpoch(t * q, n, q);
                      return SidePair<K>{fN(N, b / t, x.constant(0), t, q),
                                         (one - t * ipow(q, N)) / (one - t) * sum};
                    })},
         {}});

    add({"CMP", "comparison of the t = 0 cases", "comparing the right-hand sides", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &b = x.b;
                      int N = p.N;
                      K lhs = x.constant(0), sum = x.constant(0);
                      for (int n = 0; n <= N; ++n) {
                        lhs = lhs + ipow(q, n) / (qpoch(b * q, n, q) * qpoch(q, n, q));
                        sum = sum + qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(-b, n) * ipow(q, n * (n + 1) / 2);
                      }
                      return SidePair<K>{lhs, sum / (qpoch(b * q, N, q) * qpoch(q, N, q))};
                    })},
         {}});

    add({"CMP2", "b = q^(-1/2) case with q replaced by q^2", "then replacing $q$ by $q^2$", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto& q = x.q;
                      K q2 = q * q;
                      int N = p.N;
                      K lhs = x.constant(0), sum = x.constant(0);
                      for (int n = 0; n <= N; ++n) {
                        lhs = lhs + ipow(q, 2 * n) / qpoch(q, 2 * n, q);
                        K term = qbinom_at(N, n, q2) * qpoch(q2, n, q2) * ipow(q, n * n);
                        sum = n % 2 ? sum - term : sum + term;
                      }
                      return SidePair<K>{lhs, sum / qpoch(q, 2 * N, q)};
                    })},
         {}});

    add({"A0H", "a = 0 case of the Heine form", "When $a=0$", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &b = x.b, &t = x.t;
                      int N = p.N;
                      K sum = x.constant(0);
                      for (int n = 0; n <= N; ++n)
                        sum = sum + qpoch(b, n, q) * qpoch(t, n, q) * ipow(q, n) / qpoch(q, n, q);
                      K lhs = qpoch(t, N, q) * qpoch(b * q, N, q) / qpoch(q, N, q) * fN(N, x.constant(0), b, t, q);
                      return SidePair<K>{lhs, sum};
                    })},
         {}});

    add({"BTI", "b = 1/t case of the Heine form", "is obtained if we let $b=t^{-1}$", Identity::Aux::none,
         {{"t = 0", [](const Point& p) { return p[index_of(Var::t)].is_zero(); }}},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &t = x.t;
                      K one = x.one(), ti = one / t;
                      int N = p.N;
                      K sum = x.constant(0);
                      for (int n = 0; n <= N; ++n)
                        sum = sum + qpoch(ti, n, q) * qpoch(t, n, q) * ipow(q, n) / qpoch(q, n, q);
                      K lhs = qpoch(t, N, q) * qpoch(q * ti, N, q) / qpoch(q, N, q) * fN(N, x.constant(0), ti, t, q);
                      return SidePair<K>{lhs, sum};
                    })},
         {}});

    add({"TH", "b = 1/t = e^(-i theta) case", "If we let $b=t^{-1}$", Identity::Aux::none,
         {{"t = 0", [](const Point& p) { return p[index_of(Var::t)].is_zero(); }}},
         {make_form("printed", false, 0, theta(true)), make_form("corrected", true, 0, theta(false))},
         "printed right side lacks the factor (1 - tq^N) on the n >= 1 terms; holds as printed only at N = 0"});

    // Mixed base: q -> q^m, t -> q^r in the b = t case; Pochhammers in base q^m.
    auto mixed = [](bool printed) {
      return [printed](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto& q = x.q;
        K one = x.one();
        int N = p.N, m = p.m, r = p.r;
        K Q = ipow(q, m), qr = ipow(q, r);
        K lhs = x.constant(0), sum = x.constant(0);
        for (int n = 0; n <= N; ++n) {
          K den = qpoch(qr, n + 1, Q);  // (1 - q^r)(1 - q^(m+r))...(1 - q^(nm+r))
          K common = qbinom_at(N, n, Q) * qpoch(Q, n, Q);
          lhs = lhs + common * qpoch(qr, N - n, Q) * ipow(q, r * n) / (qpoch(qr, N, Q) * den);
          sum = sum + common * ipow(q, m * n * n + 2 * r * n) / (den * den);
        }
        K head = one - ipow(q, (printed ? N : m * N) + r);
        return SidePair<K>{lhs, head * sum};
      };
    };
    add({"MB", "mixed base q^m, q^r", "Let $r$ and $m$ be positive integers", Identity::Aux::mixed_base, {},
         {make_form("printed", false, 0, mixed(true)), make_form("corrected", true, 0, mixed(false))},
         "printed prefactor (1 - q^(N+r)) holds only for m = 1; base q^m gives (1 - q^(mN+r))"});

    add({"HE1", "finite Heine transform", "Let $t \\rightarrow q, b \\rightarrow t", Identity::Aux::none, {},
         {make_form("printed", true, 0,
                    [](const auto& x, const Params& p) {
                      using K = std::decay_t<decltype(x.q)>;
                      const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
                      int N = p.N;
                      K sum = x.constant(0);
                      for (int n = 0; n <= N; ++n)
                        sum = sum + qpoch(b, n, q) * qpoch(t, n, q) * ipow(q, n) /
                                        (qpoch(a * t * q, n, q) * qpoch(q, n, q));
                      K rhs = qpoch(a * t * q, N, q) * qpoch(q, N, q) / (qpoch(t, N, q) * qpoch(b * q, N, q)) * sum;
                      return SidePair<K>{fN(N, a, b, t, q), rhs};
                    })},
         {}});

    {
      Identity e{"T1L", "t -> 1 limit of (1 - t) F_N", "multiply both sides of", Identity::Aux::none, {}, {}, {}};
      Form f;
      f.name = "printed";
      f.n_min = 0;
      auto rhs = [](const auto& x, int N) {
        const auto &q = x.q, &a = x.a, &b = x.b;
        return (x.one() - ipow(q, N)) * qpoch(a * q, N, q) / qpoch(b * q, N, q);
      };
      f.symbolic = [rhs](const Params& p) {
        auto x = symbols();
        RationalFunction lhs = ((x.one() - x.t) * fine_N(p.N)).substitute(Var::t, RationalFunction(1));
        return SidePair<RationalFunction>{lhs, rhs(x, p.N)};
      };
      // Keep t symbolic, cancel the pole, then set t = 1.
      f.sampled = [rhs](const Params& p, const Point& pt) {
        Args<RationalFunction> x{RationalFunction(pt[index_of(Var::q)]), RationalFunction(pt[index_of(Var::a)]),
                                 RationalFunction(pt[index_of(Var::b)]), var_fn(Var::t)};
        RationalFunction lhs = ((x.one() - x.t) * fine_value(p.N, x)).substitute(Var::t, RationalFunction(1));
        Rational r = rhs(at_point(pt), p.N);
        return SidePair<Rational>{lhs.constant_value(), r};
      };
      e.forms.push_back(std::move(f));
      add(std::move(e));
    }

    auto fa = [](bool printed) {
      return [printed](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &b = x.b;
        K one = x.one();
        int N = p.N;
        K sum = x.constant(0);
        for (int n = 0; n <= N; ++n)
          sum = sum + qbinom_at(N, n, q) * qpoch(q, n, q) * ipow(b, n) * ipow(q, n * n) /
                          (qpoch(b * q, n, q) * qpoch(q, n, q));
        return SidePair<K>{one / qpoch(b * q, N, q), printed ? (one - ipow(q, N)) * sum : sum};
      };
    };
    add({"FA12_31", "1/(bq)_N as a q^(n^2) sum", "we arrive at a finite analogue", Identity::Aux::none, {},
         {make_form("printed", false, 0, fa(true)), make_form("corrected", true, 0, fa(false))},
         "printed right side carries a spurious factor (1 - q^N)"});

    // Seed relations; `shift` = 1 puts F_(N+1) on the left.
    auto t31 = [](int shift) {
      return [shift](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        int N = p.N;
        K rhs = x.one() + detail::coef_gamma(N, a, b, t, q) * fN(N, a * q, b * q, t, q);
        return SidePair<K>{fN(N + shift, a, b, t, q), rhs};
      };
    };
    add({"T31", "(a, b) -> (aq, bq)", "t(1-aq)(1-q^{N+1})", Identity::Aux::none, {},
         {make_form("printed", false, 0, t31(0)), make_form("corrected", true, 0, t31(1))},
         "holds with F_(N+1)(a,b;t) on the left, for every N >= 0; as printed it fails for every N"});

    auto t32 = [](int shift) {
      return [shift](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        int N = p.N;
        K rhs = detail::coef_A(N, a, b, t, q) + detail::coef_B(N, a, b, t, q) * fN(N, a, b, t * q, q);
        return SidePair<K>{fN(N + shift, a, b, t, q), rhs};
      };
    };
    add({"T32", "t -> tq", "(1-q^{N+1})(b-atq)", Identity::Aux::none, {},
         {make_form("printed", false, 0, t32(0)), make_form("corrected", true, 0, t32(1))},
         "holds with F_(N+1)(a,b;t) on the left"});

    auto t33 = [](int shift) {
      return [shift](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        K one = x.one();
        int N = p.N;
        K rhs = (one - t * ipow(q, N + 1)) / (one - t) +
                (one - ipow(q, N + 1)) * (b - a) * t * q / ((one - b * q) * (one - t)) * fN(N, a, b * q, t * q, q);
        return SidePair<K>{fN(N + shift, a, b, t, q), rhs};
      };
    };
    add({"T33", "(a, b, t) -> (a, bq, tq)", "(1-q^{N+1})(b-a)tq", Identity::Aux::none, {},
         {make_form("printed", false, 0, t33(0)), make_form("corrected", true, 0, t33(1))},
         "holds with F_(N+1)(a,b;t) on the left"});

    auto c34 = [](int shift) {
      return [shift](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        int N = p.N;
        K rhs = detail::coef_alpha(N, a, b, t, q) + detail::coef_beta(N, a, b, t, q) * fN(N + shift, a, b * q, t, q);
        return SidePair<K>{fN(N + shift, a, b, t, q), rhs};
      };
    };
    auto b_is_at = [](const Point& p) {
      return p[index_of(Var::b)] == p[index_of(Var::a)] * p[index_of(Var::t)];
    };
    auto b_is_aq = [](const Point& p) {
      return p[index_of(Var::b)] == p[index_of(Var::a)] * p[index_of(Var::q)];
    };
    add({"C34", "b -> bq", "transform $F_N(a, b; t)$ to $F_N(a, bq; t)$", Identity::Aux::none,
         {{"b = at", b_is_at}},
         {make_form("printed", false, 0, c34(0)), make_form("corrected", true, 0, c34(1))},
         "holds with F_(N+1) on both sides and the coefficients at N"});

    // K_N = gamma_N / beta_(N-1)(aq, b, t).
    auto kfac = [](int N, const auto& a, const auto& b, const auto& t, const auto& q) {
      return detail::coef_gamma(N, a, b, t, q) / detail::coef_beta(N - 1, a * q, b, t, q);
    };

    auto c35 = [kfac](bool printed) {
      return [=](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        K one = x.one();
        int N = p.N;
        if (printed) {
          K qN1 = one - ipow(q, N + 1);
          K den = (one - t * ipow(q, N)) * (one - b * ipow(q, N + 2)) * (b - a * q);
          K rhs = one - b * (one - a * q) * qN1 * (one - t * ipow(q, N + 1)) / den +
                  (one - a * q) * qN1 * (b - a * q * t) / den * fN(N, a * q, b, t, q);
          return SidePair<K>{fN(N, a, b, t, q), rhs};
        }
        K k = kfac(N, a, b, t, q);
        K rhs = one + k * (fN(N, a * q, b, t, q) - detail::coef_alpha(N - 1, a * q, b, t, q));
        return SidePair<K>{fN(N + 1, a, b, t, q), rhs};
      };
    };
    add({"C35", "a -> aq", "relates $F_N(a, b; t)$ with", Identity::Aux::none,
         {{"b = aq", b_is_aq}, {"b = at", b_is_at}},
         {make_form("printed", false, 0, c35(true)), make_form("corrected", true, 1, c35(false))},
         "no index shift of the printed form holds; corrected form replays the substitution chain, N >= 1"});

    auto t36 = [kfac](bool printed) {
      return [=](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        K one = x.one();
        int N = p.N;
        if (printed) {
          K qN1 = one - ipow(q, N + 1);
          K bq1 = one - b * ipow(q, N + 1), bq2 = one - b * ipow(q, N + 2), tqN = one - t * ipow(q, N);
          K inner = t - (b - a * q * t) / (b - a * q) + (b - a * q * t) * (one - b) / ((b - a * q) * bq1);
          K rhs = one + (one - a * q) * qN1 * (one - t * ipow(q, N + 1)) / (tqN * bq2 * (one - t)) * inner +
                  (one - a * q) * qN1 * qN1 * (b - a * q * t) * (b - a * t * q * q) /
                      (tqN * (b - a * q) * bq2 * bq1 * (one - t)) * fN(N, a * q, b, t * q, q);
          return SidePair<K>{fN(N, a, b, t, q), rhs};
        }
        K k = kfac(N, a, b, t, q);
        K rhs = one + k * (detail::coef_A(N - 1, a * q, b, t, q) - detail::coef_alpha(N - 1, a * q, b, t, q)) +
                k * detail::coef_B(N - 1, a * q, b, t, q) * fN(N - 1, a * q, b, t * q, q);
        return SidePair<K>{fN(N + 1, a, b, t, q), rhs};
      };
    };
    add({"T36", "(a, t) -> (aq, tq)", "transforms $F_N(a, b; t)$ to $F_N(aq,b;tq)$", Identity::Aux::none,
         {{"b = aq", b_is_aq}, {"b = at", b_is_at}},
         {make_form("printed", false, 0, t36(true)), make_form("corrected", true, 1, t36(false))},
         "no index shift of the printed form holds; corrected form replays the substitution chain, N >= 1"});

    auto t37 = [](bool printed) {
      return [=](const auto& x, const Params& p) {
        using K = std::decay_t<decltype(x.q)>;
        const auto &q = x.q, &a = x.a, &b = x.b, &t = x.t;
        K one = x.one();
        int N = p.N;
        if (printed) {
          K qN1 = one - ipow(q, N + 1);
          K tqN = one - t * ipow(q, N), bq2 = one - b * ipow(q, N + 2);
          K rhs = one + (one - a * q) * qN1 * (one - t * ipow(q, N + 1)) * t / (tqN * bq2 * (one - t)) +
                  (one - a * q) * qN1 * qN1 * (b - a * t * q) * t * q / ((one - b * q) * tqN * bq2 * (one - t)) *
                      fN(N, a * q, b * q, t * q, q);
          return SidePair<K>{fN(N, a, b, t, q), rhs};
        }
        K g = detail::coef_gamma(N, a, b, t, q);
        K rhs = one + g * detail::coef_A(N - 1, a * q, b * q, t, q) +
                g * detail::coef_B(N - 1, a * q, b * q, t, q) * fN(N - 1, a * q, b * q, t * q, q);
        return SidePair<K>{fN(N + 1, a, b, t, q), rhs};
      };
    };
    add({"T37", "(a, b, t) -> (aq, bq, tq)", "transformation between $F_N(a, b; t)$ and $F_N(aq, bq; tq)$",
         Identity::Aux::none, {},
         {make_form("printed", false, 0, t37(true)), make_form("corrected", true, 1, t37(false))},
         "no index shift of the printed form holds; corrected form replays the substitution chain, N >= 1"});

    std::sort(v.begin(), v.end(), [](const Identity& x, const Identity& y) { return x.id < y.id; });
    return v;
  }();
  return entries;
}

inline const Identity& find_identity(std::string_view id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw ConstraintViolation("unknown identity id: " + std::string(id));
}

namespace detail {

inline long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
}

inline VerificationReport start_report(const Identity& e, const Params& p, const char* mode) {
  VerificationReport r;
  r.id = e.id;
  r.mode = mode;
  r.params = e.param_list(p);
  r.authoritative = e.form(p.form).authoritative;
  return r;
}

inline std::string point_str(const Point& pt) {
  std::string s;
  for (Var v : kAllVars) {
    if (!s.empty()) s += ',';
    s += var_name(v);
    s += "=" + pt[index_of(v)].str();
  }
  return s;
}

}  // namespace detail

/// Builds both sides and compares canonical forms. `perturb` multiplies the
/// right side by (1 + q).
inline VerificationReport verify_symbolic(const Identity& e, const Params& p, bool perturb = false) {
  e.check(p);
  auto start = std::chrono::steady_clock::now();
  VerificationReport r = detail::start_report(e, p, "symbolic");
  auto [lhs, rhs] = e.form(p.form).symbolic(p);
  if (perturb) rhs = rhs * (RationalFunction(1) + var_fn(Var::q));
  RationalFunction diff = lhs - rhs;
  r.outcome = diff.is_zero() ? Outcome::pass : Outcome::fail;
  if (!diff.is_zero()) r.witness = diff.str();
  r.millis = detail::elapsed_ms(start);
  return r;
}

inline VerificationReport verify_symbolic(std::string_view id, const Params& p, bool perturb = false) {
  return verify_symbolic(find_identity(id), p, perturb);
}

/// Exact comparison at one point. A pole or an excluded point gives skipped.
inline VerificationReport verify_sampled(const Identity& e, const Params& p, const Point& pt, bool perturb = false) {
  e.check(p);
  auto start = std::chrono::steady_clock::now();
  VerificationReport r = detail::start_report(e, p, "sampled");
  for (const auto& ex : e.exclusions) {
    if (ex.hit(pt)) {
      r.outcome = Outcome::skipped;
      r.witness = "excluded " + ex.text + " at " + detail::point_str(pt);
      r.millis = detail::elapsed_ms(start);
      return r;
    }
  }
  try {
    auto [lhs, rhs] = e.form(p.form).sampled(p, pt);
    if (perturb) rhs = rhs * (Rational(1) + pt[index_of(Var::q)]);
    r.outcome = lhs == rhs ? Outcome::pass : Outcome::fail;
    if (r.outcome == Outcome::fail)
      r.witness = "lhs=" + lhs.str() + " rhs=" + rhs.str() + " at " + detail::point_str(pt);
  } catch (const DivisionByZero&) {
    r.outcome = Outcome::skipped;
    r.witness = "pole at " + detail::point_str(pt);
  } catch (const PoleError&) {
    r.outcome = Outcome::skipped;
    r.witness = "pole at " + detail::point_str(pt);
  } catch (const IdenticallyZeroDenominator&) {
    r.outcome = Outcome::skipped;
    r.witness = "pole at " + detail::point_str(pt);
  }
  r.millis = detail::elapsed_ms(start);
  return r;
}

/// Rational with numerator and denominator bounded by `bound`, never zero.
inline Rational random_rational(std::mt19937_64& rng, int bound = 64) {
  std::uniform_int_distribution<int> num(1, bound), den(1, bound), sign(0, 1);
  int n = num(rng);
  return Rational(sign(rng) ? -n : n, den(rng));
}

/// Nonzero coordinates, q different from 1 and -1.
inline Point random_point(std::mt19937_64& rng) {
  Point p;
  for (Var v : kAllVars) {
    Rational x;
    do x = random_rational(rng);
    while (v == Var::q && (x == Rational(1) || x == Rational(-1)));
    p[index_of(v)] = x;
  }
  return p;
}

/// Seed derived from the run seed and the instance, independent of scheduling.
inline std::uint64_t instance_seed(std::uint64_t seed, const VerificationReport& proto) {
  return seed ^ fnv1a64(proto.id + ' ' + proto.params_str());
}

/// `points` pole-free seeded points; redraws after a pole up to `redraw_budget` times.
inline VerificationReport sample_check(const Identity& e, const Params& p, std::uint64_t seed, int points = 5,
                                       int redraw_budget = 100, bool perturb = false) {
  e.check(p);
  auto start = std::chrono::steady_clock::now();
  VerificationReport r = detail::start_report(e, p, "sampled");
  std::mt19937_64 rng(instance_seed(seed, r));
  int done = 0, redraws = 0;
  r.outcome = Outcome::pass;
  while (done < points) {
    VerificationReport one = verify_sampled(e, p, random_point(rng), perturb);
    if (one.outcome == Outcome::skipped) {
      if (++redraws > redraw_budget) throw Exhausted(e.id + ": redraw budget exhausted");
      continue;
    }
    ++done;
    if (one.outcome == Outcome::fail && r.outcome == Outcome::pass) {
      r.outcome = Outcome::fail;
      r.witness = one.witness;
    }
  }
  r.millis = detail::elapsed_ms(start);
  return r;
}

enum class Mode { symbolic, sampled };

struct VerifyOptions {
  int n_max = 6;
  Mode mode = Mode::symbolic;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool perturb = false;
  int points = 5;
  int redraw_budget = 100;
};

/// One report per parameter instance; rows below a form's range are skipped.
inline VerificationReport run_instance(const Identity& e, const Params& p, const VerifyOptions& o) {
  const char* mode = o.mode == Mode::symbolic ? "symbolic" : "sampled";
  const Form& f = e.form(p.form);
  if (p.N < f.n_min) {
    VerificationReport r = detail::start_report(e, p, mode);
    r.outcome = Outcome::skipped;
    r.witness = "N below range " + std::to_string(f.n_min);
    return r;
  }
  try {
    return o.mode == Mode::symbolic ? verify_symbolic(e, p, o.perturb)
                                    : sample_check(e, p, o.seed, o.points, o.redraw_budget, o.perturb);
  } catch (const std::exception& ex) {
    VerificationReport r = detail::start_report(e, p, mode);
    r.outcome = Outcome::skipped;
    r.error = true;
    r.witness = ex.what();
    return r;
  }
}

/// Runs the given identities over their grids up to n_max, optionally on
/// several threads; the result is sorted by (id, mode, params).
inline std::vector<VerificationReport> verify_identities(const std::vector<const Identity*>& ids,
                                                         const VerifyOptions& o) {
  if (o.n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  std::vector<std::pair<const Identity*, Params>> tasks;
  for (const Identity* e : ids)
    for (const auto& p : e->grid(o.n_max)) tasks.emplace_back(e, p);
  // Larger N first so the tail of the run stays short.
  std::stable_sort(tasks.begin(), tasks.end(), [](const auto& x, const auto& y) { return x.second.N > y.second.N; });
  std::vector<VerificationReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
      out[i] = run_instance(*tasks[i].first, tasks[i].second, o);
  };
  unsigned n = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::sort(out.begin(), out.end(), report_less);
  return out;
}

inline std::vector<VerificationReport> verify_all(const VerifyOptions& o) {
  std::vector<const Identity*> ids;
  for (const auto& e : catalog()) ids.push_back(&e);
  return verify_identities(ids, o);
}

inline std::vector<VerificationReport> verify_all(int n_max, Mode mode, std::uint64_t seed, unsigned threads = 1) {
  VerifyOptions o;
  o.n_max = n_max;
  o.mode = mode;
  o.seed = seed;
  o.threads = threads;
  return verify_all(o);
}

}  // namespace finefn
