#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finefn/polynomial.hpp"

namespace finefn {

/// gcd(f, g) together with the cofactors f / gcd and g / gcd.
struct GcdResult {
  IntPolynomial gcd;
  IntPolynomial cofactor_f;
  IntPolynomial cofactor_g;
};

GcdResult gcd_with_cofactors(const IntPolynomial& f, const IntPolynomial& g);

namespace detail {

inline std::optional<Var> first_var(const IntPolynomial& f, const IntPolynomial& g) {
  for (Var v : kAllVars)
    if (f.contains(v) || g.contains(v)) return v;
  return std::nullopt;
}

inline IntPolynomial exact_quotient(const IntPolynomial& f, const IntPolynomial& d) {
  auto q = f.divide_exact(d);
  if (!q) throw InternalError("expected exact polynomial division");
  return *std::move(q);
}

inline Integer max_norm(const IntPolynomial& f) {
  Integer m = 0;
  for (const auto& t : f.terms())
    if (mpz_cmpabs(t.coeff.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(t.coeff);
  return m;
}

/// f with `v` set to the integer x.
inline IntPolynomial evaluate_at(const IntPolynomial& f, Var v, const Integer& x) {
  unsigned d = f.degree(v);
  std::vector<Integer> powers(d + 1);
  powers[0] = 1;
  for (unsigned e = 1; e <= d; ++e) powers[e] = powers[e - 1] * x;
  std::unordered_map<std::uint64_t, Integer> acc;
  acc.reserve(f.size());
  for (const auto& t : f.terms()) {
    unsigned e = t.mono.exponent(v);
    coeff_addmul(acc[t.mono.with(v, 0).packed()], t.coeff, powers[e]);
  }
  std::vector<IntPolynomial::Term> out;
  for (auto& [k, c] : acc)
    if (sgn(c) != 0) out.push_back({Monomial::from_packed(k), std::move(c)});
  return IntPolynomial::from_terms(std::move(out));
}

/// Inverse of evaluate_at for small coefficients: expands each coefficient
/// in balanced base-x digits, digit i becoming the coefficient of v^i.
inline IntPolynomial interpolate(const IntPolynomial& h, Var v, const Integer& x) {
  std::vector<IntPolynomial::Term> out;
  Integer half = x / 2;
  for (const auto& t : h.terms()) {
    Integer c = t.coeff;
    unsigned e = 0;
    while (sgn(c) != 0) {
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      if (r > half) r -= x;
      if (sgn(r) != 0) out.push_back({t.mono * Monomial::of(v, e), r});
      c -= r;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      ++e;
    }
  }
  return IntPolynomial::from_terms(std::move(out));
}

inline IntPolynomial divide_by_integer(const IntPolynomial& f, const Integer& c) {
  if (c == 1) return f;
  return f.map_coeffs([&](const Integer& x) {
    Integer out;
    mpz_divexact(out.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    return out;
  });
}

/// Heuristic gcd (GCDHEU): maps the problem to integers by evaluating one
/// variable at a time at a large point, then reads the gcd back off the
/// balanced digits. Every candidate is confirmed by exact division, which
/// makes an accepted answer the true gcd. Returns nullopt when all
/// evaluation points were unlucky.
inline std::optional<GcdResult> heuristic_gcd(IntPolynomial f, IntPolynomial g) {
  Integer common = 0;
  for (const auto* p : {&f, &g})
    for (const auto& t : p->terms()) mpz_gcd(common.get_mpz_t(), common.get_mpz_t(), t.coeff.get_mpz_t());
  f = divide_by_integer(f, common);
  g = divide_by_integer(g, common);

  auto var = first_var(f, g);
  if (!var) {
    Integer a = f.constant_term(), b = g.constant_term(), h;
    mpz_gcd(h.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return GcdResult{IntPolynomial(Integer(h * common)), IntPolynomial(Integer(a / h)),
                     IntPolynomial(Integer(b / h))};
  }
  Var v = *var;

  Integer fn = max_norm(f), gn = max_norm(g);
  Integer bound = 2 * std::min(fn, gn) + 29;
  Integer x = std::min(bound, Integer(99 * sqrt(bound)));
  Integer lc_bound = 2 * std::min(Integer(fn / abs(f.leading_coeff())),
                                  Integer(gn / abs(g.leading_coeff()))) + 2;
  if (lc_bound > x) x = lc_bound;

  for (int attempt = 0; attempt < 6; ++attempt) {
    IntPolynomial ff = evaluate_at(f, v, x), gg = evaluate_at(g, v, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto inner = heuristic_gcd(ff, gg);
      if (!inner) return std::nullopt;

      IntPolynomial h = primitive_part(interpolate(inner->gcd, v, x));
      if (auto cf = f.divide_exact(h)) {
        if (auto cg = g.divide_exact(h))
          return GcdResult{h.scaled(common), *std::move(cf), *std::move(cg)};
      }
      IntPolynomial cff = interpolate(inner->cofactor_f, v, x);
      if (!cff.is_zero()) {
        if (auto h2 = f.divide_exact(cff)) {
          if (auto cg = g.divide_exact(*h2)) {
            if (sgn(h2->leading_coeff()) < 0) return GcdResult{(-*h2).scaled(common), -cff, -*cg};
            return GcdResult{h2->scaled(common), cff, *std::move(cg)};
          }
        }
      }
      IntPolynomial cfg = interpolate(inner->cofactor_g, v, x);
      if (!cfg.is_zero()) {
        if (auto h3 = g.divide_exact(cfg)) {
          if (auto cf = f.divide_exact(*h3)) {
            if (sgn(h3->leading_coeff()) < 0) return GcdResult{(-*h3).scaled(common), -*cf, -cfg};
            return GcdResult{h3->scaled(common), *std::move(cf), cfg};
          }
        }
      }
    }
    x = 73794 * x * Integer(sqrt(Integer(sqrt(x)))) / 27011;
  }
  return std::nullopt;
}

inline std::vector<IntPolynomial> coefficients_in(const IntPolynomial& f, Var v) {
  auto parts = f.collect(v);
  std::vector<IntPolynomial> out(f.degree(v) + 1);
  for (auto& [e, p] : parts) out[e] = std::move(p);
  return out;
}

inline IntPolynomial from_coefficients(const std::vector<IntPolynomial>& cs, Var v) {
  IntPolynomial out;
  for (std::size_t e = 0; e < cs.size(); ++e)
    if (!cs[e].is_zero()) out += cs[e].scaled(Integer(1), Monomial::of(v, static_cast<unsigned>(e)));
  return out;
}

/// gcd of the coefficients of f viewed as a polynomial in v.
inline IntPolynomial content_in(const IntPolynomial& f, Var v) {
  IntPolynomial c;
  for (const auto& part : coefficients_in(f, v)) {
    if (part.is_zero()) continue;
    c = c.is_zero() ? primitive_part(part) : gcd_with_cofactors(c, part).gcd;
    if (c.is_constant()) return IntPolynomial(Integer(1));
  }
  return primitive_part(c);
}

/// Pseudo-remainder of a by b with respect to v.
inline IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b, Var v) {
  auto r = coefficients_in(a, v);
  auto bc = coefficients_in(b, v);
  std::size_t db = bc.size() - 1;
  const IntPolynomial& lb = bc.back();
  while (r.size() >= bc.size()) {
    IntPolynomial lr = r.back();
    std::size_t shift = r.size() - bc.size();
    for (auto& c : r) c = c * lb;
    for (std::size_t i = 0; i <= db; ++i) r[i + shift] -= lr * bc[i];
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  }
  return from_coefficients(r, v);
}

/// Primitive polynomial remainder sequence; slow but unconditional.
inline IntPolynomial prs_gcd(const IntPolynomial& f, const IntPolynomial& g) {
  if (f.is_zero()) return primitive_part(g);
  if (g.is_zero()) return primitive_part(f);
  auto var = first_var(f, g);
  if (!var) return IntPolynomial(Integer(1));
  Var v = *var;
  if (!f.contains(v) || !g.contains(v)) {
    const IntPolynomial& with = f.contains(v) ? f : g;
    const IntPolynomial& without = f.contains(v) ? g : f;
    return gcd_with_cofactors(content_in(with, v), without).gcd;
  }
  IntPolynomial cf = content_in(f, v), cg = content_in(g, v);
  IntPolynomial c = gcd_with_cofactors(cf, cg).gcd;
  IntPolynomial a = exact_quotient(f, cf), b = exact_quotient(g, cg);
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  while (!b.is_zero() && b.degree(v) > 0) {
    IntPolynomial r = pseudo_remainder(a, b, v);
    a = std::move(b);
    b = r.is_zero() ? r : exact_quotient(r, content_in(r, v));
  }
  IntPolynomial h = b.is_zero() ? primitive_part(exact_quotient(a, content_in(a, v)))
                                : IntPolynomial(Integer(1));
  return primitive_part(c * h);
}

}  // namespace detail

/// gcd over Z[q, a, b, t], including the gcd of the integer contents, with
/// a positive leading coefficient; cofactors satisfy f = gcd * cofactor_f.
/// gcd(f, 0) = f up to sign.
inline GcdResult gcd_with_cofactors(const IntPolynomial& f, const IntPolynomial& g) {
  if (f.is_zero() && g.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
  if (f.is_zero() || g.is_zero()) {
    const IntPolynomial& p = f.is_zero() ? g : f;
    IntPolynomial h = sgn(p.leading_coeff()) < 0 ? -p : p;
    IntPolynomial unit(Integer(sgn(p.leading_coeff())));
    return f.is_zero() ? GcdResult{h, IntPolynomial{}, unit} : GcdResult{h, unit, IntPolynomial{}};
  }

  Monomial mg = Monomial::gcd(f.monomial_content(), g.monomial_content());
  Integer cf = content(f), cg = content(g), ic;
  mpz_gcd(ic.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());

  IntPolynomial h;
  if (f.is_monomial() || g.is_monomial()) {
    h = IntPolynomial(Integer(1));
  } else {
    IntPolynomial fp = primitive_part(*f.divide_exact(IntPolynomial::monomial(f.monomial_content(), Integer(1))));
    IntPolynomial gp = primitive_part(*g.divide_exact(IntPolynomial::monomial(g.monomial_content(), Integer(1))));
    // A variable present in only one operand cannot occur in the gcd.
    for (bool changed = true; changed;) {
      changed = false;
      for (Var v : kAllVars) {
        if (fp.contains(v) && !gp.contains(v)) fp = detail::content_in(fp, v), changed = true;
        else if (gp.contains(v) && !fp.contains(v)) gp = detail::content_in(gp, v), changed = true;
      }
    }
    if (fp.is_constant() || gp.is_constant()) {
      h = IntPolynomial(Integer(1));
    } else if (fp == gp) {
      h = fp;
    } else if (auto r = detail::heuristic_gcd(fp, gp)) {
      h = primitive_part(r->gcd);
    } else {
      h = detail::prs_gcd(fp, gp);
    }
  }
  h = h.scaled(ic, mg);
  return GcdResult{h, detail::exact_quotient(f, h), detail::exact_quotient(g, h)};
}

inline IntPolynomial gcd(const IntPolynomial& f, const IntPolynomial& g) {
  return gcd_with_cofactors(f, g).gcd;
}

/// gcd over Q, scaled so its leading coefficient (graded lex, q > a > b > t)
/// is 1. gcd(p, 0) is p made monic.
inline Polynomial poly_gcd(const Polynomial& p, const Polynomial& r) {
  Integer sp, sr;
  IntPolynomial h = gcd(clear_denominators(p, sp), clear_denominators(r, sr));
  Polynomial out = to_rational(h);
  return out.scaled(Rational(1) / out.leading_coeff());
}

}  // namespace finefn
