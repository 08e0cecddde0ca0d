#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "finefn/fine.hpp"
#include "finefn/qseries.hpp"

namespace finefn {

/// Parse failure at a byte offset, with the tokens that would have been accepted.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t offset, std::set<std::string> expected, std::string found)
      : std::runtime_error(make_message(offset, expected, found)),
        offset_(offset),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  static std::string make_message(std::size_t offset, const std::set<std::string>& expected,
                                  const std::string& found) {
    std::string s = "syntax error at offset " + std::to_string(offset) + ": found " + found + ", expected ";
    bool first = true;
    for (const auto& e : expected) {
      s += (first ? "" : " | ") + e;
      first = false;
    }
    return s;
  }

  std::size_t offset_;
  std::set<std::string> expected_;
  std::string found_;
};

/// The expression is well formed but cannot be evaluated in the chosen mode.
struct EvalError : std::domain_error {
  using std::domain_error::domain_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, poch, pochinf, qbinom, fine, abfine, r1n, phi32 };

  Kind kind;
  Rational value;             // number
  Var var = Var::q;           // variable
  std::vector<ExprPtr> args;  // operands; phi32: u1 u2 u3 l1 l2 z
  std::vector<int> ints;      // pow exponent, poch length/base, qbinom, fine, phi32 terms

  friend bool operator==(const Expr& x, const Expr& y) {
    if (x.kind != y.kind || x.value != y.value || x.var != y.var || x.ints != y.ints ||
        x.args.size() != y.args.size())
      return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(*x.args[i] == *y.args[i])) return false;
    return true;
  }
};

namespace ast {

inline ExprPtr make(Expr::Kind k, std::vector<ExprPtr> args = {}, std::vector<int> ints = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = std::move(args);
  e->ints = std::move(ints);
  return e;
}
inline ExprPtr number(const Rational& r) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::number;
  e->value = r;
  return e;
}
inline ExprPtr variable(Var v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::variable;
  e->var = v;
  return e;
}

}  // namespace ast

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  using K = Expr::Kind;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string found() {
    skip();
    if (pos_ >= s_.size()) return "end of input";
    return std::string("'") + s_[pos_] + "'";
  }

  [[noreturn]] void fail(std::set<std::string> expected) { throw SyntaxError(pos_, std::move(expected), found()); }

  void expect(char c) {
    if (peek() != c) fail({std::string("'") + c + "'"});
    ++pos_;
  }

  ExprPtr expr() {
    ExprPtr left = term();
    for (char c; (c = peek()) == '+' || c == '-';) {
      ++pos_;
      left = ast::make(c == '+' ? K::add : K::sub, {left, term()});
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary(true);
    for (char c; (c = peek()) == '*' || c == '/';) {
      ++pos_;
      // The right operand of '/' never starts a fraction literal: a/2/3 is (a/2)/3.
      left = ast::make(c == '*' ? K::mul : K::div, {left, unary(c == '*')});
    }
    return left;
  }

  ExprPtr unary(bool fraction_ok) {
    if (peek() == '-') {
      ++pos_;
      return ast::make(K::neg, {unary(fraction_ok)});
    }
    return power(fraction_ok);
  }

  ExprPtr power(bool fraction_ok) {
    ExprPtr base = primary(fraction_ok);
    if (peek() == '^') {
      ++pos_;
      int e;
      if (peek() == '(') {
        ++pos_;
        e = signed_integer();
        expect(')');
      } else {
        e = signed_integer();
      }
      return ast::make(K::pow, {base}, {e});
    }
    return base;
  }

  bool digit_next() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  Integer digits() {
    if (!digit_next()) fail({"integer"});
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  int signed_integer() {
    bool neg = false;
    if (peek() == '-') {
      ++pos_;
      neg = true;
    }
    if (!digit_next()) fail({"integer"});
    std::size_t at = pos_;
    Integer v = digits();
    if (!v.fits_sint_p() || v > 100000) {
      pos_ = at;
      fail({"integer below 100000"});
    }
    int i = static_cast<int>(v.get_si());
    return neg ? -i : i;
  }

  ExprPtr primary(bool fraction_ok) {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer n = digits();
      // p/r is a literal unless it is the base of a power.
      if (fraction_ok && peek() == '/') {
        std::size_t save = pos_;
        ++pos_;
        if (digit_next()) {
          std::size_t at = pos_;
          Integer d = digits();
          if (peek() != '^') {
            if (d == 0) {
              pos_ = at;
              throw SyntaxError(at, {"nonzero denominator"}, "0");
            }
            return ast::number(Rational(n, d));
          }
        }
        pos_ = save;
      }
      return ast::number(Rational(n));
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name.size() == 1 && (name == "q" || name == "a" || name == "b" || name == "t"))
        return ast::variable(*var_from_name(name));
      if (name == "poch") return call_poch();
      if (name == "pochinf") {
        expect('(');
        ExprPtr a = expr();
        expect(')');
        return ast::make(K::pochinf, {a});
      }
      if (name == "qbinom") {
        expect('(');
        int N = signed_integer();
        expect(',');
        int n = signed_integer();
        std::vector<int> ints{N, n};
        if (peek() == ',') {
          ++pos_;
          ints.push_back(signed_integer());
        }
        expect(')');
        return ast::make(K::qbinom, {}, ints);
      }
      if (name == "fine" || name == "abfine" || name == "r1n") {
        expect('(');
        int N = signed_integer();
        expect(')');
        return ast::make(name == "fine" ? K::fine : name == "abfine" ? K::abfine : K::r1n, {}, {N});
      }
      if (name == "phi32") return call_phi32();
      pos_ = start;
      fail({"a", "b", "q", "t", "abfine", "fine", "phi32", "poch", "pochinf", "qbinom", "r1n"});
    }
    fail({"number", "variable", "function", "'('", "'-'"});
  }

  ExprPtr call_poch() {
    expect('(');
    ExprPtr a = expr();
    expect(',');
    std::vector<int> ints{signed_integer()};
    if (peek() == ',') {
      ++pos_;
      ints.push_back(signed_integer());
    }
    expect(')');
    return ast::make(K::poch, {a}, ints);
  }

  // phi32(u1, u2, u3; l1, l2; z; M)
  ExprPtr call_phi32() {
    expect('(');
    std::vector<ExprPtr> args;
    for (int i = 0; i < 3; ++i) {
      if (i) expect(',');
      args.push_back(expr());
    }
    expect(';');
    args.push_back(expr());
    expect(',');
    args.push_back(expr());
    expect(';');
    args.push_back(expr());
    expect(';');
    int M = signed_integer();
    expect(')');
    return ast::make(K::phi32, args, {M});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// Precedence levels for printing.
inline int level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    default: return 5;
  }
}

inline bool is_fraction(const Expr& e) { return e.kind == Expr::Kind::number && !e.value.is_integer(); }

}  // namespace detail

inline ExprPtr parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Plain text form; parse(print(e)) == e for every parsed e.
inline std::string print(const Expr& e) {
  using K = Expr::Kind;
  auto wrap = [](const Expr& x, bool paren) { return paren ? "(" + print(x) + ")" : print(x); };
  auto ints = [](const std::vector<int>& v, std::size_t from) {
    std::string s;
    for (std::size_t i = from; i < v.size(); ++i) s += ", " + std::to_string(v[i]);
    return s;
  };
  switch (e.kind) {
    case K::number:
      return e.value.sign() < 0 ? "(" + e.value.str() + ")" : e.value.str();
    case K::variable: return std::string(1, var_name(e.var));
    case K::neg: return "-" + wrap(*e.args[0], detail::level(*e.args[0]) < 3);
    case K::add:
    case K::sub: {
      const Expr& r = *e.args[1];
      return print(*e.args[0]) + (e.kind == K::add ? " + " : " - ") + wrap(r, detail::level(r) <= 1 || r.kind == K::neg);
    }
    case K::mul:
    case K::div: {
      const Expr& l = *e.args[0];
      const Expr& r = *e.args[1];
      bool rp = detail::level(r) <= 2 || r.kind == K::neg || (e.kind == K::div && detail::is_fraction(r));
      return wrap(l, detail::level(l) < 2) + (e.kind == K::mul ? "*" : "/") + wrap(r, rp);
    }
    case K::pow: {
      const Expr& b = *e.args[0];
      bool bp = detail::level(b) < 5 || detail::is_fraction(b) || (b.kind == K::number && b.value.sign() < 0);
      return wrap(b, bp) + "^" + std::to_string(e.ints[0]);
    }
    case K::poch: return "poch(" + print(*e.args[0]) + ints(e.ints, 0) + ")";
    case K::pochinf: return "pochinf(" + print(*e.args[0]) + ")";
    case K::qbinom: return "qbinom(" + ints(e.ints, 0).substr(2) + ")";
    case K::fine: return "fine(" + std::to_string(e.ints[0]) + ")";
    case K::abfine: return "abfine(" + std::to_string(e.ints[0]) + ")";
    case K::r1n: return "r1n(" + std::to_string(e.ints[0]) + ")";
    case K::phi32:
      return "phi32(" + print(*e.args[0]) + ", " + print(*e.args[1]) + ", " + print(*e.args[2]) + "; " +
             print(*e.args[3]) + ", " + print(*e.args[4]) + "; " + print(*e.args[5]) + "; " +
             std::to_string(e.ints[0]) + ")";
  }
  return "?";
}

/// LaTeX in the usual q-series notation.
inline std::string print_latex(const Expr& e) {
  using K = Expr::Kind;
  auto paren = [](const std::string& s) { return "\\left(" + s + "\\right)"; };
  auto base = [](const std::vector<int>& ints, std::size_t i) {
    return ints.size() > i && ints[i] != 1 ? "q^{" + std::to_string(ints[i]) + "}" : std::string("q");
  };
  switch (e.kind) {
    case K::number: {
      const Rational& v = e.value;
      if (v.is_integer()) return v.str();
      std::string f = "\\frac{" + Integer(abs(v.numerator())).get_str() + "}{" + v.denominator().get_str() + "}";
      return v.sign() < 0 ? "-" + f : f;
    }
    case K::variable: return std::string(1, var_name(e.var));
    case K::neg: {
      std::string s = print_latex(*e.args[0]);
      return "-" + (detail::level(*e.args[0]) < 3 ? paren(s) : s);
    }
    case K::add:
    case K::sub: {
      const Expr& r = *e.args[1];
      std::string rs = print_latex(r);
      if (detail::level(r) <= 1 || (e.kind == K::sub && r.kind == K::neg)) rs = paren(rs);
      return print_latex(*e.args[0]) + (e.kind == K::add ? " + " : " - ") + rs;
    }
    case K::mul: {
      auto side = [&](const Expr& x) {
        std::string s = print_latex(x);
        return detail::level(x) <= 1 || x.kind == K::neg ? paren(s) : s;
      };
      std::string r = side(*e.args[1]);
      bool dot = std::isdigit(static_cast<unsigned char>(r[0])) || r[0] == '-' || r[0] == '\\';
      return side(*e.args[0]) + (dot ? " \\cdot " : " ") + r;
    }
    case K::div: return "\\frac{" + print_latex(*e.args[0]) + "}{" + print_latex(*e.args[1]) + "}";
    case K::pow: {
      const Expr& b = *e.args[0];
      std::string s = print_latex(b);
      if (detail::level(b) < 5 || detail::is_fraction(b)) s = paren(s);
      return s + "^{" + std::to_string(e.ints[0]) + "}";
    }
    case K::poch:
      return "(" + print_latex(*e.args[0]) + ";" + base(e.ints, 1) + ")_{" + std::to_string(e.ints[0]) + "}";
    case K::pochinf: return "(" + print_latex(*e.args[0]) + ";q)_{\\infty}";
    case K::qbinom:
      return "\\begin{bmatrix}" + std::to_string(e.ints[0]) + "\\\\" + std::to_string(e.ints[1]) + "\\end{bmatrix}" +
             (e.ints.size() > 2 && e.ints[2] != 1 ? "_{" + base(e.ints, 2) + "}" : std::string());
    case K::fine: return "F_{" + std::to_string(e.ints[0]) + "}(a,b;t)";
    case K::abfine: return "F(a,b,t," + std::to_string(e.ints[0]) + ")";
    case K::r1n: return "R_{1," + std::to_string(e.ints[0]) + "}(a,b,t)";
    case K::phi32:
      return "{}_3\\phi_2\\left[\\begin{matrix}" + print_latex(*e.args[0]) + ", & " + print_latex(*e.args[1]) +
             ", & " + print_latex(*e.args[2]) + " \\\\ " + print_latex(*e.args[3]) + ", & " +
             print_latex(*e.args[4]) + "\\end{matrix}; q, " + print_latex(*e.args[5]) + "\\right]_{" +
             std::to_string(e.ints[0]) + "}";
  }
  return "?";
}

/// Polynomial in LaTeX, ascending canonical order.
template <class Coeff>
std::string poly_latex(const basic_polynomial<Coeff>& p) {
  if (p.is_zero()) return "0";
  std::string s;
  const auto& ts = p.terms();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    Rational c(it->coeff);
    bool neg = c.sign() < 0;
    if (neg) c = -c;
    std::string mono;
    for (Var v : kAllVars) {
      unsigned e = it->mono.exponent(v);
      if (!e) continue;
      mono += var_name(v);
      if (e > 1) mono += "^{" + std::to_string(e) + "}";
    }
    std::string cs;
    if (mono.empty() || c != Rational(1)) {
      cs = c.is_integer() ? c.str() : "\\frac{" + c.numerator().get_str() + "}{" + c.denominator().get_str() + "}";
    }
    if (s.empty()) s = neg ? "-" : "";
    else s += neg ? " - " : " + ";
    s += cs + mono;
  }
  return s;
}

inline std::string latex(const RationalFunction& f) {
  if (f.is_polynomial() && f.integer_denominator().constant_term() == 1) return poly_latex(f.integer_numerator());
  return "\\frac{" + poly_latex(f.integer_numerator()) + "}{" + poly_latex(f.integer_denominator()) + "}";
}

/// Evaluates over RationalFunction (symbolic), Rational (at a point) or
/// TruncatedQSeries. pochinf is only defined for series.
template <class K>
K eval(const Expr& e, const Args<K>& x) {
  using Kd = Expr::Kind;
  auto sub = [&](std::size_t i) { return eval(*e.args[i], x); };
  auto qbase = [&](std::size_t i) {
    int m = e.ints.size() > i ? e.ints[i] : 1;
    if (m < 1) throw EvalError("base exponent must be positive");
    return ipow(x.q, m);
  };
  switch (e.kind) {
    case Kd::number: return x.constant(e.value);
    case Kd::variable:
      switch (e.var) {
        case Var::q: return x.q;
        case Var::a: return x.a;
        case Var::b: return x.b;
        case Var::t: return x.t;
      }
      break;
    case Kd::neg: return -sub(0);
    case Kd::add: return sub(0) + sub(1);
    case Kd::sub: return sub(0) - sub(1);
    case Kd::mul: return sub(0) * sub(1);
    case Kd::div: return sub(0) / sub(1);
    case Kd::pow: return ipow(sub(0), e.ints[0]);
    case Kd::poch: return qpoch(sub(0), e.ints[0], qbase(1));
    case Kd::pochinf:
      if constexpr (std::is_same_v<K, TruncatedQSeries>) {
        return qpoch_inf(sub(0));
      } else {
        throw EvalError("pochinf needs series mode");
      }
    case Kd::qbinom: return qbinom_at(e.ints[0], e.ints[1], qbase(2));
    case Kd::fine:
      if (e.ints[0] < 0) throw EvalError("fine(N) needs N >= 0");
      return fine_value(e.ints[0], x);
    case Kd::abfine:
      if (e.ints[0] < 0) throw EvalError("abfine(N) needs N >= 0");
      return andrews_bell_value(e.ints[0], x.a, x.b, x.t, x.q);
    case Kd::r1n:
      if (e.ints[0] < 1) throw EvalError("r1n(N) needs N >= 1");
      return r1n_value(e.ints[0], x.a, x.b, x.t, x.q);
    case Kd::phi32: {
      if (e.ints[0] < 0) throw EvalError("phi32 needs a nonnegative term count");
      Phi32Spec<K> s{{sub(0), sub(1), sub(2)}, {sub(3), sub(4)}, sub(5), e.ints[0]};
      return phi32_value(s, x.q);
    }
  }
  throw EvalError("unknown expression node");
}

inline RationalFunction eval_expr(const Expr& e) { return eval(e, symbols()); }

}  // namespace finefn
