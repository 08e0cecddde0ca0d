#include <gtest/gtest.h>

#include <cstdio>
#include <sys/wait.h>

#include "generators.hpp"

using namespace finefn;

namespace {

using K = Expr::Kind;

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(FINEFN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::vector<std::string> corpus{
    "1",
    "0",
    "3/4",
    "-5/7",
    "q",
    "a",
    "b",
    "t",
    "-q",
    "--a",
    "a + b",
    "a - b - t",
    "a - (b - t)",
    "a * b * t",
    "a / b / t",
    "a / (b / t)",
    "a * (b + t)",
    "(a + b) * (a - b)",
    "q^2",
    "q^-3",
    "(a*q)^3",
    "-q^2",
    "(-q)^2",
    "2^3",
    "(1/2)^2",
    "1/2*a",
    "a/2",
    "2/3 - a*q^2/5",
    "1 - a*q^2",
    "(1 - t)*(1 + t)",
    "poch(a*q, 3)/poch(b*q, 3)",
    "poch(a, 0)",
    "poch(a, -2)",
    "poch(q^2, 3, 3)",
    "poch(t, 4) - poch(t*q, 3)*(1 - t)",
    "pochinf(q)",
    "pochinf(a*q)/pochinf(b*q)",
    "qbinom(4, 2)",
    "qbinom(5, 2, 2)",
    "qbinom(3, 4)",
    "fine(0)",
    "fine(4)",
    "abfine(3)",
    "r1n(2)",
    "fine(2) - abfine(2)",
    "phi32(q^-2, q, a*q; b*q, q^-1/t; q; 2)",
    "phi32(a, b, t; a*q, b*q; q; 3)",
    "phi32(1/2, a, b; -t, q^2; t*q; 1)",
    "(1 - a*t*q)/(1 - t) + (1 - a*q)*(b - a*t*q)*t*q/((1 - b*q)*(1 - t))",
    "fine(1) - (1 + (1-q)*(1-a*q)*t/((1-b*q)*(1-t)))",
    "-(a + b)^2",
    "a^2*b^3*t^4*q^5",
    "(a + b)^-1",
    "qbinom(6, 3)*poch(a, 2) - fine(1)^2",
    "1/(1 - t*q^3)",
    "-poch(-a, 2, 2)",
};

}  // namespace

TEST(Parse, GrammarExamples) {
  auto e = parse("poch(a*q, 3)/poch(b*q, 3)");
  ASSERT_EQ(e->kind, K::div);
  const Expr& lhs = *e->args[0];
  ASSERT_EQ(lhs.kind, K::poch);
  EXPECT_EQ(lhs.ints, std::vector<int>{3});
  EXPECT_EQ(lhs.args[0]->kind, K::mul);
  EXPECT_EQ(*lhs.args[0]->args[0], *ast::variable(Var::a));
  EXPECT_EQ(*lhs.args[0]->args[1], *ast::variable(Var::q));
  EXPECT_EQ(e->args[1]->kind, K::poch);

  auto f = parse("fine(4)");
  EXPECT_EQ(f->kind, K::fine);
  EXPECT_EQ(f->ints, std::vector<int>{4});
}

TEST(Parse, Precedence) {
  EXPECT_EQ(*parse("-q^2"), *ast::make(K::neg, {ast::make(K::pow, {ast::variable(Var::q)}, {2})}));
  EXPECT_EQ(*parse("a - b - t"), *parse("(a - b) - t"));
  EXPECT_EQ(*parse("a / b * t"), *parse("(a / b) * t"));
  EXPECT_EQ(*parse("a + b * t"), *parse("a + (b * t)"));
  EXPECT_EQ(*parse("  a+\tb "), *parse("a + b"));
  EXPECT_EQ(parse("3/4")->kind, K::number);
  EXPECT_EQ(parse("3/4^2")->kind, K::div);
}

TEST(Parse, MissingParenthesis) {
  try {
    parse("((1-a");
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 5u);
    EXPECT_EQ(e.found(), "end of input");
    EXPECT_TRUE(e.expected().count("')'"));
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("a +"), SyntaxError);
  EXPECT_THROW(parse("x"), SyntaxError);
  EXPECT_THROW(parse("q^a"), SyntaxError);
  EXPECT_THROW(parse("poch(a)"), SyntaxError);
  EXPECT_THROW(parse("fine(1, 2)"), SyntaxError);
  EXPECT_THROW(parse("1/0"), SyntaxError);
  EXPECT_THROW(parse("a b"), SyntaxError);
  EXPECT_THROW(parse("phi32(a, b; t; q; 1)"), SyntaxError);
  try {
    parse("a + * b");
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_TRUE(e.expected().count("variable"));
  }
}

TEST(Parse, RoundTripCorpus) {
  ASSERT_GE(corpus.size(), 50u);
  std::set<K> kinds;
  std::function<void(const Expr&)> collect = [&](const Expr& e) {
    kinds.insert(e.kind);
    for (const auto& c : e.args) collect(*c);
  };
  for (const auto& s : corpus) {
    auto e = parse(s);
    collect(*e);
    std::string printed = print(*e);
    auto back = parse(printed);
    ASSERT_EQ(*back, *e) << s << " -> " << printed;
    ASSERT_EQ(print(*back), printed);
  }
  EXPECT_EQ(kinds.size(), 15u);
}

TEST(Parse, RandomRoundTrip) {
  std::mt19937_64 rng(19);
  std::function<ExprPtr(int)> grow = [&](int depth) -> ExprPtr {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 1);
    switch (pick(rng)) {
      case 0: return ast::number(gen::small_rational(rng, 7));
      case 1: return ast::variable(kAllVars[rng() % 4]);
      case 2: return ast::make(K::neg, {grow(depth - 1)});
      case 3: return ast::make(K::add, {grow(depth - 1), grow(depth - 1)});
      case 4: return ast::make(K::sub, {grow(depth - 1), grow(depth - 1)});
      case 5: return ast::make(K::mul, {grow(depth - 1), grow(depth - 1)});
      case 6: return ast::make(K::div, {grow(depth - 1), grow(depth - 1)});
      case 7: return ast::make(K::pow, {grow(depth - 1)}, {static_cast<int>(rng() % 7) - 3});
      default: return ast::make(K::poch, {grow(depth - 1)}, {static_cast<int>(rng() % 4)});
    }
  };
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = parse(print(*grow(4)));
    std::string s = print(*e);
    ASSERT_EQ(*parse(s), *e) << s;
    ASSERT_EQ(print(*parse(s)), s);
  }
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval_expr(*parse("fine(0)")), RationalFunction(1));
  RationalFunction a = var_fn(Var::a), q = var_fn(Var::q), one(1);
  EXPECT_EQ(eval_expr(*parse("poch(a*q,2)")), (one - a * q) * (one - a * q * q));
  EXPECT_EQ(eval_expr(*parse("poch(a*q,2)")).str(), "1 - q*a - q^2*a + q^3*a^2");
  EXPECT_TRUE(eval_expr(*parse("fine(1) - (1 + (1-q)*(1-a*q)*t/((1-b*q)*(1-t)))")).is_zero());
  EXPECT_EQ(eval_expr(*parse("qbinom(4,2)")).str(), "1 + q + 2*q^2 + q^3 + q^4");
}

TEST(Eval, Errors) {
  EXPECT_THROW(eval_expr(*parse("pochinf(q)")), EvalError);
  EXPECT_THROW(eval_expr(*parse("r1n(0)")), EvalError);
  EXPECT_THROW(eval_expr(*parse("a/(b - b)")), DivisionByZero);
  EXPECT_EQ(eval(*parse("pochinf(q)"), series_symbols(4)).str(), "1 - q - q^2 + O(q^5)");
}

TEST(Eval, AgreesAcrossFields) {
  std::mt19937_64 rng(23);
  for (const auto& s : corpus) {
    auto e = parse(s);
    if (s.find("pochinf") != std::string::npos) continue;
    RationalFunction f = eval_expr(*e);
    for (int i = 0; i < 3; ++i) {
      Point p = gen::point(rng);
      Rational direct, via;
      try {
        direct = eval(*e, at_point(p));
        via = f.eval_at(p);
      } catch (const std::domain_error&) {
        continue;
      }
      ASSERT_EQ(direct, via) << s;
    }
  }
}

TEST(Latex, Notation) {
  EXPECT_EQ(print_latex(*parse("poch(a*q, 3)")), "(a q;q)_{3}");
  EXPECT_NE(print_latex(*parse("qbinom(4, 2)")).find("bmatrix"), std::string::npos);
  EXPECT_EQ(print_latex(*parse("fine(3)")), "F_{3}(a,b;t)");
  EXPECT_EQ(latex(eval_expr(*parse("1/(1-t)"))).find("\\frac") != std::string::npos, true);
}

TEST(Records, Format) {
  VerificationReport r;
  r.id = "B1";
  r.mode = "symbolic";
  r.params = {{"N", "3"}};
  r.outcome = Outcome::pass;
  EXPECT_EQ(r.record(), "id=B1 mode=symbolic params=N=3 outcome=pass witness=- millis=0");
  r.outcome = Outcome::fail;
  r.witness = "q";
  EXPECT_EQ(r.record(), "id=B1 mode=symbolic params=N=3 outcome=fail witness=" + hex64(fnv1a64("q")) + " millis=0");
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
}

TEST(Records, SortOrderIsNumeric) {
  VerificationReport x, y;
  x.id = y.id = "A0";
  x.mode = y.mode = "symbolic";
  x.params = {{"N", "9"}};
  y.params = {{"N", "10"}};
  EXPECT_TRUE(report_less(x, y));
  EXPECT_FALSE(report_less(y, x));
}

TEST(Command, Expand) {
  auto r = run_cli("expand --expr \"qbinom(4,2)\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 + q + 2*q^2 + q^3 + q^4\n");
  auto l = run_cli("expand --expr \"poch(a*q,1)\" --format latex");
  EXPECT_EQ(l.code, 0);
  EXPECT_EQ(l.out, "(a q;q)_{1} = 1 - qa\n");
}

TEST(Command, Eval) {
  auto r = run_cli("eval --expr \"fine(2)\" --at q=1/2,a=0,b=0,t=1/3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "11/8\n");
  auto partial = run_cli("eval --expr \"poch(a*q,2)\" --at q=2");
  EXPECT_EQ(partial.code, 0);
  EXPECT_EQ(partial.out, "1 - 6*a + 8*a^2\n");
  EXPECT_EQ(run_cli("eval --expr \"1/(1-t)\" --at q=1,a=1,b=1,t=1").code, 3);
  EXPECT_EQ(run_cli("eval --expr \"pochinf(q)\"").code, 3);
  EXPECT_EQ(run_cli("eval --expr \"((1-a\"").code, 2);
  EXPECT_EQ(run_cli("eval --expr a --at z=1").code, 2);
}

TEST(Command, Series) {
  auto r = run_cli("series --expr \"pochinf(q)\" --order 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 - q - q^2 + q^5 + q^7 + O(q^8)\n");
  auto l = run_cli("series --limit-id L43 --order 3 --format records");
  EXPECT_EQ(l.code, 0);
  EXPECT_EQ(l.out, "id=L43 mode=series params=D=3 outcome=pass witness=- millis=0\n");
  EXPECT_EQ(run_cli("series --limit-id NOPE").code, 2);
  EXPECT_EQ(run_cli("series --order 3").code, 2);
}

TEST(Command, VerifyExitCodes) {
  EXPECT_EQ(run_cli("verify --id B1 --n-max 3").code, 0);
  EXPECT_EQ(run_cli("verify --id B1 --n-max 3 --perturb").code, 1);
  EXPECT_EQ(run_cli("verify --id B1 --n-max 3 --mode sampled --perturb").code, 1);
  EXPECT_EQ(run_cli("verify --id L44 --order 3").code, 0);
  EXPECT_EQ(run_cli("verify --id NOPE").code, 2);
  EXPECT_EQ(run_cli("verify").code, 2);
  EXPECT_EQ(run_cli("verify --id B1 --mode fuzzy").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  // printed forms fail but do not decide the exit code
  auto ab = run_cli("verify --id AB1 --n-max 2 --format records");
  EXPECT_EQ(ab.code, 0);
  EXPECT_NE(ab.out.find("form=printed outcome=fail"), std::string::npos);
  EXPECT_NE(ab.out.find("form=corrected outcome=pass"), std::string::npos);
}

TEST(Command, RecordsAreStable) {
  auto x = run_cli("verify --id T31 --n-max 3 --format records");
  auto y = run_cli("verify --id T31 --n-max 3 --format records --threads 2");
  EXPECT_EQ(x.code, 0);
  EXPECT_EQ(x.out, y.out);
  std::size_t lines = 0;
  for (char c : x.out) lines += c == '\n';
  EXPECT_EQ(lines, 8u);  // N = 0..3, two forms each
}

TEST(Command, List) {
  auto r = run_cli("list");
  EXPECT_EQ(r.code, 0);
  for (const auto& e : catalog()) EXPECT_NE(r.out.find(e.id + "  "), std::string::npos) << e.id;
  EXPECT_NE(r.out.find("LRF"), std::string::npos);
}
