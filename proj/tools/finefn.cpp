#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finefn/finefn.hpp"

using namespace finefn;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, eval_error = 3 };

/// Exit code for a batch of reports. Informational rows never fail a run.
int exit_code(const std::vector<VerificationReport>& reports) {
  bool fail = false, error = false;
  for (const auto& r : reports) {
    if (r.error) error = true;
    if (r.authoritative && r.outcome == Outcome::fail) fail = true;
  }
  if (fail) return failed;
  return error ? eval_error : ok;
}

std::string shorten(const std::string& s, std::size_t n = 240) {
  return s.size() <= n ? s : s.substr(0, n) + " ...";
}

void print_reports(const std::vector<VerificationReport>& reports, const std::string& format, bool timing) {
  if (format == "records") {
    for (auto r : reports) {
      if (!timing) r.millis = 0;
      std::cout << r.record() << '\n';
    }
    return;
  }
  int pass = 0, fail = 0, skipped = 0, info = 0;
  for (const auto& r : reports) {
    std::cout << outcome_name(r.outcome) << "  " << r.id << "  " << r.mode << "  " << r.params_str();
    if (!r.authoritative) {
      std::cout << "  (printed form, informational)";
      ++info;
    } else if (r.outcome == Outcome::pass) {
      ++pass;
    } else if (r.outcome == Outcome::fail) {
      ++fail;
    } else {
      ++skipped;
    }
    if (timing) std::cout << "  " << r.millis << " ms";
    std::cout << '\n';
    if (!r.witness.empty() && r.outcome != Outcome::pass) std::cout << "    " << shorten(r.witness) << '\n';
  }
  std::cout << pass << " passed, " << fail << " failed, " << skipped << " skipped, " << info << " informational\n";
}

Point parse_point(const std::string& text, std::vector<Var>& given) {
  Point p{};
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--at", "expected var=value, got '" + item + "'");
    auto v = var_from_name(item.substr(0, eq));
    if (!v) throw CLI::ValidationError("--at", "unknown variable '" + item.substr(0, eq) + "'");
    try {
      p[index_of(*v)] = Rational::parse(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--at", "bad value '" + item.substr(eq + 1) + "'");
    }
    given.push_back(*v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

int cmd_list() {
  for (const auto& e : catalog()) {
    std::cout << e.id << "  N>=" << e.n_min() << "  " << e.title << '\n';
    std::cout << "    anchor: " << e.anchor << '\n';
    if (e.erratum_candidate()) {
      std::cout << "    forms:";
      for (const auto& f : e.forms) std::cout << ' ' << f.name << (f.authoritative ? "*" : "");
      std::cout << '\n';
    }
    if (!e.note.empty()) std::cout << "    note: " << e.note << '\n';
  }
  std::cout << "\nlimits (series, q-adic):\n";
  for (const auto& l : limit_catalog()) {
    std::cout << l.id << "  " << l.title << '\n';
    std::cout << "    anchor: " << l.anchor << '\n';
  }
  return ok;
}

bool is_limit(const std::string& id) {
  for (const auto& l : limit_ids())
    if (l == id) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finefn: exact verification of finite Fine function identities"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "print catalog ids and anchors");

  auto* verify = app.add_subcommand("verify", "check identities");
  std::string id, mode = "symbolic", format = "text";
  bool all = false, perturb = false, timing = false;
  int n_max = 6, points = 5, order = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  auto* id_opt = verify->add_option("--id", id, "identity or limit id");
  auto* all_opt = verify->add_flag("--all", all, "every catalog identity");
  id_opt->excludes(all_opt);
  verify->add_option("--n-max", n_max, "largest N")->check(CLI::NonNegativeNumber);
  verify->add_option("--mode", mode)->check(CLI::IsMember({"symbolic", "sampled"}));
  verify->add_option("--seed", seed);
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "records"}));
  verify->add_option("--threads", threads)->check(CLI::PositiveNumber);
  verify->add_option("--points", points, "sample points per instance")->check(CLI::PositiveNumber);
  verify->add_option("--order", order, "truncation order for limit ids")->check(CLI::NonNegativeNumber);
  verify->add_flag("--perturb", perturb, "multiply each right side by (1+q)");
  verify->add_flag("--timing", timing, "report wall time instead of millis=0");

  auto* expand = app.add_subcommand("expand", "expand an expression to canonical form");
  std::string expr_text, expand_format = "text";
  bool latex_flag = false;
  expand->add_option("--expr", expr_text)->required();
  expand->add_option("--format", expand_format)->check(CLI::IsMember({"text", "latex"}));
  expand->add_flag("--latex", latex_flag, "same as --format latex");

  auto* series = app.add_subcommand("series", "q-expansion up to a given order");
  std::string limit_id, series_expr, series_format = "text";
  int series_order = 8;
  auto* lim_opt = series->add_option("--limit-id", limit_id);
  auto* sexpr_opt = series->add_option("--expr", series_expr);
  lim_opt->excludes(sexpr_opt);
  series->add_option("--order", series_order)->check(CLI::NonNegativeNumber);
  series->add_option("--format", series_format)->check(CLI::IsMember({"text", "records"}));

  auto* evalc = app.add_subcommand("eval", "evaluate an expression, optionally at a point");
  std::string eval_expr_text, at;
  evalc->add_option("--expr", eval_expr_text)->required();
  evalc->add_option("--at", at, "q=1/2,a=1/3,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*list) return cmd_list();

    if (*verify) {
      if (!all && id.empty()) {
        std::cerr << "verify: one of --id or --all is required\n";
        return usage;
      }
      std::vector<VerificationReport> reports;
      if (!all && is_limit(id)) {
        reports.push_back(verify_limit(id, order));
      } else {
        VerifyOptions o;
        o.n_max = n_max;
        o.mode = mode == "symbolic" ? Mode::symbolic : Mode::sampled;
        o.seed = seed;
        o.threads = threads;
        o.perturb = perturb;
        o.points = points;
        if (all) {
          reports = verify_all(o);
        } else {
          const Identity* e = nullptr;
          try {
            e = &find_identity(id);
          } catch (const ConstraintViolation&) {
            std::cerr << "verify: unknown id '" << id << "'\n";
            return usage;
          }
          reports = verify_identities({e}, o);
        }
      }
      print_reports(reports, format, timing);
      return exit_code(reports);
    }

    if (*expand) {
      auto e = parse(expr_text);
      RationalFunction f = eval_expr(*e);
      if (latex_flag || expand_format == "latex")
        std::cout << print_latex(*e) << " = " << latex(f) << '\n';
      else
        std::cout << f.str() << '\n';
      return ok;
    }

    if (*series) {
      if (limit_id.empty() == series_expr.empty()) {
        std::cerr << "series: exactly one of --limit-id or --expr is required\n";
        return usage;
      }
      if (!limit_id.empty()) {
        if (!is_limit(limit_id)) {
          std::cerr << "series: unknown limit id '" << limit_id << "'\n";
          return usage;
        }
        auto [lhs, rhs] = limit_sides(limit_id, series_order);
        auto r = verify_limit(limit_id, series_order);
        if (series_format == "records") {
          r.millis = 0;
          std::cout << r.record() << '\n';
        } else {
          std::cout << "lhs: " << lhs.str() << '\n' << "rhs: " << rhs.str() << '\n' << outcome_name(r.outcome) << '\n';
        }
        return exit_code({r});
      }
      auto e = parse(series_expr);
      std::cout << eval(*e, series_symbols(series_order)).str() << '\n';
      return ok;
    }

    if (*evalc) {
      auto e = parse(eval_expr_text);
      RationalFunction f = eval_expr(*e);
      if (at.empty()) {
        std::cout << f.str() << '\n';
        return ok;
      }
      std::vector<Var> given;
      Point p = parse_point(at, given);
      if (given.size() == 4) {
        std::cout << f.eval_at(p).str() << '\n';
      } else {
        std::map<Var, RationalFunction> sub;
        for (Var v : given) sub[v] = RationalFunction(p[index_of(v)]);
        std::cout << f.substitute(sub).str() << '\n';
      }
      return ok;
    }
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << '\n';
    return usage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eval_error;
  }
  return usage;
}
