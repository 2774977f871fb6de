#include "cozeta/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cozeta/cotype.hpp"
#include "cozeta/errors.hpp"
#include "cozeta/euler.hpp"
#include "cozeta/igusa.hpp"
#include "cozeta/oracle.hpp"

namespace cozeta {

namespace {

struct RunConfig {
  std::string algebra;
  std::optional<long> prime;
  bool symbolic = false;
  bool univariate = false;
  std::optional<int> corank;
  int scale = 0;
  std::optional<int> max_exponent;
  int levels = 5;
  std::string family;
  std::string form;
  std::optional<int> free_rank;
  long prime_bound = kDefaultPrimeBound;
  bool machine = false;
};

// What --algebra names: a rank-3 algebra, a catalog label, or both.
struct Source {
  std::string label;
  std::optional<LieAlgebra> algebra;
  bool cataloged = false;
};

bool is_catalog_label(const std::string& s) {
  const auto& labels = catalog_labels();
  if (std::find(labels.begin(), labels.end(), s) != labels.end()) return true;
  if (s.rfind("solvable(", 0) == 0) {
    catalog_branches(s);  // throws UnknownFamily for bad parameters
    return true;
  }
  return false;
}

Source resolve(const std::string& spec) {
  if (spec.empty()) throw InputError("--algebra is required");
  Source src;
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read algebra file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    src.algebra = LieAlgebra::parse(ss.str());
    src.label = src.algebra->name().empty() ? path : src.algebra->name();
    return src;
  }
  if (!is_catalog_label(spec)) throw UnknownFamily("unknown algebra '" + spec + "'; see `catalog`");
  src.label = spec;
  src.cataloged = true;
  src.algebra = catalog_algebra(spec);
  return src;
}

LieAlgebra rank3(const Source& src) {
  if (!src.algebra) throw DomainError("'" + src.label + "' is not a rank-3 Lie algebra");
  return *src.algebra;
}

long require_prime(const RunConfig& c) {
  if (!c.prime) throw InputError("--prime is required");
  if (!is_prime(*c.prime)) throw DomainError(std::to_string(*c.prime) + " is not a prime");
  return *c.prime;
}

long long power(long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

std::string record(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string s;
  for (const auto& [k, v] : fields) {
    if (!s.empty()) s += '\t';
    s += k + "=" + v;
  }
  return s;
}

// --------------------------------------------------------------- formula

std::vector<LocalFormula> formulas_for(const RunConfig& c, const Source* src) {
  std::vector<LocalFormula> out;
  if (c.free_rank) {
    out.push_back(cotype_zeta_free(*c.free_rank));
    return out;
  }
  if (c.prime) {
    long p = require_prime(c);
    if (src->cataloged) {
      out.push_back(catalog_for_prime(src->label, p));
    } else {
      RouteResult r = route(*src->algebra, p);
      if (!r.formula)
        throw DomainError("no closed formula for " + src->label + " at p = " + std::to_string(p) +
                          ": " + r.reason + " (try `census`)");
      out.push_back(*r.formula);
    }
  } else if (src->cataloged) {
    for (auto& b : catalog_branches(src->label))
      if (!b.validity.is_fixed()) out.push_back(b);
  } else {
    out = route_branches(*src->algebra);
  }
  for (auto& w : out)
    if (w.algebra.empty() || !src->cataloged) w.algebra = src->label;
  return out;
}

int cmd_formula(const RunConfig& c, std::ostream& out) {
  std::optional<Source> src;
  if (!c.free_rank) src = resolve(c.algebra);
  auto fs = formulas_for(c, src ? &*src : nullptr);
  bool first = true;
  for (auto w : fs) {
    if (c.scale) w = rescale(w, c.scale);
    if (c.corank) w.value = corank_specialize(w.value, *c.corank, w.dim).cancel();
    if (c.univariate) w.value = univariate(w.value, w.dim).cancel();
    if (c.machine) {
      out << record({{"algebra", w.algebra},
                     {"prime_validity", w.validity.to_string()},
                     {"scale", std::to_string(w.scale)},
                     {"dim", std::to_string(w.dim)},
                     {"value", w.value.to_string()}})
          << "\n";
    } else {
      if (!first) out << "\n";
      out << w.serialize();
    }
    first = false;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- census

int cmd_census(const RunConfig& c, std::ostream& out) {
  Source src = resolve(c.algebra);
  long p = require_prime(c);
  LieAlgebra L = rank3(src);
  if (c.scale) L = L.scaled(power(p, c.scale));
  int n = c.max_exponent.value_or(default_max_exponent(p));
  CotypeCensus cen = census(L, p, n);
  std::vector<std::pair<Cotype, long long>> rows(cen.counts.begin(), cen.counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    int na = a.first[0] + a.first[1] + a.first[2], nb = b.first[0] + b.first[1] + b.first[2];
    if (na != nb) return na < nb;
    return a.first > b.first;
  });
  if (!c.machine) out << "# " << src.label << " p=" << p << " max_exponent=" << n << "\nc1 c2 c3 count\n";
  for (const auto& [ct, k] : rows) {
    if (c.machine)
      out << record({{"p", std::to_string(p)},
                     {"c1", std::to_string(ct[0])},
                     {"c2", std::to_string(ct[1])},
                     {"c3", std::to_string(ct[2])},
                     {"count", std::to_string(k)}})
          << "\n";
    else
      out << ct[0] << " " << ct[1] << " " << ct[2] << " " << k << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& c, std::ostream& out) {
  Source src = resolve(c.algebra);
  long p = require_prime(c);
  LieAlgebra L = rank3(src);
  int n = c.max_exponent.value_or(default_max_exponent(p));
  std::optional<LocalFormula> w;
  if (src.cataloged) w = rescale(catalog_for_prime(src.label, p), c.scale);
  if (c.scale) L = L.scaled(power(p, c.scale));
  CompareReport r = compare(L, p, n, w);
  std::string verdict = r.ok() ? "pass" : "fail";
  if (c.machine) {
    out << record({{"algebra", src.label},
                   {"p", std::to_string(p)},
                   {"max_exponent", std::to_string(n)},
                   {"formula", r.formula_source},
                   {"cotypes", std::to_string(r.entries.size())},
                   {"mismatches", std::to_string(r.mismatches.size())},
                   {"result", verdict}})
        << "\n";
    for (const auto& e : r.mismatches)
      out << record({{"c1", std::to_string(e.cotype[0])},
                     {"c2", std::to_string(e.cotype[1])},
                     {"c3", std::to_string(e.cotype[2])},
                     {"observed", std::to_string(e.observed)},
                     {"predicted", e.predicted.get_str()}})
          << "\n";
  } else {
    out << src.label << " at p=" << p << ", index up to p^" << n << ", formula " << r.formula_source
        << ": " << r.entries.size() << " cotypes, " << r.mismatches.size() << " mismatches\n";
    for (const auto& e : r.mismatches)
      out << "  (" << e.cotype[0] << "," << e.cotype[1] << "," << e.cotype[2]
          << ") observed " << e.observed << " predicted " << e.predicted.get_str() << "\n";
    out << (r.ok() ? "PASS" : "FAIL") << "\n";
  }
  return r.ok() ? kExitOk : kExitMismatch;
}

// -------------------------------------------------------------------- fe

int cmd_fe(const RunConfig& c, std::ostream& out) {
  std::optional<Source> src;
  if (!c.free_rank) src = resolve(c.algebra);
  auto fs = formulas_for(c, src ? &*src : nullptr);
  bool all = true;
  for (const auto& w : fs) {
    FEResult r = functional_equation_check(w, w.dim);
    all = all && r.holds;
    if (c.machine) {
      std::vector<std::pair<std::string, std::string>> f = {
          {"algebra", w.algebra}, {"prime_validity", w.validity.to_string()},
          {"fe", r.holds ? "holds" : "fails"}};
      if (!r.holds) f.push_back({"witness", r.witness.to_string()});
      out << record(f) << "\n";
    } else {
      out << w.algebra << " (" << w.validity.to_string() << "): functional equation "
          << (r.holds ? "holds" : "fails") << "\n";
      if (!r.holds) out << "  lhs - rhs = " << r.witness.to_string() << "\n";
    }
  }
  return all ? kExitOk : kExitMismatch;
}

// ----------------------------------------------------------------- igusa

int cmd_igusa(const RunConfig& c, std::ostream& out) {
  if (c.family.empty()) throw InputError("--family is required");
  IgusaFamily fam = IgusaFamily::parse(c.family);
  long p = require_prime(c);
  IgusaReport r = c.form.empty()
                      ? verify_closed_form(fam, p, c.levels)
                      : verify_igusa(closed_form(fam).value, quadratic_form_from(c.form), p, c.levels);
  auto rows = [&](const char* series, const std::vector<LevelCheck>& lv) {
    for (const auto& l : lv) {
      if (c.machine)
        out << record({{"series", series},
                       {"m", std::to_string(l.m)},
                       {"predicted", l.predicted.get_str()},
                       {"observed", l.observed.get_str()},
                       {"match", l.match ? "yes" : "no"}})
            << "\n";
      else
        out << series << " " << l.m << " " << l.predicted.get_str() << " " << l.observed.get_str() << " "
            << (l.match ? "ok" : "MISMATCH") << "\n";
    }
  };
  if (!c.machine) out << "# " << fam.name() << " p=" << p << "\nseries m predicted observed\n";
  rows("poincare", r.levels);
  rows("primitive", r.primitive_levels);
  if (!c.machine) out << (r.ok() ? "all levels match" : "mismatch") << "\n";
  return r.ok() ? kExitOk : kExitMismatch;
}

// --------------------------------------------------------------- density

int cmd_density(const RunConfig& c, std::ostream& out) {
  Source src = resolve(c.algebra);
  LieAlgebra L = rank3(src);
  int m = c.corank.value_or(1);
  DensityResult d = density(L, m, c.prime_bound);
  Asymptotic a = asymptotic_count(d.pole);
  if (c.machine) {
    out << record({{"algebra", src.label},
                   {"corank", std::to_string(m)},
                   {"prime_bound", std::to_string(c.prime_bound)},
                   {"density", format_real(d.value, 6)},
                   {"error", format_real(d.error, 8)},
                   {"sigma0", d.pole.sigma0.get_str()},
                   {"omega", std::to_string(d.pole.omega)},
                   {"leading_constant", format_real(d.pole.leading_constant, 8)},
                   {"leading_constant_error", format_real(d.pole.error, 8)},
                   {"asymptotic", a.text}})
        << "\n";
  } else {
    out << "P(" << m << ") for " << src.label << " = " << format_real(d.value, 6) << " +- "
        << format_real(d.error, 8) << "\n"
        << "pole at s = " << d.pole.sigma0.get_str() << " of order " << d.pole.omega << "\n"
        << "leading constant " << format_real(d.pole.leading_constant, 8) << " +- "
        << format_real(d.pole.error, 8) << "\n"
        << a.text << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- catalog

int cmd_catalog(const RunConfig& c, std::ostream& out) {
  for (const auto& label : catalog_labels()) {
    std::string classes;
    for (const auto& b : catalog_branches(label)) classes += (classes.empty() ? "" : "; ") + b.validity.to_string();
    std::string dim = std::to_string(catalog_branches(label).front().dim);
    if (c.machine)
      out << record({{"label", label}, {"dim", dim}, {"primes", classes}}) << "\n";
    else
      out << label << "  (rank " << dim << ")  " << classes << "\n";
  }
  if (c.machine)
    out << record({{"label", "solvable(i,k)"}, {"dim", "3"}, {"primes", "p>2"}}) << "\n";
  else
    out << "solvable(i,k)  (rank 3)  p>2  i in {1,2}, k >= 0\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Subalgebra cotype zeta functions of rank-3 Lie rings", "cozeta"};
  app.require_subcommand(1, 1);
  app.add_flag("--machine", cfg.machine, "tab-separated key=value records");

  auto algebra = [&](CLI::App* s) {
    s->add_option("--algebra", cfg.algebra, "catalog name or file:PATH");
  };
  auto prime = [&](CLI::App* s) {
    s->add_option("--prime", cfg.prime, "prime p")->check(CLI::PositiveNumber);
  };
  auto machine = [&](CLI::App* s) { s->add_flag("--machine", cfg.machine, "tab-separated key=value records"); };

  auto* formula = app.add_subcommand("formula", "print a local formula");
  algebra(formula);
  prime(formula);
  formula->add_flag("--symbolic", cfg.symbolic, "formulas valid for classes of primes");
  formula->add_flag("--univariate", cfg.univariate, "set every Y_i to T");
  formula->add_option("--corank", cfg.corank, "keep corank <= m")->check(CLI::Range(1, 5));
  formula->add_option("--scale", cfg.scale, "formula for p^i L")->check(CLI::NonNegativeNumber);
  formula->add_option("--free-rank", cfg.free_rank, "free module Z^d")->check(CLI::Range(1, kMaxFreeRank));
  machine(formula);

  auto* census_cmd = app.add_subcommand("census", "count subalgebras by cotype");
  algebra(census_cmd);
  prime(census_cmd);
  census_cmd->add_option("--max-exponent", cfg.max_exponent, "largest n in p^n")->check(CLI::NonNegativeNumber);
  census_cmd->add_option("--scale", cfg.scale, "count in p^i L")->check(CLI::NonNegativeNumber);
  machine(census_cmd);

  auto* verify = app.add_subcommand("verify", "compare the census with the formula");
  algebra(verify);
  prime(verify);
  verify->add_option("--max-exponent", cfg.max_exponent, "largest n in p^n")->check(CLI::NonNegativeNumber);
  verify->add_option("--scale", cfg.scale, "check p^i L")->check(CLI::NonNegativeNumber);
  machine(verify);

  auto* fe = app.add_subcommand("fe", "check the functional equation");
  algebra(fe);
  prime(fe);
  fe->add_option("--free-rank", cfg.free_rank, "free module Z^d")->check(CLI::Range(1, kMaxFreeRank));
  machine(fe);

  auto* igusa = app.add_subcommand("igusa", "check an Igusa closed form against point counts");
  igusa->add_option("--family", cfg.family, "Igusa family name");
  prime(igusa);
  igusa->add_option("--levels", cfg.levels, "number of levels")->check(CLI::Range(1, 12));
  igusa->add_option("--form", cfg.form, "nine integers, row-major");
  machine(igusa);

  auto* dens = app.add_subcommand("density", "corank density from Euler products");
  algebra(dens);
  dens->add_option("--corank", cfg.corank, "corank bound m")->check(CLI::Range(1, 3));
  dens->add_option("--prime-bound", cfg.prime_bound, "largest prime in the products")
      ->check(CLI::Range(8L, 10'000'000L));
  machine(dens);

  auto* cat = app.add_subcommand("catalog", "list built-in algebras");
  machine(cat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*formula) return cmd_formula(cfg, out);
    if (*census_cmd) return cmd_census(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*fe) return cmd_fe(cfg, out);
    if (*igusa) return cmd_igusa(cfg, out);
    if (*dens) return cmd_density(cfg, out);
    return cmd_catalog(cfg, out);
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace cozeta
