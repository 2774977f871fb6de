// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "cozeta/cotype.hpp"
#include "cozeta/errors.hpp"
#include "cozeta/euler.hpp"
#include "cozeta/igusa.hpp"
#include "cozeta/oracle.hpp"

using namespace cozeta;

namespace {

const std::vector<std::string> kRank3 = {"Z3", "H", "sl2", "L1", "L2"};

// Accumulates failures for one criterion.
struct Check {
  std::ostringstream why;
  int failures = 0;
  void fail(const std::string& msg) {
    if (failures++ < 5) why << "\n    " << msg;
  }
  void expect(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
};

int run(int id, const std::string& title, const std::function<std::string(Check&)>& body) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char t[32];
  std::snprintf(t, sizeof t, "%.1fs", secs);
  std::cout << (c.failures ? "FAIL" : "PASS") << " " << id << " " << title << " (" << detail
            << (detail.empty() ? "" : ", ") << t << ")" << c.why.str() << std::endl;
  return c.failures ? 1 : 0;
}

double rel(const Real& a, double b) { return std::abs(static_cast<double>(a) / b - 1); }

// prod over p <= 2e6 in doubles; an independent check on the long products
template <class F>
double euler_double(F f) {
  const long n = 2'000'000;
  std::vector<char> comp(n + 1, 0);
  double s = 0;
  for (long p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    for (long j = p * p; j <= n; j += p) comp[j] = 1;
    s += std::log(f(static_cast<double>(p)));
  }
  return std::exp(s);
}

RationalFunction P(const char* s) { return RationalFunction::parse(s); }

std::string census_vs_formulas(Check& c) {
  struct Budget {
    long p;
    int n;
  };
  int runs = 0;
  long long lattices = 0;
  for (const auto& label : kRank3) {
    LieAlgebra L = *catalog_algebra(label);
    for (Budget b : {Budget{2, 6}, Budget{3, 5}, Budget{5, 4}}) {
      CotypeCensus cen = census(L, b.p, b.n);
      for (int k = 0; k <= b.n; ++k) lattices += cen.total(k);
      std::string where = label + " p=" + std::to_string(b.p);
      RouteResult r = route(L, b.p);
      if (!r.formula) {
        c.fail(where + ": no routed formula (" + r.reason + ")");
        continue;
      }
      CompareReport routed = compare_census(cen, *r.formula);
      CompareReport cat = compare_census(cen, catalog_for_prime(label, b.p));
      c.expect(routed.ok(), where + ": " + std::to_string(routed.mismatches.size()) +
                                " mismatches against the routed formula");
      c.expect(cat.ok(), where + ": " + std::to_string(cat.mismatches.size()) +
                             " mismatches against the catalog formula");
      runs += 2;
    }
  }
  return std::to_string(runs) + " comparisons, " + std::to_string(lattices) + " subalgebras";
}

std::string functional_equations(Check& c) {
  int n = 0;
  for (int d = 1; d <= 5; ++d, ++n)
    c.expect(functional_equation_check(cotype_zeta_free(d), d).holds, "Z^" + std::to_string(d));
  for (const auto& label : kRank3) {
    for (const auto& b : catalog_branches(label)) {
      if (b.validity.is_fixed()) continue;
      c.expect(functional_equation_check(b, b.dim).holds, label + " " + b.validity.to_string());
      ++n;
    }
  }
  return std::to_string(n) + " formulas";
}

std::string igusa_poincare(Check& c) {
  int n = 0;
  for (const auto& fam : IgusaFamily::all_named(3)) {
    PrimeValidity v = fam.validity();
    for (long p : {2L, 3L, 5L, 7L}) {
      if (!v.admits(p)) continue;
      IgusaReport r = verify_closed_form(fam, p, 5);
      c.expect(r.ok() && r.levels.size() == 5, fam.name() + " p=" + std::to_string(p));
      ++n;
    }
  }
  return std::to_string(n) + " family/prime pairs, 5 levels each";
}

std::string structural(Check& c) {
  int n = 0;
  for (const auto& fam : IgusaFamily::all_named(3)) {
    IgusaClosedForm z = closed_form(fam);
    for (int i : {0, 1}) {
      LocalFormula main = assemble_main(z, i);
      c.expect(equals(sum_AI(assemble_AI(z, i)), main.value), "(a) " + fam.name());
      RationalFunction uni = univariate(corank_specialize(main.value, 3).cancel());
      c.expect(equals(uni, univariate_formula(z, i)), "(b) " + fam.name());
      n += 2;
    }
  }
  // Igusa-function route against the closed forms for Z_p, Z_p^2, Z_p^3
  const char* free[] = {
      "1/(1 - Y1)",
      "(1 - Y1^2)/((1 - Y1)*(1 - X*Y1)*(1 - Y1*Y2))",
      "(1 + Y1 + X*Y1 + Y1*Y2 + X*Y1*Y2 + X*Y1^2*Y2)/((1 - X^2*Y1)*(1 - X^2*Y1*Y2)*(1 - Y1*Y2*Y3))"};
  for (int d = 1; d <= 3; ++d, ++n)
    c.expect(equals(cotype_zeta_free(d).value, P(free[d - 1])), "(c) d=" + std::to_string(d));
  // local factor of zeta(s1) zeta(s1 - 1) zeta(s1 + s2) / zeta(2 s1)
  RationalFunction euler = P("(1 - Y1^2)/((1 - Y1)*(1 - X*Y1)*(1 - Y1*Y2))");
  for (const auto& b : catalog_branches("rank2-nonabelian")) {
    c.expect(equals(b.value, euler), "(d) " + b.validity.to_string());
    ++n;
  }
  return std::to_string(n) + " identities";
}

std::string densities(Check& c) {
  struct Row {
    const char* label;
    double p1, p2;
  };
  std::ostringstream got;
  for (Row r : {Row{"Z3", 0.885, 0.998}, Row{"H", 0.492, 0.975}, Row{"sl2", 0.488, 0.974},
                Row{"L1", 0.492, 0.975}, Row{"L2", 0.482, 0.970}}) {
    LieAlgebra L = *catalog_algebra(r.label);
    double want[] = {r.p1, r.p2};
    for (int m = 1; m <= 2; ++m) {
      DensityResult d = density(L, m, 100'000);
      double v = static_cast<double>(d.value);
      got << (got.tellp() ? " " : "") << r.label << "/" << m << "=" << format_real(d.value, 4);
      c.expect(std::abs(v - want[m - 1]) <= 0.002,
               std::string(r.label) + " m=" + std::to_string(m) + ": " + format_real(d.value, 6));
    }
  }
  return got.str();
}

std::string residues(Check& c) {
  const long B = 100'000;
  const double z2 = boost::math::zeta(2.0), z3 = boost::math::zeta(3.0), z9 = boost::math::zeta(9.0);
  auto constant = [&](const char* label, int m) {
    RationalFunction w = corank_specialize(catalog(label, PrimeValidity::all()).value, m).cancel();
    return asymptotic_count(pole_data(extract_zeta_factors(w), B)).c;
  };
  struct Case {
    const char* label;
    int m;
    double want;
  };
  double e_z1 = euler_double([](double p) { return 1 + std::pow(p, -2) + std::pow(p, -3); });
  double e_h1 = euler_double([](double p) { return 1 + std::pow(p, -2) - 2 * std::pow(p, -3); });
  double e_h2 = euler_double([](double p) {
    return 1 + std::pow(p, -2) - std::pow(p, -3) + std::pow(p, -4) - std::pow(p, -5) - std::pow(p, -6);
  });
  double worst = 0;
  for (Case k : {Case{"Z3", 3, z2 * z3 / 3}, Case{"Z3", 2, z2 * z3 / (3 * z9)}, Case{"Z3", 1, e_z1 / 3},
                 Case{"H", 3, z2 * z2 / (4 * z3)}, Case{"H", 1, e_h1 / 4}, Case{"H", 2, z2 * e_h2 / 4}}) {
    Real got = constant(k.label, k.m);
    double e = rel(got, k.want);
    worst = std::max(worst, e);
    c.expect(e < 1e-4, std::string(k.label) + " m=" + std::to_string(k.m) + ": " + format_real(got, 8) +
                           " vs " + std::to_string(k.want));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "6 constants, worst relative error %.1e", worst);
  return buf;
}

std::string pole_structure(Check& c) {
  std::ostringstream got;
  for (const auto& label : kRank3) {
    LieAlgebra L = *catalog_algebra(label);
    std::vector<std::pair<Rational, int>> seen;
    for (int m = 1; m <= 3; ++m) {
      PoleData pd = pole_data(euler_branches(L, m), 2000);
      seen.emplace_back(pd.sigma0, pd.omega);
    }
    c.expect(seen[0] == seen[1] && seen[1] == seen[2], label + ": pole data differs across m");
    got << (got.tellp() ? " " : "") << label << "=(" << seen[0].first.get_str() << "," << seen[0].second
        << ")";
  }
  return got.str();
}

std::string index_p(Check& c) {
  LieAlgebra h = *catalog_algebra("H");
  LocalFormula w = catalog("H", PrimeValidity::all());
  for (long p : {2L, 3L, 5L, 7L}) {
    long long oracle = 0;
    for (const auto& M : sublattices(p, 1))
      if (is_subalgebra(M, h)) ++oracle;
    auto coeffs = series_coefficients(w.value, p, 1, VarSet::ys(3));
    Rational series = coeffs.count({1, 0, 0}) ? coeffs.at({1, 0, 0}) : Rational(0);
    c.expect(oracle == 1 + p, "oracle p=" + std::to_string(p) + ": " + std::to_string(oracle));
    c.expect(series == 1 + p, "series p=" + std::to_string(p) + ": " + series.get_str());
  }
  return "p in {2,3,5,7}";
}

}  // namespace

int main() {
  int failed = 0;
  failed += run(1, "census equals routed and catalog formulas", census_vs_formulas);
  failed += run(2, "functional equation", functional_equations);
  failed += run(3, "Igusa-Poincare consistency", igusa_poincare);
  failed += run(4, "structural identities", structural);
  failed += run(5, "corank densities", densities);
  failed += run(6, "residue constants", residues);
  failed += run(7, "pole structure independent of corank", pole_structure);
  failed += run(8, "index-p subalgebras of H", index_p);
  std::cout << (failed ? "FAILED " : "ALL PASS ") << 8 - failed << "/8" << std::endl;
  return failed ? 1 : 0;
}
