#include "doctest.h"

#include "cozeta/cotype.hpp"
#include "cozeta/errors.hpp"

using namespace cozeta;

namespace {
RationalFunction P(const char* s) { return RationalFunction::parse(s); }
}  // namespace

TEST_CASE("Gaussian binomials") {
  CHECK(gaussian_binomial(2, 1) == Polynomial::parse("1 + T"));
  CHECK(gaussian_binomial(4, 2) == Polynomial::parse("1 + T + 2*T^2 + T^3 + T^4"));
  CHECK(gaussian_binomial(5, 0) == Polynomial(1));
  CHECK(gaussian_multinomial(3, {1, 2}) == Polynomial::parse("(1 + T)*(1 + T + T^2)"));
  CHECK_THROWS_AS(gaussian_binomial(2, 3), DomainError);
  CHECK_THROWS_AS(gaussian_multinomial(3, {3}), DomainError);
}

TEST_CASE("free modules") {
  CHECK(equals(cotype_zeta_free(1).value, P("1/(1 - Y1)")));
  CHECK(equals(cotype_zeta_free(2).value, P("(1 - Y1^2)/((1 - Y1)*(1 - X*Y1)*(1 - Y1*Y2))")));
  CHECK(equals(cotype_zeta_free(3).value, catalog("Z3", PrimeValidity::all()).value));
  for (int d = 1; d <= kMaxFreeRank; ++d) {
    INFO("d=", d);
    CHECK(functional_equation_check(cotype_zeta_free(d), d).holds);
  }
  CHECK_THROWS_AS(cotype_zeta_free(6), DomainError);
}

TEST_CASE("catalog agrees with assembly") {
  struct Case {
    const char* label;
    const char* family;
  };
  for (Case c : {Case{"H", "H"}, Case{"sl2", "sl2_odd"}, Case{"sl2", "sl2_two"},
                 Case{"L1", "L1_odd"}, Case{"L1", "L1_two"}, Case{"L2", "L2_1mod4"},
                 Case{"L2", "L2_3mod4"}, Case{"L2", "L2_two"}, Case{"Z3", "zero"}}) {
    IgusaClosedForm z = closed_form(IgusaFamily::parse(c.family));
    LocalFormula cat = catalog(c.label, z.validity);
    INFO(c.label, " ", c.family);
    CHECK(equals(cat.value, assemble_main(z).value));
    CHECK(equals(sum_AI(assemble_AI(z)), cat.value));
  }
}

TEST_CASE("univariate specialization matches the Igusa formula") {
  for (const auto& fam : IgusaFamily::all_named(2)) {
    IgusaClosedForm z = closed_form(fam);
    for (int i : {0, 1, 2}) {
      INFO(fam.name(), " i=", i);
      CHECK(equals(univariate(assemble_main(z, i).value), univariate_formula(z, i)));
    }
  }
}

TEST_CASE("functional equation") {
  for (const auto& label : catalog_labels()) {
    for (const auto& b : catalog_branches(label)) {
      if (b.validity.is_fixed()) {
        CHECK_THROWS_AS(functional_equation_check(b, b.dim), FixedPrimeFormula);
        continue;
      }
      INFO(label, " ", b.validity.to_string());
      CHECK(functional_equation_check(b, b.dim).holds);
    }
  }
  LocalFormula bad{P("1/(1 - X*Y1)"), "bad", PrimeValidity::all(), 0, 1};
  FEResult r = functional_equation_check(bad, 1);
  CHECK_FALSE(r.holds);
  CHECK_FALSE(r.witness.is_zero());
  // p^i L breaks the symmetry for i > 0
  LocalFormula scaled = assemble_main(closed_form(IgusaFamily::parse("H")), 1);
  CHECK_FALSE(functional_equation_check(scaled, 3).holds);
}

TEST_CASE("rescaling") {
  for (const char* name : {"H", "sl2_odd", "L2_3mod4", "sl2_two"}) {
    IgusaClosedForm z = closed_form(IgusaFamily::parse(name));
    LocalFormula base = assemble_main(z);
    for (int i : {1, 2}) {
      INFO(name, " i=", i);
      LocalFormula r = rescale(base, i);
      CHECK(r.scale == i);
      CHECK(equals(r.value, assemble_main(z, i).value));
    }
  }
}

TEST_CASE("corank specialization") {
  RationalFunction z3 = catalog("Z3", PrimeValidity::all()).value;
  CHECK(corank_specialize(z3, 1).cancel().to_string() == "(1 + T + X*T) / (1 - X^2*T)");
  CHECK(equals(univariate(z3), P("1/((1 - T)*(1 - X*T)*(1 - X^2*T))")));
  CHECK_THROWS_AS(corank_specialize(z3, 0), DomainError);
  CHECK_THROWS_AS(corank_specialize(z3, 4), DomainError);
}

TEST_CASE("serialization round trip") {
  LocalFormula f = catalog("L2", PrimeValidity::residue_class(3, 4));
  LocalFormula g = LocalFormula::parse(f.serialize());
  CHECK(g.algebra == "L2");
  CHECK(g.validity == f.validity);
  CHECK(equals(g.value, f.value));
  CHECK_THROWS_AS(LocalFormula::parse("algebra=x\n"), ParseError);
}

TEST_CASE("routing") {
  LieAlgebra h5 = LieAlgebra::make({0, 0, 5}, {0, 0, 0}, {0, 0, 0}, "5H");
  RouteResult at5 = route(h5, 5);
  REQUIRE(at5.formula);
  CHECK(at5.family == "H");
  CHECK(at5.formula->scale == 1);
  CHECK(at5.formula->validity.is_fixed());
  RouteResult at3 = route(h5, 3);
  REQUIRE(at3.formula);
  CHECK(at3.formula->scale == 0);
  CHECK(equals(at3.formula->value, catalog("H", PrimeValidity::all()).value));

  LieAlgebra sl2 = *catalog_algebra("sl2");
  RouteResult s2 = route(sl2, 2);
  REQUIRE(s2.formula);
  CHECK(s2.family == "sl2_two");
  CHECK(equals(s2.formula->value, catalog("sl2", PrimeValidity::fixed(2)).value));
  RouteResult s7 = route(sl2, 7);
  REQUIRE(s7.formula);
  CHECK(equals(s7.formula->value, catalog("sl2", PrimeValidity::odd()).value));

  LieAlgebra l2 = *catalog_algebra("L2");
  CHECK_FALSE(route(l2, std::nullopt).formula);
  auto br = route_branches(l2);
  CHECK(br.size() == 2);
  REQUIRE(route(l2, 5).formula);
  CHECK(equals(route(l2, 5).formula->value, catalog("L2", PrimeValidity::residue_class(1, 4)).value));
  CHECK(equals(route(l2, 7).formula->value, catalog("L2", PrimeValidity::residue_class(3, 4)).value));

  // a form with no catalog match at a bad prime
  LieAlgebra odd = LieAlgebra::make({0, 0, 3}, {0, 0, 0}, {0, 0, 0}, "3H");
  LieAlgebra weird = LieAlgebra::make({0, 0, 1}, {0, -3, 0}, {0, 0, 0}, "M");
  RouteResult w3 = route(weird, 3);
  CHECK_FALSE(w3.formula);
  CHECK(w3.reason.find("census") != std::string::npos);
  CHECK(route(odd, 3).formula);
  CHECK_THROWS_AS(route(h5, 4), DomainError);
}
