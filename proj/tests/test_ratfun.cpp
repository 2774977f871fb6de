#include "doctest.h"

#include "cozeta/errors.hpp"
#include "cozeta/ratfun.hpp"

using namespace cozeta;

namespace {
RationalFunction P(const char* s) { return RationalFunction::parse(s); }
}  // namespace

TEST_CASE("monomial order is graded lex") {
  Monomial x = Monomial::of(Var::X), y1 = Monomial::of(Var::Y1);
  CHECK(Monomial{} < y1);
  CHECK(y1 < x);  // same degree, X exponent first
  CHECK(x < y1 * y1);
  CHECK(x.pow(2).to_string() == "X^2");
  CHECK((x * y1.inverse()).to_string() == "X*Y1^-1");
}

TEST_CASE("print and parse round trip") {
  const char* text = "(1 + Y1 + X*Y1) / ((1 - X^2*Y1)*(1 - Y1*Y2*Y3))";
  RationalFunction w = P(text);
  CHECK(w.to_string() == text);
  CHECK(equals(P(w.to_string().c_str()), w));
  CHECK(P("1 - 3/2*X^-1").to_string() == "-3/2*X^-1 + 1");
  CHECK(P("(1 - Y1)^-2").to_string() == "1 / (1 - Y1)^2");
  CHECK(P("-X/(1-X)").to_string() == "-X / (1 - X)");
  CHECK(P("2*X^(-1)").to_string() == "2*X^-1");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(P("1 + Z"), ParseError);
  CHECK_THROWS_AS(P("(1 + X"), ParseError);
  CHECK_THROWS_AS(P("1 / 0"), ParseError);
  CHECK_THROWS_AS(P("X +"), ParseError);
}

TEST_CASE("arithmetic and cross-multiplied equality") {
  RationalFunction a = P("1/(1-Y1)"), b = P("Y1/(1-Y1)");
  CHECK(equals(a - b, RationalFunction(1)));
  CHECK(equals(a * (RationalFunction(1) - RationalFunction::var(Var::Y1)), RationalFunction(1)));
  CHECK(equals(P("(1-X^2)/(1-X)"), P("1+X")));
  CHECK_FALSE(equals(P("1/(1-X)"), P("1/(1+X)")));
  CHECK(equals(P("X^-1 - 1"), P("(1-X)/X")));
  CHECK_THROWS_AS(a / RationalFunction(0), DivisionByZero);
  CHECK_THROWS_AS(RationalFunction::quotient(Polynomial(1), Polynomial()), DivisionByZero);
}

TEST_CASE("denominator factors are normalized") {
  RationalFunction w = P("1/(2*X - 2)");
  REQUIRE(w.denominator_factors().size() == 1);
  CHECK(w.denominator_factors()[0].poly.to_string() == "1 - X");
  CHECK(equals(w, P("-1/2/(1-X)")));
  // monomial denominators fold into the numerator
  CHECK(P("1/(X*Y1)").is_polynomial());
}

TEST_CASE("cancel removes exact factors") {
  RationalFunction w = P("(1 - X^2*Y1^2) / ((1 - X*Y1)*(1 - Y2))");
  RationalFunction c = w.cancel();
  CHECK(c.to_string() == "(1 + X*Y1) / (1 - Y2)");
  CHECK(equals(c, w));
}

TEST_CASE("invert variables") {
  RationalFunction w = P("1/(1-Y1)");
  RationalFunction wi = invert_variables(w, {Var::Y1});
  CHECK(equals(wi, -RationalFunction::var(Var::Y1) * w));
  // involution
  RationalFunction g = P("(1 + X*Y1 - Y2^2)/((1 - X^3*Y1^2)*(1-X^-1))");
  CHECK(equals(invert_variables(invert_variables(g, {Var::X, Var::Y1}), {Var::X, Var::Y1}), g));
}

TEST_CASE("substitution") {
  RationalFunction w = P("(1 + Y1 + X*Y1) / ((1 - X^2*Y1)*(1 - Y1*Y2*Y3))");
  RationalFunction u = substitute(w, {{Var::Y1, RationalFunction::var(Var::T)}, {Var::Y2, 0}, {Var::Y3, 0}});
  CHECK(u.to_string() == "(1 + T + X*T) / (1 - X^2*T)");
  CHECK_THROWS_AS(substitute(P("1/(1-X)"), {{Var::X, 1}}), DenominatorVanishes);
  CHECK_THROWS_AS(substitute(P("X^-1"), {{Var::X, 0}}), DenominatorVanishes);
  // non-monomial values go through the general path
  RationalFunction v = substitute(P("1/(1-T)"), {{Var::T, P("X/(1+X)")}});
  CHECK(equals(v, P("1+X")));
  try {
    substitute(P("1/(1-X*Y1)"), {{Var::X, 1}, {Var::Y1, 1}});
    FAIL("expected an exception");
  } catch (const DenominatorVanishes& e) {
    CHECK(std::string(e.what()).find("X := 1") != std::string::npos);
  }
}

TEST_CASE("series coefficients") {
  auto c = series_coefficients(P("1/(1-Y1)"), std::nullopt, 6, VarSet{Var::Y1});
  for (int n = 0; n <= 6; ++n) CHECK(c[{n}] == 1);
  // zeta(s)zeta(s-1) local factor: sigma_1(p^n)
  auto s = series_coefficients(P("1/((1-T)*(1-X*T))"), 3, 4, VarSet{Var::T});
  CHECK(s[{0}] == 1);
  CHECK(s[{1}] == 4);
  CHECK(s[{2}] == 13);
  CHECK(s[{4}] == 121);
  auto m = series_coefficients(P("1/((1-Y1)*(1-Y1*Y2))"), std::nullopt, 3, VarSet::ys(2));
  CHECK(m[{1, 1}] == 1);
  CHECK(m[{2, 1}] == 1);
  CHECK(m.count({0, 1}) == 0);
  CHECK_THROWS_AS(series_coefficients(P("1/Y1"), std::nullopt, 3, VarSet{Var::Y1}), NonExpandable);
  CHECK_THROWS_AS(series_coefficients(P("1/(Y1+Y1^2)"), std::nullopt, 3, VarSet{Var::Y1}),
                  NonExpandable);
  CHECK_THROWS_AS(series_coefficients(P("1/(1-X*Y1)"), std::nullopt, 3, VarSet{Var::Y1}),
                  VariableMismatch);
}

TEST_CASE("symbolic series keeps X in coefficients") {
  auto s = series_expand(P("1/(1-X*T)"), VarSet{Var::T}, 3);
  CHECK(s[{3}].to_string() == "X^3");
}

TEST_CASE("exact division") {
  Polynomial f = Polynomial::parse("1 - X^3*T^3");
  auto q = f.divide_exact(Polynomial::parse("1 - X*T"));
  REQUIRE(q);
  CHECK(q->to_string() == "1 + X*T + X^2*T^2");
  CHECK_FALSE(f.divide_exact(Polynomial::parse("1 + X*T")));
  auto l = Polynomial::parse("X^-1 - X").divide_exact(Polynomial::parse("1 - X"));
  REQUIRE(l);
  CHECK(*l == Polynomial::parse("X^-1 + 1"));
}

TEST_CASE("evaluate") {
  CHECK(evaluate(P("(1+X)/(1-X*T)"), {{Var::X, 2}, {Var::T, Rational(1, 4)}}) == 6);
  CHECK_THROWS_AS(evaluate(P("1/(1-X)"), {{Var::X, 1}}), DenominatorVanishes);
}
