#include "cozeta/cotype.hpp"

#include <algorithm>
#include <sstream>

#include "cozeta/errors.hpp"

namespace cozeta {

namespace {

RationalFunction P(std::string_view s) { return RationalFunction::parse(s); }

RationalFunction X(int e = 1) { return RationalFunction::var(Var::X, e); }

constexpr std::string_view kFree3 =
    "(1 + Y1 + X*Y1 + Y1*Y2 + X*Y1*Y2 + X*Y1^2*Y2)/((1 - X^2*Y1)*(1 - X^2*Y1*Y2)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kH =
    "(1 + Y1 + X*Y1 + X^2*Y1^2 + Y1*Y2 + X*Y1*Y2 + X*Y1^2*Y2 + X^2*Y1^2*Y2"
    " - X^2*Y1^3*Y2*Y3 - X^3*Y1^3*Y2*Y3 - X^3*Y1^4*Y2*Y3 - X^4*Y1^4*Y2*Y3 - X^2*Y1^3*Y2^2*Y3"
    " - X^3*Y1^4*Y2^2*Y3 - X^4*Y1^4*Y2^2*Y3 - X^4*Y1^5*Y2^2*Y3)"
    "/((1 - X^3*Y1^2)*(1 - X^2*Y1*Y2)*(1 - X^2*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kSl2Odd =
    "(1 + Y1 + Y1*Y2*(1 + X) - X^2*Y1^4*Y2^2*Y3 - X*Y1^3*Y2*Y3*(1 + X + X*Y2))"
    "/((1 - X*Y1)*(1 - X^2*Y1*Y2)*(1 - X^2*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kSl2Two =
    "(1 + Y1 + 6*Y1^2 + 3*Y1*Y2 + 12*Y1^3*Y2 - 12*Y1^3*Y2*Y3 - 4*Y1^3*Y2^2*Y3 - 16*Y1^4*Y2^2*Y3)"
    "/((1 - 2*Y1)*(1 - 4*Y1*Y2)*(1 - 4*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

// Split rank-2 case (also the p = 1 mod 4 class of L2).
constexpr std::string_view kSplitOdd =
    "(1 + Y1 - 2*X*Y1^2 + Y1*Y2 + X*Y1*Y2 - X*Y1^2*Y2 - X^2*Y1^3*Y2"
    " - X*Y1^2*Y2*Y3 - X^2*Y1^3*Y2*Y3 + X^2*Y1^4*Y2*Y3 + X^3*Y1^4*Y2*Y3"
    " - 2*X^2*Y1^3*Y2^2*Y3 + X^3*Y1^4*Y2^2*Y3 + X^3*Y1^5*Y2^2*Y3)"
    "/((1 - X*Y1)^2*(1 - X^2*Y1*Y2)*(1 - X^2*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kL1Two =
    "(1 - Y1 + 4*Y1^2 + 4*Y1^3 - 16*Y1^4 + 3*Y1*Y2 - 6*Y1^2*Y2 + 12*Y1^3*Y2 + 8*Y1^4*Y2"
    " - 32*Y1^5*Y2 - 12*Y1^3*Y2*Y3 + 8*Y1^4*Y2*Y3 + 16*Y1^5*Y2*Y3 - 4*Y1^3*Y2^2*Y3"
    " - 8*Y1^4*Y2^2*Y3 + 32*Y1^6*Y2^2*Y3)"
    "/((1 - 2*Y1)^2*(1 - 4*Y1*Y2)*(1 - 4*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kInert =
    "(1 + Y1 + Y1*Y2 + X*Y1*Y2 + X*Y1^2*Y2 - X^2*Y1^3*Y2 + X*Y1^2*Y2*Y3 - X^2*Y1^3*Y2*Y3"
    " - X^2*Y1^4*Y2*Y3 - X^3*Y1^4*Y2*Y3 - X^3*Y1^4*Y2^2*Y3 - X^3*Y1^5*Y2^2*Y3)"
    "/((1 - X^2*Y1^2)*(1 - X^2*Y1*Y2)*(1 - X^2*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kL2Two =
    "(1 + Y1 - 2*Y1^2 + 3*Y1*Y2 - 4*Y1^3*Y2 - 4*Y1^3*Y2*Y3 - 4*Y1^3*Y2^2*Y3)"
    "/((1 - 2*Y1)*(1 - 4*Y1*Y2)*(1 - 4*Y1^2*Y2*Y3)*(1 - Y1*Y2*Y3))";

constexpr std::string_view kRank2 = "(1 - Y1^2)/((1 - Y1)*(1 - X*Y1)*(1 - Y1*Y2))";

LocalFormula make(std::string_view text, std::string label, PrimeValidity v, int dim = 3) {
  return {P(text), std::move(label), std::move(v), 0, dim};
}

std::optional<IgusaFamily> parse_solvable(std::string_view label) {
  if (label.substr(0, 9) != "solvable(") return std::nullopt;
  try {
    return IgusaFamily::parse(label);
  } catch (const UnknownFamily&) {
    return std::nullopt;
  }
}

}  // namespace

// --------------------------------------------------------- LocalFormula

std::string LocalFormula::serialize() const {
  std::ostringstream os;
  os << "algebra=" << algebra << "\n"
     << "prime_validity=" << validity.to_string() << "\n"
     << "scale=" << scale << "\n"
     << "dim=" << dim << "\n"
     << value.to_string() << "\n";
  return os.str();
}

LocalFormula LocalFormula::parse(std::string_view text) {
  LocalFormula f;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_value = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    auto key = eq == std::string::npos ? std::string() : line.substr(0, eq);
    if (key == "algebra") {
      f.algebra = line.substr(eq + 1);
    } else if (key == "prime_validity") {
      f.validity = PrimeValidity::parse(line.substr(eq + 1));
    } else if (key == "scale") {
      f.scale = std::stoi(line.substr(eq + 1));
    } else if (key == "dim") {
      f.dim = std::stoi(line.substr(eq + 1));
    } else {
      if (have_value) throw ParseError("more than one formula line");
      f.value = RationalFunction::parse(line);
      have_value = true;
    }
  }
  if (!have_value) throw ParseError("formula text has no value line");
  return f;
}

// ---------------------------------------------------- Gaussian binomials

Polynomial gaussian_binomial(int a, int b, Var y) {
  if (a < 0 || b < 0 || b > a)
    throw DomainError("Gaussian binomial needs 0 <= b <= a, got (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
  // Pascal rule [a,b] = [a-1,b-1] + y^b [a-1,b]
  std::vector<Polynomial> row{Polynomial(1)};
  for (int n = 1; n <= a; ++n) {
    std::vector<Polynomial> next(n + 1);
    next[0] = Polynomial(1);
    next[n] = Polynomial(1);
    for (int k = 1; k < n; ++k) next[k] = row[k - 1] + Polynomial::var(y, k) * row[k];
    row = std::move(next);
  }
  return row[b];
}

Polynomial gaussian_multinomial(int d, const std::vector<int>& I, Var y) {
  std::vector<int> s = I;
  std::sort(s.begin(), s.end());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 1 || s[k] > d - 1 || (k && s[k] == s[k - 1]))
      throw DomainError("multinomial index set must be a subset of {1.." + std::to_string(d - 1) + "}");
  }
  Polynomial r(1);
  int top = d;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    r *= gaussian_binomial(top, *it, y);
    top = *it;
  }
  return r;
}

RationalFunction igusa_function(int d, const RationalFunction& y,
                                const std::vector<RationalFunction>& xs) {
  if (d < 1) throw DomainError("Igusa function needs d >= 1");
  if (static_cast<int>(xs.size()) != d) throw DomainError("Igusa function needs d values X_1..X_d");
  const RationalFunction one(1);
  std::vector<RationalFunction> frac;
  for (int i = 0; i < d - 1; ++i) frac.push_back(xs[i] / (one - xs[i]));
  RationalFunction sum;
  for (unsigned mask = 0; mask < (1u << (d - 1)); ++mask) {
    std::vector<int> I;
    RationalFunction term(1);
    for (int i = 1; i < d; ++i) {
      if (mask & (1u << (i - 1))) {
        I.push_back(i);
        term *= frac[i - 1];
      }
    }
    RationalFunction binom = substitute(RationalFunction(gaussian_multinomial(d, I, Var::T)),
                                        {{Var::T, y}});
    sum += binom * term;
  }
  return sum / (one - xs[d - 1]);
}

LocalFormula cotype_zeta_free(int d) {
  if (d < 1 || d > kMaxFreeRank)
    throw DomainError("free rank must be in 1.." + std::to_string(kMaxFreeRank));
  std::vector<RationalFunction> xs;
  RationalFunction prod(1);
  for (int i = 1; i <= d; ++i) {
    prod *= RationalFunction::var(y_var(i));
    xs.push_back(X(i * (d - i)) * prod);
  }
  RationalFunction w = igusa_function(d, X(-1), xs).cancel();
  return {w, "Z" + std::to_string(d), PrimeValidity::all(), 0, d};
}

// ------------------------------------------------------------- assembly

RationalFunction shifted_igusa(const IgusaClosedForm& igusa) {
  for (Var v : igusa.value.support().members())
    if (v != Var::X && v != Var::T)
      throw VariableMismatch("Igusa closed form may only use X and T, found " +
                             std::string(var_name(v)));
  RationalFunction x2y1 = P("X^2*Y1");
  return substitute(igusa.value, {{Var::T, x2y1}});
}

namespace {

RationalFunction fix_prime(const RationalFunction& w, const PrimeValidity& v) {
  if (!v.is_fixed()) return w;
  return substitute(w, {{Var::X, RationalFunction(Rational(v.prime))}});
}

}  // namespace

LocalFormula assemble_main(const IgusaClosedForm& igusa, int scale, std::string label) {
  if (scale < 0) throw DomainError("scale must be non-negative");
  if (label.empty()) label = igusa.family.name();
  RationalFunction z = shifted_igusa(igusa);
  RationalFunction free3 = P(kFree3);
  if (z.is_zero()) return {fix_prime(free3, igusa.validity), label, igusa.validity, scale, 3};
  RationalFunction corr = z * P("X^2*Y1").pow(scale + 1) *
                          P("(1 + X*Y1*Y2)*(1 - X*Y1^2)/((1 - X^2*Y1)*(1 - X^2*Y1*Y2)*"
                            "(1 - X^2*Y1^2*Y2*Y3)*(1 - X^-1))");
  RationalFunction w = fix_prime(free3 - corr, igusa.validity).cancel();
  return {w, label, igusa.validity, scale, 3};
}

std::array<RationalFunction, 4> assemble_AI(const IgusaClosedForm& igusa, int scale) {
  RationalFunction z = shifted_igusa(igusa) * P("X^2*Y1").pow(scale);
  RationalFunction a2 = P("(1 + X^-1 + X^-2)*X^2*Y1*Y2/(1 - X^2*Y1*Y2)");
  RationalFunction a1 = P("(1 + X + X^2)*Y1/(1 - X^2*Y1)") -
                        P("X^2*Y1*(1 - Y1*Y2*Y3)*(1 - X*Y1^2)/((1 - X^-1)*(1 - X^2*Y1)*"
                          "(1 - X^2*Y1^2*Y2*Y3))") *
                            z;
  RationalFunction a12 = P("(X^-1 + 1)*X^2*Y1*Y2/(1 - X^2*Y1*Y2)") * a1;
  std::array<RationalFunction, 4> out{RationalFunction(1), a2, a1, a12};
  for (auto& a : out) a = fix_prime(a, igusa.validity);
  return out;
}

RationalFunction sum_AI(const std::array<RationalFunction, 4>& a) {
  return (a[0] + a[1] + a[2] + a[3]) / P("1 - Y1*Y2*Y3");
}

LocalFormula rescale(const LocalFormula& w, int i) {
  if (i < 0) throw DomainError("scale must be non-negative");
  if (w.dim != 3) throw DomainError("rescaling needs a rank-3 formula");
  if (i == 0) return w;
  RationalFunction free3 = fix_prime(P(kFree3), w.validity);
  RationalFunction shift = fix_prime(P("X^2*Y1"), w.validity).pow(i);
  LocalFormula r = w;
  r.value = (free3 - shift * (free3 - w.value)).cancel();
  r.scale = w.scale + i;
  return r;
}

RationalFunction univariate_formula(const IgusaClosedForm& igusa, int scale) {
  RationalFunction z = substitute(igusa.value, {{Var::T, P("X^2*T")}});
  RationalFunction w = P("1/((1 - T)*(1 - X*T)*(1 - X^2*T))") -
                       z * P("X^2*T").pow(scale + 1) / P("(1 - X^2*T)*(1 - X^2*T^2)*(1 - X^-1)");
  return fix_prime(w, igusa.validity);
}

// -------------------------------------------------------------- catalog

const std::vector<std::string>& catalog_labels() {
  static const std::vector<std::string> labels = {"Z3", "H",  "sl2", "L1",
                                                  "L2", "Z1", "Z2",  "rank2-nonabelian"};
  return labels;
}

std::vector<LocalFormula> catalog_branches(std::string_view label) {
  if (label == "Z3") return {make(kFree3, "Z3", PrimeValidity::all())};
  if (label == "H") return {make(kH, "H", PrimeValidity::all())};
  if (label == "sl2")
    return {make(kSl2Odd, "sl2", PrimeValidity::odd()), make(kSl2Two, "sl2", PrimeValidity::fixed(2))};
  if (label == "L1")
    return {make(kSplitOdd, "L1", PrimeValidity::odd()), make(kL1Two, "L1", PrimeValidity::fixed(2))};
  if (label == "L2")
    return {make(kSplitOdd, "L2", PrimeValidity::residue_class(1, 4)),
            make(kInert, "L2", PrimeValidity::residue_class(3, 4)),
            make(kL2Two, "L2", PrimeValidity::fixed(2))};
  if (label == "Z1") return {make("1/(1 - Y1)", "Z1", PrimeValidity::all(), 1)};
  if (label == "Z2") return {make(kRank2, "Z2", PrimeValidity::all(), 2)};
  if (label == "rank2-nonabelian")
    return {make(kRank2, "rank2-nonabelian", PrimeValidity::all(), 2)};
  if (auto fam = parse_solvable(label))
    return {assemble_main(closed_form(*fam), 0, std::string(label))};
  throw UnknownFamily("unknown catalog label '" + std::string(label) + "'");
}

LocalFormula catalog(std::string_view label, const PrimeValidity& cls) {
  for (auto& b : catalog_branches(label))
    if (b.validity == cls) return b;
  throw UnknownFamily("catalog label '" + std::string(label) + "' has no formula for " +
                      cls.to_string());
}

LocalFormula catalog_for_prime(std::string_view label, long p) {
  for (auto& b : catalog_branches(label))
    if (b.validity.admits(p)) return b;
  throw UnknownFamily("catalog label '" + std::string(label) + "' has no formula at p = " +
                      std::to_string(p));
}

std::optional<LieAlgebra> catalog_algebra(std::string_view label) {
  if (label == "Z3") return LieAlgebra::make({0, 0, 0}, {0, 0, 0}, {0, 0, 0}, "Z3");
  if (label == "H") return LieAlgebra::make({0, 0, 1}, {0, 0, 0}, {0, 0, 0}, "H");
  if (label == "sl2") return LieAlgebra::make({0, 0, 1}, {-2, 0, 0}, {0, 2, 0}, "sl2");
  if (label == "L1") return LieAlgebra::make({0, 0, 1}, {0, 1, 0}, {0, 0, 0}, "L1");
  if (label == "L2") return LieAlgebra::make({0, 0, 1}, {0, -1, 0}, {0, 0, 0}, "L2");
  return std::nullopt;
}

// ----------------------------------------------------------------- FE

FEResult functional_equation_check(const LocalFormula& w, int d) {
  if (w.validity.is_fixed())
    throw FixedPrimeFormula("the functional equation concerns the formula as a function of X; the "
                            "formula for " + w.algebra + " is only valid at " +
                            w.validity.to_string());
  if (d < 1 || d > kMaxY) throw DomainError("dimension out of range");
  VarSet vs = VarSet::ys(d);
  vs.insert(Var::X);
  RationalFunction lhs = invert_variables(w.value, vs);
  RationalFunction mono = X(d * (d - 1) / 2);
  for (int i = 1; i <= d; ++i) mono *= RationalFunction::var(y_var(i));
  if (d % 2) mono = -mono;
  RationalFunction rhs = mono * w.value;
  FEResult r;
  r.holds = equals(lhs, rhs);
  if (!r.holds) r.witness = (lhs - rhs).cancel();
  return r;
}

RationalFunction corank_specialize(const RationalFunction& w, int m, int d) {
  if (m < 1 || m > d) throw DomainError("corank must be in 1.." + std::to_string(d));
  Bindings b;
  for (int i = 1; i <= d; ++i)
    b[y_var(i)] = i <= m ? RationalFunction::var(Var::T) : RationalFunction(0);
  return substitute(w, b);
}

RationalFunction univariate(const RationalFunction& w, int d) { return corank_specialize(w, d, d); }

// -------------------------------------------------------------- routing

namespace {

Mat3 divide(Mat3 A, long long g) {
  for (auto& row : A)
    for (auto& x : row) x /= g;
  return A;
}

long long power(long long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// Family that describes the form at every good prime; for rank 2 irreducible
// forms the sign picks the split (+1) or inert (-1) family.
IgusaFamily generic_family(const FormClass& fc, int sign) {
  switch (fc.rank) {
    case 1: return IgusaFamily::parse("H");
    case 2: return IgusaFamily::parse(sign > 0 ? "L1_odd" : "L2_3mod4");
    default: return IgusaFamily::parse("sl2_odd");
  }
}

std::optional<IgusaFamily> catalog_family_at(std::string_view label, long p) {
  if (label == "H") return IgusaFamily::parse("H");
  if (label == "sl2") return IgusaFamily::parse(p == 2 ? "sl2_two" : "sl2_odd");
  if (label == "L1") return IgusaFamily::parse(p == 2 ? "L1_two" : "L1_odd");
  if (label == "L2") {
    if (p == 2) return IgusaFamily::parse("L2_two");
    return IgusaFamily::parse(p % 4 == 1 ? "L2_1mod4" : "L2_3mod4");
  }
  return std::nullopt;
}

std::string label_of(const LieAlgebra& L) { return L.name().empty() ? "L" : L.name(); }

}  // namespace

RouteResult route(const LieAlgebra& L, std::optional<long> p) {
  if (p && !is_prime(*p)) throw DomainError(std::to_string(*p) + " is not a prime");
  const std::string label = label_of(L);
  Mat3 A = structure_matrix(L);
  long long g = content(A);
  RouteResult r;
  if (g == 0) {
    LocalFormula f = cotype_zeta_free(3);
    f.algebra = label;
    r.formula = f;
    r.family = "zero";
    return r;
  }
  if (!p) {
    FormClass fc = classify(QuadraticForm{divide(A, g)});
    std::set<long long> bad = fc.bad_primes;
    for (auto q : prime_divisors(g)) bad.insert(q);
    if (fc.rank == 2 && !fc.reducible_over_z) {
      r.reason = "the formula depends on the Legendre symbol (" +
                 std::to_string(*fc.binary_discriminant) + "/p); no single uniform formula";
      return r;
    }
    IgusaFamily fam = generic_family(fc, 1);
    LocalFormula f = assemble_main(closed_form(fam), 0, label);
    f.validity = PrimeValidity::all();
    f.validity.excluded = bad;
    r.formula = f;
    r.family = fam.name();
    return r;
  }
  int i = valuation(g, *p);
  Mat3 A0 = divide(A, power(*p, i));
  FormClass fc = classify(QuadraticForm{A0});
  if (!fc.is_good(*p)) {
    LieAlgebra L0 = from_structure_matrix(A0);
    for (const auto& lab : catalog_labels()) {
      auto cat = catalog_algebra(lab);
      if (!cat || !cat->same_brackets(L0)) continue;
      auto fam = catalog_family_at(lab, *p);
      if (!fam) continue;
      LocalFormula f = assemble_main(closed_form(*fam), i, label);
      if (i > 0) f.validity = PrimeValidity::fixed(*p);
      r.formula = f;
      r.family = fam->name();
      return r;
    }
    r.reason = std::to_string(*p) + " is a bad prime for this algebra; use census for the local factor";
    return r;
  }
  int sign = 1;
  if (fc.rank == 2 && !fc.reducible_over_z) sign = legendre(*fc.binary_discriminant, *p);
  IgusaFamily fam = generic_family(fc, sign);
  LocalFormula f = assemble_main(closed_form(fam), i, label);
  if (i > 0) {
    f.validity = PrimeValidity::fixed(*p);
  } else if (fc.rank == 2 && !fc.reducible_over_z) {
    f.validity = PrimeValidity::legendre_class(static_cast<long>(*fc.binary_discriminant), sign);
    for (auto q : fc.bad_primes) f.validity.excluded.insert(q);
  } else {
    f.validity = PrimeValidity::all();
    f.validity.excluded = fc.bad_primes;
  }
  r.formula = f;
  r.family = fam.name();
  return r;
}

std::vector<LocalFormula> route_branches(const LieAlgebra& L) {
  RouteResult r = route(L, std::nullopt);
  if (r.formula) return {*r.formula};
  Mat3 A = structure_matrix(L);
  long long g = content(A);
  FormClass fc = classify(QuadraticForm{divide(A, g)});
  std::vector<LocalFormula> out;
  for (int sign : {1, -1}) {
    LocalFormula f = assemble_main(closed_form(generic_family(fc, sign)), 0, label_of(L));
    f.validity = PrimeValidity::legendre_class(static_cast<long>(*fc.binary_discriminant), sign);
    for (auto q : fc.bad_primes) f.validity.excluded.insert(q);
    for (auto q : prime_divisors(g)) f.validity.excluded.insert(q);
    out.push_back(f);
  }
  return out;
}

}  // namespace cozeta
