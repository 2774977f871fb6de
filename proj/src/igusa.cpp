#include "cozeta/igusa.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cozeta/errors.hpp"

namespace cozeta {

// --------------------------------------------------------- PrimeValidity

PrimeValidity PrimeValidity::fixed(long p) {
  PrimeValidity v;
  v.kind = Kind::Fixed;
  v.prime = p;
  return v;
}

PrimeValidity PrimeValidity::residue_class(long r, long m) {
  PrimeValidity v;
  v.kind = Kind::Residue;
  v.residue = r;
  v.modulus = m;
  return v;
}

PrimeValidity PrimeValidity::legendre_class(long d, int s) {
  PrimeValidity v;
  v.kind = Kind::Legendre;
  v.disc = d;
  v.sign = s;
  for (auto q : prime_divisors(d)) v.excluded.insert(q);
  v.excluded.insert(2);
  return v;
}

bool PrimeValidity::admits(long p) const {
  if (excluded.contains(p)) return false;
  switch (kind) {
    case Kind::All: return true;
    case Kind::Odd: return p != 2;
    case Kind::Residue: return p % modulus == residue;
    case Kind::Fixed: return p == prime;
    case Kind::Legendre: return legendre(disc, p) == sign;
  }
  return false;
}

double PrimeValidity::density() const {
  switch (kind) {
    case Kind::All:
    case Kind::Odd: return 1.0;
    case Kind::Residue: {
      long phi = 0;
      for (long r = 1; r <= modulus; ++r)
        if (std::gcd(r, modulus) == 1) ++phi;
      return 1.0 / static_cast<double>(phi);
    }
    case Kind::Fixed: return 0.0;
    case Kind::Legendre: return 0.5;
  }
  return 0.0;
}

std::string PrimeValidity::to_string() const {
  std::string s;
  switch (kind) {
    case Kind::All: s = "all"; break;
    case Kind::Odd: s = "p>2"; break;
    case Kind::Residue:
      s = "p=" + std::to_string(residue) + " mod " + std::to_string(modulus);
      break;
    case Kind::Fixed: s = "p=" + std::to_string(prime); break;
    case Kind::Legendre:
      s = "(" + std::to_string(disc) + "/p)=" + (sign > 0 ? "1" : "-1");
      break;
  }
  if (!excluded.empty() && kind != Kind::Legendre) {
    s += " except ";
    bool first = true;
    for (auto q : excluded) {
      s += (first ? "" : ",") + std::to_string(q);
      first = false;
    }
  }
  return s;
}

PrimeValidity PrimeValidity::parse(std::string_view text) {
  std::string s(text);
  std::set<long long> excl;
  if (auto e = s.find(" except "); e != std::string::npos) {
    std::istringstream in(s.substr(e + 8));
    std::string tok;
    while (std::getline(in, tok, ',')) excl.insert(std::stoll(tok));
    s.erase(e);
  }
  PrimeValidity v;
  long a = 0, b = 0;
  int sgn = 0;
  char tail = 0;
  if (s == "all") {
    v = all();
  } else if (s == "p>2") {
    v = odd();
  } else if (std::sscanf(s.c_str(), "p=%ld mod %ld%c", &a, &b, &tail) == 2) {
    v = residue_class(a, b);
  } else if (std::sscanf(s.c_str(), "p=%ld%c", &a, &tail) == 1) {
    v = fixed(a);
  } else if (std::sscanf(s.c_str(), "(%ld/p)=%d%c", &a, &sgn, &tail) == 2 && (sgn == 1 || sgn == -1)) {
    v = legendre_class(a, sgn);
  } else {
    throw ParseError("unrecognized prime validity '" + std::string(text) + "'");
  }
  if (v.kind != Kind::Legendre) v.excluded = excl;
  return v;
}

// ----------------------------------------------------------- IgusaFamily

namespace {

struct NamedKind {
  const char* name;
  IgusaFamily::Kind kind;
};

constexpr NamedKind kNamed[] = {
    {"zero", IgusaFamily::Kind::Zero},          {"H", IgusaFamily::Kind::H},
    {"sl2_odd", IgusaFamily::Kind::Sl2Odd},     {"sl2_two", IgusaFamily::Kind::Sl2Two},
    {"L1_odd", IgusaFamily::Kind::L1Odd},       {"L1_two", IgusaFamily::Kind::L1Two},
    {"L2_1mod4", IgusaFamily::Kind::L2OneMod4}, {"L2_3mod4", IgusaFamily::Kind::L2ThreeMod4},
    {"L2_two", IgusaFamily::Kind::L2Two},
};

RationalFunction solvable_value(int i, int k) {
  if (k == 0)
    return RationalFunction::parse(i == 1 ? "(1 - X^-2)/(1 - X^-2*T^2)"
                                          : "((1 - X^-1)/(1 - X^-1*T))^2");
  if (k == 1) return RationalFunction::parse("(1 - X^-1)/(1 - X^-1*T)");
  return RationalFunction::parse("X^-1*T^2") * solvable_value(i, k - 2) +
         RationalFunction::parse("1 - X^-1");
}

}  // namespace

IgusaFamily IgusaFamily::parse(std::string_view name) {
  for (const auto& nk : kNamed)
    if (name == nk.name) return {nk.kind};
  int i = 0, k = 0;
  char tail = 0;
  std::string s(name);
  if (std::sscanf(s.c_str(), "solvable(%d,%d)%c", &i, &k, &tail) == 2) {
    if ((i == 1 || i == 2) && k >= 0) return {Kind::Solvable, i, k};
  }
  throw UnknownFamily("unknown Igusa family '" + s + "'");
}

std::vector<IgusaFamily> IgusaFamily::all_named(int max_k) {
  std::vector<IgusaFamily> out;
  for (const auto& nk : kNamed) out.push_back({nk.kind});
  for (int i = 1; i <= 2; ++i)
    for (int k = 0; k <= max_k; ++k) out.push_back({Kind::Solvable, i, k});
  return out;
}

std::string IgusaFamily::name() const {
  if (kind == Kind::Solvable) return "solvable(" + std::to_string(i) + "," + std::to_string(k) + ")";
  for (const auto& nk : kNamed)
    if (nk.kind == kind) return nk.name;
  return "?";
}

PrimeValidity IgusaFamily::validity() const {
  switch (kind) {
    case Kind::Zero:
    case Kind::H: return PrimeValidity::all();
    case Kind::Sl2Odd:
    case Kind::L1Odd:
    case Kind::Solvable: return PrimeValidity::odd();
    case Kind::L2OneMod4: return PrimeValidity::residue_class(1, 4);
    case Kind::L2ThreeMod4: return PrimeValidity::residue_class(3, 4);
    case Kind::Sl2Two:
    case Kind::L1Two:
    case Kind::L2Two: return PrimeValidity::fixed(2);
  }
  return {};
}

IgusaClosedForm closed_form(const IgusaFamily& fam) {
  const char* text = nullptr;
  switch (fam.kind) {
    case IgusaFamily::Kind::Zero: text = "0"; break;
    case IgusaFamily::Kind::H: text = "(1 - X^-1)/(1 - X^-1*T^2)"; break;
    case IgusaFamily::Kind::Sl2Odd:
      text = "(1 - X^-1)*(1 - X^-3*T)/((1 - X^-3*T^2)*(1 - X^-1*T))";
      break;
    case IgusaFamily::Kind::Sl2Two:
      text = "1/2 + (T^2/4)*(1 - T/8)/((1 - T^2/8)*(1 - T/2))";
      break;
    case IgusaFamily::Kind::L1Odd:
    case IgusaFamily::Kind::L2OneMod4: text = "((1 - X^-1)/(1 - X^-1*T))^2"; break;
    case IgusaFamily::Kind::L1Two: text = "1/4*(2 - 2*T + T^2)/(1 - T/2)^2"; break;
    case IgusaFamily::Kind::L2ThreeMod4: text = "(1 - X^-2)/(1 - X^-2*T^2)"; break;
    case IgusaFamily::Kind::L2Two: text = "1/2/(1 - T/2)"; break;
    case IgusaFamily::Kind::Solvable:
      return {fam, solvable_value(fam.i, fam.k), fam.validity()};
  }
  return {fam, RationalFunction::parse(text), fam.validity()};
}

QuadraticForm family_form(const IgusaFamily& fam, long p) {
  if (!fam.validity().admits(p))
    throw DomainError("family " + fam.name() + " is not valid at p = " + std::to_string(p));
  QuadraticForm f{};
  switch (fam.kind) {
    case IgusaFamily::Kind::Zero: break;
    case IgusaFamily::Kind::H: f.a[2][2] = 1; break;
    case IgusaFamily::Kind::Sl2Odd:
    case IgusaFamily::Kind::Sl2Two:
      f.a[0][1] = f.a[1][0] = 2;
      f.a[2][2] = 1;
      break;
    case IgusaFamily::Kind::L1Odd:
    case IgusaFamily::Kind::L1Two:
      f.a[1][1] = -1;
      f.a[2][2] = 1;
      break;
    case IgusaFamily::Kind::L2OneMod4:
    case IgusaFamily::Kind::L2ThreeMod4:
    case IgusaFamily::Kind::L2Two:
      f.a[1][1] = 1;
      f.a[2][2] = 1;
      break;
    case IgusaFamily::Kind::Solvable: {
      long long d = fam.i == 1 ? least_nonresidue(p) : 1;
      for (int j = 0; j < fam.k; ++j) d *= p;
      f.a[1][1] = 1;
      f.a[2][2] = -d;
      break;
    }
  }
  return f;
}

// ------------------------------------------------------------ counting

namespace {

class RootCounter {
 public:
  explicit RootCounter(long p, int max_m) : p_(p), pw_(max_m + 1, 1) {
    for (int i = 1; i <= max_m; ++i) pw_[i] = pw_[i - 1] * p;
  }

  long long pw(int i) const { return pw_[i]; }

  // #{y mod p^m : c2 y^2 + c1 y + c0 = 0 mod p^m}, y restricted to units
  // when units_only is set.
  long long count(long long c2, long long c1, long long c0, int m, bool units_only) const {
    if (m == 0) return 1;
    const long long pm = pw_[m];
    c2 = ((c2 % pm) + pm) % pm;
    c1 = ((c1 % pm) + pm) % pm;
    c0 = ((c0 % pm) + pm) % pm;
    int v = std::min({val(c2, m), val(c1, m), val(c0, m)});
    if (v >= m) return units_only ? pm - pw_[m - 1] : pm;
    if (v > 0) {
      long long s = pw_[v];
      return s * count(c2 / s, c1 / s, c0 / s, m - v, units_only);
    }
    long long total = 0;
    for (long long r = units_only ? 1 : 0; r < p_; ++r) {
      long long g = c2 * r * r + c1 * r + c0;
      if (g % p_ != 0) continue;
      // y = r + p z: g(r + pz) / p = c2 p z^2 + (2 c2 r + c1) z + g(r) / p
      total += count(c2 * p_, 2 * c2 * r + c1, g / p_, m - 1, false);
    }
    return total;
  }

 private:
  int val(long long c, int cap) const {
    if (c == 0) return cap;
    int v = 0;
    while (v < cap && c % p_ == 0) {
      c /= p_;
      ++v;
    }
    return v;
  }

  long p_;
  std::vector<long long> pw_;
};

long long power(long p, int m) {
  long long r = 1;
  for (int i = 0; i < m; ++i) r *= p;
  return r;
}

void check_prime(long p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not a prime");
}

}  // namespace

PointCount count_points(const QuadraticForm& f, long p, int m, long long budget) {
  check_prime(p);
  if (m < 0) throw DomainError("negative level");
  if (m == 0) return {p, 0, 1, 1};
  const long long pm = power(p, m);
  if (pm > 1'000'000 || pm * pm * p > budget)
    throw BudgetExceeded("point count at p^" + std::to_string(m) + " needs " +
                         std::to_string(pm) + "^2 fibres, over budget " + std::to_string(budget));
  RootCounter rc(p, m);
  const auto& A = f.a;
  const long long q11 = A[0][0], q12 = A[0][1] + A[1][0], q22 = A[1][1];
  const long long l1 = A[0][2] + A[2][0], l2 = A[1][2] + A[2][1], c = A[2][2];
  PointCount out{p, m, 0, 0};
  for (long long x1 = 0; x1 < pm; ++x1) {
    for (long long x2 = 0; x2 < pm; ++x2) {
      long long a = ((q11 * x1 % pm) * x1 + (q12 * x1 % pm) * x2 + (q22 * x2 % pm) * x2) % pm;
      long long b = (l1 * x1 + l2 * x2) % pm;
      long long cnt = rc.count(c, b, a, m, false);
      out.n += cnt;
      if (x1 % p != 0 || x2 % p != 0) {
        out.n_star += cnt;
      } else {
        out.n_star += rc.count(c, b, a, m, true);
      }
    }
  }
  return out;
}

PointCount count_points_exhaustive(const QuadraticForm& f, long p, int m, long long budget) {
  check_prime(p);
  if (m == 0) return {p, 0, 1, 1};
  const long long pm = power(p, m);
  if (pm > 1'000'000 || pm * pm * pm > budget)
    throw BudgetExceeded("exhaustive count at p^" + std::to_string(m) + " over budget");
  PointCount out{p, m, 0, 0};
  for (long long x1 = 0; x1 < pm; ++x1)
    for (long long x2 = 0; x2 < pm; ++x2)
      for (long long x3 = 0; x3 < pm; ++x3) {
        if (f({x1, x2, x3}) % pm != 0) continue;
        ++out.n;
        if (x1 % p || x2 % p || x3 % p) ++out.n_star;
      }
  return out;
}

std::vector<Rational> poincare_partial(const QuadraticForm& f, long p, int levels,
                                       long long budget) {
  std::vector<Rational> out;
  for (int m = 0; m < levels; ++m) {
    PointCount pc = count_points(f, p, m, budget);
    out.emplace_back(Integer(static_cast<long>(pc.n)), Integer(static_cast<long>(power(p, 3 * m))));
    out.back().canonicalize();
  }
  return out;
}

std::vector<Rational> primitive_poincare_partial(const QuadraticForm& f, long p, int levels,
                                                 long long budget) {
  std::vector<Rational> out;
  for (int m = 0; m < levels; ++m) {
    PointCount pc = count_points(f, p, m, budget);
    out.emplace_back(Integer(static_cast<long>(pc.n_star)),
                     Integer(static_cast<long>(power(p, 3 * m))));
    out.back().canonicalize();
  }
  return out;
}

namespace {

std::vector<Rational> t_series(const RationalFunction& w, long p, int levels) {
  auto c = series_coefficients(w, p, levels - 1, VarSet{Var::T});
  std::vector<Rational> out;
  for (int m = 0; m < levels; ++m) {
    auto it = c.find({m});
    out.push_back(it == c.end() ? Rational(0) : it->second);
  }
  return out;
}

}  // namespace

std::vector<Rational> predicted_poincare(const RationalFunction& z, long p, int levels) {
  const RationalFunction T = RationalFunction::var(Var::T);
  RationalFunction P = (RationalFunction(1) - T * z) / (RationalFunction(1) - T);
  return t_series(P, p, levels);
}

std::vector<Rational> predicted_primitive(const RationalFunction& z, long p, int levels) {
  const RationalFunction T = RationalFunction::var(Var::T);
  RationalFunction pd = RationalFunction::parse("X^-3");
  RationalFunction zs = (RationalFunction(1) - pd * T * T) * z;
  RationalFunction P = (RationalFunction(1) - pd * T - T * zs) / (RationalFunction(1) - T);
  return t_series(P, p, levels);
}

bool IgusaReport::ok() const {
  auto good = [](const std::vector<LevelCheck>& v) {
    return std::all_of(v.begin(), v.end(), [](const LevelCheck& c) { return c.match; });
  };
  return good(levels) && good(primitive_levels);
}

IgusaReport verify_igusa(const RationalFunction& z, const QuadraticForm& f, long p, int levels,
                         long long budget) {
  IgusaReport r;
  r.p = p;
  auto pred = predicted_poincare(z, p, levels);
  auto pred_star = predicted_primitive(z, p, levels);
  for (int m = 0; m < levels; ++m) {
    PointCount pc = count_points(f, p, m, budget);
    Rational scale(Integer(1), Integer(static_cast<long>(power(p, 3 * m))));
    Rational obs = Rational(Integer(static_cast<long>(pc.n))) * scale;
    Rational obs_star = Rational(Integer(static_cast<long>(pc.n_star))) * scale;
    r.levels.push_back({m, pred[m], obs, pred[m] == obs});
    r.primitive_levels.push_back({m, pred_star[m], obs_star, pred_star[m] == obs_star});
  }
  return r;
}

IgusaReport verify_closed_form(const IgusaFamily& fam, long p, int levels, long long budget) {
  IgusaClosedForm cf = closed_form(fam);
  if (!cf.validity.admits(p))
    throw DomainError("family " + fam.name() + " is valid for " + cf.validity.to_string() +
                      ", not p = " + std::to_string(p));
  IgusaReport r = verify_igusa(cf.value, family_form(fam, p), p, levels, budget);
  r.family = fam.name();
  return r;
}

}  // namespace cozeta
