#include "cozeta/liealg.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cozeta/errors.hpp"

namespace cozeta {

namespace {

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(long long k, const Vec3& a) { return {k * a[0], k * a[1], k * a[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
bool is_zero(const Vec3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

Vec3 primitive(Vec3 v) {
  long long g = std::gcd(std::gcd(v[0], v[1]), v[2]);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  return v;
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat3 transpose(const Mat3& a) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

int rank_of(const Mat3& m) {
  QMat3 q = to_rational(m);
  int rank = 0;
  for (int col = 0; col < 3 && rank < 3; ++col) {
    int piv = -1;
    for (int r = rank; r < 3; ++r)
      if (q[r][col] != 0) piv = r;
    if (piv < 0) continue;
    std::swap(q[piv], q[rank]);
    for (int r = 0; r < 3; ++r) {
      if (r == rank || q[r][col] == 0) continue;
      Rational f = q[r][col] / q[rank][col];
      for (int k = 0; k < 3; ++k) q[r][k] -= f * q[rank][k];
    }
    ++rank;
  }
  return rank;
}

// U in GL_3(Z) whose third column is the primitive vector v.
Mat3 complete_to_basis(const Vec3& v) {
  Mat3 V{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 w = v;
  for (;;) {
    int nz = 0, small = -1;
    for (int i = 0; i < 3; ++i) {
      if (w[i] == 0) continue;
      ++nz;
      if (small < 0 || std::llabs(w[i]) < std::llabs(w[small])) small = i;
    }
    if (nz <= 1) {
      if (small != 2) {
        std::swap(w[small], w[2]);
        std::swap(V[small], V[2]);
      }
      if (w[2] < 0) {
        w[2] = -w[2];
        V[2] = scale(-1, V[2]);
      }
      break;
    }
    for (int j = 0; j < 3; ++j) {
      if (j == small || w[j] == 0) continue;
      long long q = w[j] / w[small];
      w[j] -= q * w[small];
      V[j] = add(V[j], scale(-q, V[small]));
    }
  }
  // V v = e3, so U = V^{-1} = adj(V) / det(V) with det(V) = +-1.
  long long d = det(V);
  Mat3 U{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      U[i][j] = (V[r0][c0] * V[r1][c1] - V[r0][c1] * V[r1][c0]) * d;
    }
  return U;
}

}  // namespace

// ------------------------------------------------------------ LieAlgebra

LieAlgebra LieAlgebra::make(const Vec3& c12, const Vec3& c13, const Vec3& c23, std::string name) {
  LieAlgebra L;
  L.c_ = {c12, c13, c23};
  L.name_ = std::move(name);
  const Vec3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  Vec3 j = add(add(L.bracket(L.bracket(e1, e2), e3), L.bracket(L.bracket(e2, e3), e1)),
               L.bracket(L.bracket(e3, e1), e2));
  if (!is_zero(j)) {
    std::ostringstream os;
    os << "Jacobi identity fails on (1,2,3): sum = (" << j[0] << ", " << j[1] << ", " << j[2] << ")";
    throw JacobiViolation(1, 2, 3, os.str());
  }
  return L;
}

const Vec3& LieAlgebra::c(int i, int j) const {
  if (i == 1 && j == 2) return c_[0];
  if (i == 1 && j == 3) return c_[1];
  if (i == 2 && j == 3) return c_[2];
  throw DomainError("bracket index must satisfy 1 <= i < j <= 3");
}

Vec3 LieAlgebra::bracket(const Vec3& x, const Vec3& y) const {
  Vec3 r{};
  r = add(r, scale(x[0] * y[1] - x[1] * y[0], c_[0]));
  r = add(r, scale(x[0] * y[2] - x[2] * y[0], c_[1]));
  r = add(r, scale(x[1] * y[2] - x[2] * y[1], c_[2]));
  return r;
}

bool LieAlgebra::is_abelian() const { return is_zero(c_[0]) && is_zero(c_[1]) && is_zero(c_[2]); }

LieAlgebra LieAlgebra::scaled(long long k) const {
  LieAlgebra r = *this;
  for (auto& v : r.c_) v = scale(k, v);
  return r;
}

LieAlgebra LieAlgebra::parse(std::string_view text) {
  std::array<Vec3, 3> c{};
  std::string name;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& why) {
    throw ParseError("algebra definition line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    auto eq = line.find('=');
    if (eq == std::string::npos) bad("missing '='");
    std::string lhs = line.substr(0, eq), rhs = line.substr(eq + 1);
    lhs.erase(lhs.find_last_not_of(" \t") + 1);
    if (lhs == "name") {
      std::istringstream r(rhs);
      if (!(r >> name)) bad("empty name");
      continue;
    }
    int i = 0, j = 0;
    char ch = 0;
    std::istringstream l(lhs);
    if (!(l >> ch) || ch != '[' || !(l >> i) || !(l >> ch) || ch != ',' || !(l >> j) || !(l >> ch) ||
        ch != ']')
      bad("expected [i,j]");
    if (!(1 <= i && i < j && j <= 3)) bad("bracket indices must satisfy 1 <= i < j <= 3");
    std::istringstream r(rhs);
    Vec3 v{};
    for (auto& x : v)
      if (!(r >> x)) bad("expected three integer coefficients");
    std::string extra;
    if (r >> extra) bad("trailing input '" + extra + "'");
    c[i == 1 ? (j == 2 ? 0 : 1) : 2] = v;
  }
  return make(c[0], c[1], c[2], name);
}

std::string LieAlgebra::to_text() const {
  std::ostringstream os;
  if (!name_.empty()) os << "name = " << name_ << "\n";
  const char* idx[3] = {"[1,2]", "[1,3]", "[2,3]"};
  for (int k = 0; k < 3; ++k)
    os << idx[k] << " = " << c_[k][0] << " " << c_[k][1] << " " << c_[k][2] << "\n";
  return os.str();
}

// ------------------------------------------------------ structure matrix

Mat3 structure_matrix(const LieAlgebra& L) { return {L.c(2, 3), scale(-1, L.c(1, 3)), L.c(1, 2)}; }

LieAlgebra from_structure_matrix(const Mat3& A, std::string name) {
  return LieAlgebra::make(A[2], scale(-1, A[1]), A[0], std::move(name));
}

QMat3 to_rational(const Mat3& A) {
  QMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = Rational(static_cast<long>(A[i][j]));
  return r;
}

Rational det(const QMat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

long long det(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

QMat3 inverse(const QMat3& m) {
  Rational d = det(m);
  if (d == 0) throw SingularMatrix("matrix is singular");
  QMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
    }
  return r;
}

QMat3 operator*(const QMat3& a, const QMat3& b) {
  QMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r[i][j] = 0;
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

QMat3 transpose(const QMat3& m) {
  QMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
  return r;
}

QMat3 transform(const QMat3& A, const QMat3& P) {
  Rational d = det(P);
  if (d == 0) throw SingularMatrix("change of basis matrix is singular");
  QMat3 Pi = inverse(P);
  QMat3 r = transpose(Pi) * A * Pi;
  for (auto& row : r)
    for (auto& x : row) x *= d;
  return r;
}

QMat3 transform(const LieAlgebra& L, const QMat3& P) {
  return transform(to_rational(structure_matrix(L)), P);
}

// -------------------------------------------------------- quadratic form

long long QuadraticForm::operator()(const Vec3& x) const {
  long long s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a[i][j] * x[i] * x[j];
  return s;
}

Mat3 QuadraticForm::polar() const {
  Mat3 q{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q[i][j] = a[i][j] + a[j][i];
  return q;
}

QuadraticForm quadratic_form(const LieAlgebra& L) { return {structure_matrix(L)}; }

QuadraticForm quadratic_form_from(std::string_view text) {
  std::istringstream in{std::string(text)};
  QuadraticForm f;
  for (auto& row : f.a)
    for (auto& x : row)
      if (!(in >> x)) throw ParseError("a form needs nine integer entries");
  std::string extra;
  if (in >> extra) throw ParseError("trailing input in form: " + extra);
  return f;
}

FormClass classify(const QuadraticForm& f) {
  FormClass fc;
  Mat3 Q = f.polar();
  fc.rank = rank_of(Q);
  fc.bad_primes = {2};
  switch (fc.rank) {
    case 0:
      fc.discriminant = 0;
      fc.reducible_over_z = true;
      break;
    case 1: {
      Vec3 w{};
      for (const auto& row : Q)
        if (!is_zero(row)) {
          w = primitive(row);
          break;
        }
      int i = w[0] != 0 ? 0 : (w[1] != 0 ? 1 : 2);
      Rational lambda(Integer(static_cast<long>(Q[i][i])), Integer(static_cast<long>(w[i] * w[i])));
      lambda.canonicalize();
      Rational a = lambda / 2;
      if (a.get_den() != 1) throw DomainError("rank-1 form is not integral on a primitive vector");
      fc.coefficient = a.get_num().get_si();
      fc.discriminant = a;
      fc.reducible_over_z = true;
      for (auto p : prime_divisors(fc.coefficient)) fc.bad_primes.insert(p);
      break;
    }
    case 2: {
      Vec3 v{};
      for (int r = 0; r < 3 && is_zero(v); ++r)
        for (int s = r + 1; s < 3 && is_zero(v); ++s) v = cross(Q[r], Q[s]);
      v = primitive(v);
      Mat3 U = complete_to_basis(v);
      Mat3 B = mul(mul(transpose(U), f.a), U);
      long long a = B[0][0], b = B[0][1] + B[1][0], c = B[1][1];
      long long D = b * b - 4 * a * c;
      fc.binary = {a, b, c};
      fc.binary_discriminant = D;
      fc.discriminant = static_cast<long>(D);
      fc.reducible_over_z = is_square(D);
      for (auto p : prime_divisors(D)) fc.bad_primes.insert(p);
      break;
    }
    default: {
      fc.discriminant = Rational(Integer(static_cast<long>(det(Q))), 8);
      fc.discriminant.canonicalize();
      for (auto p : prime_divisors(det(Q))) fc.bad_primes.insert(p);
      break;
    }
  }
  return fc;
}

// ------------------------------------------------------------ arithmetic

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::set<long long> prime_divisors(long long n) {
  std::set<long long> out;
  n = std::llabs(n);
  for (long long d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      out.insert(d);
      n /= d;
    }
  if (n > 1) out.insert(n);
  return out;
}

int legendre(long long a, long long p) {
  long long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long long e = (p - 1) / 2, base = r, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

bool is_square(long long n) {
  if (n < 0) return false;
  auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long long s = std::max(0LL, r - 1); s <= r + 1; ++s)
    if (s * s == n) return true;
  return false;
}

long long least_nonresidue(long long p) {
  for (long long r = 2; r < p; ++r)
    if (legendre(r, p) == -1) return r;
  throw DomainError("no quadratic non-residue modulo " + std::to_string(p));
}

long long content(const Mat3& A) {
  long long g = 0;
  for (const auto& row : A)
    for (auto x : row) g = std::gcd(g, x);
  return g;
}

int valuation(long long n, long long p) {
  if (n == 0) return 1 << 20;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace cozeta
