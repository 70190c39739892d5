#pragma once

// Scattering polynomials: the eigenfunctions of the hybrid laplacian
// (1 - z zbar) d^2/dz dzbar on the closed unit disk, their radial parts, and
// the connection to Jacobi polynomials.
//
// Exact objects (BivariatePolynomial, RadialCoefficients) use arbitrary
// precision rationals. Numeric evaluation is templated over the real type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/scalar.hpp"

namespace layerlab {

/// Exact polynomial  sum a_ij z^i zbar^j  with rational coefficients.
/// Canonical: one entry per exponent pair, no stored zero.
class BivariatePolynomial {
 public:
  using Exponents = std::pair<int, int>;  // (power of z, power of zbar)
  using Terms = std::map<Exponents, Rational>;

  BivariatePolynomial() = default;

  static BivariatePolynomial constant(const Rational& c) { return monomial(0, 0, c); }

  static BivariatePolynomial monomial(int i, int j, const Rational& c = Rational(1)) {
    BivariatePolynomial p;
    p.add_term(i, j, c);
    return p;
  }

  void add_term(int i, int j, const Rational& c) {
    if (i < 0 || j < 0) throw domain_error("negative exponent in monomial");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  [[nodiscard]] Rational coefficient(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  [[nodiscard]] int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
  }

  [[nodiscard]] bool has_integer_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return is_integer(t.second); });
  }

  BivariatePolynomial& operator+=(const BivariatePolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
    return *this;
  }
  BivariatePolynomial& operator-=(const BivariatePolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
    return *this;
  }
  BivariatePolynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) { return a += b; }
  friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) { return a -= b; }
  friend BivariatePolynomial operator*(BivariatePolynomial a, const Rational& s) { return a *= s; }
  friend BivariatePolynomial operator*(const Rational& s, BivariatePolynomial a) { return a *= s; }

  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    BivariatePolynomial r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
  }

  friend bool operator==(const BivariatePolynomial& a, const BivariatePolynomial& b) { return a.terms_ == b.terms_; }

  /// Human readable form, e.g. "1 - z*zb".
  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational a = c;
      if (first) {
        if (a < 0) out += "-";
      } else {
        out += a < 0 ? " - " : " + ";
      }
      if (a < 0) a = -a;
      std::string mono;
      auto power = [](const char* v, int k) {
        return k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k);
      };
      if (e.first > 0) mono += power("z", e.first);
      if (e.second > 0) mono += (mono.empty() ? "" : "*") + power("zb", e.second);
      std::string coeff = is_integer(a) ? num(a).str() : to_string(a);
      if (mono.empty())
        out += coeff;
      else if (a == 1)
        out += mono;
      else
        out += coeff + "*" + mono;
      first = false;
    }
    return out;
  }

 private:
  Terms terms_;
};

/// Radial part f(r) = sum_s coeffs[s] r^(m + 2 s) of an angularly pure
/// eigenfunction; odd offsets are implicitly zero.
struct RadialCoefficients {
  int m = 0;
  std::vector<Rational> coeffs;

  friend bool operator==(const RadialCoefficients&, const RadialCoefficients&) = default;
};

namespace detail {

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BivariatePolynomial build_scattering_poly(int p, int q) {
  if (std::min(p, q) >= 1) {
    const int m = std::abs(p - q);
    const int nu = std::min(p, q);
    const int a = m + nu - p;  // power of z in the common prefactor
    const int b = m + nu - q;  // power of zbar
    const int sign0 = ((q + nu) % 2 == 0) ? 1 : -1;
    BivariatePolynomial out;
    for (int j = 0; j < nu; ++j) {
      const int sign = (j % 2 == 0) ? sign0 : -sign0;
      Rational c(factorial(j + nu + m), factorial(j) * factorial(j + m) * factorial(nu - j - 1) * q);
      if (sign < 0) c = -c;
      // times (1 - z zbar)
      out.add_term(a + j, b + j, c);
      out.add_term(a + j + 1, b + j + 1, -c);
    }
    if (!out.has_integer_coefficients())
      throw std::logic_error("scattering polynomial (" + std::to_string(p) + "," + std::to_string(q) +
                             ") has a non-integer coefficient");
    return out;
  }
  if (q == 0 && p >= 0) return BivariatePolynomial::monomial(0, p);
  return {};
}

}  // namespace detail

/// The scattering polynomial phi^(p,q). Every integer pair is accepted; pairs
/// outside {min(p,q) >= 1} and {q = 0, p >= 0} give the zero polynomial.
/// Results are memoized; the cache is safe for concurrent readers.
inline BivariatePolynomial scattering_poly(int p, int q) {
  static std::map<std::pair<int, int>, BivariatePolynomial> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find({p, q}); it != cache.end()) return it->second;
  }
  BivariatePolynomial built = detail::build_scattering_poly(p, q);
  std::unique_lock lock(mutex);
  return cache.try_emplace({p, q}, std::move(built)).first->second;
}

/// (1 - z zbar) d^2/dz dzbar, applied termwise.
inline BivariatePolynomial hybrid_laplacian_apply(const BivariatePolynomial& poly) {
  BivariatePolynomial out;
  for (const auto& [e, c] : poly.terms()) {
    const auto [i, j] = e;
    if (i == 0 || j == 0) continue;
    const Rational w = c * (i * j);
    out.add_term(i - 1, j - 1, w);
    out.add_term(i, j, -w);
  }
  return out;
}

/// Common value of (zbar power - z power) over all monomials.
inline int angular_index(const BivariatePolynomial& poly) {
  if (poly.is_zero()) throw domain_error("angular index of the zero polynomial");
  const auto& first = poly.terms().begin()->first;
  const int d = first.second - first.first;
  for (const auto& [e, c] : poly.terms()) {
    if (e.second - e.first != d)
      throw mixed_angular_index("monomials carry different angular indices (" + std::to_string(d) + " and " +
                                std::to_string(e.second - e.first) + ")");
  }
  return d;
}

namespace detail {

// x = mantissa * 2^exponent with an integral 53-bit mantissa.
inline std::pair<BigInt, int> dyadic(double x) {
  int ex = 0;
  const double f = std::frexp(x, &ex);
  const auto mant = static_cast<long long>(std::ldexp(f, 53));
  return {BigInt(mant), ex - 53};
}

// |z|^2 = S * 2^-e exactly, e >= 0.
inline std::pair<BigInt, int> exact_modulus_squared(std::complex<double> z) {
  BigInt s = 0;
  int e0 = 0;
  bool any = false;
  std::vector<std::pair<BigInt, int>> parts;
  for (double c : {z.real(), z.imag()}) {
    if (c == 0.0) continue;
    auto [m, ex] = dyadic(c);
    parts.emplace_back(m * m, 2 * ex);
    e0 = any ? std::min(e0, 2 * ex) : 2 * ex;
    any = true;
  }
  for (auto& [m2, ex2] : parts) s += m2 << (ex2 - e0);
  if (!any) return {BigInt(0), 0};
  if (e0 >= 0) return {BigInt(s << e0), 0};
  return {s, -e0};
}

}  // namespace detail

/// Floating point value of the polynomial at z.
///
/// Monomials are grouped by angular index; each group is a polynomial in
/// |z|^2 that is summed exactly in integer arithmetic and rounded once, so the
/// large alternating coefficients of scattering polynomials do not cancel.
inline std::complex<double> eval_poly(const BivariatePolynomial& poly, std::complex<double> z) {
  if (poly.is_zero()) return {0.0, 0.0};
  // angular index -> (power of |z|^2 -> coefficient)
  std::map<int, std::map<int, Rational>> groups;
  for (const auto& [e, c] : poly.terms()) groups[e.second - e.first][std::min(e.first, e.second)] = c;

  const auto [S, e] = detail::exact_modulus_squared(z);
  std::complex<double> total{0.0, 0.0};
  for (const auto& [d, group] : groups) {
    BigInt l = 1;
    for (const auto& [t, c] : group) l = boost::multiprecision::lcm(l, den(c));
    const int deg = group.rbegin()->first;
    BigInt acc = 0;
    for (int t = deg; t >= 0; --t) {
      acc *= S;
      if (auto it = group.find(t); it != group.end()) {
        BigInt a = num(it->second) * (l / den(it->second));
        acc += a << (e * (deg - t));
      }
    }
    const double radial = Rational(acc, l << (e * deg)).convert_to<double>();
    std::complex<double> angular{1.0, 0.0};
    const std::complex<double> base = d >= 0 ? std::conj(z) : z;
    for (int k = 0; k < std::abs(d); ++k) angular *= base;
    total += radial * angular;
  }
  return total;
}

/// Jacobi polynomial P_nu^(alpha,beta)(x) by the three-term recurrence.
template <class Real = double>
Real jacobi_eval(int nu, const Real& alpha, const Real& beta, const Real& x) {
  if (nu < 0) throw domain_error("negative Jacobi degree");
  if (nu == 0) return Real(1);
  Real prev(1);
  Real cur = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2;
  for (int n = 2; n <= nu; ++n) {
    const Real c = Real(2 * n) + alpha + beta;
    const Real a1 = Real(2 * n) * (Real(n) + alpha + beta) * (c - 2);
    const Real a2 = (c - 1) * (alpha * alpha - beta * beta);
    const Real a3 = (c - 2) * (c - 1) * c;
    const Real a4 = Real(2) * (Real(n) + alpha - 1) * (Real(n) + beta - 1) * c;
    Real next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Exact coefficients of f^(p,q) from the finite-sum formula. For q = 0,
/// p >= 0 this is r^p; for every other pair outside min(p,q) >= 1 the list is
/// empty (f = 0).
inline RadialCoefficients radial_coefficients(int p, int q) {
  RadialCoefficients out;
  if (q == 0 && p >= 0) {
    out.m = p;
    out.coeffs = {Rational(1)};
    return out;
  }
  if (std::min(p, q) < 1) return out;
  const int m = std::abs(p - q);
  const int nu = std::min(p, q);
  out.m = m;
  std::vector<Rational> inner(nu);
  const int sign0 = ((q + nu) % 2 == 0) ? 1 : -1;
  for (int j = 0; j < nu; ++j) {
    Rational c(detail::factorial(j + nu + m),
               detail::factorial(j) * detail::factorial(j + m) * detail::factorial(nu - j - 1) * q);
    inner[j] = ((j % 2 == 0) ? sign0 : -sign0) * c;
  }
  out.coeffs.assign(nu + 1, Rational(0));
  for (int j = 0; j < nu; ++j) {
    out.coeffs[j] += inner[j];
    out.coeffs[j + 1] -= inner[j];
  }
  return out;
}

/// Radial coefficient list of an angularly pure polynomial, read off the
/// monomials: z^i zbar^j contributes to r^(i+j).
inline RadialCoefficients extract_radial(const BivariatePolynomial& poly) {
  RadialCoefficients out;
  if (poly.is_zero()) return out;
  angular_index(poly);  // throws on mixed polynomials
  std::map<int, Rational> by_degree;
  for (const auto& [e, c] : poly.terms()) by_degree[e.first + e.second] += c;
  out.m = by_degree.begin()->first;
  const int top = by_degree.rbegin()->first;
  for (int d = out.m; d <= top; d += 2) {
    auto it = by_degree.find(d);
    out.coeffs.push_back(it == by_degree.end() ? Rational(0) : it->second);
  }
  return out;
}

/// f^(p,q)(r) from the finite sum, evaluated exactly at the given double and
/// rounded once.
inline double radial_f(int p, int q, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw domain_error("radius " + std::to_string(r) + " outside [0,1]");
  const RadialCoefficients rc = radial_coefficients(p, q);
  if (rc.coeffs.empty()) return 0.0;
  const Rational x = rational_from_double(r);
  const Rational x2 = x * x;
  Rational acc = 0;
  for (auto it = rc.coeffs.rbegin(); it != rc.coeffs.rend(); ++it) acc = acc * x2 + *it;
  Rational xm = 1;
  for (int i = 0; i < rc.m; ++i) xm *= x;
  return (acc * xm).convert_to<double>();
}

/// f^(p,q)(r) through the Jacobi polynomial P^(m,1)_(nu-1)(1 - 2 r^2).
/// Numerically stable for large indices.
template <class Real = double>
Real radial_jacobi(int p, int q, const Real& r) {
  using std::abs;
  using std::pow;
  if (q == 0 && p >= 0) return pow(r, p);
  if (std::min(p, q) < 1) return Real(0);
  const int m = std::abs(p - q);
  const int nu = std::min(p, q);
  const Real r2 = r * r;
  const Real scale = Real(((q + nu) % 2 == 0 ? 1 : -1) * (m + nu)) / Real(q);
  return scale * (1 - r2) * pow(r, m) * jacobi_eval<Real>(nu - 1, Real(m), Real(1), 1 - 2 * r2);
}

/// phi^(p,q)(r e^{i theta}) = e^{i(q-p)theta} f^(p,q)(r).
template <class Real = double>
complex_t<Real> scattering_value(int p, int q, const Real& r, const Real& theta) {
  if (q < 0 || p < 0 || (p == 0 && q > 0)) return complex_t<Real>(Real(0), Real(0));
  const Real f = radial_jacobi<Real>(p, q, r);
  return unit_phase<Real>(Real(q - p) * theta) * complex_t<Real>(f, Real(0));
}

template <class Complex>
auto scattering_value(int p, int q, const Complex& w) {
  using std::abs;
  using std::arg;
  using Real = decltype(abs(w));
  return scattering_value<Real>(p, q, Real(abs(w)), Real(arg(w)));
}

/// Coefficients produced by the radial ODE recurrence
///   ((j+2)^2 - n^2) b_(j+2) = (j^2 - 4k - n^2) b_j,   b_|n| = 1.
/// The series terminates exactly when k = nu (|n| + nu) for some nu >= 1.
inline RadialCoefficients radial_from_recurrence(int n, long long k) {
  const int m = std::abs(n);
  if (k <= 0) throw not_an_eigenvalue("eigenvalue must be a positive integer, got " + std::to_string(k));
  RadialCoefficients out;
  out.m = m;
  out.coeffs.push_back(Rational(1));
  const BigInt n2 = BigInt(n) * n;
  for (long long s = 0;; ++s) {
    // b_(m+2s) -> b_(m+2s+2)
    if (s * (m + s) > k) throw not_an_eigenvalue(std::to_string(k) + " is not of the form nu(" + std::to_string(m) + "+nu)");
    const BigInt j = m + 2 * s;
    const BigInt numer = j * j - 4 * BigInt(k) - n2;
    if (numer == 0) return out;
    const BigInt denom = (j + 2) * (j + 2) - n2;
    out.coeffs.push_back(out.coeffs.back() * Rational(numer, denom));
  }
}

/// Returns c with a = c * b entrywise, if such an exact scalar exists.
inline std::optional<Rational> exact_ratio(const RadialCoefficients& a, const RadialCoefficients& b) {
  if (a.m != b.m || a.coeffs.size() != b.coeffs.size() || a.coeffs.empty()) return std::nullopt;
  std::optional<Rational> ratio;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (b.coeffs[i] == 0) {
      if (a.coeffs[i] != 0) return std::nullopt;
      continue;
    }
    Rational c = a.coeffs[i] / b.coeffs[i];
    if (ratio && *ratio != c) return std::nullopt;
    ratio = c;
  }
  if (ratio && *ratio == 0) return std::nullopt;
  return ratio;
}

/// Partial product prod_{nu=1}^{N} (1 - k / (nu (m + nu))).
inline double xi_product(double k, int m, int N) {
  if (N < 1) throw domain_error("xi_product needs N >= 1");
  double prod = 1.0;
  for (int nu = 1; nu <= N; ++nu) prod *= 1.0 - k / (static_cast<double>(nu) * static_cast<double>(m + nu));
  return prod;
}

}  // namespace layerlab
