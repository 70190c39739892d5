#pragma once

// Series oracle: the backward recurrence realised on an equal-travel-time
// (Goupillaud) grid as a truncated power series in the unit delay Z. It uses
// only Moebius maps and series division, never the scattering polynomials.

#include <cstddef>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/forward.hpp"
#include "layerlab/media.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/scalar.hpp"

namespace layerlab {

/// sum_{m=0}^{N} c_m Z^m, arithmetic modulo Z^{N+1}.
template <class Complex = cdouble>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, Complex(0)) {}
  TruncatedSeries(std::size_t order, const Complex& constant) : coeffs_(order + 1, Complex(0)) { coeffs_[0] = constant; }

  [[nodiscard]] std::size_t order() const noexcept { return coeffs_.size() - 1; }
  [[nodiscard]] const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t m) { return coeffs_[m]; }
  const Complex& operator[](std::size_t m) const { return coeffs_[m]; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_order(o);
    for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += o.coeffs_[m];
    return *this;
  }

  TruncatedSeries& operator*=(const Complex& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_order(b);
    const std::size_t n = a.coeffs_.size();
    TruncatedSeries out(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i] == Complex(0)) continue;
      for (std::size_t j = 0; i + j < n; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return out;
  }

  /// Multiplication by Z.
  [[nodiscard]] TruncatedSeries shifted() const {
    TruncatedSeries out(order());
    for (std::size_t m = 1; m < coeffs_.size(); ++m) out.coeffs_[m] = coeffs_[m - 1];
    return out;
  }

  /// a / b by forward substitution; b needs a non-zero constant term.
  friend TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_order(b);
    if (b.coeffs_[0] == Complex(0)) throw domain_error("series division by a series with zero constant term");
    const std::size_t n = a.coeffs_.size();
    TruncatedSeries q(n - 1);
    for (std::size_t m = 0; m < n; ++m) {
      Complex acc = a.coeffs_[m];
      for (std::size_t i = 1; i <= m; ++i)
        if (b.coeffs_[i] != Complex(0)) acc -= b.coeffs_[i] * q.coeffs_[m - i];
      q.coeffs_[m] = acc / b.coeffs_[0];
    }
    return q;
  }

  [[nodiscard]] TruncatedSeries reciprocal() const { return divide(TruncatedSeries(order(), Complex(1)), *this); }

 private:
  void check_order(const TruncatedSeries& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw domain_error("series orders differ");
  }

  std::vector<Complex> coeffs_;
};

struct CommonGrid {
  Rational delta;
  std::vector<long long> m;
};

/// Delta = largest rational dividing every tau_j, m_j = tau_j / Delta.
inline CommonGrid common_grid(const std::vector<Rational>& tau) {
  if (tau.empty()) throw domain_error("common_grid needs at least one travel time");
  for (const auto& t : tau)
    if (t <= 0) throw domain_error("travel times must be positive");
  CommonGrid g{rational_gcd(tau), {}};
  for (const auto& t : tau) {
    const Rational r = t / g.delta;
    g.m.push_back(num(r).convert_to<long long>());
  }
  return g;
}

/// Reflector j preceded by m_j - 1 transparent reflectors.
template <class Complex = cdouble>
std::vector<Complex> expand_medium(const std::vector<Complex>& w, const std::vector<long long>& m) {
  if (w.size() != m.size()) throw domain_error("expand_medium: w and m lengths differ");
  std::vector<Complex> out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (m[j] < 1) throw domain_error("expand_medium: multiplicities must be positive");
    out.insert(out.end(), static_cast<std::size_t>(m[j] - 1), Complex(0));
    out.push_back(w[j]);
  }
  return out;
}

/// Psi_Z^(u_1) o ... o Psi_Z^(u_L)(0) modulo Z^{N+1}.
template <class Complex = cdouble>
TruncatedSeries<Complex> series_recurrence(const std::vector<Complex>& u, std::size_t N) {
  using std::conj;
  if (N < 1) throw truncation_too_small("series truncation order must be at least 1");
  TruncatedSeries<Complex> v(N);
  for (std::size_t j = u.size(); j-- > 0;) {
    if (u[j] == Complex(0)) {
      v = v.shifted();
      continue;
    }
    TruncatedSeries<Complex> top = v;
    top[0] += conj(u[j]);
    TruncatedSeries<Complex> bottom = v;
    bottom *= u[j];
    bottom[0] += Complex(1);
    v = divide(top, bottom).shifted();
  }
  return v;
}

/// Arrivals (m Delta, c_m) for the non-zero coefficients with m <= floor(T / Delta).
inline DeltaTrain<double> oracle_train(const MediumParams& params, const Rational& T) {
  const CommonGrid grid = common_grid(params.tau);
  DeltaTrain<double> train;
  train.horizon = T;
  if (T < 0) return train;
  const Rational steps = T / grid.delta;
  const BigInt N = num(steps) / den(steps);
  if (N < 1) return train;
  const auto series = series_recurrence<cdouble>(expand_medium<cdouble>(params.w, grid.m), N.convert_to<std::size_t>());
  for (std::size_t m = 1; m < series.coeffs().size(); ++m) {
    if (series[m] == cdouble(0.0, 0.0)) continue;
    train.arrivals.push_back({Rational(static_cast<long long>(m)) * grid.delta, series[m]});
  }
  return train;
}

}  // namespace layerlab
