#pragma once

// Layered media: impedance profiles, the impedance -> reflectivity transform,
// the Moebius building blocks of the backward recurrence, and the layer
// collapse function.

#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/scalar.hpp"

namespace layerlab {

using cdouble = std::complex<double>;

/// eta(x) = C_0 + sum_j C_j H(x - X_j), depths in two-way travel time units.
struct ImpedanceProfile {
  std::vector<cdouble> C;  // n + 1 increments
  std::vector<Rational> X; // n strictly increasing positive depths

  [[nodiscard]] std::size_t layers() const noexcept { return X.size(); }
};

/// Reflectivities w in the closed unit disk and exact travel times tau.
struct MediumParams {
  std::vector<cdouble> w;
  std::vector<Rational> tau;

  [[nodiscard]] std::size_t layers() const noexcept { return w.size(); }
};

inline constexpr double normalization_tolerance = 1e-12;
inline constexpr double unit_tolerance = 1e-12;

inline ImpedanceProfile validate_profile(std::vector<cdouble> C, std::vector<Rational> X) {
  if (X.empty()) throw domain_error("profile needs at least one interface");
  if (C.size() != X.size() + 1)
    throw domain_error("profile needs " + std::to_string(X.size() + 1) + " increments, got " + std::to_string(C.size()));
  for (std::size_t j = 0; j < X.size(); ++j) {
    if (X[j] <= 0 || (j > 0 && X[j] <= X[j - 1]))
      throw non_increasing_depths("depths must satisfy 0 < X_1 < ... < X_n (violated at index " + std::to_string(j) + ")");
  }
  cdouble partial{0.0, 0.0};
  for (std::size_t j = 0; j + 1 < C.size(); ++j) {
    partial += C[j];
    if (!(partial.real() > 0.0))
      throw impedance_not_in_right_half_plane("partial sum C_0+...+C_" + std::to_string(j) +
                                              " has non-positive real part");
  }
  const cdouble total = std::accumulate(C.begin(), C.end(), cdouble{0.0, 0.0});
  if (std::abs(total - 1.0) > normalization_tolerance) throw not_normalized("increments do not sum to 1");
  return ImpedanceProfile{std::move(C), std::move(X)};
}

/// Divides every increment by their sum.
inline std::vector<cdouble> renormalize(std::vector<cdouble> C) {
  const cdouble total = std::accumulate(C.begin(), C.end(), cdouble{0.0, 0.0});
  if (total == cdouble{0.0, 0.0}) throw not_normalized("increments sum to zero; cannot renormalize");
  for (auto& c : C) c /= total;
  return C;
}

inline MediumParams validate_params(std::vector<cdouble> w, std::vector<Rational> tau) {
  if (w.empty()) throw domain_error("medium needs at least one layer");
  if (w.size() != tau.size()) throw domain_error("w and tau lengths differ");
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!(std::abs(w[j]) <= 1.0)) throw domain_error("reflectivity w_" + std::to_string(j + 1) + " outside the closed disk");
    if (tau[j] <= 0) throw domain_error("travel time tau_" + std::to_string(j + 1) + " must be positive");
  }
  return MediumParams{std::move(w), std::move(tau)};
}

/// Phi : C_+^n -> D^n.
template <class Real = double>
std::vector<complex_t<Real>> phi_map(const std::vector<complex_t<Real>>& zeta) {
  using std::conj;
  using std::real;
  const std::size_t n = zeta.size();
  std::vector<complex_t<Real>> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(real(zeta[j]) > 0)) throw domain_error("phi_map argument outside the right half plane");
  }
  for (std::size_t j = 0; j + 1 < n; ++j) w[j] = (zeta[j] - zeta[j + 1]) / (zeta[j] + conj(zeta[j + 1]));
  if (n > 0) w[n - 1] = (zeta[n - 1] - Real(1)) / (zeta[n - 1] + Real(1));
  return w;
}

/// Inverse of phi_map by back-substitution from the deepest layer.
template <class Real = double>
std::vector<complex_t<Real>> phi_inverse(const std::vector<complex_t<Real>>& w) {
  using std::abs;
  using std::conj;
  const std::size_t n = w.size();
  for (const auto& wj : w)
    if (!(abs(wj) < 1)) throw domain_error("phi_inverse argument outside the open disk");
  std::vector<complex_t<Real>> zeta(n);
  if (n == 0) return zeta;
  zeta[n - 1] = (Real(1) + w[n - 1]) / (Real(1) - w[n - 1]);
  for (std::size_t j = n - 1; j-- > 0;) zeta[j] = (zeta[j + 1] + w[j] * conj(zeta[j + 1])) / (Real(1) - w[j]);
  return zeta;
}

/// Partial sums C_0, C_0 + C_1, ... through C_(n-1) mapped by Phi, and
/// tau = successive depth differences.
inline MediumParams profile_to_params(const ImpedanceProfile& profile) {
  const std::size_t n = profile.layers();
  std::vector<cdouble> partial(n);
  cdouble acc{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) partial[j] = acc += profile.C[j];
  std::vector<Rational> tau(n);
  for (std::size_t j = 0; j < n; ++j) tau[j] = j == 0 ? profile.X[0] : Rational(profile.X[j] - profile.X[j - 1]);
  return MediumParams{phi_map<double>(partial), std::move(tau)};
}

/// Psi_z^w(v) = z (v + conj w) / (1 + w v).
template <class Real = double>
complex_t<Real> mobius(const complex_t<Real>& w, const complex_t<Real>& z, const complex_t<Real>& v) {
  using std::abs;
  using std::conj;
  const Real tol(unit_tolerance);
  if (abs(w) > 1 + tol || abs(v) > 1 + tol) throw domain_error("mobius arguments must lie in the closed disk");
  if (abs(abs(z) - 1) > tol) throw domain_error("mobius delay must be unimodular");
  const complex_t<Real> den = Real(1) + w * v;
  if (den == complex_t<Real>(Real(0), Real(0))) throw pole_error("mobius pole: 1 + w v = 0");
  return z * (v + conj(w)) / den;
}

/// Psi_1^(w_1) o ... o Psi_1^(w_n)(0).
template <class Real = double>
complex_t<Real> layer_collapse(const std::vector<complex_t<Real>>& w) {
  const complex_t<Real> one(Real(1), Real(0));
  complex_t<Real> v(Real(0), Real(0));
  for (std::size_t j = w.size(); j-- > 0;) v = mobius<Real>(w[j], one, v);
  return v;
}

}  // namespace layerlab
