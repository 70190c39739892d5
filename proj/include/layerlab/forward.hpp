#pragma once

// Forward modelling: the backward recurrence and its generalisation to
// independent delays, enumeration of the arrival index set, arrival
// amplitudes as products of scattering polynomials, the time-limited
// boundary Green's function as an exact-time delta train, its spectrum, and
// the universal amplitude wavefield psi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/media.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/scalar.hpp"
#include "layerlab/spoly.hpp"

namespace layerlab {

/// Index k of one arrival. Members of the arrival set satisfy k_1 = 1,
/// k_j >= 0, and once some k_j is zero every later entry is zero.
struct LatticePoint {
  std::vector<int> k;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline bool in_arrival_set(std::span<const int> k) {
  if (k.empty() || k[0] != 1) return false;
  bool zero_seen = false;
  for (int v : k) {
    if (v < 0) return false;
    if (zero_seen && v != 0) return false;
    if (v == 0) zero_seen = true;
  }
  return true;
}

/// <k, tau> as an exact rational.
inline Rational arrival_time(std::span<const int> k, std::span<const Rational> tau) {
  Rational t = 0;
  for (std::size_t j = 0; j < k.size(); ++j) t += Rational(k[j]) * tau[j];
  return t;
}

template <class Real = double>
struct Arrival {
  Rational t;
  complex_t<Real> a;
};

/// Finite delta train sum_j a_j delta(t - t_j) on [0, horizon]; times are
/// strictly increasing.
template <class Real = double>
struct DeltaTrain {
  Rational horizon;
  std::vector<Arrival<Real>> arrivals;

  [[nodiscard]] std::size_t size() const noexcept { return arrivals.size(); }
  [[nodiscard]] bool empty() const noexcept { return arrivals.empty(); }

  [[nodiscard]] Real energy() const {
    using std::norm;
    Real e(0);
    for (const auto& a : arrivals) e += norm(a.a);
    return e;
  }

  [[nodiscard]] Real total_variation() const {
    using std::abs;
    Real e(0);
    for (const auto& a : arrivals) e += abs(a.a);
    return e;
  }
};

template <class Real>
bool same_times(const DeltaTrain<Real>& a, const DeltaTrain<Real>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.arrivals[i].t != b.arrivals[i].t) return false;
  return true;
}

/// Largest amplitude difference between two trains with identical times.
template <class Real>
Real max_amplitude_difference(const DeltaTrain<Real>& a, const DeltaTrain<Real>& b) {
  using std::abs;
  if (!same_times(a, b)) throw domain_error("trains have different arrival times");
  Real d(0);
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max<Real>(d, abs(a.arrivals[i].a - b.arrivals[i].a));
  return d;
}

template <class Real = double>
struct SpectrumTrace {
  std::vector<Real> sigma;
  std::vector<complex_t<Real>> values;
};

/// Default cap on the number of enumerated lattice points; overridden by the
/// LAYERLAB_MAX_LATTICE environment variable.
inline std::size_t lattice_limit() {
  constexpr std::size_t fallback = 10'000'000;
  const char* env = std::getenv("LAYERLAB_MAX_LATTICE");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) throw domain_error("LAYERLAB_MAX_LATTICE must be a positive integer");
  return static_cast<std::size_t>(v);
}

template <class Real = double>
std::vector<complex_t<Real>> to_complex_vector(const std::vector<cdouble>& w) {
  std::vector<complex_t<Real>> out;
  out.reserve(w.size());
  for (const auto& v : w) out.emplace_back(Real(v.real()), Real(v.imag()));
  return out;
}

/// K(w, z) = Psi_(z_1)^(w_1) o ... o Psi_(z_n)^(w_n)(0) for independent
/// unimodular delays z.
template <class Real = double>
complex_t<Real> generalized_K(const std::vector<complex_t<Real>>& w, const std::vector<complex_t<Real>>& z) {
  if (w.size() != z.size()) throw domain_error("generalized_K: w and z lengths differ");
  complex_t<Real> v(Real(0), Real(0));
  for (std::size_t j = w.size(); j-- > 0;) v = mobius<Real>(w[j], z[j], v);
  return v;
}

/// Delays along the line sigma -> (e^{i sigma tau_1}, ..., e^{i sigma tau_n}).
template <class Real = double>
std::vector<complex_t<Real>> torus_line(const std::vector<Rational>& tau, const Real& sigma) {
  std::vector<complex_t<Real>> z;
  z.reserve(tau.size());
  for (const auto& t : tau) z.push_back(unit_phase<Real>(sigma * to_real<Real>(t)));
  return z;
}

/// Fourier transform of the full (untruncated) Green's function at sigma.
template <class Real = double>
complex_t<Real> backward_recurrence(const MediumParams& params, const Real& sigma) {
  return generalized_K<Real>(to_complex_vector<Real>(params.w), torus_line<Real>(params.tau, sigma));
}

namespace detail {

// Travel times and horizon rescaled to integers on a common denominator.
template <class Int>
struct IntegerGrid {
  std::vector<Int> tau;
  Int horizon;
  BigInt denominator;
};

struct GridScale {
  BigInt denominator;
  std::vector<BigInt> tau;
  BigInt horizon;
};

inline GridScale scale_to_integers(const std::vector<Rational>& tau, const Rational& T) {
  GridScale g;
  g.denominator = den(T);
  for (const auto& t : tau) g.denominator = boost::multiprecision::lcm(g.denominator, den(t));
  for (const auto& t : tau) g.tau.push_back(num(t) * (g.denominator / den(t)));
  g.horizon = num(T) * (g.denominator / den(T));
  return g;
}

inline bool fits_int64(const GridScale& g) {
  const BigInt cap = BigInt(1) << 61;
  if (g.horizon >= cap) return false;
  return std::all_of(g.tau.begin(), g.tau.end(), [&](const BigInt& v) { return v < cap; });
}

template <class Int>
IntegerGrid<Int> narrow(const GridScale& g) {
  IntegerGrid<Int> out;
  for (const auto& t : g.tau) out.tau.push_back(static_cast<Int>(t));
  out.horizon = static_cast<Int>(g.horizon);
  out.denominator = g.denominator;
  return out;
}

// Depth-first walk over the arrival set in lexicographic order, pruned by the
// remaining time budget. visit(k, scaled_time) is called once per point.
template <class Int, class Visitor>
void walk_lattice(const IntegerGrid<Int>& grid, std::size_t limit, Visitor&& visit) {
  const std::size_t n = grid.tau.size();
  if (n == 0 || grid.horizon < grid.tau[0]) return;
  std::vector<int> k(n, 0);
  k[0] = 1;
  std::size_t count = 0;
  auto rec = [&](auto&& self, std::size_t j, const Int& remaining, const Int& time) -> void {
    if (++count > limit)
      throw lattice_limit_exceeded("lattice enumeration exceeds " + std::to_string(limit) + " points");
    visit(static_cast<const std::vector<int>&>(k), time);
    if (j == n) return;
    Int rem = remaining;
    Int t = time;
    for (int v = 1; grid.tau[j] <= rem; ++v) {
      rem -= grid.tau[j];
      t += grid.tau[j];
      k[j] = v;
      self(self, j + 1, rem, t);
    }
    k[j] = 0;
  };
  rec(rec, 1, Int(grid.horizon - grid.tau[0]), Int(grid.tau[0]));
}

template <class Visitor>
void for_each_lattice_point(const std::vector<Rational>& tau, const Rational& T, std::size_t limit, Visitor&& visit) {
  for (const auto& t : tau)
    if (t <= 0) throw domain_error("travel times must be positive");
  if (T < 0) return;
  const GridScale g = scale_to_integers(tau, T);
  if (fits_int64(g)) {
    const auto grid = narrow<std::int64_t>(g);
    walk_lattice(grid, limit, [&](const std::vector<int>& k, std::int64_t t) { visit(k, BigInt(t), g.denominator); });
  } else {
    IntegerGrid<BigInt> grid{g.tau, g.horizon, g.denominator};
    walk_lattice(grid, limit, [&](const std::vector<int>& k, const BigInt& t) { visit(k, t, g.denominator); });
  }
}

// Same walk, but hands the scaled time as int64 when possible so callers can
// sort cheaply. Returns the grid denominator.
template <class Visitor>
BigInt for_each_lattice_point_fast(const std::vector<Rational>& tau, const Rational& T, std::size_t limit,
                                   Visitor&& visit) {
  for (const auto& t : tau)
    if (t <= 0) throw domain_error("travel times must be positive");
  const GridScale g = scale_to_integers(tau, T < 0 ? Rational(0) : T);
  if (T < 0) return g.denominator;
  if (fits_int64(g)) {
    walk_lattice(narrow<std::int64_t>(g), limit, visit);
  } else {
    IntegerGrid<BigInt> grid{g.tau, g.horizon, g.denominator};
    walk_lattice(grid, limit, visit);
  }
  return g.denominator;
}

template <class Real>
struct PolarForm {
  std::vector<Real> radius;
  std::vector<Real> angle;
};

template <class Real>
PolarForm<Real> polar_form(const std::vector<cdouble>& w) {
  PolarForm<Real> out;
  using std::atan2;
  using std::hypot;
  for (const auto& v : w) {
    const Real x(v.real()), y(v.imag());
    out.radius.push_back(hypot(x, y));
    out.angle.push_back(atan2(y, x));
  }
  return out;
}

// Memoized phi^(p,q)(w_j) per layer. Pure powers conj(w)^p are formed by
// complex multiplication so that the direct arrival is exactly conj(w_1).
template <class Real>
class FactorCache {
 public:
  explicit FactorCache(const std::vector<cdouble>& w) : polar_(polar_form<Real>(w)) {
    for (const auto& v : w) w_.emplace_back(Real(v.real()), Real(v.imag()));
  }

  const complex_t<Real>& get(std::size_t j, int p, int q) {
    using std::conj;
    const std::uint64_t key = (static_cast<std::uint64_t>(j) << 48) ^ (static_cast<std::uint64_t>(p) << 24) ^
                              static_cast<std::uint64_t>(q);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      complex_t<Real> v;
      if (q == 0 && p >= 0) {
        v = complex_t<Real>(Real(1), Real(0));
        for (int i = 0; i < p; ++i) v *= conj(w_[j]);
      } else {
        v = scattering_value<Real>(p, q, polar_.radius[j], polar_.angle[j]);
      }
      it = cache_.emplace(key, std::move(v)).first;
    }
    return it->second;
  }

 private:
  PolarForm<Real> polar_;
  std::vector<complex_t<Real>> w_;
  std::unordered_map<std::uint64_t, complex_t<Real>> cache_;
};

template <class Real>
complex_t<Real> amplitude_product(std::span<const int> k, FactorCache<Real>& cache) {
  complex_t<Real> a(Real(1), Real(0));
  const std::size_t n = k.size();
  for (std::size_t j = 0; j < n; ++j) a *= cache.get(j, k[j], j + 1 < n ? k[j + 1] : 0);
  return a;
}

template <class Real, class Time>
struct RawArrival {
  Time t;
  complex_t<Real> a;
};

// Stable-sort by exact time and sum coincident amplitudes in the order they
// were produced. Exactly-zero amplitudes are dropped before and after merging.
template <class Real, class Time>
DeltaTrain<Real> merge_arrivals(std::vector<RawArrival<Real, Time>> raw, const BigInt& denominator,
                                const Rational& horizon) {
  const complex_t<Real> zero(Real(0), Real(0));
  std::erase_if(raw, [&](const auto& r) { return r.a == zero; });
  std::stable_sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
  DeltaTrain<Real> train;
  train.horizon = horizon;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    complex_t<Real> sum = raw[i].a;
    while (++j < raw.size() && raw[j].t == raw[i].t) sum += raw[j].a;
    if (sum != zero) {
      if constexpr (std::is_same_v<Time, Rational>)
        train.arrivals.push_back({raw[i].t, sum});
      else
        train.arrivals.push_back({Rational(BigInt(raw[i].t), denominator), sum});
    }
    i = j;
  }
  return train;
}

}  // namespace detail

/// Every member of the arrival set with <k, tau> <= T, lexicographically.
inline std::vector<LatticePoint> enumerate_lattice(const std::vector<Rational>& tau, const Rational& T,
                                                   std::size_t limit = lattice_limit()) {
  std::vector<LatticePoint> out;
  detail::for_each_lattice_point(tau, T, limit,
                                 [&](const std::vector<int>& k, const BigInt&, const BigInt&) { out.push_back({k}); });
  return out;
}

/// c_k(w) = prod_j phi^(k_j, k_(j+1))(w_j) with k_(n+1) = 0, or 0 if k_1 != 1.
template <class Real = double>
complex_t<Real> amplitude_c_k(const std::vector<cdouble>& w, std::span<const int> k) {
  if (k.size() != w.size()) throw domain_error("lattice point and reflectivity lengths differ");
  if (k.empty() || k[0] != 1) return complex_t<Real>(Real(0), Real(0));
  detail::FactorCache<Real> cache(w);
  return detail::amplitude_product<Real>(k, cache);
}

template <class Real = double>
complex_t<Real> amplitude_c_k(const std::vector<cdouble>& w, const LatticePoint& k) {
  return amplitude_c_k<Real>(w, std::span<const int>(k.k));
}

/// The measured data chi_[0,T] G: arrivals at <k, tau> with amplitude c_k(w),
/// coincident times merged exactly.
template <class Real = double>
DeltaTrain<Real> greens_function(const MediumParams& params, const Rational& T, std::size_t limit = lattice_limit()) {
  detail::FactorCache<Real> cache(params.w);
  std::vector<detail::RawArrival<Real, BigInt>> big;
  std::vector<detail::RawArrival<Real, std::int64_t>> small;
  const BigInt denominator = detail::for_each_lattice_point_fast(
      params.tau, T, limit, [&](const std::vector<int>& k, const auto& t) {
        auto a = detail::amplitude_product<Real>(k, cache);
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, std::int64_t>)
          small.push_back({t, std::move(a)});
        else
          big.push_back({t, std::move(a)});
      });
  if (!big.empty()) return detail::merge_arrivals<Real>(std::move(big), denominator, T);
  return detail::merge_arrivals<Real>(std::move(small), denominator, T);
}

/// Sum of |c_k(w)|^2 over the enumerated points (before merging).
template <class Real = double>
Real lattice_energy(const MediumParams& params, const Rational& T, std::size_t limit = lattice_limit()) {
  using std::norm;
  detail::FactorCache<Real> cache(params.w);
  Real e(0);
  detail::for_each_lattice_point(params.tau, T, limit, [&](const std::vector<int>& k, const BigInt&, const BigInt&) {
    e += norm(detail::amplitude_product<Real>(k, cache));
  });
  return e;
}

namespace detail {

// Arrival times as integer multiples of their rational gcd, if they fit.
template <class Real>
std::optional<std::pair<Rational, std::vector<std::int64_t>>> time_steps(const DeltaTrain<Real>& train) {
  std::vector<Rational> times;
  for (const auto& a : train.arrivals) {
    if (a.t <= 0) return std::nullopt;
    times.push_back(a.t);
  }
  if (times.empty()) return std::nullopt;
  const Rational step = rational_gcd(times);
  std::vector<std::int64_t> m;
  for (const auto& t : times) {
    const Rational q = t / step;
    if (num(q) > BigInt(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
    m.push_back(num(q).convert_to<std::int64_t>());
  }
  return std::make_pair(step, std::move(m));
}

template <class Complex>
Complex power(Complex base, std::int64_t e) {
  Complex r(typename Complex::value_type(1), typename Complex::value_type(0));
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// values[i] = sum_j a_j e^{i t_j sigma_i}.
///
/// Arrival times share a rational grid step; the phases are advanced by
/// powers of e^{i sigma step} instead of one sine and cosine per arrival.
template <class Real = double>
SpectrumTrace<Real> spectrum(const DeltaTrain<Real>& train, const std::vector<Real>& sigma_grid) {
  SpectrumTrace<Real> out;
  out.sigma = sigma_grid;
  const complex_t<Real> zero(Real(0), Real(0));
  const complex_t<Real> one(Real(1), Real(0));
  out.values.assign(sigma_grid.size(), zero);
  if (train.empty()) return out;
  const auto grid = detail::time_steps(train);
  std::vector<Real> times;
  for (const auto& a : train.arrivals) times.push_back(to_real<Real>(a.t));
  constexpr std::int64_t small_steps = 16;
  std::vector<complex_t<Real>> steps(small_steps + 1, one);
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    complex_t<Real> acc = zero;
    if (!grid) {
      for (std::size_t j = 0; j < times.size(); ++j) acc += train.arrivals[j].a * unit_phase<Real>(times[j] * sigma_grid[i]);
    } else {
      const auto& m = grid->second;
      const complex_t<Real> omega = unit_phase<Real>(sigma_grid[i] * to_real<Real>(grid->first));
      for (std::int64_t d = 1; d <= small_steps; ++d) steps[d] = steps[d - 1] * omega;
      complex_t<Real> phase = detail::power(omega, m[0]);
      acc = train.arrivals[0].a * phase;
      for (std::size_t j = 1; j < m.size(); ++j) {
        const std::int64_t d = m[j] - m[j - 1];
        phase *= d <= small_steps ? steps[d] : detail::power(omega, d);
        acc += train.arrivals[j].a * phase;
      }
    }
    out.values[i] = acc;
  }
  return out;
}

/// Uniform grid of `count` points on [0, sigma_max] (both ends included).
template <class Real = double>
std::vector<Real> sigma_grid(const Real& sigma_max, std::size_t count) {
  if (count == 0) throw domain_error("sigma grid needs at least one point");
  std::vector<Real> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = count == 1 ? Real(0) : sigma_max * Real(i) / Real(count - 1);
  return g;
}

/// Strict floor: the largest integer strictly below x.
template <class Coord>
Coord strict_floor(const Coord& x) {
  using std::ceil;
  return ceil(x) - 1;
}

/// Coordinates of the polar translate w° = (|w_j| + i arg w_j)_j.
inline std::vector<std::complex<long double>> polar_coordinates(const std::vector<cdouble>& w) {
  std::vector<std::complex<long double>> out;
  for (const auto& v : w) {
    if (v == cdouble{0.0, 0.0}) throw domain_error("polar coordinates need non-zero reflectivities");
    out.emplace_back(static_cast<long double>(std::abs(v)), static_cast<long double>(std::arg(v)));
  }
  return out;
}

/// Universal amplitude wavefield psi(z) = c_(floor Re z)(w(z)) where
/// w_j(z) = (Re z_j - floor Re z_j) e^{i Im z_j} and floor is strict.
///
/// Coordinates are taken in Coord (long double by default) so that the
/// translate k + w° of a double reflectivity is represented exactly for
/// moderate k.
template <class Real = double, class Coord = long double>
complex_t<Real> wavefield_psi(std::span<const std::complex<Coord>> z) {
  const std::size_t n = z.size();
  const complex_t<Real> zero(Real(0), Real(0));
  if (n == 0) return zero;
  std::vector<long long> k(n);
  std::vector<Real> radius(n);
  std::vector<Real> angle(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Coord x = z[j].real();
    const Coord fl = strict_floor(x);
    k[j] = static_cast<long long>(fl);
    radius[j] = static_cast<Real>(x - fl);
    angle[j] = static_cast<Real>(z[j].imag());
  }
  if (k[0] != 1) return zero;
  complex_t<Real> a(Real(1), Real(0));
  for (std::size_t j = 0; j < n; ++j) {
    const long long next = j + 1 < n ? k[j + 1] : 0;
    if (k[j] > std::numeric_limits<int>::max() || next > std::numeric_limits<int>::max() ||
        k[j] < std::numeric_limits<int>::min() || next < std::numeric_limits<int>::min())
      return zero;
    a *= scattering_value<Real>(static_cast<int>(k[j]), static_cast<int>(next), radius[j], angle[j]);
  }
  return a;
}

template <class Real = double>
struct PushforwardReport {
  DeltaTrain<Real> train;
  std::size_t lattice_samples = 0;
  std::size_t shell_samples = 0;
  std::size_t shell_nonzero = 0;
};

/// Rebuilds the measured data from psi alone: psi sampled at k + w° over the
/// arrival set, plus the shell of unit neighbours outside the set (which must
/// sample to zero), pushed forward onto t = <k, tau>.
template <class Real = double>
PushforwardReport<Real> pushforward_check(const MediumParams& params, const Rational& T,
                                          std::size_t limit = lattice_limit()) {
  const auto polar = polar_coordinates(params.w);
  const std::size_t n = polar.size();
  const complex_t<Real> zero(Real(0), Real(0));
  PushforwardReport<Real> report;

  std::vector<std::complex<long double>> z(n);
  auto sample = [&](std::span<const int> k) {
    for (std::size_t j = 0; j < n; ++j)
      z[j] = {static_cast<long double>(k[j]) + polar[j].real(), polar[j].imag()};
    return wavefield_psi<Real>(std::span<const std::complex<long double>>(z));
  };

  std::vector<detail::RawArrival<Real, Rational>> raw;
  std::vector<std::vector<int>> members;
  detail::for_each_lattice_point(params.tau, T, limit, [&](const std::vector<int>& k, const BigInt& t, const BigInt& d) {
    ++report.lattice_samples;
    raw.push_back({Rational(t, d), sample(k)});
    members.push_back(k);
  });

  std::vector<int> nb(n);
  std::vector<std::vector<int>> shell;
  for (const auto& k : members) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int step : {-1, 1}) {
        nb = k;
        nb[j] += step;
        if (!in_arrival_set(nb)) shell.push_back(nb);
      }
    }
  }
  std::sort(shell.begin(), shell.end());
  shell.erase(std::unique(shell.begin(), shell.end()), shell.end());
  for (const auto& k : shell) {
    ++report.shell_samples;
    const auto v = sample(k);
    if (v == zero) continue;
    ++report.shell_nonzero;
    const Rational t = arrival_time(k, params.tau);
    if (t >= 0 && t <= T) raw.push_back({t, v});
  }
  report.train = detail::merge_arrivals<Real>(std::move(raw), BigInt(1), T);
  return report;
}

}  // namespace layerlab
