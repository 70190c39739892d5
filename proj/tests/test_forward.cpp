#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "oracles.hpp"

using namespace layerlab;

namespace {

MediumParams medium(std::vector<cdouble> w, std::vector<Rational> tau) { return validate_params(std::move(w), std::move(tau)); }

std::vector<std::vector<int>> points(const std::vector<LatticePoint>& v) {
  std::vector<std::vector<int>> out;
  for (const auto& p : v) out.push_back(p.k);
  return out;
}

}  // namespace

TEST(BackwardRecurrence, Examples) {
  const auto zero = medium({0.0, 0.0, 0.0}, {Rational(1), Rational(2), Rational(1, 3)});
  for (double s : {0.0, 1.0, 7.5}) EXPECT_EQ(backward_recurrence<double>(zero, s), cdouble(0, 0));

  const auto p = medium({{0.5, 0.1}, {-0.2, 0.4}}, {Rational(1), Rational(3, 2)});
  EXPECT_EQ(backward_recurrence<double>(p, 0.0), layer_collapse<double>(p.w));

  const auto two = medium({0.5, 0.4}, {Rational(1), Rational(1)});
  const double s = 3.141592653589793 / 3;
  const cdouble z = std::polar(1.0, s);
  const cdouble expect = z * (0.5 + z * 0.4) / (1.0 + 0.5 * z * 0.4);
  EXPECT_LT(std::abs(backward_recurrence<double>(two, s) - expect), 1e-15);
}

TEST(GeneralizedK, RestrictionAndExamples) {
  const std::vector<cdouble> w{{0.3, 0.2}, {-0.5, 0.1}, {0.0, 0.7}};
  EXPECT_EQ(generalized_K<double>(w, {1.0, 1.0, 1.0}), layer_collapse<double>(w));
  EXPECT_EQ(generalized_K<double>({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}), cdouble(0, 0));
  const auto p = medium(w, {Rational(1), Rational(5, 3), Rational(2, 7)});
  for (double s : {0.1, 2.0, 9.0}) EXPECT_EQ(generalized_K<double>(w, torus_line<double>(p.tau, s)), backward_recurrence<double>(p, s));

  const cdouble a(0.5, 0.2), b(-0.1, 0.3);
  const cdouble z1 = std::polar(1.0, 0.3), z2 = std::polar(1.0, -1.1);
  const cdouble expect = z1 * (std::conj(a) + z2 * std::conj(b)) / (1.0 + a * z2 * std::conj(b));
  EXPECT_LT(std::abs(generalized_K<double>({a, b}, {z1, z2}) - expect), 1e-15);
  EXPECT_THROW(generalized_K<double>({a}, {z1, z2}), domain_error);
}

TEST(Lattice, Examples) {
  EXPECT_EQ(points(enumerate_lattice({Rational(1), Rational(1)}, Rational(7, 2))),
            (std::vector<std::vector<int>>{{1, 0}, {1, 1}, {1, 2}}));
  EXPECT_EQ(points(enumerate_lattice({Rational(1), Rational(1), Rational(1)}, Rational(1))),
            (std::vector<std::vector<int>>{{1, 0, 0}}));
  EXPECT_EQ(points(enumerate_lattice({Rational(1), Rational(1), Rational(1)}, Rational(3))),
            (std::vector<std::vector<int>>{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 2, 0}}));
  EXPECT_TRUE(enumerate_lattice({Rational(2), Rational(1)}, Rational(3, 2)).empty());
}

TEST(Lattice, MatchesBoxFiltering) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_medium(rng, 1 + trial % 4);
    const Rational T = Rational(4 + trial % 5) * max_tau(p);
    const auto got = points(enumerate_lattice(p.tau, T));
    auto expect = oracles::brute_force_lattice(p.tau, T);
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
  }
}

TEST(Lattice, WideRationalGridFallsBackToBigIntegers) {
  const Rational tiny(1, BigInt("1000000000000000000000"));
  const auto pts = enumerate_lattice({Rational(1), Rational(1) + tiny}, Rational(3));
  EXPECT_EQ(points(pts), (std::vector<std::vector<int>>{{1, 0}, {1, 1}}));
}

TEST(Lattice, LimitIsEnforced) {
  EXPECT_THROW(enumerate_lattice({Rational(1), Rational(1, 100), Rational(1, 100)}, Rational(100), 1000),
               lattice_limit_exceeded);
  ::setenv("LAYERLAB_MAX_LATTICE", "5", 1);
  EXPECT_EQ(lattice_limit(), 5u);
  EXPECT_THROW(enumerate_lattice({Rational(1), Rational(1)}, Rational(10)), lattice_limit_exceeded);
  ::unsetenv("LAYERLAB_MAX_LATTICE");
  EXPECT_EQ(lattice_limit(), 10'000'000u);
}

TEST(Amplitude, Examples) {
  const std::vector<cdouble> w{{0.6, -0.2}, {0.1, 0.3}, {-0.4, 0.0}};
  EXPECT_EQ(amplitude_c_k(w, std::vector<int>{1, 0, 0}), std::conj(w[0]));
  EXPECT_EQ(amplitude_c_k(w, std::vector<int>{1, 0, 2}), cdouble(0, 0));
  EXPECT_EQ(amplitude_c_k(w, std::vector<int>{2, 1, 0}), cdouble(0, 0));
  EXPECT_THROW(amplitude_c_k(w, std::vector<int>{1, 0}), domain_error);
  for (int m = 1; m <= 8; ++m) {
    const std::vector<int> k{1, m};
    EXPECT_LT(std::abs(amplitude_c_k(std::vector<cdouble>{w[0], w[1]}, k) - oracles::two_layer_amplitude(w[0], w[1], m)),
              1e-15);
  }
}

TEST(Amplitude, AgreesWithExactPolynomialProducts) {
  const std::vector<cdouble> w{{0.6, -0.2}, {0.1, 0.3}, {-0.4, 0.5}};
  for (const auto& k : enumerate_lattice({Rational(1), Rational(1), Rational(1)}, Rational(9))) {
    cdouble expect = 1.0;
    for (std::size_t j = 0; j < 3; ++j) expect *= eval_poly(scattering_poly(k.k[j], j + 1 < 3 ? k.k[j + 1] : 0), w[j]);
    EXPECT_LT(std::abs(amplitude_c_k(w, k) - expect), 1e-13);
  }
}

TEST(Greens, TwoLayerExample) {
  const cdouble w1(0.5, 0.1), w2(-0.3, 0.4);
  const auto train = greens_function(medium({w1, w2}, {Rational(1), Rational(1)}), Rational(3));
  ASSERT_EQ(train.size(), 3u);
  for (int m = 0; m < 3; ++m) {
    EXPECT_EQ(train.arrivals[m].t, Rational(m + 1));
    EXPECT_LT(std::abs(train.arrivals[m].a - oracles::two_layer_amplitude(w1, w2, m)), 1e-15);
  }
  EXPECT_EQ(train.arrivals[0].a, std::conj(w1));
}

TEST(Greens, DegenerateMediumIsInvisible) {
  EXPECT_TRUE(greens_function(medium({0.0, 0.0}, {Rational(1), Rational(1)}), Rational(10)).empty());
  EXPECT_TRUE(greens_function(medium({0.5, 0.5}, {Rational(2), Rational(1)}), Rational(1)).empty());
}

TEST(Greens, CollisionsAreMergedExactly) {
  const std::vector<cdouble> w{{0.3, 0.1}, {-0.4, 0.2}, {0.5, -0.3}};
  const auto p = medium(w, {Rational(2), Rational(1), Rational(1)});
  const auto train = greens_function(p, Rational(4));
  const auto a120 = amplitude_c_k(w, std::vector<int>{1, 2, 0});
  const auto a111 = amplitude_c_k(w, std::vector<int>{1, 1, 1});
  const auto a100 = amplitude_c_k(w, std::vector<int>{1, 0, 0});
  const auto a110 = amplitude_c_k(w, std::vector<int>{1, 1, 0});
  ASSERT_EQ(train.size(), 3u);
  EXPECT_EQ(train.arrivals[0].t, Rational(2));
  EXPECT_EQ(train.arrivals[0].a, a100);
  EXPECT_EQ(train.arrivals[1].t, Rational(3));
  EXPECT_EQ(train.arrivals[1].a, a110);
  EXPECT_EQ(train.arrivals[2].t, Rational(4));
  EXPECT_LT(std::abs(train.arrivals[2].a - (a120 + a111)), 1e-16);

  const auto other = greens_function(medium(w, {Rational(1), Rational(2), Rational(2)}), Rational(4));
  ASSERT_GE(other.size(), 2u);
  EXPECT_EQ(other.arrivals[1].t, Rational(3));
  EXPECT_EQ(other.arrivals[1].a, a110);
}

TEST(Greens, FirstArrivalAndOrdering) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_medium(rng, 2 + trial % 3);
    const auto train = greens_function(p, Rational(10) * max_tau(p));
    ASSERT_FALSE(train.empty());
    EXPECT_EQ(train.arrivals[0].t, p.tau[0]);
    EXPECT_EQ(train.arrivals[0].a, std::conj(p.w[0]));
    for (std::size_t i = 1; i < train.size(); ++i) EXPECT_LT(train.arrivals[i - 1].t, train.arrivals[i].t);
    EXPECT_LE(train.arrivals.back().t, train.horizon);
  }
}

TEST(Greens, BesselBoundAndMonotoneEnergy) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_medium(rng, 2 + trial % 3, 0.99);
    double prev = 0.0;
    for (int f = 1; f <= 16; f *= 2) {
      const double e = lattice_energy(p, Rational(f) * max_tau(p));
      EXPECT_LE(e, 1.0 + 1e-12);
      EXPECT_GE(e, prev);
      prev = e;
    }
  }
}

TEST(Spectrum, Examples) {
  DeltaTrain<double> empty;
  const auto grid = sigma_grid(10.0, 11);
  for (const auto& v : spectrum(empty, grid).values) EXPECT_EQ(v, cdouble(0, 0));
  DeltaTrain<double> one;
  one.arrivals.push_back({Rational(3, 2), 1.0});
  const auto s = spectrum(one, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(std::abs(s.values[i]), 1.0, 1e-15);
    EXPECT_LT(std::abs(s.values[i] - std::polar(1.0, 1.5 * grid[i])), 1e-14);
  }
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 10.0);
  EXPECT_THROW(sigma_grid(1.0, 0), domain_error);
}

TEST(Spectrum, BoundedByTotalVariation) {
  std::mt19937_64 rng(31);
  const auto p = random_medium(rng, 3);
  const auto train = greens_function(p, Rational(10) * max_tau(p));
  for (const auto& v : spectrum(train, sigma_grid(30.0, 200)).values) EXPECT_LE(std::abs(v), train.total_variation() + 1e-12);
}

TEST(Spectrum, TwoLayerConvergesToRecurrence) {
  const auto p = medium({{0.5, 0.2}, {-0.4, 0.3}}, {Rational(1), Rational(1)});
  const auto grid = sigma_grid(20.0, 64);
  double prev = 1.0;
  for (int T : {5, 10, 20, 40}) {
    const auto s = spectrum(greens_function(p, Rational(T)), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(s.values[i] - backward_recurrence(p, grid[i])));
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 1e-9);
}

TEST(Spectrum, AgreesWithDirectSummation) {
  const auto p = medium({{0.6, -0.2}, {-0.4, 0.5}, {0.3, 0.3}}, {Rational(2, 3), Rational(5, 4), Rational(7, 16)});
  const auto train = greens_function(p, Rational(30));
  const auto grid = sigma_grid(50.0, 97);
  const auto s = spectrum(train, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::complex<long double> direct = 0;
    for (const auto& a : train.arrivals) {
      const long double phase = static_cast<long double>(to_real<double>(a.t)) * grid[i];
      direct += std::complex<long double>(a.a) * std::polar(1.0L, phase);
    }
    EXPECT_LT(std::abs(std::complex<long double>(s.values[i]) - direct), 1e-12L);
  }
}

TEST(Spectrum, SingleInterfaceIsExact) {
  const auto p = medium({{0.4, -0.3}, 0.0}, {Rational(1), Rational(1)});
  const auto train = greens_function(p, Rational(5));
  ASSERT_EQ(train.size(), 1u);
  const auto grid = sigma_grid(20.0, 50);
  const auto s = spectrum(train, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(std::abs(s.values[i] - backward_recurrence(p, grid[i])), 1e-15);
}

TEST(Wavefield, Examples) {
  const std::vector<cdouble> w{{0.3, 0.4}, {-0.2, 0.1}};
  const auto polar = polar_coordinates(w);
  for (const auto& k : enumerate_lattice({Rational(1), Rational(1)}, Rational(8))) {
    std::vector<std::complex<long double>> z{{k.k[0] + polar[0].real(), polar[0].imag()},
                                             {k.k[1] + polar[1].real(), polar[1].imag()}};
    EXPECT_LT(std::abs(wavefield_psi<double>(std::span<const std::complex<long double>>(z)) - amplitude_c_k(w, k)), 1e-16);
  }
  std::vector<std::complex<long double>> off{{2.5L, 0.1L}, {1.5L, 0.0L}};
  EXPECT_EQ(wavefield_psi<double>(std::span<const std::complex<long double>>(off)), cdouble(0, 0));
  // Integer real parts sit on the boundary circle: radius 1.
  std::vector<std::complex<long double>> edge{{2.0L, 0.3L}, {1.0L, 0.0L}};
  EXPECT_LT(std::abs(wavefield_psi<double>(std::span<const std::complex<long double>>(edge)) -
                     scattering_value<double>(1, 0, 1.0, 0.3) * scattering_value<double>(0, 0, 1.0, 0.0)),
            1e-16);
  EXPECT_EQ(strict_floor(3.0L), 2.0L);
  EXPECT_EQ(strict_floor(3.5L), 3.0L);
  EXPECT_THROW(polar_coordinates({0.0}), domain_error);
}

TEST(Wavefield, PushforwardEqualsGreensFunction) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_medium(rng, 2 + trial % 3);
    const Rational T = Rational(8) * max_tau(p);
    const auto report = pushforward_check(p, T);
    const auto direct = greens_function(p, T);
    ASSERT_TRUE(same_times(report.train, direct));
    EXPECT_LE(max_amplitude_difference(report.train, direct), 1e-15);
    EXPECT_GT(report.shell_samples, 0u);
    EXPECT_EQ(report.shell_nonzero, 0u);
  }
}

TEST(ExtendedPrecision, GreensAndRecurrenceAgreeWithDouble) {
  const auto p = medium({{0.5, 0.1}, {-0.3, 0.35}, {0.2, -0.45}}, {Rational(1), Rational(3, 2), Rational(5, 4)});
  const Rational T(12);
  const auto lo = greens_function<double>(p, T);
  const auto hi = greens_function<extended_real>(p, T);
  ASSERT_EQ(lo.size(), hi.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    EXPECT_EQ(lo.arrivals[i].t, hi.arrivals[i].t);
    EXPECT_LT(std::abs(lo.arrivals[i].a - complex_cast<double>(hi.arrivals[i].a)), 1e-14);
  }
  const extended_real s("2.5");
  EXPECT_LT(std::abs(backward_recurrence<double>(p, 2.5) - complex_cast<double>(backward_recurrence<extended_real>(p, s))),
            1e-15);
}
