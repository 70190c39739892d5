#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/jacobi.hpp>

#include <random>

#include "oracles.hpp"

using namespace layerlab;

TEST(ScatteringPoly, SmallCasesByHand) {
  EXPECT_EQ(scattering_poly(1, 1).str(), "1 - z*zb");
  EXPECT_EQ(scattering_poly(0, 0).str(), "1");
  EXPECT_EQ(scattering_poly(3, 0), BivariatePolynomial::monomial(0, 3));
  EXPECT_TRUE(scattering_poly(0, 2).is_zero());
  EXPECT_TRUE(scattering_poly(-1, 2).is_zero());
  EXPECT_TRUE(scattering_poly(2, -1).is_zero());
  EXPECT_EQ(oracles::as_map(scattering_poly(1, 2)), oracles::scattering_by_differentiation(1, 2));
}

TEST(ScatteringPoly, MatchesDirectDifferentiation) {
  for (int p = 0; p <= 12; ++p)
    for (int q = 0; q <= 12; ++q)
      EXPECT_EQ(oracles::as_map(scattering_poly(p, q)), oracles::scattering_by_differentiation(p, q))
          << "p=" << p << " q=" << q;
}

TEST(ScatteringPoly, IntegerCoefficientsAndDegree) {
  for (int p = 1; p <= 10; ++p)
    for (int q = 1; q <= 10; ++q) {
      const auto phi = scattering_poly(p, q);
      EXPECT_TRUE(phi.has_integer_coefficients());
      EXPECT_EQ(phi.total_degree(), p + q);
      EXPECT_EQ(angular_index(phi), p - q);
    }
}

TEST(HybridLaplacian, MatchesOracleOperator) {
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; q <= 6; ++q) {
      const auto phi = scattering_poly(p, q);
      EXPECT_EQ(oracles::as_map(hybrid_laplacian_apply(phi)), oracles::hybrid_laplacian(oracles::as_map(phi)));
    }
}

TEST(HybridLaplacian, EigenvalueIsPq) {
  for (int p = 0; p <= 10; ++p)
    for (int q = 0; q <= 10; ++q) {
      const auto phi = scattering_poly(p, q);
      EXPECT_EQ(hybrid_laplacian_apply(phi), Rational(-p * q) * phi);
    }
}

TEST(HybridLaplacian, Examples) {
  EXPECT_TRUE(hybrid_laplacian_apply(BivariatePolynomial::constant(1)).is_zero());
  const auto f = scattering_poly(1, 1);
  EXPECT_EQ(hybrid_laplacian_apply(f), Rational(-1) * f);
  EXPECT_EQ(hybrid_laplacian_apply(scattering_poly(2, 3)), Rational(-6) * scattering_poly(2, 3));
  EXPECT_EQ(angular_index(scattering_poly(2, 5)), -3);
  EXPECT_EQ(angular_index(scattering_poly(4, 0)), 4);
}

TEST(HybridLaplacian, HolomorphicAndAntiholomorphicAreHarmonic) {
  EXPECT_TRUE(hybrid_laplacian_apply(BivariatePolynomial::monomial(5, 0)).is_zero());
  EXPECT_TRUE(hybrid_laplacian_apply(BivariatePolynomial::monomial(0, 7)).is_zero());
}

TEST(AngularIndex, Errors) {
  EXPECT_THROW(angular_index(BivariatePolynomial()), domain_error);
  const auto mixed = BivariatePolynomial::monomial(1, 0) + BivariatePolynomial::monomial(0, 0);
  EXPECT_THROW(angular_index(mixed), mixed_angular_index);
  EXPECT_EQ(angular_index(BivariatePolynomial::monomial(2, 5)), 3);
}

TEST(EvalPoly, AgreesWithLongDoubleSummation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; q <= 6; ++q) {
      const auto phi = scattering_poly(p, q);
      const auto ref = oracles::as_map(phi);
      for (int s = 0; s < 5; ++s) {
        const cdouble z(u(rng), u(rng));
        const auto expect = oracles::eval_direct(ref, z);
        const cdouble got = eval_poly(phi, z);
        EXPECT_NEAR(got.real(), static_cast<double>(expect.real()), 1e-12);
        EXPECT_NEAR(got.imag(), static_cast<double>(expect.imag()), 1e-12);
      }
    }
}

TEST(EvalPoly, AgreesWithPolarRoute) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-3.14, 3.14);
  for (int p = 0; p <= 10; ++p)
    for (int q = 0; q <= 10; ++q) {
      const auto phi = scattering_poly(p, q);
      for (int s = 0; s < 4; ++s) {
        const cdouble z = std::polar(rad(rng), ang(rng));
        EXPECT_LT(std::abs(eval_poly(phi, z) - scattering_value(p, q, z)), 1e-12) << p << "," << q;
      }
    }
}

TEST(EvalPoly, ConjugateAtDirectArrival) {
  const cdouble w(0.3, -0.8);
  EXPECT_EQ(eval_poly(scattering_poly(1, 0), w), std::conj(w));
  EXPECT_EQ(eval_poly(scattering_poly(0, 0), w), cdouble(1.0, 0.0));
}

TEST(Radial, CoefficientsMatchPolynomial) {
  for (int p = 0; p <= 10; ++p)
    for (int q = 0; q <= 10; ++q) {
      const auto phi = scattering_poly(p, q);
      if (phi.is_zero()) continue;
      EXPECT_EQ(radial_coefficients(p, q), extract_radial(phi)) << p << "," << q;
    }
}

TEST(Radial, JacobiRecurrenceMatchesBoost) {
  for (int n = 0; n <= 12; ++n)
    for (double x : {-1.0, -0.5, 0.0, 0.3, 0.9, 1.0})
      for (int a : {0, 1, 5}) {
        const double ref = boost::math::jacobi(static_cast<unsigned>(n), static_cast<double>(a), 1.0, x);
        EXPECT_NEAR(jacobi_eval<double>(n, a, 1.0, x), ref, 1e-10 * std::max(1.0, std::abs(ref)));
      }
}

TEST(Radial, JacobiLowOrderClosedForm) {
  for (double x : {-1.0, 0.0, 0.5}) {
    EXPECT_DOUBLE_EQ(jacobi_eval<double>(0, 2.0, 1.0, x), 1.0);
    EXPECT_DOUBLE_EQ(jacobi_eval<double>(1, 2.0, 1.0, x), 3.0 + 5.0 * (x - 1.0) / 2.0);
  }
}

TEST(Radial, FiniteSumAgreesWithJacobiForm) {
  for (int p = 1; p <= 10; ++p)
    for (int q = 1; q <= 10; ++q)
      for (int i = 0; i <= 100; ++i) {
        const double r = i / 100.0;
        EXPECT_NEAR(radial_f(p, q, r), radial_jacobi<double>(p, q, r), 1e-12);
      }
}

TEST(Radial, BoundaryAndDomain) {
  for (int p = 1; p <= 6; ++p)
    for (int q = 1; q <= 6; ++q) EXPECT_EQ(radial_f(p, q, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(radial_f(3, 0, 0.5), 0.125);
  EXPECT_THROW(radial_f(2, 2, 1.5), domain_error);
  EXPECT_THROW(radial_f(2, 2, -0.1), domain_error);
}

TEST(Radial, ExtendedPrecisionJacobi) {
  const extended_real r("0.37");
  const double lo = radial_jacobi<double>(7, 4, 0.37);
  EXPECT_NEAR(static_cast<double>(radial_jacobi<extended_real>(7, 4, r)), lo, 1e-13);
}

TEST(Radial, BoundedByOneOnDisk) {
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; q <= 6; ++q) {
      const auto phi = scattering_poly(p, q);
      double worst = 0.0;
      for (int i = 0; i <= 30; ++i)
        for (int a = 0; a < 24; ++a)
          worst = std::max(worst, std::abs(eval_poly(phi, std::polar(i / 30.0, a * 2 * 3.141592653589793 / 24))));
      EXPECT_LE(worst, 1.0 + 1e-12) << p << "," << q;
    }
}

TEST(Radial, StepTwoExample) {
  const cdouble z(0.3, 0.4);
  const cdouble expect = std::polar(1.0, std::arg(z)) * radial_f(2, 3, 0.5);
  EXPECT_LT(std::abs(eval_poly(scattering_poly(2, 3), z) - expect), 1e-12);
  EXPECT_LT(std::abs(eval_poly(scattering_poly(1, 1), std::polar(1.0, 0.7))), 1e-15);
  for (double r : {0.0, 0.25, 0.8}) EXPECT_NEAR(radial_f(1, 1, r), 1 - r * r, 1e-15);
}

// Angular integration first on a uniform grid finer than twice the total
// degree, then Gauss-Legendre in r.
double disk_inner_product(int p1, int q1, int p2, int q2, bool hyperbolic_weight) {
  using boost::math::quadrature::gauss;
  const int grid = 2 * std::max(p1 + q1, p2 + q2) + 3;
  auto radial = [&](double r) {
    std::complex<double> acc = 0;
    for (int a = 0; a < grid; ++a) {
      const cdouble z = std::polar(r, 2 * 3.141592653589793 * a / grid);
      acc += eval_poly(scattering_poly(p1, q1), z) * std::conj(eval_poly(scattering_poly(p2, q2), z));
    }
    const double weight = hyperbolic_weight ? 4.0 / (1.0 - r * r) : 1.0;
    return std::abs(acc) * 2 * 3.141592653589793 / grid * weight * r;
  };
  return gauss<double, 20>::integrate(radial, 0.0, 1.0);
}

TEST(Radial, OrthogonalAcrossAngularFrequencies) {
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q)
      if (!scattering_poly(p, q).is_zero()) pairs.push_back({p, q});
  for (const auto& [p1, q1] : pairs)
    for (const auto& [p2, q2] : pairs) {
      if (q1 - p1 == q2 - p2) continue;
      EXPECT_LT(disk_inner_product(p1, q1, p2, q2, false), 1e-8);
      EXPECT_LT(disk_inner_product(p1, q1, p2, q2, true), 1e-8);
    }
  EXPECT_GT(disk_inner_product(2, 2, 2, 2, false), 1e-3);
}

TEST(RadialOde, TerminatesExactlyAtEigenvalues) {
  for (int p = 1; p <= 10; ++p)
    for (int q = 1; q <= 10; ++q) {
      const auto rec = radial_from_recurrence(q - p, static_cast<long long>(p) * q);
      const auto ratio = exact_ratio(radial_coefficients(p, q), rec);
      ASSERT_TRUE(ratio.has_value()) << p << "," << q;
    }
  const auto base = radial_from_recurrence(0, 1);
  EXPECT_EQ(base.m, 0);
  EXPECT_EQ(base.coeffs, (std::vector<Rational>{1, -1}));
  EXPECT_THROW(radial_from_recurrence(2, 5), not_an_eigenvalue);
  EXPECT_THROW(radial_from_recurrence(0, 2), not_an_eigenvalue);
  EXPECT_THROW(radial_from_recurrence(1, 3), not_an_eigenvalue);
  EXPECT_THROW(radial_from_recurrence(0, 0), not_an_eigenvalue);
}

TEST(RadialOde, XiProductVanishesExactly) {
  for (int m = 0; m <= 8; ++m)
    for (int nu = 1; nu <= 8; ++nu) {
      EXPECT_EQ(xi_product(nu * (m + nu), m, nu), 0.0);
      EXPECT_EQ(xi_product(nu * (m + nu), m, nu + 5), 0.0);
    }
  EXPECT_NE(xi_product(2.5, 1, 10), 0.0);
  EXPECT_EQ(xi_product(0.0, 3, 9), 1.0);
  const double a = xi_product(0.5, 0, 2000);
  const double b = xi_product(0.5, 0, 4000);
  EXPECT_LT(b, a);
  EXPECT_LT(a - b, 1e-3);
  EXPECT_THROW(xi_product(1.0, 0, 0), domain_error);
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-2.5e-1"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(to_string(Rational(4)), "4/1");
  EXPECT_THROW(parse_rational("1/0"), parse_error);
  EXPECT_THROW(parse_rational("abc"), parse_error);
  EXPECT_THROW(parse_rational(""), parse_error);
  EXPECT_EQ(rational_gcd(std::vector<Rational>{Rational(2, 3), Rational(4, 9)}), Rational(2, 9));
}
