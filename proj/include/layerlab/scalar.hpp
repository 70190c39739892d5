#pragma once

// Real/complex scalar pairing. The numeric routines are templates over the
// real type so the same code runs in double and in extended precision.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>
#include <type_traits>

#include "layerlab/rational.hpp"

namespace layerlab {

template <class Real>
struct scalar_traits {
  using complex = std::complex<Real>;
};

template <unsigned Digits, boost::multiprecision::expression_template_option ET>
struct scalar_traits<boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>, ET>> {
  using complex =
      boost::multiprecision::number<boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<Digits>>,
                                    ET>;
};

template <class Real>
using complex_t = typename scalar_traits<Real>::complex;

/// 60 significant decimal digits; used where truncation effects must be
/// resolved below double rounding.
using extended_real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>,
                                                    boost::multiprecision::et_off>;
using extended_complex = complex_t<extended_real>;

template <class Real>
Real to_real(const Rational& q) {
  return q.template convert_to<Real>();
}

template <class Real>
complex_t<Real> make_complex(const Real& re, const Real& im = Real(0)) {
  return complex_t<Real>(re, im);
}

/// e^{i phase}
template <class Real>
complex_t<Real> unit_phase(const Real& phase) {
  using std::cos;
  using std::sin;
  return complex_t<Real>(cos(phase), sin(phase));
}

template <class Real>
Real pi() {
  if constexpr (std::is_floating_point_v<Real>)
    return static_cast<Real>(3.141592653589793238462643383279502884L);
  else
    return boost::math::constants::pi<Real>();
}

/// Converts between complex types of different precision.
template <class To, class From>
complex_t<To> complex_cast(const From& z) {
  using std::imag;
  using std::real;
  return complex_t<To>(static_cast<To>(real(z)), static_cast<To>(imag(z)));
}

}  // namespace layerlab
