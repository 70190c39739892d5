#pragma once

// Exact rational numbers for arrival times, travel times and polynomial
// coefficients.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "layerlab/errors.hpp"

namespace layerlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

/// Canonical "num/den" form; integers print with an explicit "/1".
inline std::string to_string(const Rational& q) {
  return num(q).str() + "/" + den(q).str();
}

/// Exact value of a finite double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw parse_error("non-finite value cannot be made rational");
  return Rational(x);
}

namespace detail {

inline BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) return BigInt(0);
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw parse_error("invalid rational '" + std::string(whole) + "'");
  }
  return BigInt(std::string(s));
}

inline BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace detail

/// Parses "num/den", an integer, or a decimal string such as "-2.5e-3".
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw parse_error("empty rational");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw parse_error("invalid rational '" + std::string(text) + "'");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto n = s.substr(0, slash);
    auto d = s.substr(slash + 1);
    if (n.empty() || d.empty()) throw parse_error("invalid rational '" + std::string(text) + "'");
    BigInt dn = detail::parse_digits(d, text);
    if (dn == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
    value = Rational(detail::parse_digits(n, text), dn);
  } else {
    long long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto es = s.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      if (es.empty() || es.size() > 6) throw parse_error("invalid exponent in '" + std::string(text) + "'");
      exponent = detail::parse_digits(es, text).convert_to<long long>();
      if (eneg) exponent = -exponent;
      s = s.substr(0, e);
    }
    auto dot = s.find('.');
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw parse_error("invalid rational '" + std::string(text) + "'");
    BigInt mant = detail::parse_digits(ip, text) * detail::pow10(static_cast<unsigned>(fp.size())) +
                  detail::parse_digits(fp, text);
    exponent -= static_cast<long long>(fp.size());
    if (exponent >= 0)
      value = Rational(mant * detail::pow10(static_cast<unsigned>(exponent)));
    else
      value = Rational(mant, detail::pow10(static_cast<unsigned>(-exponent)));
  }
  return negative ? Rational(-value) : value;
}

/// Largest rational g such that every entry is an integer multiple of g.
/// Entries must be positive.
template <class Range>
Rational rational_gcd(const Range& values) {
  BigInt g = 0;
  BigInt l = 1;
  for (const Rational& v : values) {
    g = boost::multiprecision::gcd(g, num(v));
    l = boost::multiprecision::lcm(l, den(v));
  }
  return Rational(g, l);
}

}  // namespace layerlab
