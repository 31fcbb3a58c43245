#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace biasperm {

// Exact arithmetic for the small-n verification mode. Every double is a dyadic
// rational, so converting table entries into Rational loses nothing.
// Expression templates are off so Rational behaves like a plain value type.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <class Scalar>
Scalar scalar_from_double(double x) {
  return Scalar(x);
}

template <>
inline Rational scalar_from_double<Rational>(double x) {
  return Rational(x);
}

}  // namespace biasperm
