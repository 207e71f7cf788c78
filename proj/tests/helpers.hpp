#ifndef MAJOLAT_TESTS_HELPERS_HPP
#define MAJOLAT_TESTS_HELPERS_HPP

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "doctest.h"
#include "majolat/core.hpp"

namespace test {

using majolat::Distribution;
using majolat::Rational;
using majolat::Vector;

inline Vector<double> vec(std::initializer_list<double> xs) {
  Vector<double> v(static_cast<Eigen::Index>(xs.size()));
  std::copy(xs.begin(), xs.end(), v.data());
  return v;
}

inline Vector<Rational> qvec(std::initializer_list<const char*> xs) {
  Vector<Rational> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const char* x : xs) v[i++] = majolat::parse_rational(x);
  return v;
}

inline Distribution<double> dist(std::initializer_list<double> xs) {
  return majolat::make_distribution(vec(xs));
}

inline Distribution<Rational> qdist(std::initializer_list<const char*> xs) {
  return majolat::make_distribution(qvec(xs));
}

inline Rational q(const char* text) { return majolat::parse_rational(text); }

template <typename Fn>
void expect_error(majolat::ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL("expected error " << majolat::to_string(code));
  } catch (const majolat::Error& e) {
    CHECK(e.code() == code);
  }
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool all_near(const Vector<double>& a, const Vector<double>& b, double tol) {
  return a.size() == b.size() && ((a - b).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace test

#define CHECK_NEAR(a, b, tol) CHECK(test::near((a), (b), (tol)))
#define CHECK_VEC_NEAR(a, b, tol) CHECK(test::all_near((a), (b), (tol)))

#endif  // MAJOLAT_TESTS_HELPERS_HPP
