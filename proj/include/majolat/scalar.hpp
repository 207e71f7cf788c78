#ifndef MAJOLAT_SCALAR_HPP
#define MAJOLAT_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <type_traits>

#include "majolat/error.hpp"

namespace majolat {

/// Exact rational scalar (GMP mpq) without expression templates so that it
/// behaves like a plain value type inside Eigen containers.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Absolute tolerance on prefix sums used by the Float64 backend.
inline constexpr double kDefaultTolerance = 1e-9;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool is_exact = false;
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static Rational from_double(double x) { return Rational(x); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

template <typename Scalar>
concept LatticeScalar = requires { ScalarTraits<Scalar>::is_exact; };

template <LatticeScalar Scalar>
inline double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

// Tolerance-aware comparisons. The tolerance is ignored for exact scalars.

template <LatticeScalar Scalar>
inline bool approx_leq(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (ScalarTraits<Scalar>::is_exact) {
    return a <= b;
  } else {
    return a <= b + tol;
  }
}

template <LatticeScalar Scalar>
inline bool approx_eq(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (ScalarTraits<Scalar>::is_exact) {
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

template <LatticeScalar Scalar>
inline bool definitely_less(const Scalar& a, const Scalar& b, double tol) {
  return !approx_leq(b, a, tol);
}

enum class BackendMode { Float64, ExactRational };

/// Runtime backend selection used by the batch harness and the CLI.
struct Backend {
  BackendMode mode = BackendMode::Float64;
  double tolerance = kDefaultTolerance;

  void validate() const {
    if (mode == BackendMode::Float64 && !(tolerance > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "Float64 backend needs a positive tolerance");
    }
  }
};

inline const char* to_string(BackendMode mode) {
  return mode == BackendMode::Float64 ? "float" : "rational";
}

/// Parses "num/den", integers and plain decimals ("0.125", "-3e-2") exactly.
Rational parse_rational(const std::string& text);

/// Canonical "num/den" text, or just "num" when the denominator is 1.
std::string format_rational(const Rational& x);

}  // namespace majolat

#endif  // MAJOLAT_SCALAR_HPP
