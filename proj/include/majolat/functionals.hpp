#ifndef MAJOLAT_FUNCTIONALS_HPP
#define MAJOLAT_FUNCTIONALS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "majolat/core.hpp"
#include "majolat/lattice.hpp"

namespace majolat {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Entropy order. Values within 1e-12 of 1 are treated as exactly 1.
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::AlphaOutOfRange, "alpha must be a finite value >= 0");
    }
  }

  double value() const { return value_; }
  bool is_one() const { return std::abs(value_ - 1.0) <= 1e-12; }

 private:
  double value_;
};

// Everything below works on double vectors; Distribution<double> and
// WeightVector<double> are accepted through their values().

/// Shannon entropy in bits, 0 log 0 = 0.
template <typename Derived>
double shannon(const Eigen::MatrixBase<Derived>& x) {
  double h = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

/// sum_i x_i^alpha with 0^alpha = 0 for every alpha (support size at 0).
template <typename Derived>
double alpha_norm_pow(const Eigen::MatrixBase<Derived>& x, Alpha alpha) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v > 0.0) s += std::pow(v, alpha.value());
  }
  return s;
}

/// Renyi entropy in bits.
template <typename Derived>
double renyi(const Eigen::MatrixBase<Derived>& p, Alpha alpha) {
  if (alpha.is_one()) return shannon(p);
  return std::log2(alpha_norm_pow(p, alpha)) / (1.0 - alpha.value());
}

/// Tsallis entropy; Shannon entropy in nats at alpha = 1.
template <typename Derived>
double tsallis(const Eigen::MatrixBase<Derived>& p, Alpha alpha) {
  if (alpha.is_one()) return shannon(p) * std::numbers::ln2;
  return (alpha_norm_pow(p, alpha) - 1.0) / (1.0 - alpha.value());
}

/// Kullback-Leibler divergence D(x || y) in bits, taken positionally after
/// padding the shorter vector with zeros. +inf when supp(x) is not inside
/// supp(y).
template <typename DerivedX, typename DerivedY>
double kl(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  const Index n = std::max(x.size(), y.size());
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = i < x.size() ? double(x[i]) : 0.0;
    const double b = i < y.size() ? double(y[i]) : 0.0;
    if (a <= 0.0) continue;
    if (b <= 0.0) return kInfinity;
    s += a * std::log2(a / b);
  }
  return s;
}

namespace detail {

// g = -phi_alpha with phi_alpha(t) = (t^alpha - t) / (1 - alpha), written
// through expm1 so that alpha close to 1 does not cancel.
inline double neg_phi(double t, double alpha) {
  if (t <= 0.0) return 0.0;
  const double am1 = alpha - 1.0;
  return t * std::expm1(am1 * std::log(t)) / am1;
}

inline double neg_phi_slope(double t, double alpha) {
  const double am1 = alpha - 1.0;
  return alpha * std::expm1(am1 * std::log(t)) / am1 + 1.0;
}

// Per-coordinate Bregman divergence of g = -phi_alpha, derivative taken at
// the second argument.
inline double bregman_term(double a, double b, Alpha alpha) {
  if (a == b) return 0.0;
  if (alpha.is_one()) {
    if (b <= 0.0) return kInfinity;
    if (a <= 0.0) return b;
    return a * std::log(a / b) - a + b;
  }
  const double al = alpha.value();
  if (b <= 0.0) {
    // the slope of g at 0 is finite only for alpha > 1
    if (al <= 1.0) return kInfinity;
    return neg_phi(a, al) + a / (al - 1.0);
  }
  return neg_phi(a, al) - neg_phi(b, al) - neg_phi_slope(b, al) * (a - b);
}

}  // namespace detail

/// W_phi(x || y) = sum_i B(x_i, y_i) with B the Bregman divergence of
/// -phi_alpha, phi_alpha(t) = (t^alpha - t) / (1 - alpha).
///
/// The textbook display of this quantity as (x - y) phi'(x) + phi(y) - phi(x)
/// takes the derivative at the first argument and sums to -D(x || y) as
/// alpha -> 1. The Bregman form used here is non-negative, vanishes only at
/// x = y, equals the natural-log KL divergence at alpha = 1 (equal totals) and
/// sum_i (x_i - y_i)^2 at alpha = 2. Returns +inf for alpha <= 1 when some
/// y_i = 0 < x_i.
template <typename DerivedX, typename DerivedY>
double w_phi(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
             Alpha alpha) {
  const Index n = std::max(x.size(), y.size());
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = i < x.size() ? double(x[i]) : 0.0;
    const double b = i < y.size() ? double(y[i]) : 0.0;
    s += detail::bregman_term(a, b, alpha);
    if (std::isinf(s)) return kInfinity;
  }
  return s;
}

// Distribution / WeightVector conveniences.

inline double shannon(const Distribution<double>& p) { return shannon(p.values()); }
inline double renyi(const Distribution<double>& p, Alpha a) { return renyi(p.values(), a); }
inline double tsallis(const Distribution<double>& p, Alpha a) { return tsallis(p.values(), a); }

template <MassVector V>
  requires std::same_as<typename V::scalar_type, double>
double alpha_norm_pow(const V& x, Alpha a) {
  return alpha_norm_pow(x.values(), a);
}

template <MassVector V>
  requires std::same_as<typename V::scalar_type, double>
double kl(const V& x, const V& y) {
  return kl(x.values(), y.values());
}

template <MassVector V>
  requires std::same_as<typename V::scalar_type, double>
double w_phi(const V& x, const V& y, Alpha a) {
  return w_phi(x.values(), y.values(), a);
}

/// H_alpha(p) + H_alpha(q) - 2 H_alpha(p v q), a metric for alpha >= 1.
inline double lattice_distance(const Distribution<double>& p, const Distribution<double>& q,
                               Alpha alpha) {
  if (alpha.value() < 1.0 && !alpha.is_one()) {
    throw Error(ErrorCode::AlphaOutOfRange, "lattice distance needs alpha >= 1");
  }
  return renyi(p, alpha) + renyi(q, alpha) - 2.0 * renyi(join(p, q), alpha);
}

/// Runtime tag for the functionals used by the verification harness.
enum class Functional { Shannon, Renyi, Tsallis, AlphaNormPow };

inline const char* to_string(Functional f) {
  switch (f) {
    case Functional::Shannon: return "shannon";
    case Functional::Renyi: return "renyi";
    case Functional::Tsallis: return "tsallis";
    case Functional::AlphaNormPow: return "normpow";
  }
  return "?";
}

inline Functional parse_functional(const std::string& name) {
  if (name == "shannon") return Functional::Shannon;
  if (name == "renyi") return Functional::Renyi;
  if (name == "tsallis") return Functional::Tsallis;
  if (name == "normpow" || name == "alpha_norm_pow") return Functional::AlphaNormPow;
  throw Error(ErrorCode::UnknownFunctional, "unknown functional '" + name + "'");
}

template <typename Derived>
double evaluate(Functional f, const Eigen::MatrixBase<Derived>& x, Alpha alpha) {
  switch (f) {
    case Functional::Shannon: return shannon(x);
    case Functional::Renyi: return renyi(x, alpha);
    case Functional::Tsallis: return tsallis(x, alpha);
    case Functional::AlphaNormPow: return alpha_norm_pow(x, alpha);
  }
  throw Error(ErrorCode::UnknownFunctional, "unhandled functional");
}

inline const double kLog2E = std::numbers::log2e;

}  // namespace majolat

#endif  // MAJOLAT_FUNCTIONALS_HPP
