#ifndef MAJOLAT_CORE_HPP
#define MAJOLAT_CORE_HPP

#include <algorithm>
#include <concepts>
#include <functional>
#include <initializer_list>
#include <string>

#include "majolat/error.hpp"
#include "majolat/scalar.hpp"

namespace majolat {

using Index = Eigen::Index;

namespace detail {

template <typename Scalar>
void sort_descending(Vector<Scalar>& v) {
  std::stable_sort(v.data(), v.data() + v.size(), std::greater<Scalar>{});
}

// Constructions such as differenced min/max prefix sums are sorted and
// non-negative in exact arithmetic. In floating point they can carry
// rounding noise of a few ulps, which is removed here.
template <typename Scalar>
void tidy(Vector<Scalar>& v) {
  if constexpr (!ScalarTraits<Scalar>::is_exact) {
    for (Index i = 0; i < v.size(); ++i) {
      if (v[i] < Scalar(0)) v[i] = Scalar(0);
    }
    sort_descending(v);
  }
}

}  // namespace detail

/// Non-negative vector sorted non-increasingly whose total is not pinned to 1.
/// Direct sums of two distributions live here (total 2).
template <LatticeScalar Scalar>
class WeightVector {
 public:
  using scalar_type = Scalar;

  /// Sorts `values` descending; entries must already be non-negative.
  static WeightVector from_unsorted(Vector<Scalar> values) {
    detail::sort_descending(values);
    return WeightVector(std::move(values));
  }

  const Vector<Scalar>& values() const { return values_; }
  Index dim() const { return values_.size(); }
  const Scalar& total() const { return total_; }
  const Scalar& operator[](Index i) const { return values_[i]; }

  friend bool operator==(const WeightVector& a, const WeightVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  explicit WeightVector(Vector<Scalar> values)
      : values_(std::move(values)), total_(values_.sum()) {}

  Vector<Scalar> values_;
  Scalar total_;
};

/// Element of the lattice of sorted probability vectors.
template <LatticeScalar Scalar>
class Distribution {
 public:
  using scalar_type = Scalar;

  /// For constructions that are sorted and normalized by the mathematics
  /// (meet, join, tensor products). Float rounding noise is tidied; no
  /// validation is performed.
  static Distribution from_sorted_unchecked(Vector<Scalar> values) {
    detail::tidy(values);
    return Distribution(std::move(values));
  }

  const Vector<Scalar>& values() const { return values_; }
  Index dim() const { return values_.size(); }
  Scalar total() const { return values_.sum(); }
  const Scalar& operator[](Index i) const { return values_[i]; }

  WeightVector<Scalar> as_weights() const { return WeightVector<Scalar>::from_unsorted(values_); }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  explicit Distribution(Vector<Scalar> values) : values_(std::move(values)) {}

  Vector<Scalar> values_;
};

template <typename T>
concept MassVector = requires(const T& x) {
  typename T::scalar_type;
  { x.values() } -> std::convertible_to<const Vector<typename T::scalar_type>&>;
};

/// Validates and sorts a raw probability vector. Off-simplex input is an
/// error; nothing is renormalized.
template <typename Derived>
Distribution<typename Derived::Scalar> make_distribution(const Eigen::MatrixBase<Derived>& raw,
                                                         double tol = kDefaultTolerance) {
  using Scalar = typename Derived::Scalar;
  if (raw.size() == 0) {
    throw Error(ErrorCode::EmptyVector, "a distribution needs at least one entry");
  }
  Vector<Scalar> values = raw;
  for (Index i = 0; i < values.size(); ++i) {
    if (definitely_less(values[i], Scalar(0), tol)) {
      throw Error(ErrorCode::NegativeEntry, "entry " + std::to_string(i) + " is negative");
    }
    if (values[i] < Scalar(0)) values[i] = Scalar(0);
  }
  const Scalar sum = values.sum();
  if (!approx_eq(sum, Scalar(1), tol)) {
    throw Error(ErrorCode::MassNotOne,
                "entries sum to " + std::to_string(to_double(sum)) + " instead of 1");
  }
  detail::sort_descending(values);
  return Distribution<Scalar>::from_sorted_unchecked(std::move(values));
}

template <LatticeScalar Scalar>
Distribution<Scalar> make_distribution(std::initializer_list<Scalar> raw,
                                       double tol = kDefaultTolerance) {
  Vector<Scalar> v(static_cast<Index>(raw.size()));
  std::copy(raw.begin(), raw.end(), v.data());
  return make_distribution(v, tol);
}

/// e = (1, 0, ..., 0) in dimension d.
template <LatticeScalar Scalar>
Distribution<Scalar> point_mass(Index d) {
  Vector<Scalar> v = Vector<Scalar>::Zero(d);
  v[0] = Scalar(1);
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

template <LatticeScalar Scalar>
Distribution<Scalar> uniform(Index d) {
  Vector<Scalar> v = Vector<Scalar>::Constant(d, Scalar(1) / Scalar(static_cast<long>(d)));
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

/// Appends zeros up to `d_target` entries.
template <LatticeScalar Scalar>
Distribution<Scalar> pad(const Distribution<Scalar>& p, Index d_target) {
  if (d_target < p.dim()) {
    throw Error(ErrorCode::TargetTooSmall, "cannot pad dimension " + std::to_string(p.dim()) +
                                               " down to " + std::to_string(d_target));
  }
  Vector<Scalar> v = Vector<Scalar>::Zero(d_target);
  v.head(p.dim()) = p.values();
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

/// Cumulative sums S_0 = 0, S_1, ..., S_n of a sorted vector.
template <LatticeScalar Scalar>
class LorenzCurve {
 public:
  explicit LorenzCurve(const Vector<Scalar>& sorted_values)
      : partial_sums_(sorted_values.size() + 1) {
    partial_sums_[0] = Scalar(0);
    for (Index k = 0; k < sorted_values.size(); ++k) {
      partial_sums_[k + 1] = partial_sums_[k] + sorted_values[k];
    }
  }

  const Vector<Scalar>& partial_sums() const { return partial_sums_; }
  Index n() const { return partial_sums_.size() - 1; }
  const Scalar& total() const { return partial_sums_[n()]; }

  /// S_k with the convention S_k = total for k > n.
  const Scalar& at(Index k) const { return k > n() ? total() : partial_sums_[k]; }

 private:
  Vector<Scalar> partial_sums_;
};

template <MassVector V>
LorenzCurve<typename V::scalar_type> lorenz(const V& x) {
  return LorenzCurve<typename V::scalar_type>(x.values());
}

enum class Comparison { Equal, FirstMajorized, SecondMajorized, Incomparable };

inline const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::Equal: return "Equal";
    case Comparison::FirstMajorized: return "FirstMajorized";
    case Comparison::SecondMajorized: return "SecondMajorized";
    case Comparison::Incomparable: return "Incomparable";
  }
  return "?";
}

/// True for Equal and FirstMajorized, i.e. the first argument is majorized.
inline bool is_majorized(Comparison c) {
  return c == Comparison::Equal || c == Comparison::FirstMajorized;
}

/// Four-valued majorization comparison on prefix sums, padding the shorter
/// vector with zeros. Unequal totals compare as Incomparable.
template <LatticeScalar Scalar>
Comparison compare_curves(const LorenzCurve<Scalar>& a, const LorenzCurve<Scalar>& b,
                          double tol = kDefaultTolerance) {
  const Index n = std::max(a.n(), b.n());
  if (!approx_eq(a.at(n), b.at(n), tol)) return Comparison::Incomparable;
  bool a_below = true;
  bool b_below = true;
  for (Index k = 1; k < n; ++k) {
    if (!approx_leq(a.at(k), b.at(k), tol)) a_below = false;
    if (!approx_leq(b.at(k), a.at(k), tol)) b_below = false;
  }
  if (a_below && b_below) return Comparison::Equal;
  if (a_below) return Comparison::FirstMajorized;
  if (b_below) return Comparison::SecondMajorized;
  return Comparison::Incomparable;
}

template <MassVector V>
Comparison compare(const V& a, const V& b, double tol = kDefaultTolerance) {
  return compare_curves(lorenz(a), lorenz(b), tol);
}

/// min_k (S_k(major) - S_k(minor)) over k = 1..n. Non-negative (up to
/// tolerance) exactly when `minor` is majorized by `major` with equal totals.
template <MassVector V>
typename V::scalar_type majorization_slack(const V& minor, const V& major) {
  using Scalar = typename V::scalar_type;
  const auto lo = lorenz(minor);
  const auto hi = lorenz(major);
  const Index n = std::max(lo.n(), hi.n());
  Scalar slack = hi.at(1) - lo.at(1);
  for (Index k = 2; k <= n; ++k) slack = std::min<Scalar>(slack, hi.at(k) - lo.at(k));
  return slack;
}

/// p (+) q: both padded to a common d, concatenated and sorted (total 2).
template <LatticeScalar Scalar>
WeightVector<Scalar> direct_sum(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  const Index d = std::max(p.dim(), q.dim());
  Vector<Scalar> v = Vector<Scalar>::Zero(2 * d);
  v.head(p.dim()) = p.values();
  v.segment(d, q.dim()) = q.values();
  return WeightVector<Scalar>::from_unsorted(std::move(v));
}

/// All pairwise products p_i q_j, sorted (dimension d_p * d_q).
template <LatticeScalar Scalar>
Distribution<Scalar> tensor(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  Vector<Scalar> v(p.dim() * q.dim());
  for (Index i = 0; i < p.dim(); ++i) {
    v.segment(i * q.dim(), q.dim()) = p[i] * q.values();
  }
  detail::sort_descending(v);
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

/// (p (+) q) / 2 as a distribution of dimension 2d.
template <LatticeScalar Scalar>
Distribution<Scalar> halve(const WeightVector<Scalar>& w, double tol = kDefaultTolerance) {
  if (!approx_eq(w.total(), Scalar(2), 2 * tol)) {
    throw Error(ErrorCode::MassNotTwo,
                "weights sum to " + std::to_string(to_double(w.total())) + " instead of 2");
  }
  Vector<Scalar> v = w.values() / Scalar(2);
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

template <LatticeScalar Scalar>
Vector<double> to_double(const Vector<Scalar>& v) {
  Vector<double> out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

/// Nearest-double view of an exact distribution (entries rounded individually).
inline Distribution<double> to_double(const Distribution<Rational>& p) {
  return Distribution<double>::from_sorted_unchecked(to_double(p.values()));
}

inline Distribution<Rational> to_rational(const Distribution<double>& p) {
  Vector<Rational> v(p.dim());
  for (Index i = 0; i < p.dim(); ++i) v[i] = Rational(p[i]);
  return Distribution<Rational>::from_sorted_unchecked(std::move(v));
}

}  // namespace majolat

#endif  // MAJOLAT_CORE_HPP
