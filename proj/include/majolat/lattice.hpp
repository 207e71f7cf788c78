#ifndef MAJOLAT_LATTICE_HPP
#define MAJOLAT_LATTICE_HPP

#include <algorithm>
#include <vector>

#include "majolat/core.hpp"

namespace majolat {

/// T = lam * I + (1 - lam) * P_ij acting on positions i and j of a vector.
template <LatticeScalar Scalar>
struct TTransform {
  Scalar lam;
  Index i;
  Index j;

  void apply(Vector<Scalar>& v) const {
    const Scalar a = v[i];
    const Scalar b = v[j];
    v[i] = lam * a + (Scalar(1) - lam) * b;
    v[j] = lam * b + (Scalar(1) - lam) * a;
  }
};

template <LatticeScalar Scalar>
void apply_all(const std::vector<TTransform<Scalar>>& transforms, Vector<Scalar>& v) {
  for (const auto& t : transforms) t.apply(v);
}

namespace detail {

template <LatticeScalar Scalar>
Index common_dim(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  return std::max(p.dim(), q.dim());
}

// Differences of an envelope built pointwise from the two Lorenz curves.
template <LatticeScalar Scalar, typename Pick>
Vector<Scalar> differenced_envelope(const Distribution<Scalar>& p, const Distribution<Scalar>& q,
                                    Pick pick) {
  const Index d = common_dim(p, q);
  const auto sp = lorenz(p);
  const auto sq = lorenz(q);
  Vector<Scalar> out(d);
  Scalar prev = Scalar(0);
  for (Index k = 1; k <= d; ++k) {
    Scalar cur = pick(sp.at(k), sq.at(k));
    out[k - 1] = cur - prev;
    prev = std::move(cur);
  }
  return out;
}

}  // namespace detail

/// Greatest common minorizer: differences of min(S_k(p), S_k(q)).
template <LatticeScalar Scalar>
Distribution<Scalar> meet(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  auto v = detail::differenced_envelope(
      p, q, [](const Scalar& a, const Scalar& b) { return std::min(a, b); });
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

/// Differences of max(S_k(p), S_k(q)); sums to 1 but is not necessarily
/// sorted, so it is returned as a raw vector.
template <LatticeScalar Scalar>
Vector<Scalar> beta(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  return detail::differenced_envelope(
      p, q, [](const Scalar& a, const Scalar& b) { return std::max(a, b); });
}

/// Least concave majorant of the points (k, max(S_k(p), S_k(q))), k = 0..d,
/// computed as an upper hull with a single monotone-chain pass. Increments
/// are constant along each hull edge.
template <LatticeScalar Scalar>
Distribution<Scalar> join(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  const Index d = detail::common_dim(p, q);
  const auto sp = lorenz(p);
  const auto sq = lorenz(q);
  std::vector<Scalar> height(d + 1);
  for (Index k = 0; k <= d; ++k) height[k] = std::max(sp.at(k), sq.at(k));

  // Hull vertices by abscissa; a middle point is dropped when it lies on or
  // below the chord joining its neighbours.
  std::vector<Index> hull;
  hull.reserve(d + 1);
  for (Index k = 0; k <= d; ++k) {
    while (hull.size() >= 2) {
      const Index a = hull[hull.size() - 2];
      const Index b = hull.back();
      // cross((b - a), (k - a)) >= 0 means b is not strictly above chord a-k
      const Scalar cross = Scalar(static_cast<long>(b - a)) * (height[k] - height[a]) -
                           Scalar(static_cast<long>(k - a)) * (height[b] - height[a]);
      if (cross >= Scalar(0)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  Vector<Scalar> v(d);
  for (std::size_t h = 1; h < hull.size(); ++h) {
    const Index a = hull[h - 1];
    const Index b = hull[h];
    const Scalar step = (height[b] - height[a]) / Scalar(static_cast<long>(b - a));
    for (Index k = a; k < b; ++k) v[k] = step;
  }
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

template <LatticeScalar Scalar>
struct MeetJoinPair {
  Distribution<Scalar> meet;
  Distribution<Scalar> join;
  Vector<Scalar> beta_raw;
};

template <LatticeScalar Scalar>
MeetJoinPair<Scalar> meet_join(const Distribution<Scalar>& p, const Distribution<Scalar>& q) {
  return {meet(p, q), join(p, q), beta(p, q)};
}

/// Transfers taking the unsorted concatenation (p_1..p_d, q_1..q_d) to a
/// rearrangement of (meet, beta). Position k only changes at indices where
/// the sign of S_k(p) - S_k(q) flips; all other positions already hold a
/// meet and a beta entry.
template <LatticeScalar Scalar>
std::vector<TTransform<Scalar>> decompose_ttransforms(const Distribution<Scalar>& p,
                                                      const Distribution<Scalar>& q,
                                                      double tol = kDefaultTolerance) {
  const Index d = detail::common_dim(p, q);
  const Distribution<Scalar> pp = pad(p, d);
  const Distribution<Scalar> qq = pad(q, d);
  const auto sp = lorenz(pp);
  const auto sq = lorenz(qq);

  std::vector<TTransform<Scalar>> out;
  for (Index k = 1; k <= d; ++k) {
    const Scalar before = sp.at(k - 1) - sq.at(k - 1);
    const Scalar after = sp.at(k) - sq.at(k);
    const Scalar zero(0);
    const bool p_led = definitely_less(zero, before, tol) && definitely_less(after, zero, tol);
    const bool q_led = definitely_less(before, zero, tol) && definitely_less(zero, after, tol);
    if (!p_led && !q_led) continue;

    // The previously dominant side gives up delta at index k.
    const Scalar delta = p_led ? before : Scalar(-before);
    const Scalar& lead = p_led ? pp[k - 1] : qq[k - 1];
    const Scalar& trail = p_led ? qq[k - 1] : pp[k - 1];
    const Scalar gap = trail - lead;
    if (!(gap > Scalar(0))) {
      throw Error(ErrorCode::DegenerateTransfer,
                  "equal entries at sign-change index " + std::to_string(k));
    }
    Scalar lam = Scalar(1) - delta / gap;
    if constexpr (!ScalarTraits<Scalar>::is_exact) lam = std::clamp(lam, 0.0, 1.0);
    out.push_back({std::move(lam), k - 1, d + k - 1});
  }
  return out;
}

/// Relation between meet (+) join and p (+) q; always majorized.
template <LatticeScalar Scalar>
Comparison precursor_supermodular(const Distribution<Scalar>& p, const Distribution<Scalar>& q,
                                  double tol = kDefaultTolerance) {
  const auto mj = meet_join(p, q);
  return compare(direct_sum(mj.meet, mj.join), direct_sum(p, q), tol);
}

/// Relation between p (+) q and meet (+) e; always majorized.
template <LatticeScalar Scalar>
Comparison precursor_subadditive(const Distribution<Scalar>& p, const Distribution<Scalar>& q,
                                 double tol = kDefaultTolerance) {
  const auto m = meet(p, q);
  return compare(direct_sum(p, q), direct_sum(m, point_mass<Scalar>(m.dim())), tol);
}

/// Relation between p (x) q and the meet padded to d^2; always majorized.
template <LatticeScalar Scalar>
Comparison precursor_tensor(const Distribution<Scalar>& p, const Distribution<Scalar>& q,
                            double tol = kDefaultTolerance) {
  const auto t = tensor(p, q);
  return compare(t, pad(meet(p, q), t.dim()), tol);
}

}  // namespace majolat

#endif  // MAJOLAT_LATTICE_HPP
