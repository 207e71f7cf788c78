#ifndef MAJOLAT_SAMPLING_HPP
#define MAJOLAT_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "majolat/core.hpp"
#include "majolat/functionals.hpp"
#include "majolat/lattice.hpp"

namespace majolat {

struct SampleConfig {
  Index dimension = 3;
  std::uint64_t seed = 0;
  std::uint64_t max_tries = 1000;
  long grid_denominator = 6;

  void validate() const {
    if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
    if (max_tries < 1) throw Error(ErrorCode::InvalidArgument, "max_tries must be >= 1");
    if (grid_denominator < 1) {
      throw Error(ErrorCode::InvalidArgument, "grid_denominator must be >= 1");
    }
  }
};

/// Independent random stream for draw `index` under `seed`. Streams depend
/// only on (seed, index), never on evaluation order.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index) : engine_(mix(seed, index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unit-rate exponential.
  double exponential() { return -std::log1p(-uniform()); }

  /// Uniform integer in [lo, hi].
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
    for (;;) {
      const std::uint64_t x = engine_();
      if (span == 0) return x;
      if (x < limit) return lo + x % span;
    }
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    return splitmix(splitmix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  }

  std::mt19937_64 engine_;
};

/// Integer weight resolution of exact samples: exponentials are quantized to
/// multiples of 2^-20 before normalization.
inline constexpr double kRationalSampleScale = 1048576.0;

/// Uniform draw on the simplex (normalized exponentials), sorted.
/// The exact variant normalizes quantized integer weights.
template <LatticeScalar Scalar = double>
Distribution<Scalar> sample_simplex(const SampleConfig& cfg, std::uint64_t index) {
  cfg.validate();
  Stream rng(cfg.seed, index);
  const Index d = cfg.dimension;
  if constexpr (ScalarTraits<Scalar>::is_exact) {
    Vector<Rational> w(d);
    Rational total(0);
    for (;;) {
      total = 0;
      for (Index i = 0; i < d; ++i) {
        w[i] = Rational(std::floor(rng.exponential() * kRationalSampleScale));
        total += w[i];
      }
      if (total > 0) break;
    }
    for (Index i = 0; i < d; ++i) w[i] /= total;
    return make_distribution(w);
  } else {
    Vector<double> w(d);
    for (Index i = 0; i < d; ++i) w[i] = rng.exponential();
    w /= w.sum();
    return make_distribution(w);
  }
}

/// Independent pair of simplex draws for pair index `index`.
template <LatticeScalar Scalar = double>
std::pair<Distribution<Scalar>, Distribution<Scalar>> sample_pair(const SampleConfig& cfg,
                                                                  std::uint64_t index) {
  return {sample_simplex<Scalar>(cfg, 2 * index), sample_simplex<Scalar>(cfg, 2 * index + 1)};
}

/// Applies `count` random T-transforms (lam uniform, i != j uniform) and
/// re-sorts. The result is majorized by the input.
template <LatticeScalar Scalar>
Distribution<Scalar> apply_random_ttransforms(const Distribution<Scalar>& x, Stream& rng,
                                              int count) {
  Vector<Scalar> v = x.values();
  const auto d = static_cast<std::uint64_t>(x.dim());
  if (d < 2) return x;
  for (int t = 0; t < count; ++t) {
    const auto i = static_cast<Index>(rng.integer(0, d - 1));
    auto j = static_cast<Index>(rng.integer(0, d - 2));
    if (j >= i) ++j;
    Scalar lam;
    if constexpr (ScalarTraits<Scalar>::is_exact) {
      lam = Rational(static_cast<long>(rng.integer(0, 1 << 20))) / Rational(1 << 20);
    } else {
      lam = rng.uniform();
    }
    TTransform<Scalar>{lam, i, j}.apply(v);
  }
  detail::sort_descending(v);
  return Distribution<Scalar>::from_sorted_unchecked(std::move(v));
}

/// Common minorizer of p and q: 1..5 random T-transforms applied to the meet.
template <LatticeScalar Scalar>
Distribution<Scalar> sample_minorizer(const Distribution<Scalar>& p, const Distribution<Scalar>& q,
                                      const SampleConfig& cfg, std::uint64_t index) {
  Stream rng(cfg.seed ^ 0x6d696e6f72ULL, index);
  const int count = static_cast<int>(rng.integer(1, 5));
  return apply_random_ttransforms(meet(p, q), rng, count);
}

/// Comparable pair (p, q) with p majorized by q: q uniform on the simplex,
/// p obtained from q by 1..5 random T-transforms.
template <LatticeScalar Scalar = double>
std::pair<Distribution<Scalar>, Distribution<Scalar>> sample_comparable_pair(
    const SampleConfig& cfg, std::uint64_t index) {
  auto q = sample_simplex<Scalar>(cfg, index);
  Stream rng(cfg.seed ^ 0x636f6d70ULL, index);
  const int count = static_cast<int>(rng.integer(1, 5));
  auto p = apply_random_ttransforms(q, rng, count);
  return {std::move(p), std::move(q)};
}

/// Rejection-samples an incomparable pair; attempt t of draw `index` uses
/// pair stream index * max_tries + t.
template <LatticeScalar Scalar = double>
std::pair<Distribution<Scalar>, Distribution<Scalar>> sample_incomparable_pair(
    const SampleConfig& cfg, std::uint64_t index, double tol = kDefaultTolerance) {
  cfg.validate();
  if (cfg.dimension < 3) {
    throw Error(ErrorCode::DimensionTooSmall, "every pair is comparable for d <= 2");
  }
  for (std::uint64_t t = 0; t < cfg.max_tries; ++t) {
    auto pair = sample_pair<Scalar>(cfg, index * cfg.max_tries + t);
    if (compare(pair.first, pair.second, tol) == Comparison::Incomparable) return pair;
  }
  throw Error(ErrorCode::ExhaustedTries, "no incomparable pair within max_tries");
}

/// Number of sorted grid distributions: partitions of n into at most d parts.
std::uint64_t grid_size(Index d, long n);

/// All sorted distributions with entries in (1/n) Z, exact, in
/// reverse-lexicographic order starting from the point mass.
std::vector<Distribution<Rational>> enumerate_grid(const SampleConfig& cfg);

// ----- counterexample search -----

enum class Relation { Supermodular, Subadditive };
enum class Direction { Negative, Positive };

inline const char* to_string(Relation r) {
  return r == Relation::Supermodular ? "supermod" : "subadd";
}
inline const char* to_string(Direction d) {
  return d == Direction::Negative ? "negative" : "positive";
}

/// F(m) + F(j) - F(p) - F(q) for Supermodular, F(p) + F(q) - F(m) for
/// Subadditive, evaluated on the given lattice objects.
double modular_gap(Functional f, Relation rel, Alpha alpha, const Distribution<double>& p,
                   const Distribution<double>& q, const Distribution<double>& m,
                   const Distribution<double>& j);

double modular_gap(Functional f, Relation rel, Alpha alpha, const Distribution<double>& p,
                   const Distribution<double>& q);

struct SearchConfig {
  Functional functional = Functional::Renyi;
  Relation relation = Relation::Supermodular;
  double alpha = 0.5;
  Direction direction = Direction::Negative;
  std::vector<Index> dims{3, 4, 5, 6};
  std::uint64_t budget = 1000000;
  std::uint64_t seed = 0;
  double threshold = 1e-6;
  unsigned threads = 1;
};

struct Witness {
  double alpha = 0.0;
  Index d = 0;
  Direction direction = Direction::Negative;
  std::uint64_t index = 0;
  Distribution<Rational> p;
  Distribution<Rational> q;
  double gap = 0.0;
};

struct SearchResult {
  std::optional<Witness> witness;
  /// Most extreme gap in the requested direction among the samples drawn.
  double extreme_gap = 0.0;
  std::uint64_t samples = 0;
};

/// Scans incomparable exact-rational pairs (dimension cycling through
/// cfg.dims) for a gap beyond -threshold (Negative) or +threshold
/// (Positive). The lowest hit index wins, independent of thread count.
SearchResult search_counterexample(const SearchConfig& cfg);

/// Recomputes a witness gap with the lattice part in exact arithmetic.
double reverify_witness(const Witness& w, Functional f, Relation rel);

}  // namespace majolat

#endif  // MAJOLAT_SAMPLING_HPP
