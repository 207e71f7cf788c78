#include "majolat/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace majolat {

namespace {

constexpr std::uint64_t kGridCap = 100000;

void partitions(long remaining, long max_part, Index slots, std::vector<long>& current,
                std::vector<std::vector<long>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  if (slots == 0) return;
  for (long part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions(remaining - part, part, slots - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::uint64_t grid_size(Index d, long n) {
  // count[k][m] = partitions of m into parts of size <= k; parts-of-size-at-most-d
  // is conjugate to at-most-d-parts.
  std::vector<std::uint64_t> count(static_cast<std::size_t>(n) + 1, 0);
  count[0] = 1;
  for (long k = 1; k <= static_cast<long>(d); ++k) {
    for (long m = k; m <= n; ++m) {
      count[m] = std::min<std::uint64_t>(count[m] + count[m - k],
                                         std::numeric_limits<std::uint64_t>::max() / 2);
    }
  }
  return count[n];
}

std::vector<Distribution<Rational>> enumerate_grid(const SampleConfig& cfg) {
  cfg.validate();
  if (grid_size(cfg.dimension, cfg.grid_denominator) > kGridCap) {
    throw Error(ErrorCode::TooLarge, "grid exceeds 1e5 distributions");
  }
  std::vector<std::vector<long>> parts;
  std::vector<long> current;
  partitions(cfg.grid_denominator, cfg.grid_denominator, cfg.dimension, current, parts);

  std::vector<Distribution<Rational>> out;
  out.reserve(parts.size());
  const Rational n(cfg.grid_denominator);
  for (const auto& part : parts) {
    Vector<Rational> v = Vector<Rational>::Zero(cfg.dimension);
    for (std::size_t i = 0; i < part.size(); ++i) v[static_cast<Index>(i)] = Rational(part[i]) / n;
    out.push_back(make_distribution(v));
  }
  return out;
}

double modular_gap(Functional f, Relation rel, Alpha alpha, const Distribution<double>& p,
                   const Distribution<double>& q, const Distribution<double>& m,
                   const Distribution<double>& j) {
  const double fp = evaluate(f, p.values(), alpha);
  const double fq = evaluate(f, q.values(), alpha);
  const double fm = evaluate(f, m.values(), alpha);
  if (rel == Relation::Subadditive) return fp + fq - fm;
  return fm + evaluate(f, j.values(), alpha) - fp - fq;
}

double modular_gap(Functional f, Relation rel, Alpha alpha, const Distribution<double>& p,
                   const Distribution<double>& q) {
  return modular_gap(f, rel, alpha, p, q, meet(p, q), join(p, q));
}

namespace {

struct Probe {
  bool hit = false;
  double gap = 0.0;
};

// Samples are exact; the gap uses the double view of the exact lattice objects.
double exact_gap(Functional f, Relation rel, Alpha alpha, const Distribution<Rational>& p,
                 const Distribution<Rational>& q) {
  return modular_gap(f, rel, alpha, to_double(p), to_double(q), to_double(meet(p, q)),
                     to_double(join(p, q)));
}

}  // namespace

SearchResult search_counterexample(const SearchConfig& cfg) {
  if (cfg.dims.empty()) throw Error(ErrorCode::InvalidArgument, "no dimensions to search");
  for (Index d : cfg.dims) {
    if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "search dimensions must be >= 3");
  }
  if (cfg.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  const Alpha alpha(cfg.alpha);
  const double sign = cfg.direction == Direction::Negative ? -1.0 : 1.0;
  const unsigned threads = std::max(1u, cfg.threads);

  auto draw = [&](std::uint64_t index) {
    SampleConfig sc;
    sc.dimension = cfg.dims[index % cfg.dims.size()];
    sc.seed = cfg.seed;
    sc.max_tries = 64;
    return sample_incomparable_pair<Rational>(sc, index);
  };

  SearchResult result;
  result.extreme_gap = 0.0;
  constexpr std::uint64_t kChunk = 4096;
  std::vector<Probe> probes;
  for (std::uint64_t start = 0; start < cfg.budget; start += kChunk) {
    const std::uint64_t end = std::min(cfg.budget, start + kChunk);
    probes.assign(end - start, Probe{});
    std::atomic<std::uint64_t> next{start};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::uint64_t i = next++; i < end; i = next++) {
        Probe& probe = probes[i - start];
        try {
          const auto [p, q] = draw(i);
          probe.gap = exact_gap(cfg.functional, cfg.relation, alpha, p, q);
          probe.hit = sign * probe.gap > cfg.threshold;
        } catch (const Error& e) {
          // a draw without an incomparable pair is skipped
          if (e.code() == ErrorCode::ExhaustedTries) continue;
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::uint64_t i = start; i < end; ++i) {
      const Probe& probe = probes[i - start];
      ++result.samples;
      if (sign * probe.gap > sign * result.extreme_gap) result.extreme_gap = probe.gap;
      if (probe.hit) {
        auto [p, q] = draw(i);
        const Index d = p.dim();
        result.witness = Witness{cfg.alpha, d, cfg.direction, i, std::move(p), std::move(q),
                                 probe.gap};
        return result;
      }
    }
  }
  return result;
}

double reverify_witness(const Witness& w, Functional f, Relation rel) {
  if (compare(w.p, w.q) != Comparison::Incomparable) {
    throw Error(ErrorCode::InvalidArgument, "witness pair is not incomparable");
  }
  return exact_gap(f, rel, Alpha(w.alpha), w.p, w.q);
}

}  // namespace majolat
