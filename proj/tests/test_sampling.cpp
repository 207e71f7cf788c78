#include <set>

#include "helpers.hpp"
#include "majolat/io.hpp"
#include "majolat/sampling.hpp"

using namespace majolat;
using test::expect_error;

namespace {

SearchConfig renyi_search(double alpha, Direction dir, std::vector<Index> dims,
                          std::uint64_t budget, std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.alpha = alpha;
  cfg.direction = dir;
  cfg.dims = std::move(dims);
  cfg.budget = budget;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("simplex draws") {
  CHECK(sample_simplex<double>(SampleConfig{1, 5, 1, 1}, 0).values() == test::vec({1.0}));
  CHECK(sample_simplex<Rational>(SampleConfig{1, 5, 1, 1}, 3).values()[0] == Rational(1));
  const SampleConfig cfg{6, 9, 1, 1};
  CHECK(sample_simplex<double>(cfg, 17) == sample_simplex<double>(cfg, 17));
  CHECK(sample_simplex<Rational>(cfg, 17) == sample_simplex<Rational>(cfg, 17));
  CHECK_FALSE(sample_simplex<double>(cfg, 17) == sample_simplex<double>(cfg, 18));
  CHECK_FALSE(sample_simplex<double>(cfg, 17) ==
              sample_simplex<double>(SampleConfig{6, 10, 1, 1}, 17));
  expect_error(ErrorCode::InvalidArgument,
               [] { sample_simplex<double>(SampleConfig{0, 1, 1, 1}, 0); });
}

TEST_CASE("exact draws sit on the 2^-20 weight lattice and close to the float draw") {
  const SampleConfig cfg{5, 21, 1, 1};
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto exact = sample_simplex<Rational>(cfg, i);
    const auto approx = sample_simplex<double>(cfg, i);
    REQUIRE(exact.total() == Rational(1));
    REQUIRE(test::all_near(to_double(exact.values()), approx.values(), 1e-5));
  }
}

TEST_CASE("property: sorted uniform simplex has E[max] = 11/18 in d = 3") {
  const SampleConfig cfg{3, 22, 1, 1};
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) sum += sample_simplex<double>(cfg, i)[0];
  CHECK_NEAR(sum / kDraws, 11.0 / 18.0, 0.005);
}

TEST_CASE("incomparable pairs") {
  expect_error(ErrorCode::DimensionTooSmall,
               [] { sample_incomparable_pair<double>(SampleConfig{2, 1, 1000, 1}, 0); });
  const SampleConfig cfg{3, 23, 1000, 1};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto [p, q] = sample_incomparable_pair<Rational>(cfg, i);
    REQUIRE(compare(p, q) == Comparison::Incomparable);
    const auto m = meet(p, q);
    REQUIRE_FALSE(m == p);
    REQUIRE_FALSE(m == q);
  }
  // with one try, some draws must come up comparable
  std::uint64_t exhausted = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    try {
      (void)sample_incomparable_pair<double>(SampleConfig{3, 24, 1, 1}, i);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::ExhaustedTries);
      ++exhausted;
    }
  }
  CHECK(exhausted > 0);
}

TEST_CASE("property: comparable pairs and minorizers") {
  for (Index d = 2; d <= 8; ++d) {
    const SampleConfig cfg{d, 25, 1, 1};
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto [lo, hi] = sample_comparable_pair<Rational>(cfg, i);
      REQUIRE(is_majorized(compare(lo, hi)));
      const auto [p, q] = sample_pair<Rational>(cfg, i);
      const auto r = sample_minorizer(p, q, cfg, i);
      REQUIRE(r.total() == Rational(1));
      REQUIRE(is_majorized(compare(r, p)));
      REQUIRE(is_majorized(compare(r, q)));
      REQUIRE(is_majorized(compare(r, meet(p, q))));
    }
  }
}

TEST_CASE("grid enumeration") {
  CHECK(grid_size(2, 2) == 2);
  CHECK(grid_size(2, 4) == 3);
  CHECK(grid_size(3, 6) == 7);
  CHECK(grid_size(1, 9) == 1);
  const auto g = enumerate_grid(SampleConfig{2, 0, 1, 4});
  REQUIRE(g.size() == 3);
  CHECK(g[0].values() == test::qvec({"1", "0"}));
  CHECK(g[1].values() == test::qvec({"3/4", "1/4"}));
  CHECK(g[2].values() == test::qvec({"1/2", "1/2"}));
  for (Index d = 1; d <= 4; ++d) {
    for (long n = 1; n <= 9; ++n) {
      const auto grid = enumerate_grid(SampleConfig{d, 0, 1, n});
      REQUIRE(grid.size() == grid_size(d, n));
      std::set<std::string> seen;
      for (const auto& x : grid) {
        REQUIRE(x.dim() == d);
        REQUIRE(x.total() == Rational(1));
        seen.insert(vector_to_json(x.values()));
      }
      REQUIRE(seen.size() == grid.size());
    }
  }
  expect_error(ErrorCode::TooLarge, [] { enumerate_grid(SampleConfig{20, 0, 1, 100}); });
}

TEST_CASE("modular gap") {
  const auto p = test::dist({0.5, 0.5, 0});
  const auto q = test::dist({0.6, 0.2, 0.2});
  CHECK_NEAR(modular_gap(Functional::Renyi, Relation::Supermodular, Alpha(2), p, q),
             2.339345148 - 2.184424571, 1e-9);
  CHECK_NEAR(modular_gap(Functional::Shannon, Relation::Subadditive, Alpha(1), p, q),
             0.885475297, 1e-9);
}

TEST_CASE("search errors") {
  expect_error(ErrorCode::DimensionTooSmall,
               [] { search_counterexample(renyi_search(0.5, Direction::Negative, {2}, 10)); });
  expect_error(ErrorCode::InvalidArgument,
               [] { search_counterexample(renyi_search(0.5, Direction::Negative, {}, 10)); });
  expect_error(ErrorCode::InvalidArgument,
               [] { search_counterexample(renyi_search(0.5, Direction::Negative, {3}, 0)); });
}

TEST_CASE("Renyi alpha = 0.5 has gaps of both signs in d = 3") {
  for (auto dir : {Direction::Negative, Direction::Positive}) {
    const auto res = search_counterexample(renyi_search(0.5, dir, {3}, 20000));
    REQUIRE(res.witness);
    const auto& w = *res.witness;
    CHECK(w.d == 3);
    CHECK(compare(w.p, w.q) == Comparison::Incomparable);
    const double gap = reverify_witness(w, Functional::Renyi, Relation::Supermodular);
    CHECK(gap == w.gap);
    if (dir == Direction::Negative) {
      CHECK(gap < -1e-6);
    } else {
      CHECK(gap > 1e-6);
    }
  }
}

TEST_CASE("search result does not depend on the thread count") {
  auto cfg = renyi_search(0.7, Direction::Negative, {3, 4, 5, 6}, 30000, 9);
  const auto one = search_counterexample(cfg);
  cfg.threads = 3;
  const auto three = search_counterexample(cfg);
  REQUIRE(one.witness);
  REQUIRE(three.witness);
  CHECK(one.witness->index == three.witness->index);
  CHECK(one.witness->p == three.witness->p);
  CHECK(one.samples == three.samples);
  CHECK(one.extreme_gap == three.extreme_gap);
}

TEST_CASE("no Renyi supermodularity witness above alpha = 1 on a short budget") {
  const auto res = search_counterexample(renyi_search(2.0, Direction::Negative, {3, 4}, 5000));
  CHECK_FALSE(res.witness);
  CHECK(res.samples == 5000);
  CHECK(res.extreme_gap >= -1e-6);
}

TEST_CASE("pinned counterexample fixtures re-verify and reproduce") {
  const auto lines = read_jsonl(std::string(MAJOLAT_FIXTURE_DIR) + "/renyi_counterexamples.jsonl");
  REQUIRE(lines.size() == 24);
  for (const auto& line : lines) {
    const Witness w = witness_from_jsonl(line);
    INFO(line);
    const double gap = reverify_witness(w, Functional::Renyi, Relation::Supermodular);
    CHECK(gap == doctest::Approx(w.gap).epsilon(1e-12));
    if (w.direction == Direction::Negative) {
      CHECK(gap < -1e-6);
    } else {
      CHECK(gap > 1e-6);
    }
    // lowest hit wins, so a budget ending at the pinned index is enough
    const auto res = search_counterexample(renyi_search(w.alpha, w.direction, {w.d}, w.index + 1));
    REQUIRE(res.witness);
    CHECK(res.witness->index == w.index);
    CHECK(res.witness->p == w.p);
    CHECK(res.witness->q == w.q);
  }
}

TEST_CASE("no Renyi alpha = 2 witness in a million samples" * doctest::skip()) {
  const auto res =
      search_counterexample(renyi_search(2.0, Direction::Negative, {3, 4, 5, 6}, 1000000));
  CHECK_FALSE(res.witness);
  CHECK(res.samples == 1000000);
  MESSAGE("extreme gap " << res.extreme_gap);
}
