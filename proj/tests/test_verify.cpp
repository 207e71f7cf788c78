#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "majolat/sampling.hpp"
#include "majolat/verify.hpp"
#include "json.hpp"

using namespace majolat;
using test::dist;
using test::expect_error;
using test::vec;

namespace {

const auto kPairP = dist({0.5, 0.5, 0});
const auto kPairQ = dist({0.6, 0.2, 0.2});

BatchConfig batch(InequalityId id, Index d, std::uint64_t count, std::uint64_t seed,
                  std::vector<double> alphas = {}) {
  BatchConfig cfg;
  cfg.id = id;
  cfg.dimension = d;
  cfg.count = count;
  cfg.seed = seed;
  cfg.alphas = std::move(alphas);
  return cfg;
}

}  // namespace

TEST_CASE("inequality ids") {
  CHECK(parse_inequality_id("Cor3") == InequalityId::Cor3Eta);
  CHECK(parse_inequality_id("Cor3_eta") == InequalityId::Cor3Eta);
  CHECK(parse_inequality_id("Thm1") == InequalityId::Thm1);
  CHECK(std::string(to_string(InequalityId::Cor9RenyiEta)) == "Cor9_renyi_eta");
  expect_error(ErrorCode::InvalidArgument, [] { parse_inequality_id("Cor5"); });
}

TEST_CASE("report invariants") {
  const auto r = make_report(InequalityId::Cor3Eta, 3, std::nullopt, 2.0, 1.5, 0.5,
                             Comparison::Incomparable);
  CHECK(r.rhs == 2.0);
  CHECK(r.gap == 0.0);
  CHECK(r.passed);
  const auto miss = make_report(InequalityId::Cor3Eta, 3, std::nullopt, 2.0, 2.0 + 5e-10, 0.0,
                                Comparison::Incomparable);
  CHECK(miss.passed);
  const auto fail = make_report(InequalityId::Cor3Eta, 3, std::nullopt, 2.0, 2.0 + 2e-9, 0.0,
                                Comparison::Incomparable);
  CHECK_FALSE(fail.passed);
}

TEST_CASE("infinite correction marks the refined check not applicable") {
  const auto r = make_report(InequalityId::Cor9RenyiEta, 3, 0.5, 2.0, 1.0, kInfinity,
                             Comparison::Incomparable);
  CHECK_FALSE(r.refined_applicable);
  CHECK(r.correction == kInfinity);
  CHECK(r.gap == 1.0);
  CHECK(r.passed);
}

TEST_CASE("precursor reports") {
  for (auto id : {InequalityId::Thm1, InequalityId::Thm2, InequalityId::Lem2}) {
    const auto r = check_precursor(id, kPairP, kPairQ);
    CHECK(r.passed);
    CHECK(r.gap >= -1e-12);
    CHECK(r.comparability == Comparison::Incomparable);
  }
  expect_error(ErrorCode::InvalidArgument,
               [] { check_precursor(InequalityId::Cor3Eta, kPairP, kPairQ); });
}

TEST_CASE("sum-concave supermodularity") {
  // comparable pairs give equality
  const auto p = dist({0.4, 0.35, 0.25});
  const auto q = dist({0.7, 0.2, 0.1});
  CHECK(std::abs(check_sum_concave_supermod(Functional::Shannon, p, q).gap) < 1e-12);
  CHECK(std::abs(check_sum_concave_supermod(Functional::Tsallis, p, q, Alpha(2)).gap) < 1e-12);
  expect_error(ErrorCode::UnknownFunctional, [&] {
    check_sum_concave_supermod(Functional::Renyi, p, q, Alpha(2));
  });
  // normpow flips orientation above alpha = 1
  const auto lo = check_sum_concave_supermod(Functional::AlphaNormPow, kPairP, kPairQ, Alpha(0.5));
  const auto hi = check_sum_concave_supermod(Functional::AlphaNormPow, kPairP, kPairQ, Alpha(2));
  CHECK(lo.passed);
  CHECK(hi.passed);
  CHECK_NEAR(hi.lhs, 0.5 + 0.44, 1e-12);
  CHECK_NEAR(hi.rhs, 0.38 + 0.52, 1e-12);
}

TEST_CASE("sum-concave subadditivity") {
  const auto s = check_sum_concave_subadd(Functional::Shannon, kPairP, kPairQ);
  CHECK_NEAR(s.gap, 0.885475297, 1e-9);
  // F(e) = 1 for the alpha-norm power below one
  const auto n = check_sum_concave_subadd(Functional::AlphaNormPow, kPairP, kPairQ, Alpha(0.5));
  const double fp = 2 * std::sqrt(0.5);
  const double fq = std::sqrt(0.6) + 2 * std::sqrt(0.2);
  const double fm = std::sqrt(0.5) + std::sqrt(0.3) + std::sqrt(0.2);
  CHECK_NEAR(n.lhs, fp + fq - 1.0, 1e-12);
  CHECK_NEAR(n.rhs, fm, 1e-12);
  CHECK(n.passed);
  const auto flip = check_sum_concave_subadd(Functional::AlphaNormPow, kPairP, kPairQ, Alpha(2));
  CHECK_NEAR(flip.lhs, 0.38, 1e-12);
  CHECK_NEAR(flip.rhs, 0.5 + 0.44 - 1.0, 1e-12);
  CHECK(flip.passed);
}

TEST_CASE("Shannon refinements on degenerate pairs") {
  const auto same = check_shannon_supermod_refined(kPairQ, kPairQ);
  CHECK(same.correction >= 0.0);
  CHECK(same.correction < 1e-15);
  CHECK(std::abs(same.gap) < 1e-12);

  const auto p = dist({0.4, 0.35, 0.25});
  const auto q = dist({0.7, 0.2, 0.1});
  CHECK(check_shannon_supermod_refined(p, q).correction < 1e-12);

  const auto e = dist({1, 0, 0});
  const auto pe = check_shannon_subadd_refined(p, e);
  CHECK(pe.correction < 1e-12);
  CHECK(std::abs(pe.gap) < 1e-12);

  // self pair: eta stays below H(p) and the bound holds
  const auto pp = check_shannon_subadd_refined(kPairQ, kPairQ);
  CHECK(pp.correction <= shannon(kPairQ) + 1e-12);
  CHECK_NEAR(pp.correction, 0.736965594, 1e-9);
  CHECK(pp.passed);
}

TEST_CASE("Tsallis refinements") {
  CHECK(check_tsallis_supermod_refined(kPairQ, kPairQ, Alpha(2)).correction == 0.0);
  // alpha = 1 is Cor3 in nats
  SampleConfig cfg{5, 41, 1, 1};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto [p, q] = sample_pair<double>(cfg, i);
    const auto t = check_tsallis_supermod_refined(p, q, Alpha(1));
    const auto s = check_shannon_supermod_refined(p, q);
    REQUIRE(test::near(t.correction, s.correction * std::numbers::ln2, 1e-9));
    REQUIRE(test::near(t.gap, s.gap * std::numbers::ln2, 1e-9));
  }
  // alpha = 0 counts supports
  const auto z = check_tsallis_subadd_refined(kPairP, kPairQ, Alpha(0));
  CHECK_NEAR(z.lhs, 1.0 + 2.0, 1e-12);
  CHECK_NEAR(z.correction, 1.0, 1e-12);
  CHECK_NEAR(z.rhs, 2.0 + 1.0, 1e-12);
  CHECK(z.passed);
  const auto e = check_tsallis_subadd_refined(kPairQ, dist({1, 0, 0}), Alpha(2));
  CHECK(e.correction < 1e-12);
  CHECK(std::abs(e.gap) < 1e-12);
}

TEST_CASE("Renyi checks") {
  expect_error(ErrorCode::AlphaOutOfRange, [] { check_renyi_supermod(kPairP, kPairQ, Alpha(1)); });
  expect_error(ErrorCode::AlphaOutOfRange, [] { check_log_submod(kPairP, kPairQ, Alpha(0.5)); });
  const auto p = dist({0.4, 0.35, 0.25});
  const auto q = dist({0.7, 0.2, 0.1});
  CHECK(std::abs(check_renyi_supermod(p, q, Alpha(2)).gap) < 1e-12);
  CHECK(std::abs(check_renyi_supermod(q, q, Alpha(3)).gap) < 1e-12);

  const auto e = check_renyi_subadd_refined(kPairQ, dist({1, 0, 0}), Alpha(2));
  CHECK(e.correction < 1e-12);
  SampleConfig cfg{4, 42, 1, 1};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto [a, b] = sample_pair<double>(cfg, i);
    const auto r = check_renyi_subadd_refined(a, b, Alpha(1));
    REQUIRE(test::near(r.correction, shannon_subadd_terms(a, b).tensor_term, 1e-9));
  }
}

TEST_CASE("distance triangle report") {
  const auto r = dist({0.5, 0.3, 0.2});
  const auto t = check_distance_triangle(kPairP, kPairQ, r, Alpha(1));
  CHECK_NEAR(t.rhs, lattice_distance(kPairP, kPairQ, Alpha(1)), 1e-12);
  CHECK(t.passed);
}

TEST_CASE("batch examples") {
  const auto thm = batch_verify(batch(InequalityId::Thm1, 5, 1000, 7));
  CHECK(thm.summary.passed == 1000);
  CHECK(thm.summary.pass_rate == 1.0);
  const auto cor8 = batch_verify(batch(InequalityId::Cor8RenyiSupermod, 4, 1000, 7, {3.0}));
  CHECK(cor8.summary.passed == 1000);
  expect_error(ErrorCode::InvalidArgument,
               [] { batch_verify(batch(InequalityId::Thm1, 5, 0, 7)); });
  expect_error(ErrorCode::AlphaOutOfRange,
               [] { batch_verify(batch(InequalityId::Cor8RenyiSupermod, 4, 10, 7, {0.5})); });
  auto exact = batch(InequalityId::Cor3Eta, 4, 10, 7);
  exact.backend.mode = BackendMode::ExactRational;
  expect_error(ErrorCode::UnsupportedBackend, [&] { batch_verify(exact); });
}

TEST_CASE("exact precursor batch") {
  auto cfg = batch(InequalityId::Lem2, 4, 300, 3);
  cfg.backend.mode = BackendMode::ExactRational;
  const auto res = batch_verify(cfg);
  CHECK(res.summary.failed == 0);
  CHECK(res.summary.backend == BackendMode::ExactRational);
}

TEST_CASE("effective alpha grids") {
  CHECK(effective_alphas(batch(InequalityId::Cor3Eta, 3, 1, 0, {2.0})) ==
        std::vector<std::optional<double>>{std::nullopt});
  CHECK(effective_alphas(batch(InequalityId::Cor6Tau, 3, 1, 0)) ==
        std::vector<std::optional<double>>{2.0});
  CHECK(effective_alphas(batch(InequalityId::DistanceTriangle, 3, 1, 0)) ==
        std::vector<std::optional<double>>{1.0});
  auto cor1 = batch(InequalityId::Cor1Supermod, 3, 1, 0, {0.5, 3.0});
  CHECK(effective_alphas(cor1).size() == 1);
  cor1.functional = Functional::Tsallis;
  CHECK(effective_alphas(cor1) == std::vector<std::optional<double>>{0.5, 3.0});
}

TEST_CASE("batch output is independent of the thread count") {
  auto cfg = batch(InequalityId::Cor7Tau, 6, 1500, 42, {0.5, 2.0});
  std::ostringstream one;
  std::ostringstream three;
  write_csv(one, batch_verify(cfg).reports);
  cfg.threads = 3;
  const auto res = batch_verify(cfg);
  write_csv(three, res.reports);
  CHECK(one.str() == three.str());
  CHECK(res.reports.size() == 3000);
}

TEST_CASE("CSV and summary serialization") {
  const auto r = check_shannon_supermod_refined(kPairP, kPairQ);
  const std::string row = to_csv_row(r);
  CHECK(row.rfind("Cor3_eta,3,,", 0) == 0);
  CHECK(row.find(",Incomparable,true") != std::string::npos);
  std::ostringstream csv;
  write_csv(csv, {r});
  CHECK(csv.str() == std::string(kCsvHeader) + "\n" + row + "\n");

  const auto res = batch_verify(batch(InequalityId::Cor6Tau, 4, 50, 5, {2.0}));
  const auto j = nlohmann::json::parse(summary_to_json(res.summary));
  CHECK(j["inequality_id"] == "Cor6_tau");
  CHECK(j["count"] == 50);
  CHECK(j["passed"] == 50);
  CHECK(j["argmin_alpha"] == 2.0);
  CHECK(j["argmin_p"].size() == 4);
  const auto [p, q] = sample_pair<double>(SampleConfig{4, 5, 1, 1}, j["argmin_index"]);
  CHECK(j["argmin_p"][0] == p[0]);
  CHECK(j["min_gap"] == res.summary.min_gap);
}

TEST_CASE("property: strictness of the corrections on incomparable pairs") {
  // positive on every incomparable pair; the size tracks the squared crossing
  // margin, so a fixed absolute floor is only logged
  std::uint64_t below_floor = 0;
  for (Index d = 3; d <= 8; ++d) {
    SampleConfig cfg{d, 43, 1000, 1};
    for (std::uint64_t i = 0; i < 150; ++i) {
      const auto [p, q] = sample_incomparable_pair<double>(cfg, i);
      const auto c3 = check_shannon_supermod_refined(p, q);
      REQUIRE(c3.correction > 0.0);
      REQUIRE(c3.passed);
      if (c3.correction <= 1e-9) ++below_floor;
      for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const Alpha al(a);
        const auto c6 = check_tsallis_supermod_refined(p, q, al);
        const auto c7 = check_tsallis_subadd_refined(p, q, al);
        const auto c9 = check_renyi_subadd_refined(p, q, al);
        REQUIRE(c6.correction > 0.0);
        REQUIRE(c7.correction > 1e-9);
        REQUIRE(c9.correction > 1e-9);
        REQUIRE(c6.passed);
        REQUIRE(c7.passed);
        if (a >= 1.0) REQUIRE(c9.passed);
        if (c6.correction <= 1e-9) ++below_floor;
      }
    }
  }
  MESSAGE(below_floor << " Cor3/Cor6 corrections at or below 1e-9");
}

TEST_CASE("exact strictness: the sorted concatenations differ for incomparable pairs") {
  SampleConfig cfg{5, 46, 1000, 1};
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto [p, q] = sample_incomparable_pair<Rational>(cfg, i);
    const auto [m, j] = std::pair{meet(p, q), join(p, q)};
    REQUIRE(direct_sum(p, q) != direct_sum(m, j));
    REQUIRE(direct_sum(m, point_mass<Rational>(5)) != direct_sum(p, q));
  }
}

TEST_CASE("property: universal inequalities pass on sampled batches") {
  struct Case {
    InequalityId id;
    Functional f;
    std::vector<double> alphas;
  };
  const std::vector<Case> cases{
      {InequalityId::Thm1, Functional::Shannon, {}},
      {InequalityId::Thm2, Functional::Shannon, {}},
      {InequalityId::Lem2, Functional::Shannon, {}},
      {InequalityId::Cor1Supermod, Functional::Shannon, {}},
      {InequalityId::Cor1Supermod, Functional::Tsallis, {0.0, 0.5, 2.0, 3.0}},
      {InequalityId::Cor1Supermod, Functional::AlphaNormPow, {0.5, 2.0}},
      {InequalityId::Cor2Subadd, Functional::Shannon, {}},
      {InequalityId::Cor2Subadd, Functional::Tsallis, {0.5, 2.0}},
      {InequalityId::Cor2Subadd, Functional::AlphaNormPow, {0.5, 2.0}},
      {InequalityId::Cor3Eta, Functional::Shannon, {}},
      {InequalityId::Cor4Eta, Functional::Shannon, {}},
      {InequalityId::Cor6Tau, Functional::Shannon, {0.0, 0.5, 1.0, 2.0, 3.0}},
      {InequalityId::Cor7Tau, Functional::Shannon, {0.0, 0.5, 1.0, 2.0, 3.0}},
      {InequalityId::Cor8RenyiSupermod, Functional::Shannon, {1.5, 2.0, 3.0}},
      {InequalityId::Cor9RenyiEta, Functional::Shannon, {1.0, 1.5, 2.0, 3.0}},
      {InequalityId::LogSubmod, Functional::Shannon, {1.5, 2.0, 3.0}},
      {InequalityId::DistanceTriangle, Functional::Shannon, {1.0, 1.5, 2.0}},
  };
  for (const auto& c : cases) {
    for (Index d : {2, 3, 5, 8}) {
      auto cfg = batch(c.id, d, 300, 44, c.alphas);
      cfg.functional = c.f;
      const auto res = batch_verify(cfg);
      INFO(to_string(c.id) << " " << to_string(c.f) << " d=" << d);
      REQUIRE(res.summary.failed == 0);
    }
  }
}

TEST_CASE("Cor9 below alpha = 1 fails on sampled pairs") {
  for (double a : {0.0, 0.5, 0.9}) {
    const auto res = batch_verify(batch(InequalityId::Cor9RenyiEta, 4, 2000, 45, {a}));
    MESSAGE("alpha = " << a << ": " << res.summary.failed << " of 2000 fail, min gap "
                       << res.summary.min_gap);
  }
  const auto res = batch_verify(batch(InequalityId::Cor9RenyiEta, 6, 200, 45, {0.5}));
  CHECK(res.summary.failed > 0);
}
