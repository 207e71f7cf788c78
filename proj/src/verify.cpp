#include "majolat/verify.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "majolat/io.hpp"
#include "majolat/sampling.hpp"

namespace majolat {

namespace {

struct IdName {
  InequalityId id;
  const char* name;
  const char* short_name;
};

constexpr IdName kIdNames[] = {
    {InequalityId::Thm1, "Thm1", "Thm1"},
    {InequalityId::Thm2, "Thm2", "Thm2"},
    {InequalityId::Lem2, "Lem2", "Lem2"},
    {InequalityId::Cor1Supermod, "Cor1_supermod", "Cor1"},
    {InequalityId::Cor2Subadd, "Cor2_subadd", "Cor2"},
    {InequalityId::Cor3Eta, "Cor3_eta", "Cor3"},
    {InequalityId::Cor4Eta, "Cor4_eta", "Cor4"},
    {InequalityId::Cor6Tau, "Cor6_tau", "Cor6"},
    {InequalityId::Cor7Tau, "Cor7_tau", "Cor7"},
    {InequalityId::Cor8RenyiSupermod, "Cor8_renyi_supermod", "Cor8"},
    {InequalityId::Cor9RenyiEta, "Cor9_renyi_eta", "Cor9"},
    {InequalityId::LogSubmod, "LogSubmod", "LogSubmod"},
    {InequalityId::DistanceTriangle, "DistanceTriangle", "DistanceTriangle"},
};

struct Lattice {
  Distribution<double> m;
  Distribution<double> j;
};

Lattice lattice_of(const Distribution<double>& p, const Distribution<double>& q) {
  return {meet(p, q), join(p, q)};
}

double pow2(double alpha) { return std::exp2(alpha); }

// normpow is sum-convex above alpha = 1, every other supported functional is
// sum-concave.
bool is_sum_convex(Functional f, std::optional<Alpha> alpha) {
  return f == Functional::AlphaNormPow && alpha && alpha->value() > 1.0 && !alpha->is_one();
}

Alpha require_alpha(Functional f, std::optional<Alpha> alpha) {
  if (f == Functional::Shannon) return Alpha(1.0);
  if (!alpha) throw Error(ErrorCode::AlphaOutOfRange, std::string(to_string(f)) + " needs alpha");
  return *alpha;
}

void require_sum_form(Functional f) {
  if (f == Functional::Renyi) {
    throw Error(ErrorCode::UnknownFunctional, "renyi is not a sum-concave functional");
  }
}

void require_alpha_above_one(Alpha alpha) {
  if (!(alpha.value() > 1.0) || alpha.is_one()) {
    throw Error(ErrorCode::AlphaOutOfRange, "Renyi supermodularity needs alpha > 1");
  }
}

}  // namespace

const char* to_string(InequalityId id) {
  for (const auto& e : kIdNames) {
    if (e.id == id) return e.name;
  }
  return "?";
}

InequalityId parse_inequality_id(const std::string& name) {
  for (const auto& e : kIdNames) {
    if (name == e.name || name == e.short_name) return e.id;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown inequality id '" + name + "'");
}

InequalityReport make_report(InequalityId id, Index d, std::optional<double> alpha, double lhs,
                             double rhs_base, double correction, Comparison comparability,
                             double tol) {
  InequalityReport r;
  r.id = id;
  r.d = d;
  r.alpha = alpha;
  r.lhs = lhs;
  // divergences of nearly equal vectors can round to tiny negatives
  r.correction = std::max(correction, 0.0);
  r.comparability = comparability;
  r.refined_applicable = !std::isinf(correction);
  r.rhs = r.refined_applicable ? rhs_base + r.correction : rhs_base;
  r.gap = r.lhs - r.rhs;
  r.passed = r.gap >= -tol;
  return r;
}

InequalityReport check_sum_concave_supermod(Functional f, const Distribution<double>& p,
                                            const Distribution<double>& q,
                                            std::optional<Alpha> alpha, double tol) {
  require_sum_form(f);
  const Alpha a = require_alpha(f, alpha);
  const auto [m, j] = lattice_of(p, q);
  const double lattice_side = evaluate(f, m.values(), a) + evaluate(f, j.values(), a);
  const double pair_side = evaluate(f, p.values(), a) + evaluate(f, q.values(), a);
  const bool convex = is_sum_convex(f, alpha);
  std::optional<double> alpha_out;
  if (f != Functional::Shannon) alpha_out = a.value();
  return make_report(InequalityId::Cor1Supermod, m.dim(), alpha_out,
                     convex ? pair_side : lattice_side, convex ? lattice_side : pair_side, 0.0,
                     compare(p, q, tol), tol);
}

InequalityReport check_sum_concave_subadd(Functional f, const Distribution<double>& p,
                                          const Distribution<double>& q,
                                          std::optional<Alpha> alpha, double tol) {
  require_sum_form(f);
  const Alpha a = require_alpha(f, alpha);
  const auto m = meet(p, q);
  const auto e = point_mass<double>(m.dim());
  const double bound =
      evaluate(f, p.values(), a) + evaluate(f, q.values(), a) - evaluate(f, e.values(), a);
  const double fm = evaluate(f, m.values(), a);
  const bool convex = is_sum_convex(f, alpha);
  std::optional<double> alpha_out;
  if (f != Functional::Shannon) alpha_out = a.value();
  return make_report(InequalityId::Cor2Subadd, m.dim(), alpha_out, convex ? fm : bound,
                     convex ? bound : fm, 0.0, compare(p, q, tol), tol);
}

InequalityReport check_shannon_supermod_refined(const Distribution<double>& p,
                                                const Distribution<double>& q, double tol) {
  const auto [m, j] = lattice_of(p, q);
  const double eta = 2.0 * kl(halve(direct_sum(p, q)), halve(direct_sum(m, j)));
  return make_report(InequalityId::Cor3Eta, m.dim(), std::nullopt, shannon(m) + shannon(j),
                     shannon(p) + shannon(q), eta, compare(p, q, tol), tol);
}

ShannonSubaddTerms shannon_subadd_terms(const Distribution<double>& p,
                                        const Distribution<double>& q) {
  const auto m = meet(p, q);
  const auto t = tensor(p, q);
  const auto e = point_mass<double>(m.dim());
  return {kl(pad(m, t.dim()), t), 2.0 * kl(halve(direct_sum(m, e)), halve(direct_sum(p, q)))};
}

InequalityReport check_shannon_subadd_refined(const Distribution<double>& p,
                                              const Distribution<double>& q, double tol) {
  const auto m = meet(p, q);
  const auto terms = shannon_subadd_terms(p, q);
  const double eta = std::max(terms.tensor_term, terms.direct_sum_term);
  return make_report(InequalityId::Cor4Eta, m.dim(), std::nullopt, shannon(p) + shannon(q),
                     shannon(m), eta, compare(p, q, tol), tol);
}

InequalityReport check_tsallis_supermod_refined(const Distribution<double>& p,
                                                const Distribution<double>& q, Alpha alpha,
                                                double tol) {
  const auto [m, j] = lattice_of(p, q);
  const double tau =
      pow2(alpha.value()) * w_phi(halve(direct_sum(p, q)), halve(direct_sum(m, j)), alpha);
  return make_report(InequalityId::Cor6Tau, m.dim(), alpha.value(),
                     tsallis(m, alpha) + tsallis(j, alpha), tsallis(p, alpha) + tsallis(q, alpha),
                     tau, compare(p, q, tol), tol);
}

InequalityReport check_tsallis_subadd_refined(const Distribution<double>& p,
                                              const Distribution<double>& q, Alpha alpha,
                                              double tol) {
  const auto m = meet(p, q);
  const auto e = point_mass<double>(m.dim());
  const double tau =
      pow2(alpha.value()) * w_phi(halve(direct_sum(m, e)), halve(direct_sum(p, q)), alpha);
  return make_report(InequalityId::Cor7Tau, m.dim(), alpha.value(),
                     tsallis(p, alpha) + tsallis(q, alpha), tsallis(m, alpha), tau,
                     compare(p, q, tol), tol);
}

InequalityReport check_log_submod(const Distribution<double>& p, const Distribution<double>& q,
                                  Alpha alpha, double tol) {
  require_alpha_above_one(alpha);
  const auto [m, j] = lattice_of(p, q);
  const double pair_product = alpha_norm_pow(p.values(), alpha) * alpha_norm_pow(q.values(), alpha);
  const double lattice_product =
      alpha_norm_pow(m.values(), alpha) * alpha_norm_pow(j.values(), alpha);
  // H-gap >= -tol  <=>  pair_product >= lattice_product * 2^(-tol (alpha - 1))
  const double scaled = lattice_product * std::exp2(-tol * (alpha.value() - 1.0));
  InequalityReport r = make_report(InequalityId::LogSubmod, m.dim(), alpha.value(), pair_product,
                                   scaled, 0.0, compare(p, q, tol), tol);
  r.rhs = lattice_product;
  r.gap = pair_product - lattice_product;
  r.passed = pair_product >= scaled;
  return r;
}

InequalityReport check_renyi_supermod(const Distribution<double>& p,
                                      const Distribution<double>& q, Alpha alpha, double tol) {
  require_alpha_above_one(alpha);
  const auto [m, j] = lattice_of(p, q);
  InequalityReport r = make_report(InequalityId::Cor8RenyiSupermod, m.dim(), alpha.value(),
                                   renyi(m, alpha) + renyi(j, alpha),
                                   renyi(p, alpha) + renyi(q, alpha), 0.0, compare(p, q, tol),
                                   tol);
  const InequalityReport norm_form = check_log_submod(p, q, alpha, tol);
  if (norm_form.passed != r.passed) {
    throw Error(ErrorCode::InconsistentVerdict,
                "entropy and norm-product forms of Renyi supermodularity disagree");
  }
  return r;
}

InequalityReport check_renyi_subadd_refined(const Distribution<double>& p,
                                            const Distribution<double>& q, Alpha alpha,
                                            double tol) {
  const auto m = meet(p, q);
  const auto t = tensor(p, q);
  const double eta = kLog2E * w_phi(pad(m, t.dim()), t, alpha);
  return make_report(InequalityId::Cor9RenyiEta, m.dim(), alpha.value(),
                     renyi(p, alpha) + renyi(q, alpha), renyi(m, alpha), eta, compare(p, q, tol),
                     tol);
}

InequalityReport check_distance_triangle(const Distribution<double>& p,
                                         const Distribution<double>& q,
                                         const Distribution<double>& r, Alpha alpha, double tol) {
  const double via = lattice_distance(p, r, alpha) + lattice_distance(r, q, alpha);
  const double direct = lattice_distance(p, q, alpha);
  return make_report(InequalityId::DistanceTriangle, p.dim(), alpha.value(), via, direct, 0.0,
                     compare(p, q, tol), tol);
}

// ----- batches -----

std::vector<std::optional<double>> effective_alphas(const BatchConfig& cfg) {
  bool uses_alpha = false;
  std::vector<double> defaults{2.0};
  switch (cfg.id) {
    case InequalityId::Thm1:
    case InequalityId::Thm2:
    case InequalityId::Lem2:
    case InequalityId::Cor3Eta:
    case InequalityId::Cor4Eta:
      uses_alpha = false;
      break;
    case InequalityId::Cor1Supermod:
    case InequalityId::Cor2Subadd:
      uses_alpha = cfg.functional != Functional::Shannon;
      break;
    case InequalityId::DistanceTriangle:
      uses_alpha = true;
      defaults = {1.0};
      break;
    default:
      uses_alpha = true;
      break;
  }
  if (!uses_alpha) return {std::nullopt};
  const auto& grid = cfg.alphas.empty() ? defaults : cfg.alphas;
  std::vector<std::optional<double>> out;
  for (double a : grid) out.emplace_back(a);
  return out;
}

namespace {

bool is_precursor(InequalityId id) {
  return id == InequalityId::Thm1 || id == InequalityId::Thm2 || id == InequalityId::Lem2;
}

InequalityReport evaluate_float(const BatchConfig& cfg, std::uint64_t index,
                                std::optional<double> alpha) {
  const SampleConfig sc{cfg.dimension, cfg.seed, 1, 1};
  const auto [p, q] = sample_pair<double>(sc, index);
  const double tol = cfg.backend.tolerance;
  std::optional<Alpha> a;
  if (alpha) a = Alpha(*alpha);
  switch (cfg.id) {
    case InequalityId::Thm1:
    case InequalityId::Thm2:
    case InequalityId::Lem2: return check_precursor(cfg.id, p, q, tol);
    case InequalityId::Cor1Supermod: return check_sum_concave_supermod(cfg.functional, p, q, a, tol);
    case InequalityId::Cor2Subadd: return check_sum_concave_subadd(cfg.functional, p, q, a, tol);
    case InequalityId::Cor3Eta: return check_shannon_supermod_refined(p, q, tol);
    case InequalityId::Cor4Eta: return check_shannon_subadd_refined(p, q, tol);
    case InequalityId::Cor6Tau: return check_tsallis_supermod_refined(p, q, *a, tol);
    case InequalityId::Cor7Tau: return check_tsallis_subadd_refined(p, q, *a, tol);
    case InequalityId::Cor8RenyiSupermod: return check_renyi_supermod(p, q, *a, tol);
    case InequalityId::Cor9RenyiEta: return check_renyi_subadd_refined(p, q, *a, tol);
    case InequalityId::LogSubmod: return check_log_submod(p, q, *a, tol);
    case InequalityId::DistanceTriangle: {
      const SampleConfig third{cfg.dimension, cfg.seed ^ 0x74726970ULL, 1, 1};
      return check_distance_triangle(p, q, sample_simplex<double>(third, index), *a, tol);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unhandled inequality id");
}

InequalityReport evaluate_exact(const BatchConfig& cfg, std::uint64_t index) {
  const SampleConfig sc{cfg.dimension, cfg.seed, 1, 1};
  const auto [p, q] = sample_pair<Rational>(sc, index);
  return check_precursor(cfg.id, p, q);
}

std::pair<Vector<double>, Vector<double>> pair_values(const BatchConfig& cfg,
                                                      std::uint64_t index) {
  const SampleConfig sc{cfg.dimension, cfg.seed, 1, 1};
  if (cfg.backend.mode == BackendMode::ExactRational) {
    const auto [p, q] = sample_pair<Rational>(sc, index);
    return {to_double(p.values()), to_double(q.values())};
  }
  const auto [p, q] = sample_pair<double>(sc, index);
  return {p.values(), q.values()};
}

}  // namespace

BatchResult batch_verify(const BatchConfig& cfg) {
  if (cfg.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (cfg.dimension < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  cfg.backend.validate();
  const bool exact = cfg.backend.mode == BackendMode::ExactRational;
  if (exact && !is_precursor(cfg.id)) {
    throw Error(ErrorCode::UnsupportedBackend,
                "the rational backend only covers Thm1, Thm2 and Lem2");
  }
  const auto alphas = effective_alphas(cfg);
  for (const auto& a : alphas) {
    if (a) (void)Alpha(*a);
    if (a && (cfg.id == InequalityId::Cor8RenyiSupermod || cfg.id == InequalityId::LogSubmod)) {
      require_alpha_above_one(Alpha(*a));
    }
    if (a && cfg.id == InequalityId::DistanceTriangle && *a < 1.0) {
      throw Error(ErrorCode::AlphaOutOfRange, "lattice distance needs alpha >= 1");
    }
  }
  const std::size_t per_pair = alphas.size();

  BatchResult result;
  result.reports.resize(cfg.count * per_pair);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t i = next++; i < cfg.count; i = next++) {
      try {
        for (std::size_t k = 0; k < per_pair; ++k) {
          result.reports[i * per_pair + k] =
              exact ? evaluate_exact(cfg, i) : evaluate_float(cfg, i, alphas[k]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  BatchSummary& s = result.summary;
  s.id = cfg.id;
  s.dimension = cfg.dimension;
  s.seed = cfg.seed;
  s.backend = cfg.backend.mode;
  s.count = cfg.count;
  s.evaluations = result.reports.size();
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    const auto& r = result.reports[k];
    if (r.passed) {
      ++s.passed;
      if (r.gap < 0.0) ++s.near_misses;
    } else {
      ++s.failed;
    }
    if (!r.refined_applicable) ++s.not_applicable;
    if (r.gap < result.reports[argmin].gap) argmin = k;
  }
  s.pass_rate = static_cast<double>(s.passed) / static_cast<double>(s.evaluations);
  s.min_gap = result.reports[argmin].gap;
  s.argmin_index = argmin / per_pair;
  s.argmin_alpha = result.reports[argmin].alpha;
  std::tie(s.argmin_p, s.argmin_q) = pair_values(cfg, s.argmin_index);
  return result;
}

std::string to_csv_row(const InequalityReport& r) {
  char buf[512];
  auto num = [](double x) {
    char b[64];
    std::snprintf(b, sizeof b, "%.9g", x);
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf, "%s,%ld,%s,%s,%s,%s,%s,%s,%s", to_string(r.id),
                static_cast<long>(r.d), r.alpha ? num(*r.alpha).c_str() : "",
                num(r.lhs).c_str(), num(r.rhs).c_str(), num(r.correction).c_str(),
                num(r.gap).c_str(), to_string(r.comparability), r.passed ? "true" : "false");
  return buf;
}

void write_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << kCsvHeader << '\n';
  for (const auto& r : reports) out << to_csv_row(r) << '\n';
}

std::string summary_to_json(const BatchSummary& s) {
  nlohmann::ordered_json j;
  j["inequality_id"] = to_string(s.id);
  j["d"] = s.dimension;
  j["seed"] = s.seed;
  j["backend"] = to_string(s.backend);
  j["count"] = s.count;
  j["evaluations"] = s.evaluations;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  j["near_misses"] = s.near_misses;
  j["not_applicable"] = s.not_applicable;
  j["pass_rate"] = s.pass_rate;
  j["min_gap"] = s.min_gap;
  j["argmin_index"] = s.argmin_index;
  j["argmin_alpha"] = s.argmin_alpha ? nlohmann::ordered_json(*s.argmin_alpha) : nullptr;
  j["argmin_p"] = nlohmann::ordered_json::parse(vector_to_json(s.argmin_p));
  j["argmin_q"] = nlohmann::ordered_json::parse(vector_to_json(s.argmin_q));
  return j.dump(2);
}

}  // namespace majolat
