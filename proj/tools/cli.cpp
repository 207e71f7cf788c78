#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ios>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "majolat/core.hpp"
#include "majolat/functionals.hpp"
#include "majolat/io.hpp"
#include "majolat/lattice.hpp"
#include "majolat/report.hpp"
#include "majolat/sampling.hpp"
#include "majolat/verify.hpp"

namespace majolat::cli {

namespace {

// Thrown for bad flag combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output target: "-" is the given stream, anything else a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::ios_base::failure("cannot write '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::ios_base::failure("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MAJOLAT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MAJOLAT_SEED is not an unsigned integer: '") + env + "'");
  }
  throw UsageError("a seed is required (--seed or MAJOLAT_SEED)");
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ----- compute -----

struct ComputeArgs {
  std::string op;
  std::string p;
  std::string q;
  std::string file;
  std::string backend = "auto";
  std::string kind;
  std::optional<double> alpha;
};

bool is_binary(const std::string& op) { return op != "entropy"; }

bool is_numeric(const std::string& op) { return op == "entropy" || op == "divergence"; }

std::string format_scalar(double x) {
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return format_double(x);
}

template <LatticeScalar Scalar>
std::string render(const Vector<Scalar>& v, bool exact_text) {
  if constexpr (ScalarTraits<Scalar>::is_exact) {
    return exact_text ? vector_to_json(v) : vector_to_json(to_double(v));
  } else {
    return vector_to_json(v);
  }
}

template <LatticeScalar Scalar>
std::string lattice_op(const std::string& op, const Distribution<Scalar>& p,
                       const Distribution<Scalar>& q, bool exact_text) {
  if (op == "meet") return render(meet(p, q).values(), exact_text);
  if (op == "join") return render(join(p, q).values(), exact_text);
  if (op == "directsum") return render(direct_sum(p, q).values(), exact_text);
  return render(tensor(p, q).values(), exact_text);
}

std::string numeric_op(const ComputeArgs& a, const Distribution<double>& p,
                       const Distribution<double>* q) {
  if (a.op == "entropy") {
    const std::string kind = a.kind.empty() ? "shannon" : a.kind;
    if (kind == "shannon") return format_scalar(shannon(p));
    if (!a.alpha) throw UsageError(kind + " entropy needs --alpha");
    if (kind == "renyi") return format_scalar(renyi(p, Alpha(*a.alpha)));
    if (kind == "tsallis") return format_scalar(tsallis(p, Alpha(*a.alpha)));
    throw UsageError("unknown entropy kind '" + kind + "'");
  }
  const std::string kind = a.kind.empty() ? "kl" : a.kind;
  if (kind == "kl") return format_scalar(kl(p, *q));
  if (kind == "wphi") {
    if (!a.alpha) throw UsageError("wphi needs --alpha");
    return format_scalar(w_phi(p, *q, Alpha(*a.alpha)));
  }
  throw UsageError("unknown divergence kind '" + kind + "'");
}

// Decimal input is read exactly; when the exact entries sum to 1 the
// lattice work is done in rationals, otherwise in doubles.
std::string compute_one(const ComputeArgs& a, const std::string& p_text,
                        const std::string* q_text) {
  if (is_numeric(a.op)) {
    if (a.backend == "rational") {
      throw UsageError(a.op + " is evaluated in floating point; --backend rational is not allowed");
    }
    const auto p = make_distribution(parse_vector_double(p_text));
    if (!q_text) return numeric_op(a, p, nullptr);
    const auto q = make_distribution(parse_vector_double(*q_text));
    return numeric_op(a, p, &q);
  }
  if (a.backend != "float") {
    const auto pr = parse_vector_rational(p_text);
    const auto qr = parse_vector_rational(*q_text);
    const bool exact_mass = pr.size() > 0 && qr.size() > 0 && pr.sum() == Rational(1) &&
                            qr.sum() == Rational(1);
    if (a.backend == "rational" || exact_mass) {
      return lattice_op(a.op, make_distribution(pr), make_distribution(qr),
                        a.backend == "rational");
    }
  }
  return lattice_op(a.op, make_distribution(parse_vector_double(p_text)),
                    make_distribution(parse_vector_double(*q_text)), false);
}

int run_compute(const ComputeArgs& a, std::ostream& out) {
  const bool binary = is_binary(a.op);
  std::vector<std::string> inputs;
  if (!a.file.empty()) {
    if (!a.p.empty() || !a.q.empty()) throw UsageError("--file cannot be combined with --p/--q");
    inputs = read_jsonl(a.file);
    if (inputs.empty()) throw UsageError("'" + a.file + "' holds no distributions");
    if (binary && inputs.size() % 2 != 0) {
      throw UsageError(a.op + " pairs consecutive lines; '" + a.file + "' has an odd count");
    }
  } else {
    if (a.p.empty()) throw UsageError("--p is required");
    inputs.push_back(a.p);
    if (binary) {
      if (a.q.empty()) throw UsageError(a.op + " needs --q");
      inputs.push_back(a.q);
    } else if (!a.q.empty()) {
      throw UsageError(a.op + " takes a single distribution");
    }
  }
  const std::size_t step = binary ? 2 : 1;
  for (std::size_t i = 0; i < inputs.size(); i += step) {
    out << compute_one(a, inputs[i], binary ? &inputs[i + 1] : nullptr) << '\n';
  }
  return kExitOk;
}

// ----- verify -----

struct VerifyArgs {
  std::string id;
  long d = 3;
  std::uint64_t count = 1000;
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas;
  std::string functional = "shannon";
  std::string backend = "float";
  unsigned threads = 1;
  std::string csv = "-";
  std::string summary;
};

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  BatchConfig cfg;
  cfg.id = parse_inequality_id(a.id);
  cfg.dimension = a.d;
  cfg.count = a.count;
  cfg.seed = resolve_seed(a.seed);
  cfg.alphas = a.alphas;
  cfg.functional = parse_functional(a.functional);
  cfg.backend.mode = a.backend == "rational" ? BackendMode::ExactRational : BackendMode::Float64;
  cfg.threads = resolve_threads(a.threads);

  const BatchResult result = batch_verify(cfg);
  Sink csv(a.csv, out);
  write_csv(csv.get(), result.reports);
  csv.finish();
  Sink summary(a.summary, err);
  summary.get() << summary_to_json(result.summary) << '\n';
  summary.finish();
  return result.summary.failed == 0 ? kExitOk : kExitFailed;
}

// ----- search -----

struct SearchArgs {
  std::string functional = "renyi";
  std::string relation = "supermod";
  std::string direction = "both";
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<long> dims{3, 4, 5, 6};
  std::uint64_t budget = 1000000;
  std::optional<std::uint64_t> seed;
  double threshold = 1e-6;
  unsigned threads = 1;
  std::string out = "-";
};

int run_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  SearchConfig base;
  base.functional = parse_functional(a.functional);
  base.relation = a.relation == "subadd" ? Relation::Subadditive : Relation::Supermodular;
  base.dims.assign(a.dims.begin(), a.dims.end());
  base.budget = a.budget;
  base.seed = resolve_seed(a.seed);
  base.threshold = a.threshold;
  base.threads = resolve_threads(a.threads);

  std::vector<Direction> directions;
  if (a.direction != "positive") directions.push_back(Direction::Negative);
  if (a.direction != "negative") directions.push_back(Direction::Positive);

  Sink sink(a.out, out);
  for (double alpha : a.alphas) {
    for (Direction dir : directions) {
      SearchConfig cfg = base;
      cfg.alpha = alpha;
      cfg.direction = dir;
      const SearchResult r = search_counterexample(cfg);
      err << "alpha=" << format_double(alpha) << " direction=" << to_string(dir);
      if (r.witness) {
        const double gap = reverify_witness(*r.witness, cfg.functional, cfg.relation);
        err << " witness d=" << r.witness->d << " index=" << r.witness->index
            << " gap=" << format_double(gap) << '\n';
        Witness w = *r.witness;
        w.gap = gap;
        sink.get() << witness_to_jsonl(w) << '\n';
      } else {
        err << " no witness in " << r.samples
            << " samples, extreme gap=" << format_double(r.extreme_gap) << '\n';
      }
    }
  }
  sink.finish();
  return kExitOk;
}

// ----- report -----

int run_report(const std::string& input, const std::string& output, std::ostream& out) {
  std::ifstream in(input);
  if (!in) throw std::ios_base::failure("cannot open '" + input + "'");
  const std::string json = csv_report_to_json(in);
  if (in.bad()) throw std::ios_base::failure("read failed for '" + input + "'");
  Sink sink(output, out);
  sink.get() << json << '\n';
  sink.finish();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Majorization lattice toolkit: lattice operations, inequality checks and "
               "counterexample search",
               "majolat"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Evaluate a lattice object or functional");
  compute->add_option("op", ca.op, "meet | join | directsum | tensor | entropy | divergence")
      ->required()
      ->check(CLI::IsMember({"meet", "join", "directsum", "tensor", "entropy", "divergence"}));
  compute->add_option("--p", ca.p, "First distribution as a JSON array");
  compute->add_option("--q", ca.q, "Second distribution as a JSON array");
  compute->add_option("--file", ca.file, "JSONL input, one distribution per line");
  compute->add_option("--backend", ca.backend, "auto | float | rational")
      ->check(CLI::IsMember({"auto", "float", "rational"}))
      ->capture_default_str();
  compute->add_option("--kind", ca.kind,
                      "entropy: shannon | renyi | tsallis; divergence: kl | wphi");
  compute->add_option("--alpha", ca.alpha, "Order of renyi / tsallis / wphi");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check an inequality on sampled pairs");
  verify->add_option("--id", va.id, "Inequality id (Thm1, Thm2, Lem2, Cor1..Cor9, LogSubmod, "
                                    "DistanceTriangle)")
      ->required();
  verify->add_option("--d", va.d, "Dimension")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--count", va.count, "Number of sampled pairs")->capture_default_str();
  verify->add_option("--seed", va.seed, "Seed (falls back to MAJOLAT_SEED)");
  verify->add_option("--alpha", va.alphas, "Alpha grid")->delimiter(',');
  verify->add_option("--functional", va.functional, "shannon | tsallis | normpow (Cor1, Cor2)")
      ->capture_default_str();
  verify->add_option("--backend", va.backend, "float | rational")
      ->check(CLI::IsMember({"float", "rational"}))
      ->capture_default_str();
  verify->add_option("--threads", va.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  verify->add_option("--csv", va.csv, "CSV report path, - for stdout")->capture_default_str();
  verify->add_option("--summary", va.summary, "JSON summary path (default stderr)");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Search sampled incomparable pairs for a gap sign");
  search->add_option("--functional", sa.functional, "renyi | shannon | tsallis | normpow")
      ->capture_default_str();
  search->add_option("--relation", sa.relation, "supermod | subadd")
      ->check(CLI::IsMember({"supermod", "subadd"}))
      ->capture_default_str();
  search->add_option("--direction", sa.direction, "negative | positive | both")
      ->check(CLI::IsMember({"negative", "positive", "both"}))
      ->capture_default_str();
  search->add_option("--alpha", sa.alphas, "Alpha grid")->delimiter(',')->capture_default_str();
  search->add_option("--d", sa.dims, "Dimensions to cycle through")
      ->delimiter(',')
      ->capture_default_str();
  search->add_option("--budget", sa.budget, "Samples per (alpha, direction)")
      ->capture_default_str();
  search->add_option("--seed", sa.seed, "Seed (falls back to MAJOLAT_SEED)");
  search->add_option("--threshold", sa.threshold, "Minimal |gap| of a witness")
      ->capture_default_str();
  search->add_option("--threads", sa.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  search->add_option("--out", sa.out, "Witness JSONL path, - for stdout")->capture_default_str();

  std::string report_in;
  std::string report_out = "-";
  auto* report = app.add_subcommand("report", "Summarize a verification CSV as JSON");
  report->add_option("--input", report_in, "CSV written by verify")->required();
  report->add_option("--output", report_out, "JSON path, - for stdout")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return run_compute(ca, out);
    if (verify->parsed()) return run_verify(va, out, err);
    if (search->parsed()) return run_search(sa, out, err);
    return run_report(report_in, report_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InconsistentVerdict ? kExitFailed : kExitUsage;
  }
}

}  // namespace majolat::cli
