#include "majolat/io.hpp"

#include <charconv>
#include <fstream>
#include <ios>

#include "json.hpp"

namespace majolat {

namespace {

// Collects the elements of a single flat array, keeping number literals as text.
class ArrayTokenizer : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::vector<std::string> tokens;

  bool null() override { return fail("null is not a number"); }
  bool boolean(bool) override { return fail("boolean is not a number"); }
  bool number_integer(number_integer_t v) override { return push(std::to_string(v)); }
  bool number_unsigned(number_unsigned_t v) override { return push(std::to_string(v)); }
  bool number_float(number_float_t, const string_t& s) override { return push(s); }
  bool string(string_t& s) override { return push(s); }
  bool binary(binary_t&) override { return fail("binary values are not supported"); }
  bool start_object(std::size_t) override { return fail("expected an array, got an object"); }
  bool key(string_t&) override { return false; }
  bool end_object() override { return false; }
  bool start_array(std::size_t) override {
    if (depth_++ > 0) return fail("nested arrays are not supported");
    return true;
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    return fail(ex.what());
  }

  std::string error;

 private:
  bool push(const std::string& s) {
    if (depth_ != 1) return fail("expected a JSON array");
    tokens.push_back(s);
    return true;
  }
  bool fail(const std::string& why) {
    if (error.empty()) error = why;
    return false;
  }

  int depth_ = 0;
};

double parse_double_token(const std::string& token) {
  if (token.find('/') != std::string::npos) {
    return parse_rational(token).convert_to<double>();
  }
  double x = 0.0;
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw Error(ErrorCode::ParseError, "not a number: '" + token + "'");
  }
  return x;
}

}  // namespace

std::vector<std::string> parse_array_tokens(const std::string& json) {
  ArrayTokenizer sax;
  const bool ok = nlohmann::json::sax_parse(json, &sax);
  if (!ok) {
    throw Error(ErrorCode::ParseError, sax.error.empty() ? "expected a JSON array" : sax.error);
  }
  return sax.tokens;
}

Vector<double> parse_vector_double(const std::string& json) {
  const auto tokens = parse_array_tokens(json);
  Vector<double> v(static_cast<Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) v[static_cast<Index>(i)] = parse_double_token(tokens[i]);
  return v;
}

Vector<Rational> parse_vector_rational(const std::string& json) {
  const auto tokens = parse_array_tokens(json);
  Vector<Rational> v(static_cast<Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) v[static_cast<Index>(i)] = parse_rational(tokens[i]);
  return v;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string vector_to_json(const Vector<double>& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  return out + "]";
}

std::string vector_to_json(const Vector<Rational>& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += '"' + format_rational(v[i]) + '"';
  }
  return out + "]";
}

std::vector<std::string> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

std::string witness_to_jsonl(const Witness& w) {
  nlohmann::ordered_json j;
  j["alpha"] = w.alpha;
  j["d"] = w.d;
  j["p"] = nlohmann::ordered_json::parse(vector_to_json(w.p.values()));
  j["q"] = nlohmann::ordered_json::parse(vector_to_json(w.q.values()));
  j["gap"] = w.gap;
  j["direction"] = to_string(w.direction);
  j["index"] = w.index;
  return j.dump();
}

Witness witness_from_jsonl(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    const auto p = make_distribution(parse_vector_rational(j.at("p").dump()));
    const auto q = make_distribution(parse_vector_rational(j.at("q").dump()));
    const auto direction = j.value("direction", std::string("negative"));
    if (direction != "negative" && direction != "positive") {
      throw Error(ErrorCode::ParseError, "unknown direction '" + direction + "'");
    }
    const Direction dir = direction == "positive" ? Direction::Positive : Direction::Negative;
    return Witness{j.at("alpha").get<double>(), j.at("d").get<Index>(), dir,
                   j.value("index", std::uint64_t{0}), p, q, j.at("gap").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace majolat
