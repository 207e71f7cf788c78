#ifndef MAJOLAT_IO_HPP
#define MAJOLAT_IO_HPP

#include <string>
#include <vector>

#include "majolat/core.hpp"
#include "majolat/sampling.hpp"

namespace majolat {

/// Raw tokens of a flat JSON array of numbers and/or strings, with number
/// literals kept as written so they can be read exactly.
std::vector<std::string> parse_array_tokens(const std::string& json);

/// JSON array of numbers (or numeric strings) as doubles.
Vector<double> parse_vector_double(const std::string& json);

/// JSON array of numbers or "num/den" strings, read exactly: decimal
/// literals such as 0.1 become 1/10.
Vector<Rational> parse_vector_rational(const std::string& json);

/// Shortest round-trip formatting of a double.
std::string format_double(double x);

/// JSON array with full binary64 round-trip precision.
std::string vector_to_json(const Vector<double>& v);

/// JSON array of "num/den" strings.
std::string vector_to_json(const Vector<Rational>& v);

/// Non-blank lines of a JSONL file. Throws std::ios_base::failure on I/O errors.
std::vector<std::string> read_jsonl(const std::string& path);

/// Pinned witness record {alpha, d, p, q, gap, direction, index}; p and q are
/// stored exactly as "num/den" strings.
std::string witness_to_jsonl(const Witness& w);
Witness witness_from_jsonl(const std::string& line);

}  // namespace majolat

#endif  // MAJOLAT_IO_HPP
