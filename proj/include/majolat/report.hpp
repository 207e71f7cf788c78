#ifndef MAJOLAT_REPORT_HPP
#define MAJOLAT_REPORT_HPP

#include <istream>
#include <string>

namespace majolat {

/// Aggregates a verification CSV (as written by write_csv) into a JSON
/// document with overall totals and one group per (inequality_id, d, alpha).
/// Throws Error(ParseError) on a malformed header or row.
std::string csv_report_to_json(std::istream& csv);

}  // namespace majolat

#endif  // MAJOLAT_REPORT_HPP
