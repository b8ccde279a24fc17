#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fermigraph {

/// Numeric rows with a trailing status column. Column order is the output
/// order in every format.
struct Table {
  std::vector<std::string> columns;  // excludes "status"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> status;
  std::map<std::string, std::string> metadata;
  std::string block_column = "gamma";  // gnuplot blocks break when it changes

  void add_row(std::vector<double> values, std::string row_status);
  std::size_t column_index(std::string_view name) const;
};

enum class Format { Csv, Jsonl, Gnuplot };

Format parse_format(std::string_view name);

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);

void emit(const Table& t, Format f, std::ostream& os);

/// Throws Error{Io} when the path cannot be written.
void emit(const Table& t, Format f, const std::string& path);

/// Metadata as a flat JSON object. Throws Error{Io} when the path cannot be
/// written.
void emit_metadata(const Table& t, const std::string& path);

/// Inverse of the CSV writer (metadata is not part of the CSV).
Table read_csv(std::istream& is);
Table read_csv(const std::string& path);

}  // namespace fermigraph
