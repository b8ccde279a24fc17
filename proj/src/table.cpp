#include "fermigraph/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fermigraph/error.hpp"

namespace fermigraph {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Io, "malformed number in CSV: '" + s + "'");
  }
  return v;
}

void emit_csv(const Table& t, std::ostream& os) {
  for (const auto& c : t.columns) os << c << ',';
  os << "status\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (const double v : t.rows[r]) os << format_number(v) << ',';
    os << t.status[r] << '\n';
  }
}

void emit_jsonl(const Table& t, std::ostream& os) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const double v = t.rows[r][c];
      // JSON has no NaN or infinity; keep the textual form.
      if (std::isfinite(v)) {
        obj[t.columns[c]] = v;
      } else {
        obj[t.columns[c]] = format_number(v);
      }
    }
    obj["status"] = t.status[r];
    os << obj.dump() << '\n';
  }
}

void emit_gnuplot(const Table& t, std::ostream& os) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
  os << '#';
  for (const auto& c : t.columns) os << ' ' << c;
  os << " status\n";
  std::size_t block = t.columns.size();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == t.block_column) block = c;
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r > 0 && block < t.columns.size() &&
        format_number(t.rows[r][block]) != format_number(t.rows[r - 1][block])) {
      os << '\n';
    }
    for (const double v : t.rows[r]) os << format_number(v) << ' ';
    os << t.status[r] << '\n';
  }
}

}  // namespace

void Table::add_row(std::vector<double> values, std::string row_status) {
  if (values.size() != columns.size()) {
    throw Error(ErrorCode::Consistency, "row width does not match the table header");
  }
  rows.push_back(std::move(values));
  status.push_back(std::move(row_status));
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return c;
  }
  throw Error(ErrorCode::Parameter, "no column named '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "jsonl") return Format::Jsonl;
  if (name == "gnuplot") return Format::Gnuplot;
  throw Error(ErrorCode::Parameter, "unknown format '" + std::string(name) + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::Consistency, "number formatting failed");
  return std::string(buf, ptr);
}

void emit(const Table& t, Format f, std::ostream& os) {
  switch (f) {
    case Format::Csv:
      emit_csv(t, os);
      break;
    case Format::Jsonl:
      emit_jsonl(t, os);
      break;
    case Format::Gnuplot:
      emit_gnuplot(t, os);
      break;
  }
}

void emit(const Table& t, Format f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  emit(t, f, out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void emit_metadata(const Table& t, const std::string& path) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) obj[k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << obj.dump(2) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "CSV input is empty");
  auto header = split(line, ',');
  if (header.empty() || header.back() != "status") {
    throw Error(ErrorCode::Io, "CSV header must end with a status column");
  }
  header.pop_back();
  t.columns = header;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.columns.size() + 1) {
      throw Error(ErrorCode::Io, "CSV row width does not match the header");
    }
    std::vector<double> values;
    values.reserve(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) values.push_back(parse_number(cells[c]));
    t.add_row(std::move(values), cells.back());
  }
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return read_csv(in);
}

}  // namespace fermigraph
