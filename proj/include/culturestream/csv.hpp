#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace culturestream::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields may contain commas, quotes ("") and newlines.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws std::runtime_error on an
  /// unterminated quoted field.
  std::optional<Row> next();
  /// 1-based line number where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void row(const Row& fields);
  std::size_t rows_written() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t rows_ = 0;
};

/// Shortest round-trippable decimal representation; empty for nullopt.
std::string format_number(std::optional<double> v);

}  // namespace culturestream::csv
