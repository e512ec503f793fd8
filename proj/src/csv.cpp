#include "culturestream/csv.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace culturestream::csv {

std::optional<Row> Reader::next() {
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return std::nullopt;
  record_line_ = line_;
  Row row;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (in_quotes) throw std::runtime_error("unterminated quoted field");
      break;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // CRLF; the LF terminates the record on the next iteration
    } else if (ch == '\n') {
      ++line_;
      break;
    } else {
      field.push_back(ch);
    }
  }
  row.push_back(std::move(field));
  return row;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape(fields[i]);
  }
  out_ << '\n';
  ++rows_;
}

std::string format_number(std::optional<double> v) {
  if (!v) return {};
  return fmt::format("{}", *v);
}

}  // namespace culturestream::csv
