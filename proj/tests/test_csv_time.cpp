#include <doctest.h>

#include <sstream>

#include "culturestream/csv.hpp"
#include "culturestream/timeutil.hpp"

using namespace culturestream;

TEST_CASE("csv escape quotes only when needed") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("csv round trip through writer and reader") {
  std::ostringstream out;
  csv::Writer w(out);
  const csv::Row a{"x", "a,b", "q\"q", ""};
  const csv::Row b{"multi\nline", "1.5"};
  w.row(a);
  w.row(b);
  CHECK(w.rows_written() == 2);

  std::istringstream in(out.str());
  csv::Reader r(in);
  CHECK(*r.next() == a);
  CHECK(r.line() == 1);
  CHECK(*r.next() == b);
  CHECK(r.line() == 2);
  CHECK_FALSE(r.next().has_value());
}

TEST_CASE("csv reader rejects an unterminated quote") {
  std::istringstream in("a,\"open\n");
  csv::Reader r(in);
  CHECK_THROWS(r.next());
}

TEST_CASE("format_number is shortest round trip and empty for null") {
  CHECK(csv::format_number(0.5) == "0.5");
  CHECK(csv::format_number(1.0) == "1");
  CHECK(csv::format_number(std::nullopt) == "");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(csv::format_number(third)) == third);
}

TEST_CASE("timestamps parse from epoch seconds and ISO-8601") {
  CHECK(parse_timestamp("1374278400") == 1374278400);
  CHECK(parse_timestamp("2013-07-20") == 1374278400);
  CHECK(parse_timestamp("2013-07-20T00:00:00Z") == 1374278400);
  CHECK(parse_timestamp("2013-07-20 02:00:00+02:00") == 1374278400);
  CHECK(parse_timestamp("2013-07-20T00:00:00.750Z") == 1374278400);
  CHECK(parse_timestamp("2013-07-19T19:00:00-05:00") == 1374278400);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), std::invalid_argument);
  CHECK_THROWS_AS(parse_timestamp("2013-13-01"), std::invalid_argument);
  CHECK(format_timestamp(1374278400) == "2013-07-20T00:00:00Z");
  CHECK(parse_timestamp(format_timestamp(1379800000)) == 1379800000);
}
