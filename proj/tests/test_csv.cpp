#include <doctest.h>

#include <random>
#include <sstream>

#include "transitfit/csv.hpp"
#include "transitfit/errors.hpp"

using namespace transitfit;

TEST_CASE("read_table handles quoting, escapes and embedded delimiters") {
  std::istringstream in(
      "agency_id,year,note\n"
      "\"Metro, Inc.\",2002,\"says \"\"hi\"\"\"\n"
      "plain,2003,\"multi\nline\"\n");
  const csv::Table t = csv::read_table(in);
  REQUIRE(t.header.size() == 3);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "Metro, Inc.");
  CHECK(t.rows[0][2] == "says \"hi\"");
  CHECK(t.rows[1][2] == "multi\nline");
}

TEST_CASE("read_table accepts CRLF and missing trailing newline") {
  std::istringstream in("a,b\r\n1,2\r\n3,4");
  const csv::Table t = csv::read_table(in);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][1] == "4");
}

TEST_CASE("read_table rejects an unterminated quote") {
  std::istringstream in("a,b\n\"oops,2\n");
  CHECK_THROWS_AS(csv::read_table(in), IoError);
}

TEST_CASE("write/read round-trips arbitrary cells") {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "ab,\"\n\r;x 1.5";
  for (int rep = 0; rep < 50; ++rep) {
    csv::Table t;
    t.header = {"c0", "c1", "c2"};
    for (int r = 0; r < 20; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < 3; ++c) {
        std::string cell;
        const int len = static_cast<int>(rng() % 8);
        for (int i = 0; i < len; ++i) cell.push_back(alphabet[rng() % alphabet.size()]);
        row.push_back(cell);
      }
      t.rows.push_back(row);
    }
    std::ostringstream out;
    csv::write_table(out, t);
    std::istringstream in(out.str());
    const csv::Table back = csv::read_table(in);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(back.rows[r] == t.rows[r]);
  }
}

TEST_CASE("format_double/parse_double round-trips exactly") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1e12, 1e12);
  for (int rep = 0; rep < 2000; ++rep) {
    double v = u(rng);
    if (rep % 5 == 0) v = std::exp(u(rng) / 1e11);
    const auto parsed = csv::parse_double(csv::format_double(v));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == v);  // bitwise
  }
}

TEST_CASE("parse_double rejects junk and non-finite values") {
  CHECK_FALSE(csv::parse_double(""));
  CHECK_FALSE(csv::parse_double("N/A"));
  CHECK_FALSE(csv::parse_double("12abc"));
  CHECK_FALSE(csv::parse_double("1.2 3"));
  CHECK_FALSE(csv::parse_double("inf"));
  CHECK_FALSE(csv::parse_double("nan"));
  CHECK(csv::parse_double("  42.5 ") == 42.5);
  CHECK(csv::parse_double("-0.125") == -0.125);
  CHECK(csv::parse_long("2007") == 2007);
  CHECK_FALSE(csv::parse_long("20.7"));
}
