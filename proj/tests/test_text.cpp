#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tmc/csv.hpp"
#include "tmc/text.hpp"

using namespace tmc;

TEST_CASE("whitespace and case helpers") {
  CHECK(text::lower("GIS and LDA") == "gis and lda");
  CHECK(text::lower("Ébauche") == "Ébauche");  // non-ASCII bytes untouched
  CHECK(text::trim("  a b \t\n") == "a b");
  CHECK(text::collapse_whitespace("A  B\tC") == "A B C");
  CHECK(text::collapse_whitespace("   ") == "");
  CHECK(text::match_key("Text mining in DH!") == text::match_key("text mining in dh"));
  CHECK(text::match_key("  Re-use:  of  GIS ") == "reuse of gis");
}

TEST_CASE("split keeps empty fields") {
  CHECK(text::split("a,,b,", ',') == std::vector<std::string>{"a", "", "b", ""});
  CHECK(text::split("", ',') == std::vector<std::string>{""});
}

TEST_CASE("levenshtein agrees with the recursive oracle") {
  std::mt19937_64 rng(3);
  const std::string alphabet = "abcd ";
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b;
    for (auto n = rng() % 9; n > 0; --n) a += alphabet[rng() % alphabet.size()];
    for (auto n = rng() % 9; n > 0; --n) b += alphabet[rng() % alphabet.size()];
    CHECK(text::levenshtein(a, b) == oracle::edit_distance(a, b));
  }
  CHECK(text::levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("similarity is one minus normalized edit distance") {
  CHECK(text::similarity("", "") == 1.0);
  CHECK(text::similarity("abc", "") == 0.0);
  // one substitution in a 20-character title
  CHECK(text::similarity("text mining in dh ab", "text mining in dh ac") == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("format_double round-trips") {
  CHECK(text::format_double(0.1) == "0.1");
  CHECK(text::format_double(1.0) == "1");
  CHECK(text::format_double(1.0 / 3.0) == "0.3333333333333333");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(std::stod(text::format_double(v)) == v);
  }
  CHECK_THROWS(text::format_double(std::numeric_limits<double>::infinity()));
}

TEST_CASE("csv reader handles quotes, embedded newlines and blank lines") {
  std::istringstream in("a,b,c\n\n\"x, y\",\"he said \"\"hi\"\"\",\"multi\nline\"\nlast,,\n");
  csv::Reader r(in);
  auto row = r.next();
  REQUIRE(row);
  CHECK(row->fields == std::vector<std::string>{"a", "b", "c"});
  row = r.next();
  REQUIRE(row);
  CHECK(row->line == 3);
  CHECK(row->fields == std::vector<std::string>{"x, y", "he said \"hi\"", "multi\nline"});
  row = r.next();
  REQUIRE(row);
  CHECK(row->line == 5);
  CHECK(row->fields == std::vector<std::string>{"last", "", ""});
  CHECK_FALSE(r.next());
}

TEST_CASE("csv reader flags an unterminated quote") {
  std::istringstream in("ok,1\n\"broken,2\n");
  csv::Reader r(in);
  CHECK_FALSE(r.next()->malformed);
  CHECK(r.next()->malformed);
}

TEST_CASE("csv writer output reads back identically") {
  const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "two\nlines", ""};
  std::ostringstream out;
  csv::write_row(out, fields);
  std::istringstream in(out.str());
  csv::Reader r(in);
  CHECK(r.next()->fields == fields);
}
