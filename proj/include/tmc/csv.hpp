#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tmc::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
  bool malformed = false;  // unterminated quote
};

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and newlines.
// Blank lines are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in, char sep = ',') : in_(in), sep_(sep) {}
  std::optional<Row> next();

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 0;
};

std::string escape(std::string_view field, char sep = ',');
void write_row(std::ostream& out, const std::vector<std::string>& fields, char sep = ',');

}  // namespace tmc::csv
