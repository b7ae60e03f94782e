#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cf {

// Delimiter-separated numeric table with a commented header: ordered
// provenance key-value lines followed by column names with units.  Values
// are written with max_digits10 so parse(emit(t)) == t holds exactly.
struct Column {
  std::string name;
  std::string unit;  // may be empty
  std::vector<double> values;

  bool operator==(const Column&) const = default;
};

class ResultTable {
 public:
  void add_meta(const std::string& key, const std::string& value);
  const std::string* find_meta(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }

  // Columns must be added before rows.
  void add_column(const std::string& name, const std::string& unit = "");
  void add_row(const std::vector<double>& values);  // one value per column
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(const std::string& name) const;  // throws IoError
  std::size_t rows() const;

  std::string emit() const;
  static ResultTable parse(const std::string& text);  // throws IoError

  void write_file(const std::string& path) const;
  static ResultTable read_file(const std::string& path);

  bool operator==(const ResultTable&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<Column> columns_;
};

}  // namespace cf
