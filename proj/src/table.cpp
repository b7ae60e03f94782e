#include "cf/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cf/errors.hpp"

namespace cf {

namespace {

constexpr const char* kMagic = "# cf1d-table 1";

bool plain_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '[' || c == ']' || c == ':') return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ResultTable::add_meta(const std::string& key, const std::string& value) {
  if (!plain_token(key)) throw IoError("table meta key must be a plain token: '" + key + "'");
  if (value.find('\n') != std::string::npos)
    throw IoError("table meta value must be a single line");
  meta_.emplace_back(key, value);
}

const std::string* ResultTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void ResultTable::add_column(const std::string& name, const std::string& unit) {
  if (!plain_token(name)) throw IoError("table column name must be a plain token: '" + name + "'");
  if (!unit.empty() && !plain_token(unit))
    throw IoError("table column unit must be a plain token: '" + unit + "'");
  if (!columns_.empty() && !columns_.front().values.empty())
    throw IoError("table columns must be added before rows");
  columns_.push_back({name, unit, {}});
}

void ResultTable::add_row(const std::vector<double>& values) {
  if (columns_.empty()) throw IoError("table has no columns");
  if (values.size() != columns_.size())
    throw IoError("table row width does not match column count");
  for (std::size_t c = 0; c < columns_.size(); ++c) columns_[c].values.push_back(values[c]);
}

const Column& ResultTable::column(const std::string& name) const {
  for (const auto& col : columns_) {
    if (col.name == name) return col;
  }
  throw IoError("table has no column '" + name + "'");
}

std::size_t ResultTable::rows() const {
  return columns_.empty() ? 0 : columns_.front().values.size();
}

std::string ResultTable::emit() const {
  std::ostringstream out;
  out << kMagic << '\n';
  for (const auto& [k, v] : meta_) out << "# meta " << k << ": " << v << '\n';
  out << "# columns:";
  for (const auto& col : columns_) out << ' ' << col.name << '[' << col.unit << ']';
  out << '\n';
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c > 0) out << '\t';
      out << format_double(columns_[c].values[r]);
    }
    out << '\n';
  }
  return out.str();
}

ResultTable ResultTable::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw IoError("table parse: missing format marker");

  ResultTable t;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# meta ", 0) == 0) {
      const std::string rest = line.substr(7);
      const auto sep = rest.find(": ");
      if (sep == std::string::npos) throw IoError("table parse: malformed meta line");
      t.add_meta(rest.substr(0, sep), rest.substr(sep + 2));
      continue;
    }
    if (line.rfind("# columns:", 0) == 0) {
      std::istringstream cols(line.substr(10));
      std::string tok;
      while (cols >> tok) {
        const auto open = tok.find('[');
        if (open == std::string::npos || tok.back() != ']')
          throw IoError("table parse: malformed column token '" + tok + "'");
        t.add_column(tok.substr(0, open), tok.substr(open + 1, tok.size() - open - 2));
      }
      have_columns = true;
      continue;
    }
    if (line.front() == '#') throw IoError("table parse: unrecognized header line");
    if (!have_columns) throw IoError("table parse: data before column header");
    std::istringstream row(line);
    std::vector<double> values;
    std::string tok;
    while (row >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw IoError("table parse: bad number '" + tok + "'");
      values.push_back(v);
    }
    t.add_row(values);
  }
  if (!have_columns) throw IoError("table parse: no column header");
  return t;
}

void ResultTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << emit();
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

ResultTable ResultTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace cf
