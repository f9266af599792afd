#include "epkg/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "epkg/errors.hpp"

namespace epkg {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw InvalidArgument("bad number '" + s + "' on line " + std::to_string(line));
  return v;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

NormSeries::NormSeries(std::vector<std::string> columns) : names_(std::move(columns)), data_(names_.size()) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty() || names_[i] == "t" || names_[i].find(',') != std::string::npos)
      throw InvalidArgument("invalid column name '" + names_[i] + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (names_[j] == names_[i]) throw InvalidArgument("duplicate column '" + names_[i] + "'");
  }
}

void NormSeries::add_row(double t, const std::vector<double>& values) {
  if (values.size() != names_.size()) throw InvalidArgument("row width does not match the columns");
  if (!std::isfinite(t)) throw InvalidArgument("non-finite time");
  if (!times_.empty() && !(t > times_.back())) throw InvalidArgument("times must strictly increase");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw InvalidArgument("non-finite value in column " + names_[i]);
  times_.push_back(t);
  for (std::size_t i = 0; i < values.size(); ++i) data_[i].push_back(values[i]);
}

bool NormSeries::has_column(const std::string& name) const {
  for (const auto& n : names_)
    if (n == name) return true;
  return false;
}

const std::vector<double>& NormSeries::column(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return data_[i];
  throw InvalidArgument("unknown column '" + name + "'");
}

std::string NormSeries::to_csv() const {
  std::string out = "t";
  for (const auto& n : names_) out += "," + n;
  out += "\n";
  for (std::size_t r = 0; r < times_.size(); ++r) {
    append_double(out, times_[r]);
    for (const auto& col : data_) {
      out += ",";
      append_double(out, col[r]);
    }
    out += "\n";
  }
  return out;
}

void NormSeries::write_csv(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << to_csv();
  if (!os) throw Error("write failed for " + path);
}

NormSeries NormSeries::parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty CSV");
  auto header = split_commas(line);
  if (header.empty() || header[0] != "t") throw InvalidArgument("CSV header must start with 't'");
  NormSeries s(std::vector<std::string>(header.begin() + 1, header.end()));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) throw InvalidArgument("wrong field count on line " + std::to_string(lineno));
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i], lineno));
    s.add_row(parse_double(cells[0], lineno), row);
  }
  return s;
}

NormSeries NormSeries::read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace epkg
