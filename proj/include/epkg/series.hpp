#pragma once

#include <string>
#include <vector>

namespace epkg {

/// Time-indexed table of named norms. Times strictly increase and every entry is finite.
class NormSeries {
 public:
  NormSeries() = default;
  explicit NormSeries(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return names_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }

  /// Throws InvalidArgument if t does not increase, the row has the wrong width,
  /// or a value is not finite.
  void add_row(double t, const std::vector<double>& values);
  /// Throws InvalidArgument for an unknown column.
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;

  /// Header `t,<columns...>`, values with 17 significant digits.
  void write_csv(const std::string& path) const;
  std::string to_csv() const;
  static NormSeries read_csv(const std::string& path);
  static NormSeries parse_csv(const std::string& text);

 private:
  std::vector<std::string> names_;
  std::vector<double> times_;
  std::vector<std::vector<double>> data_;  // one vector per column
};

}  // namespace epkg
