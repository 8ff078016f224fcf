#pragma once

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace mortgeo {

// Error taxonomy. Input/format problems (parse, structure, data quality) map
// to CLI exit code 2; numeric/model failures map to exit code 3.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class structure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class data_quality_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return v_.empty(); }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

// Formats a double with enough digits to round-trip exactly through text.
inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::vector<std::string> split_csv(const std::string& line) {
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

inline double parse_double_field(const std::string& field, std::size_t line_no) {
  const char* s = field.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  while (end && *end == ' ') ++end;
  if (end == s || (end && *end != '\0')) {
    throw parse_error("line " + std::to_string(line_no) + ": not a number: '" + field + "'");
  }
  return v;
}

inline int parse_int_field(const std::string& field, std::size_t line_no) {
  const char* s = field.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || (end && *end != '\0')) {
    throw parse_error("line " + std::to_string(line_no) + ": not an integer: '" + field + "'");
  }
  return static_cast<int>(v);
}

}  // namespace mortgeo
