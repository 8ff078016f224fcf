#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mortgeo/common.hpp"
#include "mortgeo/hmd.hpp"

// The discrete log-mortality surface: z(i,j) = ln(rate) on a unit grid of
// calendar years (rows) by ages (columns). Cells whose rate was missing or
// zero are masked and imputed so the grid is complete.

namespace mortgeo {

struct YearRange {
  int lo = 0, hi = 0;  // inclusive
};

struct MortalitySurface {
  std::vector<int> years;  // strictly increasing, unit step
  std::vector<int> ages;   // strictly increasing, unit step
  Matrix z;                // rows = years, cols = ages
  std::vector<std::uint8_t> mask;  // row-major; 1 = imputed cell
  std::string series = "total";

  std::size_t year_count() const { return years.size(); }
  std::size_t age_count() const { return ages.size(); }
  bool masked(std::size_t i, std::size_t j) const {
    return !mask.empty() && mask[i * ages.size() + j] != 0;
  }
  std::size_t masked_count() const {
    std::size_t n = 0;
    for (auto m : mask) n += m;
    return n;
  }
  int cohort(std::size_t i, std::size_t j) const { return years[i] - ages[j]; }
};

namespace detail {

// Fills masked cells of one year row by linear interpolation over age;
// leading/trailing gaps copy the nearest valid value.
inline void impute_row(Matrix& z, const std::vector<std::uint8_t>& mask, std::size_t i,
                       std::size_t cols, int year) {
  std::vector<std::size_t> valid;
  for (std::size_t j = 0; j < cols; ++j) {
    if (!mask[i * cols + j]) valid.push_back(j);
  }
  if (valid.empty()) {
    throw data_quality_error("year " + std::to_string(year) + " has no usable rates");
  }
  for (std::size_t j = 0; j < valid.front(); ++j) z(i, j) = z(i, valid.front());
  for (std::size_t j = valid.back() + 1; j < cols; ++j) z(i, j) = z(i, valid.back());
  for (std::size_t k = 0; k + 1 < valid.size(); ++k) {
    const std::size_t a = valid[k], b = valid[k + 1];
    for (std::size_t j = a + 1; j < b; ++j) {
      const double w = static_cast<double>(j - a) / static_cast<double>(b - a);
      z(i, j) = (1.0 - w) * z(i, a) + w * z(i, b);
    }
  }
}

}  // namespace detail

inline MortalitySurface build_surface(const MortalityTable& table, SexSeries series,
                                      YearRange year_window, YearRange age_window,
                                      bool include_open_age = false) {
  if (year_window.lo > year_window.hi || age_window.lo > age_window.hi) {
    throw structure_error("empty window");
  }
  int age_hi = age_window.hi;
  if (table.open_age && age_hi >= *table.open_age && !include_open_age) {
    age_hi = *table.open_age - 1;
    if (age_hi < age_window.lo) throw structure_error("empty window after open-age exclusion");
  }
  if (year_window.lo < table.year_min || year_window.hi > table.year_max ||
      age_window.lo < table.age_min || age_hi > table.age_max) {
    throw structure_error("window outside table coverage");
  }

  MortalitySurface s;
  s.series = to_string(series);
  for (int y = year_window.lo; y <= year_window.hi; ++y) s.years.push_back(y);
  for (int a = age_window.lo; a <= age_hi; ++a) s.ages.push_back(a);
  const std::size_t rows = s.years.size(), cols = s.ages.size();
  s.z = Matrix(rows, cols, 0.0);
  s.mask.assign(rows * cols, 0);

  std::size_t masked = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const MortalityRow& row = table.at(s.years[i], s.ages[j]);
      std::optional<double> rate;
      switch (series) {
        case SexSeries::female: rate = row.female; break;
        case SexSeries::male: rate = row.male; break;
        case SexSeries::total: rate = row.total; break;
      }
      if (!rate || *rate <= 0.0 || !std::isfinite(std::log(*rate))) {
        s.mask[i * cols + j] = 1;
        ++masked;
      } else {
        s.z(i, j) = std::log(*rate);
      }
    }
  }

  if (masked * 5 > rows * cols) {
    throw data_quality_error("window has " + std::to_string(masked) + " of " +
                             std::to_string(rows * cols) + " cells masked (> 20%)");
  }
  if (masked > 0) {
    for (std::size_t i = 0; i < rows; ++i) detail::impute_row(s.z, s.mask, i, cols, s.years[i]);
  }
  return s;
}

// Surface CSV: `# years=A..B ages=C..D series=NAME`, an age-labelled header
// row, then one `year,z,...` row per year at full round-trip precision.
inline void write_surface_csv(const MortalitySurface& s, std::ostream& out) {
  out << "# years=" << s.years.front() << ".." << s.years.back() << " ages=" << s.ages.front()
      << ".." << s.ages.back() << " series=" << s.series << "\n";
  out << "year";
  for (int a : s.ages) out << "," << a;
  out << "\n";
  for (std::size_t i = 0; i < s.year_count(); ++i) {
    out << s.years[i];
    for (std::size_t j = 0; j < s.age_count(); ++j) out << "," << format_exact(s.z(i, j));
    out << "\n";
  }
}

inline MortalitySurface read_surface_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw parse_error("empty surface file");
  ++line_no;
  int y0 = 0, y1 = 0, a0 = 0, a1 = 0;
  char series_buf[64] = {0};
  if (std::sscanf(line.c_str(), "# years=%d..%d ages=%d..%d series=%63s", &y0, &y1, &a0, &a1,
                  series_buf) != 5) {
    throw parse_error("line 1: malformed surface header");
  }
  if (y1 < y0 || a1 < a0) throw parse_error("line 1: empty ranges in surface header");

  MortalitySurface s;
  s.series = series_buf;
  for (int y = y0; y <= y1; ++y) s.years.push_back(y);
  for (int a = a0; a <= a1; ++a) s.ages.push_back(a);
  const std::size_t rows = s.years.size(), cols = s.ages.size();
  s.z = Matrix(rows, cols, 0.0);

  if (!std::getline(in, line)) throw parse_error("missing column header row");
  ++line_no;
  auto head = split_csv(line);
  if (head.size() != cols + 1 || head[0] != "year") {
    throw parse_error("line 2: column header does not match declared ages");
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (parse_int_field(head[j + 1], line_no) != s.ages[j]) {
      throw parse_error("line 2: column header does not match declared ages");
    }
  }

  std::size_t i = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (i >= rows) throw parse_error("line " + std::to_string(line_no) + ": more rows than header declares");
    auto fields = split_csv(line);
    if (fields.size() != cols + 1) {
      throw parse_error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols + 1) + " fields, got " + std::to_string(fields.size()));
    }
    if (parse_int_field(fields[0], line_no) != s.years[i]) {
      throw parse_error("line " + std::to_string(line_no) + ": unexpected year");
    }
    for (std::size_t j = 0; j < cols; ++j) s.z(i, j) = parse_double_field(fields[j + 1], line_no);
    ++i;
  }
  if (i != rows) throw parse_error("body has " + std::to_string(i) + " rows, header declares " +
                                   std::to_string(rows));
  return s;
}

}  // namespace mortgeo
