#pragma once

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mortgeo/common.hpp"

// Reader for Human Mortality Database period death-rate files (Mx, 1x1
// layout): header lines, then whitespace-delimited columns
// Year Age Female Male Total. "." marks a missing rate and the final age
// group may be open ("110+").

namespace mortgeo {

struct MortalityRow {
  int year = 0;
  int age = 0;
  std::optional<double> female;
  std::optional<double> male;
  std::optional<double> total;
};

struct MortalityTable {
  std::vector<MortalityRow> rows;  // year-major, age-minor
  int year_min = 0, year_max = 0;
  int age_min = 0, age_max = 0;
  std::optional<int> open_age;  // set when the last group was "NNN+"

  std::size_t year_count() const { return static_cast<std::size_t>(year_max - year_min + 1); }
  std::size_t age_count() const { return static_cast<std::size_t>(age_max - age_min + 1); }

  const MortalityRow& at(int year, int age) const {
    const std::size_t i = static_cast<std::size_t>(year - year_min) * age_count() +
                          static_cast<std::size_t>(age - age_min);
    return rows[i];
  }
};

enum class SexSeries { female, male, total };

inline const char* to_string(SexSeries s) {
  switch (s) {
    case SexSeries::female: return "female";
    case SexSeries::male: return "male";
    default: return "total";
  }
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::optional<double> parse_rate(const std::string& tok, std::size_t line_no) {
  if (tok == ".") return std::nullopt;
  double v = parse_double_field(tok, line_no);
  if (v < 0.0) {
    throw parse_error("line " + std::to_string(line_no) + ": negative rate '" + tok + "'");
  }
  return v;
}

}  // namespace detail

inline MortalityTable parse_hmd_mx(std::istream& in) {
  MortalityTable table;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::optional<int> open_age;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!seen_header) {
      if (toks.size() >= 2 && toks[0] == "Year" && toks[1] == "Age") {
        seen_header = true;
        continue;
      }
      // Preamble line (country name, modification date). Data may also start
      // directly; a leading integer year means this is already a record.
      if (std::isdigit(static_cast<unsigned char>(toks[0][0])) && toks.size() == 5) {
        seen_header = true;
      } else {
        continue;
      }
    }
    if (toks.size() != 5) {
      throw parse_error("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                        std::to_string(toks.size()));
    }
    MortalityRow row;
    row.year = parse_int_field(toks[0], line_no);
    std::string age_tok = toks[1];
    if (!age_tok.empty() && age_tok.back() == '+') {
      age_tok.pop_back();
      row.age = parse_int_field(age_tok, line_no);
      if (open_age && *open_age != row.age) {
        throw structure_error("line " + std::to_string(line_no) + ": inconsistent open age group");
      }
      open_age = row.age;
    } else {
      row.age = parse_int_field(age_tok, line_no);
    }
    row.female = detail::parse_rate(toks[2], line_no);
    row.male = detail::parse_rate(toks[3], line_no);
    row.total = detail::parse_rate(toks[4], line_no);
    table.rows.push_back(row);
  }

  if (table.rows.empty()) {
    throw structure_error("no data rows found");
  }

  table.year_min = table.rows.front().year;
  table.year_max = table.rows.back().year;
  table.age_min = table.rows.front().age;
  table.age_max = table.rows.back().age;
  table.open_age = open_age;

  // Coverage must be a full rectangle: contiguous years, and for each year a
  // contiguous age run starting at the same minimum.
  if (table.age_min != 0) {
    throw structure_error("age coverage does not start at 0");
  }
  const std::size_t ages_per_year = table.age_count();
  if (table.rows.size() != table.year_count() * ages_per_year) {
    throw structure_error("year/age coverage is not rectangular");
  }
  std::size_t idx = 0;
  for (int y = table.year_min; y <= table.year_max; ++y) {
    for (int a = table.age_min; a <= table.age_max; ++a, ++idx) {
      if (table.rows[idx].year != y || table.rows[idx].age != a) {
        throw structure_error("non-contiguous year/age coverage near year " + std::to_string(y) +
                              ", age " + std::to_string(a));
      }
    }
  }
  return table;
}

}  // namespace mortgeo
