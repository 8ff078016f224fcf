#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mortgeo/mortgeo.hpp"

// Shared test utilities. The eigen solver and the scalar minimizer here are
// deliberately independent of the library implementations they check.

namespace testutil {

// Smallest eigenpair of a symmetric 3x3 matrix via the trigonometric solution
// of the characteristic polynomial, eigenvector from row cross products.
struct SmallestEig {
  double value = 0.0;
  std::array<double, 3> vector{};
};

inline SmallestEig charpoly_smallest(const std::array<std::array<double, 3>, 3>& m) {
  SmallestEig out;
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  double lambda;
  if (p1 == 0.0) {
    lambda = std::min({m[0][0], m[1][1], m[2][2]});
  } else {
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    std::array<std::array<double, 3>, 3> b{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
    double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                  b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                  b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = detb / 2.0;
    r = std::max(-1.0, std::min(1.0, r));
    const double phi = std::acos(r) / 3.0;
    // eigenvalues q + 2p cos(phi + 2k pi/3); k = 1 gives the smallest
    lambda = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  }
  out.value = lambda;

  std::array<std::array<double, 3>, 3> a = m;
  for (int i = 0; i < 3; ++i) a[i][i] -= lambda;
  auto cross = [](const double* u, const double* v) {
    return std::array<double, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                 u[0] * v[1] - u[1] * v[0]};
  };
  const std::array<std::array<double, 3>, 3> cand = {
      cross(a[0].data(), a[1].data()), cross(a[0].data(), a[2].data()),
      cross(a[1].data(), a[2].data())};
  double best = -1.0;
  for (const auto& c : cand) {
    const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    if (n > best) {
      best = n;
      out.vector = c;
    }
  }
  if (best > 0.0) {
    for (double& v : out.vector) v /= best;
  }
  return out;
}

inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 int iters = 200) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline mortgeo::Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    mortgeo::Vec3 v{g(rng), g(rng), g(rng)};
    const double n = v.norm();
    if (n > 1e-6) return v * (1.0 / n);
  }
}

// Surface with z = fn(year, age) over inclusive integer ranges.
inline mortgeo::MortalitySurface make_surface(int y0, int y1, int a0, int a1,
                                              const std::function<double(int, int)>& fn) {
  mortgeo::MortalitySurface s;
  for (int y = y0; y <= y1; ++y) s.years.push_back(y);
  for (int a = a0; a <= a1; ++a) s.ages.push_back(a);
  s.z = mortgeo::Matrix(s.years.size(), s.ages.size());
  for (std::size_t i = 0; i < s.years.size(); ++i) {
    for (std::size_t j = 0; j < s.ages.size(); ++j) s.z(i, j) = fn(s.years[i], s.ages[j]);
  }
  return s;
}

// HMD-layout text with the given per-cell total rate; female/male filled with
// shifted copies. rate <= 0 emits ".".
inline std::string make_hmd_text(int y0, int y1, int a1,
                                 const std::function<double(int, int)>& total_rate,
                                 bool open_final_age = false) {
  std::ostringstream out;
  out << "Testland, Death rates (period 1x1),  Last modified: 01 Jan 2020\n\n";
  out << "  Year          Age             Female            Male           Total\n";
  for (int y = y0; y <= y1; ++y) {
    for (int a = 0; a <= a1; ++a) {
      const double r = total_rate(y, a);
      out << "  " << y << "    " << a;
      if (open_final_age && a == a1) out << "+";
      for (double f : {r * 0.9, r * 1.1, r}) {
        if (f > 0.0) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.6f", f);
          out << "    " << buf;
        } else {
          out << "    .";
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace testutil
