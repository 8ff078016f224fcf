#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mortgeo/common.hpp"

// Small dense linear algebra: enough for the 3x3 eigenproblems, the rank-1
// surface factorization and the constrained least-squares fits used here.
// Surfaces are desk scale (~100 x ~100), so plain O(n^3) routines are fine.

namespace mortgeo::linalg {

// Solves A x = b by LU decomposition with partial pivoting. A is consumed.
inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw structure_error("lu_solve: dimension mismatch");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double m = std::fabs(a(r, col));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      throw numeric_error("lu_solve: singular system");
    }
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    const double d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / d;
      if (f == 0.0) continue;
      a(r, col) = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a(ri, c) * x[c];
    x[ri] = s / a(ri, ri);
  }
  return x;
}

struct Sym3Eigen {
  std::array<double, 3> values{};                   // ascending
  std::array<std::array<double, 3>, 3> vectors{};   // vectors[k] pairs with values[k]
};

// Eigendecomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
inline Sym3Eigen sym3_eigen(const std::array<std::array<double, 3>, 3>& m) {
  double a[3][3];
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
    if (off == 0.0) break;
    static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
      const int p = pr[0], q = pr[1];
      if (a[p][q] == 0.0) continue;
      const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
      double t = (theta >= 0 ? 1.0 : -1.0) /
                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      const double apq = a[p][q];
      const double app = a[p][p], aqq = a[q][q];
      a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
      a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
      a[p][q] = a[q][p] = 0.0;
      for (int k = 0; k < 3; ++k) {
        if (k == p || k == q) continue;
        const double akp = a[k][p], akq = a[k][q];
        a[k][p] = a[p][k] = c * akp - s * akq;
        a[k][q] = a[q][k] = s * akp + c * akq;
      }
      for (int k = 0; k < 3; ++k) {
        const double vkp = v[k][p], vkq = v[k][q];
        v[k][p] = c * vkp - s * vkq;
        v[k][q] = s * vkp + c * vkq;
      }
    }
  }

  int order[3] = {0, 1, 2};
  double ev[3] = {a[0][0], a[1][1], a[2][2]};
  for (int i = 0; i < 2; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (ev[order[j]] < ev[order[i]]) std::swap(order[i], order[j]);

  Sym3Eigen out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = ev[order[k]];
    for (int r = 0; r < 3; ++r) out.vectors[k][r] = v[r][order[k]];
  }
  return out;
}

struct Rank1 {
  std::vector<double> u;  // length rows, unit
  double sigma = 0.0;
  std::vector<double> v;  // length cols, unit
};

// Leading singular triple of a dense matrix by power iteration on D'D.
// Deterministic start vector; converges fast when sigma1 dominates, which is
// the regime every caller here lives in.
inline Rank1 leading_singular_triple(const Matrix& d) {
  const std::size_t rows = d.rows(), cols = d.cols();
  if (rows == 0 || cols == 0) throw structure_error("leading_singular_triple: empty matrix");

  double fro2 = 0.0;
  for (double x : d.data()) fro2 += x * x;
  if (!(fro2 > 0.0)) throw numeric_error("leading_singular_triple: zero matrix");

  std::vector<double> v(cols), dv(rows), w(cols);
  for (std::size_t j = 0; j < cols; ++j) v[j] = 1.0 + 1e-3 * static_cast<double>(j);
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (double& x : v) x /= nv;

  double sigma2_prev = -1.0;
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += d(i, j) * v[j];
      dv[i] = s;
    }
    double sigma2 = 0.0;
    for (double x : dv) sigma2 += x * x;
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += d(i, j) * dv[i];
      w[j] = s;
    }
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (!(nw > 0.0)) break;  // v landed in the null space; sigma2 still valid
    for (std::size_t j = 0; j < cols; ++j) v[j] = w[j] / nw;
    if (sigma2_prev >= 0.0 && std::fabs(sigma2 - sigma2_prev) <= 1e-15 * sigma2) {
      sigma2_prev = sigma2;
      break;
    }
    sigma2_prev = sigma2;
  }

  Rank1 out;
  out.v = v;
  out.u.assign(rows, 0.0);
  double sigma = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += d(i, j) * v[j];
    out.u[i] = s;
    sigma += s * s;
  }
  sigma = std::sqrt(sigma);
  if (!(sigma > 0.0)) throw numeric_error("leading_singular_triple: degenerate spectrum");
  for (double& x : out.u) x /= sigma;
  out.sigma = sigma;
  return out;
}

inline double frobenius_norm2(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return s;
}

}  // namespace mortgeo::linalg
