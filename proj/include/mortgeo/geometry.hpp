#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "mortgeo/linalg.hpp"
#include "mortgeo/surface.hpp"

// Discrete differential geometry on the mortality surface. Each grid point
// gets four 3-point neighborhood curves (cohort diagonal, anti-diagonal,
// period, age), a least-squares tangent and curvature vector per curve, a
// unit normal estimated from the four tangents, and the four directional
// normal curvatures NC_k = N . CV_k.

namespace mortgeo {

struct Vec3 {
  double t = 0.0, x = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {t + o.t, x + o.x, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {t - o.t, x - o.x, z - o.z}; }
  Vec3 operator*(double s) const { return {t * s, x * s, z * s}; }
  double dot(const Vec3& o) const { return t * o.t + x * o.x + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(t) && std::isfinite(x) && std::isfinite(z); }

  Vec3 normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw numeric_error("cannot normalize zero vector");
    return {t / n, x / n, z / n};
  }
};

// Ordered 3-point discrete curve centered at p1.
struct Curve3 {
  Vec3 p0, p1, p2;
};

struct DiscreteParams {
  double s0 = 0.0, s1 = 0.0, s2 = 1.0;
};

// Chord-length parameters: s0 = 0, s1 = |p1-p0| / (|p1-p0| + |p2-p1|), s2 = 1.
inline DiscreteParams discrete_parameters(const Curve3& c) {
  const double d01 = (c.p1 - c.p0).norm();
  const double d12 = (c.p2 - c.p1).norm();
  if (!(d01 > 0.0) || !(d12 > 0.0) || !std::isfinite(d01) || !std::isfinite(d12)) {
    throw numeric_error("degenerate curve: zero segment length");
  }
  return {0.0, d01 / (d01 + d12), 1.0};
}

// Least-squares tangent at the middle point: the best line through p1 fitted
// to p0 and p2 under the chord-length parameters,
//   T = [ (s0-s1)(p0-p1) + (s2-s1)(p2-p1) ] / [ (s0-s1)^2 + (s2-s1)^2 ].
inline Vec3 tangent_mid(const Curve3& c) {
  const DiscreteParams s = discrete_parameters(c);
  const double a = s.s0 - s.s1, b = s.s2 - s.s1;
  const double denom = a * a + b * b;
  return ((c.p0 - c.p1) * a + (c.p2 - c.p1) * b) * (1.0 / denom);
}

enum class CurveEnd { start, end };

// One-sided difference quotient at an endpoint of the curve.
inline Vec3 tangent_endpoint(const Curve3& c, CurveEnd which) {
  const DiscreteParams s = discrete_parameters(c);
  if (which == CurveEnd::start) return (c.p1 - c.p0) * (1.0 / (s.s1 - s.s0));
  return (c.p2 - c.p1) * (1.0 / (s.s2 - s.s1));
}

// Curvature vector CV = V'(s1) / |l'(s1)| where V is the unit tangent field
// and l' the (unnormalized) mid-point tangent. The endpoint chords carry the
// unit tangent of the segment midpoints, so V' is the least-squares slope of
// the three unit tangents placed at (s0+s1)/2, s1, (s1+s2)/2. Placing them at
// s0 and s2 instead halves the recovered curvature of smooth curves.
inline Vec3 curvature_vector(const Curve3& c) {
  const DiscreteParams s = discrete_parameters(c);
  const Vec3 lprime = tangent_mid(c);
  const double speed = lprime.norm();
  if (!(speed > 0.0)) throw numeric_error("zero-length tangent");

  const Vec3 u0 = (c.p1 - c.p0).normalized();
  const Vec3 u1 = lprime * (1.0 / speed);
  const Vec3 u2 = (c.p2 - c.p1).normalized();

  const double q0 = 0.5 * (s.s0 - s.s1);
  const double q2 = 0.5 * (s.s2 - s.s1);
  const double denom = q0 * q0 + q2 * q2;
  const Vec3 vprime = ((u0 - u1) * q0 + (u2 - u1) * q2) * (1.0 / denom);
  return vprime * (1.0 / speed);
}

struct NormalEstimate {
  Vec3 n;
  double residual = 0.0;
  bool degenerate = false;
};

// Unit normal minimizing f(N) = sum_k |N . V_k|^2 subject to |N| = 1: the
// eigenvector of M = sum_k V_k V_k' for its smallest eigenvalue. Sign is fixed
// so z >= 0 (ties: t >= 0, then x >= 0). Flagged degenerate when the two
// smallest eigenvalues are within 1e-9 of each other.
inline NormalEstimate estimate_normal(const std::array<Vec3, 4>& tangents) {
  std::array<std::array<double, 3>, 3> m{};
  for (const Vec3& v : tangents) {
    if (!v.finite()) throw numeric_error("estimate_normal: non-finite tangent");
    const double c[3] = {v.t, v.x, v.z};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += c[i] * c[j];
  }
  const linalg::Sym3Eigen eig = linalg::sym3_eigen(m);

  NormalEstimate out;
  out.n = Vec3{eig.vectors[0][0], eig.vectors[0][1], eig.vectors[0][2]}.normalized();
  out.residual = eig.values[0] < 0.0 ? 0.0 : eig.values[0];
  out.degenerate = (eig.values[1] - eig.values[0]) < 1e-9;

  bool flip = false;
  if (out.n.z < 0.0) flip = true;
  else if (out.n.z == 0.0 && out.n.t < 0.0) flip = true;
  else if (out.n.z == 0.0 && out.n.t == 0.0 && out.n.x < 0.0) flip = true;
  if (flip) out.n = out.n * -1.0;
  return out;
}

inline double normal_curvature(const Vec3& n, const Vec3& cv) { return n.dot(cv); }

enum class Padding { zero, none };

// Scale factors applied to the (year, age, log-rate) axes before any
// geometry. Defaults keep natural units: 1 year = 1 age step = 1.
struct AxisScale {
  double t = 1.0, x = 1.0, z = 1.0;
};

struct FieldOptions {
  Padding padding = Padding::zero;
  bool skew_l4 = false;   // l4 = {p(i,j+1), p(i,j), p(i+1,j-1)} instead of the age transect
  AxisScale scale{};
};

namespace detail {

struct Embedding {
  const MortalitySurface& s;
  AxisScale scale;

  // Grid coordinates extrapolate past the surface; z is 0 on ghost cells.
  Vec3 point(long i, long j) const {
    const long rows = static_cast<long>(s.year_count());
    const long cols = static_cast<long>(s.age_count());
    const double zv = (i >= 0 && i < rows && j >= 0 && j < cols)
                          ? s.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j))
                          : 0.0;
    return {(s.years.front() + static_cast<double>(i)) * scale.t,
            (s.ages.front() + static_cast<double>(j)) * scale.x, zv * scale.z};
  }
};

inline std::array<Curve3, 4> curves_at(const Embedding& e, long i, long j, bool skew_l4) {
  const auto p = [&](long a, long b) { return e.point(a, b); };
  const Curve3 l1{p(i - 1, j - 1), p(i, j), p(i + 1, j + 1)};
  const Curve3 l2{p(i - 1, j + 1), p(i, j), p(i + 1, j - 1)};
  const Curve3 l3{p(i - 1, j), p(i, j), p(i + 1, j)};
  const Curve3 l4 = skew_l4 ? Curve3{p(i, j + 1), p(i, j), p(i + 1, j - 1)}
                             : Curve3{p(i, j - 1), p(i, j), p(i, j + 1)};
  return {l1, l2, l3, l4};
}

}  // namespace detail

// The four neighborhood curves through grid point (i, j): cohort diagonal,
// anti-diagonal, period transect, age transect. Boundary points require
// zero padding.
inline std::array<Curve3, 4> neighborhood_curves(const MortalitySurface& s, long i, long j,
                                                 const FieldOptions& opt = {}) {
  const long rows = static_cast<long>(s.year_count());
  const long cols = static_cast<long>(s.age_count());
  if (opt.padding == Padding::none) {
    if (i < 1 || i > rows - 2 || j < 1 || j > cols - 2) {
      throw std::out_of_range("neighborhood_curves: boundary point without padding");
    }
  } else if (i < 0 || i > rows - 1 || j < 0 || j > cols - 1) {
    throw std::out_of_range("neighborhood_curves: index outside grid");
  }
  return detail::curves_at(detail::Embedding{s, opt.scale}, i, j, opt.skew_l4);
}

struct TangentFrame {
  std::array<Vec3, 4> tangent;    // unit tangents V1..V4
  std::array<Vec3, 4> curvature;  // curvature vectors CV1..CV4
  Vec3 normal;
  double residual = 0.0;
  bool degenerate = false;
};

struct CurvatureField {
  std::vector<int> years;  // covered grid points
  std::vector<int> ages;
  std::array<Matrix, 4> nc;          // NC1..NC4 over covered points
  std::vector<TangentFrame> frames;  // row-major frame store for diagnostics

  std::size_t year_count() const { return years.size(); }
  std::size_t age_count() const { return ages.size(); }
  const TangentFrame& frame(std::size_t i, std::size_t j) const { return frames[i * ages.size() + j]; }
  int cohort(std::size_t i, std::size_t j) const { return years[i] - ages[j]; }
};

inline TangentFrame frame_from_curves(const std::array<Curve3, 4>& curves) {
  TangentFrame f;
  for (int k = 0; k < 4; ++k) {
    f.tangent[k] = tangent_mid(curves[k]).normalized();
    f.curvature[k] = curvature_vector(curves[k]);
  }
  const NormalEstimate n = estimate_normal(f.tangent);
  f.normal = n.n;
  f.residual = n.residual;
  f.degenerate = n.degenerate;
  return f;
}

// Evaluates the frame and the four normal curvatures at every covered point.
// With zero padding the field covers the whole grid (ghost cells carry z = 0
// so the output keeps the input's size); without padding only the interior.
inline CurvatureField curvature_field(const MortalitySurface& s, const FieldOptions& opt = {}) {
  const long rows = static_cast<long>(s.year_count());
  const long cols = static_cast<long>(s.age_count());
  if (rows < 3 || cols < 3) throw structure_error("curvature_field: surface smaller than 3x3");

  const long lo = (opt.padding == Padding::zero) ? 0 : 1;
  const long i_hi = (opt.padding == Padding::zero) ? rows - 1 : rows - 2;
  const long j_hi = (opt.padding == Padding::zero) ? cols - 1 : cols - 2;

  CurvatureField f;
  for (long i = lo; i <= i_hi; ++i) f.years.push_back(s.years[static_cast<std::size_t>(i)]);
  for (long j = lo; j <= j_hi; ++j) f.ages.push_back(s.ages[static_cast<std::size_t>(j)]);
  const std::size_t fr = f.years.size(), fc = f.ages.size();
  for (auto& m : f.nc) m = Matrix(fr, fc, 0.0);
  f.frames.resize(fr * fc);

  const detail::Embedding emb{s, opt.scale};
  for (long i = lo; i <= i_hi; ++i) {
    for (long j = lo; j <= j_hi; ++j) {
      TangentFrame frame = frame_from_curves(detail::curves_at(emb, i, j, opt.skew_l4));
      const std::size_t fi = static_cast<std::size_t>(i - lo);
      const std::size_t fj = static_cast<std::size_t>(j - lo);
      for (int k = 0; k < 4; ++k) {
        const double nc = normal_curvature(frame.normal, frame.curvature[k]);
        if (!std::isfinite(nc)) {
          throw numeric_error("curvature_field: non-finite curvature at year " +
                              std::to_string(f.years[fi]) + ", age " + std::to_string(f.ages[fj]));
        }
        f.nc[k](fi, fj) = nc;
      }
      f.frames[fi * fc + fj] = frame;
    }
  }
  return f;
}

// One row per covered point: year,age,nc1,nc2,nc3,nc4,residual,degenerate_flag
inline void write_field_csv(const CurvatureField& f, std::ostream& out) {
  out << "year,age,nc1,nc2,nc3,nc4,residual,degenerate_flag\n";
  for (std::size_t i = 0; i < f.year_count(); ++i) {
    for (std::size_t j = 0; j < f.age_count(); ++j) {
      out << f.years[i] << "," << f.ages[j];
      for (int k = 0; k < 4; ++k) out << "," << format_exact(f.nc[k](i, j));
      const TangentFrame& fr = f.frame(i, j);
      out << "," << format_exact(fr.residual) << "," << (fr.degenerate ? 1 : 0) << "\n";
    }
  }
}

}  // namespace mortgeo
