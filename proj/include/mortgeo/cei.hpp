#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mortgeo/geometry.hpp"

// The cohort effect index: per birth year m, the sum over grid points on the
// cohort diagonal (year - age = m) of |NC1 - NC2|, i.e. how differently the
// surface bends along versus across the cohort direction. The mean variant
// divides by the diagonal's point count, removing the mechanical size effect
// of short diagonals.

namespace mortgeo {

enum class CeiVariant { sum, mean };

struct TruncationPolicy {
  int min_support = 30;
  std::optional<int> max_birth_year;
};

struct RemovedCohort {
  int cohort = 0;
  double cei = 0.0;
  int support = 0;
};

struct TruncationRecord {
  bool applied = false;
  TruncationPolicy policy{};
  std::vector<RemovedCohort> removed;  // ascending by cohort
};

struct CeiSeries {
  std::vector<int> cohorts;  // strictly increasing birth years
  std::vector<double> cei;
  std::vector<int> support;
  CeiVariant variant = CeiVariant::sum;
  TruncationRecord truncation;

  std::optional<double> value_for(int cohort) const {
    auto it = std::lower_bound(cohorts.begin(), cohorts.end(), cohort);
    if (it == cohorts.end() || *it != cohort) return std::nullopt;
    return cei[static_cast<std::size_t>(it - cohorts.begin())];
  }
};

namespace detail {

inline CeiSeries accumulate_cei(const CurvatureField& f, CeiVariant variant) {
  if (f.years.empty() || f.ages.empty()) throw structure_error("cei_series: empty field");
  const int m_lo = f.years.front() - f.ages.back();
  const int m_hi = f.years.back() - f.ages.front();

  CeiSeries s;
  s.variant = variant;
  s.cohorts.resize(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (std::size_t k = 0; k < s.cohorts.size(); ++k) s.cohorts[k] = m_lo + static_cast<int>(k);
  s.cei.assign(s.cohorts.size(), 0.0);
  s.support.assign(s.cohorts.size(), 0);

  for (std::size_t i = 0; i < f.year_count(); ++i) {
    for (std::size_t j = 0; j < f.age_count(); ++j) {
      const std::size_t k = static_cast<std::size_t>(f.cohort(i, j) - m_lo);
      s.cei[k] += std::fabs(f.nc[0](i, j) - f.nc[1](i, j));
      s.support[k] += 1;
    }
  }
  if (variant == CeiVariant::mean) {
    std::size_t w = 0;
    for (std::size_t k = 0; k < s.cohorts.size(); ++k) {
      if (s.support[k] == 0) continue;  // zero-support cohorts are omitted
      s.cohorts[w] = s.cohorts[k];
      s.cei[w] = s.cei[k] / s.support[k];
      s.support[w] = s.support[k];
      ++w;
    }
    s.cohorts.resize(w);
    s.cei.resize(w);
    s.support.resize(w);
  }
  return s;
}

}  // namespace detail

inline CeiSeries cei_series(const CurvatureField& f) {
  return detail::accumulate_cei(f, CeiVariant::sum);
}

inline CeiSeries cei_mean_series(const CurvatureField& f) {
  return detail::accumulate_cei(f, CeiVariant::mean);
}

// Drops cohorts with too few observations and cohorts born after the cutoff;
// both removals are recorded so exports can flag them.
inline CeiSeries truncate_series(const CeiSeries& in, const TruncationPolicy& policy) {
  CeiSeries out;
  out.variant = in.variant;
  out.truncation.applied = true;
  out.truncation.policy = policy;
  for (std::size_t k = 0; k < in.cohorts.size(); ++k) {
    const bool keep = in.support[k] >= policy.min_support &&
                      (!policy.max_birth_year || in.cohorts[k] <= *policy.max_birth_year);
    if (keep) {
      out.cohorts.push_back(in.cohorts[k]);
      out.cei.push_back(in.cei[k]);
      out.support.push_back(in.support[k]);
    } else {
      out.truncation.removed.push_back({in.cohorts[k], in.cei[k], in.support[k]});
    }
  }
  if (out.cohorts.empty()) throw structure_error("truncation removed every cohort");
  return out;
}

inline TruncationPolicy default_truncation_policy(const CeiSeries& s) {
  // Keep cohorts observed for at least 40 years: birth year <= last data year - 40.
  TruncationPolicy p;
  p.max_birth_year = s.cohorts.empty() ? 0 : s.cohorts.back() - 40;
  return p;
}

struct Plateau {
  int start_year = 0;
  int end_year = 0;
  double mean_cei = 0.0;
};

// Maximal runs of >= window consecutive cohorts whose index strictly exceeds
// the series' given quantile. A constant series therefore reports nothing.
inline std::vector<Plateau> detect_plateaus(const CeiSeries& s, int window, double quantile) {
  if (window < 1) throw structure_error("detect_plateaus: window must be >= 1");
  if (!(quantile > 0.0 && quantile < 1.0)) throw structure_error("detect_plateaus: quantile in (0,1)");
  std::vector<Plateau> out;
  if (s.cohorts.empty()) return out;

  std::vector<double> sorted = s.cei;
  std::sort(sorted.begin(), sorted.end());
  const double pos = quantile * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double threshold = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

  std::size_t run_start = 0;
  bool in_run = false;
  auto flush = [&](std::size_t end) {
    const std::size_t len = end - run_start;
    if (static_cast<int>(len) >= window) {
      double mean = 0.0;
      for (std::size_t k = run_start; k < end; ++k) mean += s.cei[k];
      out.push_back({s.cohorts[run_start], s.cohorts[end - 1], mean / static_cast<double>(len)});
    }
  };
  for (std::size_t k = 0; k < s.cohorts.size(); ++k) {
    const bool above = s.cei[k] > threshold;
    const bool contiguous = in_run && k > 0 && s.cohorts[k] == s.cohorts[k - 1] + 1;
    if (above && in_run && contiguous) continue;
    if (in_run) flush(k);
    in_run = above;
    run_start = k;
  }
  if (in_run) flush(s.cohorts.size());
  return out;
}

// birth_year,cei,support,truncated_flag; removed cohorts are interleaved in
// cohort order with flag 1.
inline void write_cei_csv(const CeiSeries& s, std::ostream& out) {
  out << "birth_year,cei,support,truncated_flag\n";
  std::size_t k = 0, r = 0;
  const auto& rem = s.truncation.removed;
  while (k < s.cohorts.size() || r < rem.size()) {
    const bool take_removed =
        r < rem.size() && (k >= s.cohorts.size() || rem[r].cohort < s.cohorts[k]);
    if (take_removed) {
      out << rem[r].cohort << "," << format_exact(rem[r].cei) << "," << rem[r].support << ",1\n";
      ++r;
    } else {
      out << s.cohorts[k] << "," << format_exact(s.cei[k]) << "," << s.support[k] << ",0\n";
      ++k;
    }
  }
}

inline void write_plateau_report(const std::vector<Plateau>& plateaus, std::ostream& out) {
  out << "start_year  end_year  mean_cei\n";
  for (const Plateau& p : plateaus) {
    out << p.start_year << "  " << p.end_year << "  " << format_exact(p.mean_cei) << "\n";
  }
}

// Analytic surface with caller-supplied first and second derivatives, used to
// integrate the smooth index along a cohort line as a reference value.
struct SmoothSurface {
  std::function<double(double, double)> f, ft, fx, ftt, ftx, fxx;
};

// Integral of |NC_T - NC_N| along the line (t0+u, x0+u) for u in [a, b],
// with NC_T / NC_N the normal curvatures of the graph z = f(t, x) along the
// line's tangent and its in-surface orthogonal direction. Arc length is the
// integration measure; nodes are uniform in u with composite trapezoid.
inline double smooth_cei_oracle(const SmoothSurface& s, double t0, double x0, double a, double b,
                                int steps) {
  if (steps < 2) throw structure_error("smooth_cei_oracle: steps must be >= 2");

  auto integrand = [&](double u) {
    const double t = t0 + u, x = x0 + u;
    const double ft = s.ft(t, x), fx = s.fx(t, x);
    const double ftt = s.ftt(t, x), ftx = s.ftx(t, x), fxx = s.fxx(t, x);
    const double e = 1.0 + ft * ft, ff = ft * fx, g = 1.0 + fx * fx;
    const double w = std::sqrt(1.0 + ft * ft + fx * fx);
    const double ll = ftt / w, mm = ftx / w, nn = fxx / w;
    auto kappa = [&](double dt, double dx) {
      return (ll * dt * dt + 2.0 * mm * dt * dx + nn * dx * dx) /
             (e * dt * dt + 2.0 * ff * dt * dx + g * dx * dx);
    };
    const double k_t = kappa(1.0, 1.0);
    const double k_n = kappa(ff + g, -(e + ff));
    const double speed = std::sqrt(2.0 + (ft + fx) * (ft + fx));
    const double v = std::fabs(k_t - k_n) * speed;
    if (!std::isfinite(v)) throw numeric_error("smooth_cei_oracle: non-finite integrand");
    return v;
  };

  const double h = (b - a) / static_cast<double>(steps);
  double sum = 0.5 * (integrand(a) + integrand(b));
  for (int k = 1; k < steps; ++k) sum += integrand(a + h * static_cast<double>(k));
  return sum * h;
}

}  // namespace mortgeo
