#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "mortgeo/linalg.hpp"
#include "mortgeo/surface.hpp"

// Classical Lee-Carter: ln mu_x(t) = alpha_x + beta_x * k_t + eps. alpha is
// the time-averaged age profile; (beta, k) come from the best rank-1
// approximation of the demeaned log surface, normalized to sum(beta) = 1 and
// sum(k) = 0. Forecasting extrapolates k by a random walk with drift.

namespace mortgeo {

struct LeeCarterFit {
  std::vector<int> years;
  std::vector<int> ages;
  std::vector<double> alpha;  // per age
  std::vector<double> beta;   // per age, sums to 1
  std::vector<double> k;      // per year, sums to 0
  Matrix residuals;           // years x ages
  double sigma2 = 0.0;
  double explained_ratio = 0.0;

  double fitted(std::size_t i, std::size_t j) const { return alpha[j] + beta[j] * k[i]; }
};

struct Forecast {
  std::string model_tag;      // "lc", "mlc" or "apc"
  int horizon = 0;
  std::vector<int> years;     // T+1 .. T+horizon
  std::vector<int> ages;
  std::vector<double> k_path; // extrapolated period index per future year
  double drift = 0.0;
  Matrix log_rates;           // ages x horizon
};

inline LeeCarterFit lc_fit(const MortalitySurface& s) {
  const std::size_t rows = s.year_count(), cols = s.age_count();
  if (rows < 3 || cols < 2) throw structure_error("lc_fit: need at least 3 years and 2 ages");
  for (double v : s.z.data()) {
    if (!std::isfinite(v)) throw numeric_error("lc_fit: non-finite cell");
  }

  LeeCarterFit fit;
  fit.years = s.years;
  fit.ages = s.ages;
  fit.alpha.assign(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < rows; ++i) m += s.z(i, j);
    fit.alpha[j] = m / static_cast<double>(rows);
  }

  Matrix d(rows, cols);
  double dnorm2 = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      d(i, j) = s.z(i, j) - fit.alpha[j];
      dnorm2 += d(i, j) * d(i, j);
    }
  }
  if (!(dnorm2 > 1e-24)) throw numeric_error("lc_fit: demeaned surface is zero, beta undefined");

  const linalg::Rank1 r1 = linalg::leading_singular_triple(d);
  double vsum = 0.0;
  for (double v : r1.v) vsum += v;
  if (std::fabs(vsum) < 1e-12) {
    throw numeric_error("lc_fit: beta normalization undefined (singular vector sums to zero)");
  }
  fit.beta.assign(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) fit.beta[j] = r1.v[j] / vsum;
  fit.k.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) fit.k[i] = r1.sigma * r1.u[i] * vsum;

  fit.residuals = Matrix(rows, cols);
  double ss = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = s.z(i, j) - fit.fitted(i, j);
      fit.residuals(i, j) = e;
      ss += e * e;
    }
  }
  fit.sigma2 = ss / static_cast<double>(rows * cols);
  fit.explained_ratio = (r1.sigma * r1.sigma) / dnorm2;
  return fit;
}

// Random walk with drift: d = (k_T - k_1) / (T - 1), k_{T+h} = k_T + h d.
inline Forecast lc_forecast(const LeeCarterFit& fit, int horizon) {
  if (horizon < 1) throw structure_error("lc_forecast: horizon must be >= 1");
  if (fit.k.size() < 2) throw numeric_error("lc_forecast: drift undefined for single-year fit");

  Forecast f;
  f.model_tag = "lc";
  f.horizon = horizon;
  f.ages = fit.ages;
  f.drift = (fit.k.back() - fit.k.front()) / static_cast<double>(fit.k.size() - 1);
  f.log_rates = Matrix(fit.ages.size(), static_cast<std::size_t>(horizon));
  for (int h = 1; h <= horizon; ++h) {
    f.years.push_back(fit.years.back() + h);
    const double kh = fit.k.back() + static_cast<double>(h) * f.drift;
    f.k_path.push_back(kh);
    for (std::size_t j = 0; j < fit.ages.size(); ++j) {
      f.log_rates(j, static_cast<std::size_t>(h - 1)) = fit.alpha[j] + fit.beta[j] * kh;
    }
  }
  return f;
}

struct FitMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  double explained_ratio = 0.0;
};

namespace detail {

inline FitMetrics residual_metrics(const Matrix& residuals, double explained_ratio) {
  FitMetrics m;
  m.explained_ratio = explained_ratio;
  const std::size_t n = residuals.rows() * residuals.cols();
  double ss = 0.0, sa = 0.0;
  for (double e : residuals.data()) {
    ss += e * e;
    sa += std::fabs(e);
  }
  m.rmse = std::sqrt(ss / static_cast<double>(n));
  m.mae = sa / static_cast<double>(n);
  return m;
}

}  // namespace detail

inline FitMetrics fit_metrics(const LeeCarterFit& fit, const MortalitySurface& s) {
  if (fit.residuals.rows() != s.year_count() || fit.residuals.cols() != s.age_count()) {
    throw structure_error("fit_metrics: dimension mismatch");
  }
  return detail::residual_metrics(fit.residuals, fit.explained_ratio);
}

// CSV blocks `age,alpha,beta` and `year,k`, separated by a blank line.
inline void write_lc_csv(const LeeCarterFit& fit, std::ostream& out) {
  out << "age,alpha,beta\n";
  for (std::size_t j = 0; j < fit.ages.size(); ++j) {
    out << fit.ages[j] << "," << format_exact(fit.alpha[j]) << "," << format_exact(fit.beta[j])
        << "\n";
  }
  out << "\nyear,k\n";
  for (std::size_t i = 0; i < fit.years.size(); ++i) {
    out << fit.years[i] << "," << format_exact(fit.k[i]) << "\n";
  }
}

inline void write_forecast_csv(const Forecast& f, std::ostream& out) {
  out << "year,age,log_rate,rate\n";
  for (std::size_t h = 0; h < f.years.size(); ++h) {
    for (std::size_t j = 0; j < f.ages.size(); ++j) {
      const double lr = f.log_rates(j, h);
      out << f.years[h] << "," << f.ages[j] << "," << format_exact(lr) << ","
          << format_exact(std::exp(lr)) << "\n";
    }
  }
}

}  // namespace mortgeo
