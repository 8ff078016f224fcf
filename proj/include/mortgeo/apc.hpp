#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "mortgeo/lee_carter.hpp"
#include "mortgeo/linalg.hpp"
#include "mortgeo/surface.hpp"

// Additive age-period-cohort baseline: ln mu = m + alpha_x + beta_t +
// gamma_{t-x}, fitted by least squares. Age = Period - Cohort makes the
// design rank-deficient by four directions (three levels and one linear
// trend); zero-sum constraints on each effect plus a zero-linear-trend
// constraint on the cohort effects pin a unique solution, solved as one
// dense KKT system.

namespace mortgeo {

struct ApcFit {
  double m = 0.0;
  std::vector<int> ages;
  std::vector<int> years;
  std::vector<int> cohorts;
  std::vector<double> alpha_age;
  std::vector<double> beta_period;
  std::vector<double> gamma_cohort;
  Matrix residuals;  // years x ages
  std::vector<std::string> constraint_record;

  double gamma_for(int cohort) const {
    if (cohort < cohorts.front() || cohort > cohorts.back()) return 0.0;
    return gamma_cohort[static_cast<std::size_t>(cohort - cohorts.front())];
  }
  double fitted(std::size_t i, std::size_t j) const {
    return m + alpha_age[j] + beta_period[i] + gamma_for(years[i] - ages[j]);
  }
};

inline ApcFit apc_fit(const MortalitySurface& s) {
  const std::size_t rows = s.year_count(), cols = s.age_count();
  if (rows < 3 || cols < 3) throw structure_error("apc_fit: need at least a 3x3 surface");
  for (double v : s.z.data()) {
    if (!std::isfinite(v)) throw numeric_error("apc_fit: non-finite cell");
  }

  ApcFit fit;
  fit.ages = s.ages;
  fit.years = s.years;
  const int c_lo = s.years.front() - s.ages.back();
  const int c_hi = s.years.back() - s.ages.front();
  for (int c = c_lo; c <= c_hi; ++c) fit.cohorts.push_back(c);
  const std::size_t n_c = fit.cohorts.size();

  // Parameter layout: [m | alpha (cols) | beta (rows) | gamma (n_c)].
  const std::size_t p = 1 + cols + rows + n_c;
  const std::size_t n_con = 4;
  Matrix kkt(p + n_con, p + n_con, 0.0);
  std::vector<double> rhs(p + n_con, 0.0);

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t cidx = static_cast<std::size_t>((s.years[i] - s.ages[j]) - c_lo);
      const std::size_t idx[4] = {0, 1 + j, 1 + cols + i, 1 + cols + rows + cidx};
      const double zij = s.z(i, j);
      for (int a = 0; a < 4; ++a) {
        rhs[idx[a]] += zij;
        for (int b = 0; b < 4; ++b) kkt(idx[a], idx[b]) += 1.0;
      }
    }
  }

  double c_mean = 0.0;
  for (int c : fit.cohorts) c_mean += c;
  c_mean /= static_cast<double>(n_c);
  // Constraint rows: sum(alpha), sum(beta), sum(gamma), sum((c - cbar) gamma).
  for (std::size_t j = 0; j < cols; ++j) kkt(p + 0, 1 + j) = 1.0;
  for (std::size_t i = 0; i < rows; ++i) kkt(p + 1, 1 + cols + i) = 1.0;
  for (std::size_t c = 0; c < n_c; ++c) {
    kkt(p + 2, 1 + cols + rows + c) = 1.0;
    kkt(p + 3, 1 + cols + rows + c) = static_cast<double>(fit.cohorts[c]) - c_mean;
  }
  for (std::size_t r = 0; r < n_con; ++r) {
    for (std::size_t c = 0; c < p; ++c) kkt(c, p + r) = kkt(p + r, c);
  }

  std::vector<double> sol;
  try {
    sol = linalg::lu_solve(std::move(kkt), std::move(rhs));
  } catch (const numeric_error&) {
    throw numeric_error("apc_fit: design rank-deficient beyond the standard collinearity");
  }

  fit.m = sol[0];
  fit.alpha_age.assign(sol.begin() + 1, sol.begin() + 1 + cols);
  fit.beta_period.assign(sol.begin() + 1 + cols, sol.begin() + 1 + cols + rows);
  fit.gamma_cohort.assign(sol.begin() + 1 + cols + rows, sol.begin() + 1 + cols + rows + n_c);
  fit.constraint_record = {"sum(alpha_age) = 0", "sum(beta_period) = 0", "sum(gamma_cohort) = 0",
                           "sum((cohort - mean_cohort) * gamma_cohort) = 0"};

  fit.residuals = Matrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) fit.residuals(i, j) = s.z(i, j) - fit.fitted(i, j);
  }
  return fit;
}

// beta_t continues by random walk with drift; gamma is reused for observed
// cohorts and contributes 0 for cohorts born after the data window.
inline Forecast apc_forecast(const ApcFit& fit, int horizon) {
  if (horizon < 1) throw structure_error("apc_forecast: horizon must be >= 1");
  if (fit.beta_period.size() < 2) throw numeric_error("apc_forecast: drift undefined");

  Forecast f;
  f.model_tag = "apc";
  f.horizon = horizon;
  f.ages = fit.ages;
  f.drift = (fit.beta_period.back() - fit.beta_period.front()) /
            static_cast<double>(fit.beta_period.size() - 1);
  f.log_rates = Matrix(fit.ages.size(), static_cast<std::size_t>(horizon));
  for (int h = 1; h <= horizon; ++h) {
    const int year = fit.years.back() + h;
    f.years.push_back(year);
    const double bh = fit.beta_period.back() + static_cast<double>(h) * f.drift;
    f.k_path.push_back(bh);
    for (std::size_t j = 0; j < fit.ages.size(); ++j) {
      f.log_rates(j, static_cast<std::size_t>(h - 1)) =
          fit.m + fit.alpha_age[j] + bh + fit.gamma_for(year - fit.ages[j]);
    }
  }
  return f;
}

inline FitMetrics fit_metrics(const ApcFit& fit, const MortalitySurface& s) {
  if (fit.residuals.rows() != s.year_count() || fit.residuals.cols() != s.age_count()) {
    throw structure_error("fit_metrics: dimension mismatch");
  }
  double z_mean = 0.0;
  for (double v : s.z.data()) z_mean += v;
  z_mean /= static_cast<double>(s.z.data().size());
  double ss_tot = 0.0;
  for (double v : s.z.data()) ss_tot += (v - z_mean) * (v - z_mean);
  const double ss_res = linalg::frobenius_norm2(fit.residuals);
  const double explained = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return detail::residual_metrics(fit.residuals, explained);
}

// Blocks: scalar m, then `age,alpha` / `year,beta` / `cohort,gamma`.
inline void write_apc_csv(const ApcFit& fit, std::ostream& out) {
  out << "m," << format_exact(fit.m) << "\n";
  out << "\nage,alpha\n";
  for (std::size_t j = 0; j < fit.ages.size(); ++j) {
    out << fit.ages[j] << "," << format_exact(fit.alpha_age[j]) << "\n";
  }
  out << "\nyear,beta\n";
  for (std::size_t i = 0; i < fit.years.size(); ++i) {
    out << fit.years[i] << "," << format_exact(fit.beta_period[i]) << "\n";
  }
  out << "\ncohort,gamma\n";
  for (std::size_t c = 0; c < fit.cohorts.size(); ++c) {
    out << fit.cohorts[c] << "," << format_exact(fit.gamma_cohort[c]) << "\n";
  }
}

}  // namespace mortgeo
