#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "mortgeo/cei.hpp"
#include "mortgeo/lee_carter.hpp"

// Modified Lee-Carter: estimate the cohort effect index from the surface's
// curvature field, subtract a single rescaled copy of it along the cohort
// diagonals to polish the surface, then fit classical Lee-Carter on the
// polished surface. Forecasts restore the cohort effect for observed cohorts.

namespace mortgeo {

struct ScaleEstimate {
  double value = 0.0;
  bool undefined = false;  // constant index; value forced to 0
};

namespace detail {

// Removes row means, column means and restores the grand mean.
inline Matrix double_demean(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<double> row_mean(rows, 0.0), col_mean(cols, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      row_mean[i] += m(i, j);
      col_mean[j] += m(i, j);
      grand += m(i, j);
    }
  }
  for (double& v : row_mean) v /= static_cast<double>(cols);
  for (double& v : col_mean) v /= static_cast<double>(rows);
  grand /= static_cast<double>(rows * cols);
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(i, j) - row_mean[i] - col_mean[j] + grand;
  }
  return out;
}

inline Matrix broadcast_cei(const MortalitySurface& s, const CeiSeries& cei) {
  Matrix c(s.year_count(), s.age_count(), 0.0);
  for (std::size_t i = 0; i < s.year_count(); ++i) {
    for (std::size_t j = 0; j < s.age_count(); ++j) {
      if (auto v = cei.value_for(s.cohort(i, j))) c(i, j) = *v;
    }
  }
  return c;
}

}  // namespace detail

// The unique rescaling factor: least-squares coefficient of the cohort-
// broadcast index against the doubly demeaned surface, both centered the
// same way. Cohorts absent from the series contribute 0.
inline ScaleEstimate estimate_scale(const MortalitySurface& s, const CeiSeries& cei) {
  const Matrix r = detail::double_demean(s.z);
  const Matrix c_raw = detail::broadcast_cei(s, cei);
  const Matrix c = detail::double_demean(c_raw);

  double cc = 0.0, rc = 0.0, raw2 = 0.0;
  for (std::size_t idx = 0; idx < c.data().size(); ++idx) {
    cc += c.data()[idx] * c.data()[idx];
    rc += r.data()[idx] * c.data()[idx];
    raw2 += c_raw.data()[idx] * c_raw.data()[idx];
  }
  if (cc <= 1e-20 * std::max(1.0, raw2)) {
    return {0.0, true};
  }
  return {rc / cc, false};
}

// z'[i][j] = z[i][j] - scale * CEI[year_i - age_j]; absent cohorts untouched.
inline MortalitySurface remove_cohort_effect(const MortalitySurface& s, const CeiSeries& cei,
                                             double scale) {
  MortalitySurface out = s;
  if (scale == 0.0) return out;
  for (std::size_t i = 0; i < s.year_count(); ++i) {
    for (std::size_t j = 0; j < s.age_count(); ++j) {
      if (auto v = cei.value_for(s.cohort(i, j))) out.z(i, j) = s.z(i, j) - scale * *v;
    }
  }
  return out;
}

struct MlcOptions {
  FieldOptions field{};  // zero padding keeps the data set size unchanged
  CeiVariant variant = CeiVariant::sum;
  std::optional<TruncationPolicy> truncation;  // default: support >= 30, born <= last - 40
};

struct MlcFit {
  double scale = 0.0;
  bool scale_undefined = false;
  CurvatureField field;
  CeiSeries cei;        // truncated series actually subtracted
  Matrix adjustment;    // subtracted values, years x ages
  MortalitySurface adjusted;
  LeeCarterFit lc;      // classical fit of the adjusted surface
};

inline MlcFit mlc_fit(const MortalitySurface& s, const MlcOptions& opt = {}) {
  MlcFit fit;
  fit.field = curvature_field(s, opt.field);
  CeiSeries full = opt.variant == CeiVariant::mean ? cei_mean_series(fit.field)
                                                   : cei_series(fit.field);
  TruncationPolicy policy = opt.truncation ? *opt.truncation : default_truncation_policy(full);
  fit.cei = truncate_series(full, policy);

  const ScaleEstimate sc = estimate_scale(s, fit.cei);
  fit.scale = sc.value;
  fit.scale_undefined = sc.undefined;

  fit.adjustment = Matrix(s.year_count(), s.age_count(), 0.0);
  if (fit.scale != 0.0) {
    for (std::size_t i = 0; i < s.year_count(); ++i) {
      for (std::size_t j = 0; j < s.age_count(); ++j) {
        if (auto v = fit.cei.value_for(s.cohort(i, j))) fit.adjustment(i, j) = fit.scale * *v;
      }
    }
  }
  fit.adjusted = remove_cohort_effect(s, fit.cei, fit.scale);
  fit.lc = lc_fit(fit.adjusted);
  return fit;
}

// Classical forecast on the polished surface, cohort effect added back for
// cells whose cohort has an index value; unseen cohorts add 0.
inline Forecast mlc_forecast(const MlcFit& fit, int horizon) {
  Forecast f = lc_forecast(fit.lc, horizon);
  f.model_tag = "mlc";
  if (fit.scale != 0.0) {
    for (std::size_t h = 0; h < f.years.size(); ++h) {
      for (std::size_t j = 0; j < f.ages.size(); ++j) {
        if (auto v = fit.cei.value_for(f.years[h] - f.ages[j])) {
          f.log_rates(j, h) += fit.scale * *v;
        }
      }
    }
  }
  return f;
}

inline FitMetrics fit_metrics(const MlcFit& fit, const MortalitySurface& s) {
  // The MLC model of the original surface is lc.fitted + adjustment, so its
  // residuals against the original surface equal the inner fit's residuals.
  return fit_metrics(fit.lc, s);
}

}  // namespace mortgeo
