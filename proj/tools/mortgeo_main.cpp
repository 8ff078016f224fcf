// Command-line front end: ingest HMD death-rate files into log-mortality
// surfaces, compute cohort effect index series, fit LC / MLC / APC models and
// forecast, emitting CSV artifacts and static SVG charts.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mortgeo/mortgeo.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string input;
  std::string series = "total";
  std::string years_range;  // "A..B", empty = all available
  std::string ages_range;   // empty = 0..100 clipped to coverage
  bool include_open_age = false;
  std::string pad = "zero";
  std::string cei_variant = "sum";
  int min_support = 30;
  std::optional<int> max_birth_year;
  std::string model = "lc";
  int horizon = 10;
  std::string actuals;
  std::string age_band = "20..50";
  std::string out_dir = ".";
  double scale_t = 1.0, scale_x = 1.0, scale_z = 1.0;
};

mortgeo::YearRange parse_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    throw mortgeo::structure_error("bad range '" + text + "', expected A..B");
  }
  mortgeo::YearRange r;
  r.lo = mortgeo::parse_int_field(text.substr(0, pos), 0);
  r.hi = mortgeo::parse_int_field(text.substr(pos + 2), 0);
  if (r.lo > r.hi) throw mortgeo::structure_error("bad range '" + text + "': lo > hi");
  return r;
}

mortgeo::SexSeries parse_series(const std::string& s) {
  if (s == "female") return mortgeo::SexSeries::female;
  if (s == "male") return mortgeo::SexSeries::male;
  return mortgeo::SexSeries::total;
}

mortgeo::MortalitySurface slice_surface(const mortgeo::MortalitySurface& s,
                                        mortgeo::YearRange yw, mortgeo::YearRange aw) {
  if (yw.lo < s.years.front() || yw.hi > s.years.back() || aw.lo < s.ages.front() ||
      aw.hi > s.ages.back()) {
    throw mortgeo::structure_error("window outside surface coverage");
  }
  mortgeo::MortalitySurface out;
  out.series = s.series;
  for (int y = yw.lo; y <= yw.hi; ++y) out.years.push_back(y);
  for (int a = aw.lo; a <= aw.hi; ++a) out.ages.push_back(a);
  out.z = mortgeo::Matrix(out.years.size(), out.ages.size());
  const std::size_t i0 = static_cast<std::size_t>(yw.lo - s.years.front());
  const std::size_t j0 = static_cast<std::size_t>(aw.lo - s.ages.front());
  for (std::size_t i = 0; i < out.years.size(); ++i) {
    for (std::size_t j = 0; j < out.ages.size(); ++j) out.z(i, j) = s.z(i0 + i, j0 + j);
  }
  return out;
}

mortgeo::MortalitySurface load_surface(const RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mortgeo::structure_error("cannot open input file: " + path);
  std::string first_line;
  std::getline(in, first_line);
  in.seekg(0);

  if (first_line.rfind("# years=", 0) == 0) {
    mortgeo::MortalitySurface s = mortgeo::read_surface_csv(in);
    if (!cfg.years_range.empty() || !cfg.ages_range.empty()) {
      const auto yw = cfg.years_range.empty()
                          ? mortgeo::YearRange{s.years.front(), s.years.back()}
                          : parse_range(cfg.years_range);
      const auto aw = cfg.ages_range.empty()
                          ? mortgeo::YearRange{s.ages.front(), s.ages.back()}
                          : parse_range(cfg.ages_range);
      s = slice_surface(s, yw, aw);
    }
    return s;
  }

  const mortgeo::MortalityTable table = mortgeo::parse_hmd_mx(in);
  const auto yw = cfg.years_range.empty() ? mortgeo::YearRange{table.year_min, table.year_max}
                                          : parse_range(cfg.years_range);
  auto aw = cfg.ages_range.empty()
                ? mortgeo::YearRange{0, std::min(100, table.age_max)}
                : parse_range(cfg.ages_range);
  return mortgeo::build_surface(table, parse_series(cfg.series), yw, aw, cfg.include_open_age);
}

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream out(p);
  if (!out) throw mortgeo::structure_error("cannot write output file: " + p.string());
  body(out);
}

mortgeo::FieldOptions field_options(const RunConfig& cfg) {
  mortgeo::FieldOptions opt;
  opt.padding = cfg.pad == "none" ? mortgeo::Padding::none : mortgeo::Padding::zero;
  opt.scale = {cfg.scale_t, cfg.scale_x, cfg.scale_z};
  return opt;
}

mortgeo::TruncationPolicy truncation_policy(const RunConfig& cfg, const mortgeo::CeiSeries& full) {
  mortgeo::TruncationPolicy p;
  p.min_support = cfg.min_support;
  p.max_birth_year =
      cfg.max_birth_year ? *cfg.max_birth_year : mortgeo::default_truncation_policy(full).max_birth_year;
  return p;
}

void warn_short_age_span(const mortgeo::MortalitySurface& s) {
  const int span = s.ages.back() - s.ages.front();
  if (span < 60) {
    std::cerr << "warning: age span of " << span
              << " years is below 60; cohort index estimates may be unreliable\n";
  }
}

mortgeo::CeiSeries run_cei_pipeline(const RunConfig& cfg, const mortgeo::MortalitySurface& s) {
  const mortgeo::CurvatureField field = mortgeo::curvature_field(s, field_options(cfg));
  const mortgeo::CeiSeries full = cfg.cei_variant == "mean" ? mortgeo::cei_mean_series(field)
                                                            : mortgeo::cei_series(field);
  return mortgeo::truncate_series(full, truncation_policy(cfg, full));
}

int cmd_ingest(const RunConfig& cfg) {
  const mortgeo::MortalitySurface s = load_surface(cfg, cfg.input);
  write_file(cfg.out_dir, "surface.csv", [&](std::ostream& o) { mortgeo::write_surface_csv(s, o); });
  std::cout << "surface: years=" << s.years.front() << ".." << s.years.back()
            << " ages=" << s.ages.front() << ".." << s.ages.back() << " series=" << s.series
            << " masked=" << s.masked_count() << "\n";
  return 0;
}

int cmd_cei(const RunConfig& cfg) {
  const mortgeo::MortalitySurface s = load_surface(cfg, cfg.input);
  warn_short_age_span(s);
  const mortgeo::CeiSeries series = run_cei_pipeline(cfg, s);
  const auto plateaus = mortgeo::detect_plateaus(series, 3, 0.9);

  write_file(cfg.out_dir, "cei.csv", [&](std::ostream& o) { mortgeo::write_cei_csv(series, o); });
  write_file(cfg.out_dir, "plateaus.txt",
             [&](std::ostream& o) { mortgeo::write_plateau_report(plateaus, o); });
  mortgeo::svg::Chart chart;
  chart.title = "cohort effect index (" + cfg.cei_variant + ")";
  chart.x_label = "birth year";
  chart.y_label = "cei";
  mortgeo::svg::Series line;
  line.label = "cei";
  for (std::size_t i = 0; i < series.cohorts.size(); ++i) {
    line.xs.push_back(series.cohorts[i]);
    line.ys.push_back(series.cei[i]);
  }
  chart.series.push_back(std::move(line));
  write_file(cfg.out_dir, "cei.svg", [&](std::ostream& o) { mortgeo::svg::write_chart(chart, o); });

  std::cout << "cei: cohorts=" << series.cohorts.front() << ".." << series.cohorts.back()
            << " removed=" << series.truncation.removed.size() << " plateaus=" << plateaus.size()
            << "\n";
  return 0;
}

void write_kb_charts(const RunConfig& cfg, const std::vector<mortgeo::svg::Series>& k_series,
                     const std::vector<mortgeo::svg::Series>& b_series, const std::string& k_label,
                     const std::string& b_label) {
  mortgeo::svg::Chart kc;
  kc.title = k_label;
  kc.x_label = "year";
  kc.y_label = "value";
  kc.series = k_series;
  write_file(cfg.out_dir, "k.svg", [&](std::ostream& o) { mortgeo::svg::write_chart(kc, o); });
  mortgeo::svg::Chart bc;
  bc.title = b_label;
  bc.x_label = "age";
  bc.y_label = "value";
  bc.series = b_series;
  write_file(cfg.out_dir, "beta.svg", [&](std::ostream& o) { mortgeo::svg::write_chart(bc, o); });
}

mortgeo::svg::Series series_of(const std::string& label, const std::vector<int>& xs,
                               const std::vector<double>& ys, bool dashed = false) {
  mortgeo::svg::Series s;
  s.label = label;
  s.dashed = dashed;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.xs.push_back(xs[i]);
    s.ys.push_back(ys[i]);
  }
  return s;
}

mortgeo::MlcOptions mlc_options(const RunConfig& cfg, const mortgeo::MortalitySurface& s) {
  mortgeo::MlcOptions opt;
  opt.field = field_options(cfg);
  opt.variant = cfg.cei_variant == "mean" ? mortgeo::CeiVariant::mean : mortgeo::CeiVariant::sum;
  mortgeo::TruncationPolicy p;
  p.min_support = cfg.min_support;
  if (cfg.max_birth_year) {
    p.max_birth_year = *cfg.max_birth_year;
  } else {
    p.max_birth_year = s.years.back() - 40;
  }
  opt.truncation = p;
  return opt;
}

int cmd_fit(const RunConfig& cfg) {
  const mortgeo::MortalitySurface s = load_surface(cfg, cfg.input);

  if (cfg.model == "lc") {
    const mortgeo::LeeCarterFit fit = mortgeo::lc_fit(s);
    const mortgeo::FitMetrics m = mortgeo::fit_metrics(fit, s);
    write_file(cfg.out_dir, "lc_fit.csv", [&](std::ostream& o) { mortgeo::write_lc_csv(fit, o); });
    write_kb_charts(cfg, {series_of("lc", fit.years, fit.k)},
                    {series_of("lc", fit.ages, fit.beta)}, "period index k", "age response beta");
    std::cout << "fit: model=lc rmse=" << m.rmse << " mae=" << m.mae
              << " explained=" << m.explained_ratio << "\n";
    return 0;
  }

  if (cfg.model == "mlc") {
    warn_short_age_span(s);
    const mortgeo::MlcFit fit = mortgeo::mlc_fit(s, mlc_options(cfg, s));
    const mortgeo::LeeCarterFit classical = mortgeo::lc_fit(s);
    const mortgeo::FitMetrics mm = mortgeo::fit_metrics(fit, s);
    const mortgeo::FitMetrics ml = mortgeo::fit_metrics(classical, s);

    write_file(cfg.out_dir, "mlc_fit.csv", [&](std::ostream& o) { mortgeo::write_lc_csv(fit.lc, o); });
    write_file(cfg.out_dir, "lc_fit.csv",
               [&](std::ostream& o) { mortgeo::write_lc_csv(classical, o); });
    write_file(cfg.out_dir, "adjustment.csv", [&](std::ostream& o) {
      mortgeo::MortalitySurface adj = s;
      adj.z = fit.adjustment;
      adj.series = "adjustment";
      mortgeo::write_surface_csv(adj, o);
    });
    write_file(cfg.out_dir, "adjusted_surface.csv",
               [&](std::ostream& o) { mortgeo::write_surface_csv(fit.adjusted, o); });
    write_file(cfg.out_dir, "mlc_report.txt", [&](std::ostream& o) {
      o << "scale " << mortgeo::format_exact(fit.scale) << "\n";
      o << "scale_undefined " << (fit.scale_undefined ? 1 : 0) << "\n";
      o << "mlc rmse " << mortgeo::format_exact(mm.rmse) << " mae " << mortgeo::format_exact(mm.mae)
        << "\n";
      o << "lc rmse " << mortgeo::format_exact(ml.rmse) << " mae " << mortgeo::format_exact(ml.mae)
        << "\n";
    });
    write_kb_charts(cfg,
                    {series_of("mlc", fit.lc.years, fit.lc.k),
                     series_of("lc", classical.years, classical.k, true)},
                    {series_of("mlc", fit.lc.ages, fit.lc.beta),
                     series_of("lc", classical.ages, classical.beta, true)},
                    "period index k", "age response beta");
    std::cout << "fit: model=mlc scale=" << fit.scale << " rmse=" << mm.rmse
              << " lc_rmse=" << ml.rmse << "\n";
    return 0;
  }

  // apc
  const mortgeo::ApcFit fit = mortgeo::apc_fit(s);
  const mortgeo::FitMetrics m = mortgeo::fit_metrics(fit, s);
  write_file(cfg.out_dir, "apc_fit.csv", [&](std::ostream& o) { mortgeo::write_apc_csv(fit, o); });
  write_kb_charts(cfg, {series_of("apc period", fit.years, fit.beta_period)},
                  {series_of("apc age", fit.ages, fit.alpha_age)}, "period effect",
                  "age effect");
  std::cout << "fit: model=apc rmse=" << m.rmse << " mae=" << m.mae << " constraints:";
  for (const auto& c : fit.constraint_record) std::cout << " [" << c << "]";
  std::cout << "\n";
  return 0;
}

int cmd_forecast(const RunConfig& cfg) {
  if (cfg.horizon == 0) {
    std::cout << "horizon 0: nothing to forecast\n";
    return 0;
  }
  const mortgeo::MortalitySurface s = load_surface(cfg, cfg.input);
  const mortgeo::YearRange band = parse_range(cfg.age_band);
  if (band.lo < s.ages.front() || band.hi > s.ages.back()) {
    throw mortgeo::structure_error("age band " + cfg.age_band + " outside surface ages");
  }

  std::vector<mortgeo::Forecast> forecasts;
  if (cfg.model == "lc") {
    forecasts.push_back(mortgeo::lc_forecast(mortgeo::lc_fit(s), cfg.horizon));
  } else if (cfg.model == "mlc") {
    warn_short_age_span(s);
    forecasts.push_back(mortgeo::mlc_forecast(mortgeo::mlc_fit(s, mlc_options(cfg, s)), cfg.horizon));
    forecasts.push_back(mortgeo::lc_forecast(mortgeo::lc_fit(s), cfg.horizon));
  } else {
    forecasts.push_back(mortgeo::apc_forecast(mortgeo::apc_fit(s), cfg.horizon));
  }
  const mortgeo::Forecast& main_fc = forecasts.front();

  write_file(cfg.out_dir, "forecast.csv",
             [&](std::ostream& o) { mortgeo::write_forecast_csv(main_fc, o); });
  write_file(cfg.out_dir, "kpath.csv", [&](std::ostream& o) {
    o << "year,k\n";
    for (std::size_t h = 0; h < main_fc.years.size(); ++h) {
      o << main_fc.years[h] << "," << mortgeo::format_exact(main_fc.k_path[h]) << "\n";
    }
  });

  std::optional<mortgeo::MortalitySurface> actuals;
  if (!cfg.actuals.empty()) {
    RunConfig acfg = cfg;
    acfg.years_range.clear();
    acfg.ages_range.clear();
    actuals = load_surface(acfg, cfg.actuals);
  }

  if (!actuals) {
    mortgeo::svg::Chart chart;
    chart.title = "forecast log death rates (" + main_fc.model_tag + ")";
    chart.x_label = "age";
    chart.y_label = "ln rate";
    for (std::size_t h = 0; h < main_fc.years.size() && h < 5; ++h) {
      mortgeo::svg::Series line;
      line.label = std::to_string(main_fc.years[h]);
      for (std::size_t j = 0; j < main_fc.ages.size(); ++j) {
        line.xs.push_back(main_fc.ages[j]);
        line.ys.push_back(main_fc.log_rates(j, h));
      }
      chart.series.push_back(std::move(line));
    }
    write_file(cfg.out_dir, "forecast.svg",
               [&](std::ostream& o) { mortgeo::svg::write_chart(chart, o); });
    return 0;
  }

  for (std::size_t h = 0; h < main_fc.years.size(); ++h) {
    const int year = main_fc.years[h];
    auto yit = std::find(actuals->years.begin(), actuals->years.end(), year);
    if (yit == actuals->years.end()) continue;
    const std::size_t ai = static_cast<std::size_t>(yit - actuals->years.begin());

    mortgeo::svg::Chart chart;
    chart.title = "predicted vs actual ln rate, " + std::to_string(year);
    chart.x_label = "age";
    chart.y_label = "ln rate";
    mortgeo::svg::Series act;
    act.label = "actual";
    for (int a = band.lo; a <= band.hi; ++a) {
      auto ait = std::find(actuals->ages.begin(), actuals->ages.end(), a);
      if (ait == actuals->ages.end()) continue;
      act.xs.push_back(a);
      act.ys.push_back(actuals->z(ai, static_cast<std::size_t>(ait - actuals->ages.begin())));
    }
    chart.series.push_back(std::move(act));

    for (const mortgeo::Forecast& fc : forecasts) {
      mortgeo::svg::Series pred;
      pred.label = fc.model_tag;
      pred.dashed = true;
      for (std::size_t j = 0; j < fc.ages.size(); ++j) {
        if (fc.ages[j] < band.lo || fc.ages[j] > band.hi) continue;
        pred.xs.push_back(fc.ages[j]);
        pred.ys.push_back(fc.log_rates(j, h));
      }
      chart.series.push_back(std::move(pred));
    }
    write_file(cfg.out_dir, "forecast_compare_" + std::to_string(year) + ".svg",
               [&](std::ostream& o) { mortgeo::svg::write_chart(chart, o); });
  }

  for (const mortgeo::Forecast& fc : forecasts) {
    double ss = 0.0, sa = 0.0;
    std::size_t n = 0;
    for (std::size_t h = 0; h < fc.years.size(); ++h) {
      auto yit = std::find(actuals->years.begin(), actuals->years.end(), fc.years[h]);
      if (yit == actuals->years.end()) continue;
      const std::size_t ai = static_cast<std::size_t>(yit - actuals->years.begin());
      for (std::size_t j = 0; j < fc.ages.size(); ++j) {
        if (fc.ages[j] < band.lo || fc.ages[j] > band.hi) continue;
        auto ait = std::find(actuals->ages.begin(), actuals->ages.end(), fc.ages[j]);
        if (ait == actuals->ages.end()) continue;
        const double e = fc.log_rates(j, h) -
                         actuals->z(ai, static_cast<std::size_t>(ait - actuals->ages.begin()));
        ss += e * e;
        sa += std::fabs(e);
        ++n;
      }
    }
    if (n == 0) {
      std::cout << "forecast: model=" << fc.model_tag << " no overlapping actual cells\n";
    } else {
      std::cout << "forecast: model=" << fc.model_tag << " rmse=" << std::sqrt(ss / n)
                << " mae=" << sa / n << " cells=" << n << "\n";
    }
  }
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const mortgeo::MortalitySurface s = load_surface(cfg, cfg.input);
  warn_short_age_span(s);

  const mortgeo::MlcFit fit = mortgeo::mlc_fit(s, mlc_options(cfg, s));
  const mortgeo::LeeCarterFit classical = mortgeo::lc_fit(s);
  const mortgeo::FitMetrics mm = mortgeo::fit_metrics(fit, s);
  const mortgeo::FitMetrics ml = mortgeo::fit_metrics(classical, s);
  const auto plateaus = mortgeo::detect_plateaus(fit.cei, 3, 0.9);

  write_file(cfg.out_dir, "surface.csv", [&](std::ostream& o) { mortgeo::write_surface_csv(s, o); });
  write_file(cfg.out_dir, "field.csv",
             [&](std::ostream& o) { mortgeo::write_field_csv(fit.field, o); });
  write_file(cfg.out_dir, "cei.csv", [&](std::ostream& o) { mortgeo::write_cei_csv(fit.cei, o); });
  write_file(cfg.out_dir, "plateaus.txt",
             [&](std::ostream& o) { mortgeo::write_plateau_report(plateaus, o); });
  write_file(cfg.out_dir, "mlc_fit.csv", [&](std::ostream& o) { mortgeo::write_lc_csv(fit.lc, o); });
  write_file(cfg.out_dir, "adjusted_surface.csv",
             [&](std::ostream& o) { mortgeo::write_surface_csv(fit.adjusted, o); });
  write_file(cfg.out_dir, "adjustment.csv", [&](std::ostream& o) {
    mortgeo::MortalitySurface adj = s;
    adj.z = fit.adjustment;
    adj.series = "adjustment";
    mortgeo::write_surface_csv(adj, o);
  });
  write_file(cfg.out_dir, "report.txt", [&](std::ostream& o) {
    o << "scale " << mortgeo::format_exact(fit.scale) << "\n";
    o << "scale_undefined " << (fit.scale_undefined ? 1 : 0) << "\n";
    o << "mlc rmse " << mortgeo::format_exact(mm.rmse) << " mae " << mortgeo::format_exact(mm.mae)
      << "\n";
    o << "lc rmse " << mortgeo::format_exact(ml.rmse) << " mae " << mortgeo::format_exact(ml.mae)
      << "\n";
    o << "cohorts " << fit.cei.cohorts.front() << ".." << fit.cei.cohorts.back() << "\n";
    o << "plateaus " << plateaus.size() << "\n";
  });
  std::cout << "report: scale=" << fit.scale << " mlc_rmse=" << mm.rmse << " lc_rmse=" << ml.rmse
            << "\n";
  return 0;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "HMD Mx 1x1 file or surface CSV")->required();
  sub->add_option("--series", cfg.series, "sex series")
      ->check(CLI::IsMember({"female", "male", "total"}));
  sub->add_option("--years", cfg.years_range, "year window A..B");
  sub->add_option("--ages", cfg.ages_range, "age window A..B");
  sub->add_flag("--include-open-age", cfg.include_open_age, "keep the open age group");
  sub->add_option("--out", cfg.out_dir, "output directory");
}

void add_geometry_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--pad", cfg.pad, "boundary padding")->check(CLI::IsMember({"zero", "none"}));
  sub->add_option("--cei", cfg.cei_variant, "index variant")->check(CLI::IsMember({"sum", "mean"}));
  sub->add_option("--min-support", cfg.min_support, "minimum points per cohort")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--max-birth-year", cfg.max_birth_year, "latest retained birth year");
  sub->add_option("--scale-t", cfg.scale_t, "year axis scale")->check(CLI::PositiveNumber);
  sub->add_option("--scale-x", cfg.scale_x, "age axis scale")->check(CLI::PositiveNumber);
  sub->add_option("--scale-z", cfg.scale_z, "log-rate axis scale")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mortality surface geometry: cohort effect index and Lee-Carter models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; command-line flags win");

  RunConfig cfg;
  CLI::App* ingest = app.add_subcommand("ingest", "parse an HMD file into a surface CSV")->configurable()->fallthrough();
  add_common_options(ingest, cfg);

  CLI::App* cei = app.add_subcommand("cei", "compute the cohort effect index series")->configurable()->fallthrough();
  add_common_options(cei, cfg);
  add_geometry_options(cei, cfg);

  CLI::App* fit = app.add_subcommand("fit", "fit a mortality model")->configurable()->fallthrough();
  add_common_options(fit, cfg);
  add_geometry_options(fit, cfg);
  fit->add_option("--model", cfg.model, "model")->check(CLI::IsMember({"lc", "mlc", "apc"}));

  CLI::App* forecast = app.add_subcommand("forecast", "fit and project future rates")->configurable()->fallthrough();
  add_common_options(forecast, cfg);
  add_geometry_options(forecast, cfg);
  forecast->add_option("--model", cfg.model, "model")->check(CLI::IsMember({"lc", "mlc", "apc"}));
  forecast->add_option("--horizon", cfg.horizon, "years ahead")->check(CLI::NonNegativeNumber);
  forecast->add_option("--actuals", cfg.actuals, "surface CSV with realized rates");
  forecast->add_option("--age-band", cfg.age_band, "comparison age band A..B");

  CLI::App* report = app.add_subcommand("report", "full modified Lee-Carter report bundle")->configurable()->fallthrough();
  add_common_options(report, cfg);
  add_geometry_options(report, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(cfg);
    if (cei->parsed()) return cmd_cei(cfg);
    if (fit->parsed()) return cmd_fit(cfg);
    if (forecast->parsed()) return cmd_forecast(cfg);
    if (report->parsed()) return cmd_report(cfg);
  } catch (const mortgeo::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mortgeo::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mortgeo::structure_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mortgeo::data_quality_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
