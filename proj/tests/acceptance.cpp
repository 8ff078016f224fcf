// Acceptance suite: one scenario per criterion, each checked at a fixed
// tolerance, printing one pass/fail line. Exits nonzero if anything fails.
// argv[1] is the CLI binary path (used by the determinism check); the
// real-data check runs only when a local HMD UK Mx 1x1 file is present
// (MORTGEO_HMD_UK or data/GBR*_Mx_1x1.txt), and is skipped otherwise.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mortgeo/mortgeo.hpp"

namespace fs = std::filesystem;
using namespace mortgeo;

namespace {

int g_failures = 0;

void run(int number, const std::string& name, const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  bool skipped = false;
  try {
    detail = body();
    if (detail.rfind("SKIP:", 0) == 0) {
      skipped = true;
      detail = detail.substr(5);
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  const char* tag = skipped ? "[SKIP]" : (ok ? "[PASS]" : "[FAIL]");
  if (!ok) ++g_failures;
  std::cout << tag << " " << number << " " << name << " (" << detail << ", " << ms << " ms)\n";
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---- criterion bodies -------------------------------------------------

std::string plane_annihilation() {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst_nc = 0.0, worst_cei = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), c = 10.0 * u(rng);
    const auto s = testutil::make_surface(1900, 1929, 0, 29,
                                          [&](int y, int x) { return a * y + b * x + c; });
    const auto f = curvature_field(s, {Padding::none});
    for (int k = 0; k < 4; ++k) {
      for (double v : f.nc[k].data()) worst_nc = std::max(worst_nc, std::fabs(v));
    }
    for (double v : cei_series(f).cei) worst_cei = std::max(worst_cei, std::fabs(v));
  }
  require(worst_nc <= 1e-10, "interior NC reached " + fmt(worst_nc));
  require(worst_cei <= 1e-10, "CEI reached " + fmt(worst_cei));
  return "max |NC| = " + fmt(worst_nc) + ", max CEI = " + fmt(worst_cei);
}

double paraboloid_nc3_at_origin(double h) {
  const int n = static_cast<int>(std::lround(1.0 / h));
  const auto s = testutil::make_surface(-n, n, -n, n, [h](int y, int a) {
    return (h * y * h * y + h * a * h * a) / 2.0;
  });
  const auto f = curvature_field(s, {Padding::none, false, {h, h, 1.0}});
  const std::size_t oi = static_cast<std::size_t>(n - 1);
  return f.nc[2](oi, oi);
}

std::string paraboloid_oracle() {
  const double nc_fine = paraboloid_nc3_at_origin(0.05);
  const double nc_coarse = paraboloid_nc3_at_origin(0.1);
  const double err_fine = std::fabs(nc_fine - 1.0);
  const double err_coarse = std::fabs(nc_coarse - 1.0);
  require(err_fine <= 0.05, "NC3 error " + fmt(err_fine) + " above 5%");
  require(err_fine < err_coarse, "no improvement under refinement");
  return "NC3(h=0.05) = " + fmt(nc_fine) + ", err " + fmt(err_fine) + " < " + fmt(err_coarse);
}

std::string normal_oracle() {
  std::mt19937 rng(303);
  int degenerate = 0;
  double worst_vec = 0.0, worst_probe = -1.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::array<Vec3, 4> tangents = {testutil::random_unit(rng), testutil::random_unit(rng),
                                          testutil::random_unit(rng), testutil::random_unit(rng)};
    const NormalEstimate n = estimate_normal(tangents);

    const auto f_of = [&](const Vec3& v) {
      double f = 0.0;
      for (const Vec3& t : tangents) f += v.dot(t) * v.dot(t);
      return f;
    };
    const double fn = f_of(n.n);
    for (int probe = 0; probe < 100; ++probe) {
      const double fu = f_of(testutil::random_unit(rng));
      worst_probe = std::max(worst_probe, fn - fu);
      require(fn <= fu + 1e-10, "f(N) exceeds a probe by " + fmt(fn - fu));
    }

    if (n.degenerate) {
      ++degenerate;
      continue;
    }
    std::array<std::array<double, 3>, 3> m{};
    for (const Vec3& v : tangents) {
      const double c[3] = {v.t, v.x, v.z};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += c[i] * c[j];
    }
    const testutil::SmallestEig oracle = testutil::charpoly_smallest(m);
    const Vec3 o{oracle.vector[0], oracle.vector[1], oracle.vector[2]};
    const double diff = std::min((n.n - o).norm(), (n.n + o).norm());
    worst_vec = std::max(worst_vec, diff);
    require(diff <= 1e-8, "normal differs from oracle by " + fmt(diff));
  }
  return "max |N - oracle| = " + fmt(worst_vec) + ", degenerate " + std::to_string(degenerate) +
         "/1000, worst probe slack " + fmt(worst_probe);
}

std::string ridge_detection() {
  for (const int c : {1930, 1945, 1960}) {
    const auto s = testutil::make_surface(1950, 2009, 0, 59, [&](int y, int a) {
      const double d = static_cast<double>(y - a - c);
      return -4.0 - 0.015 * (y - 1950) + 0.09 * a + std::exp(-d * d / 8.0);
    });
    const auto f = curvature_field(s, {Padding::none});
    const auto mean = cei_mean_series(f);
    const auto trunc = truncate_series(mean, default_truncation_policy(mean));
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < trunc.cei.size(); ++k) {
      if (trunc.cei[k] > trunc.cei[argmax]) argmax = k;
    }
    require(trunc.cohorts[argmax] == c,
            "argmax " + std::to_string(trunc.cohorts[argmax]) + " != " + std::to_string(c));
  }
  return "argmax at 1930, 1945, 1960";
}

std::string lee_carter_recovery() {
  const double alpha[2] = {-4.0, -3.0};
  const double beta[2] = {0.6, 0.4};
  const double kk[3] = {1.0, 0.0, -1.0};
  const auto s = testutil::make_surface(2000, 2002, 0, 1, [&](int y, int a) {
    return alpha[a] + beta[a] * kk[y - 2000];
  });
  const auto fit = lc_fit(s);
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    worst = std::max(worst, std::fabs(fit.alpha[j] - alpha[j]));
    worst = std::max(worst, std::fabs(fit.beta[j] - beta[j]));
  }
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(fit.k[i] - kk[i]));
  require(worst <= 1e-8, "parameter error " + fmt(worst));
  double res = 0.0;
  for (double e : fit.residuals.data()) res = std::max(res, std::fabs(e));
  require(res <= 1e-12, "residual " + fmt(res));
  return "max parameter error " + fmt(worst) + ", max residual " + fmt(res);
}

std::string apc_recovery() {
  std::mt19937 rng(707);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<int> ages, years, cohorts;
  for (int a = 0; a <= 14; ++a) ages.push_back(a);
  for (int y = 1990; y <= 2009; ++y) years.push_back(y);
  for (int c = 1990 - 14; c <= 2009; ++c) cohorts.push_back(c);

  // draw effects, then slide them along the null directions onto the
  // constraint space (zero sums, zero cohort trend) without changing any
  // fitted value
  std::vector<double> ea, eb, eg;
  for (std::size_t j = 0; j < ages.size(); ++j) ea.push_back(u(rng));
  for (std::size_t i = 0; i < years.size(); ++i) eb.push_back(u(rng));
  for (std::size_t c = 0; c < cohorts.size(); ++c) eg.push_back(u(rng));
  double m = -4.2;
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  double x_bar = 0, t_bar = 0, c_bar = 0;
  for (int a : ages) x_bar += a;
  x_bar /= ages.size();
  for (int y : years) t_bar += y;
  t_bar /= years.size();
  for (int c : cohorts) c_bar += c;
  c_bar /= cohorts.size();
  double w2 = 0, tw = 0;
  for (std::size_t c = 0; c < cohorts.size(); ++c) {
    w2 += (cohorts[c] - c_bar) * (cohorts[c] - c_bar);
    tw += (cohorts[c] - c_bar) * eg[c];
  }
  const double delta = tw / w2;
  for (std::size_t j = 0; j < ages.size(); ++j) ea[j] -= delta * (ages[j] - x_bar);
  for (std::size_t i = 0; i < years.size(); ++i) eb[i] += delta * (years[i] - t_bar);
  for (std::size_t c = 0; c < cohorts.size(); ++c) eg[c] -= delta * (cohorts[c] - c_bar);
  m += mean(ea) + mean(eb) + mean(eg);
  const double ma = mean(ea), mb = mean(eb), mg = mean(eg);
  for (double& v : ea) v -= ma;
  for (double& v : eb) v -= mb;
  for (double& v : eg) v -= mg;

  const auto s = testutil::make_surface(1990, 2009, 0, 14, [&](int y, int a) {
    return m + ea[a] + eb[y - 1990] + eg[(y - a) - cohorts.front()];
  });
  const auto fit = apc_fit(s);

  double worst = std::fabs(fit.m - m);
  for (std::size_t j = 0; j < ea.size(); ++j) {
    worst = std::max(worst, std::fabs(fit.alpha_age[j] - ea[j]));
  }
  for (std::size_t i = 0; i < eb.size(); ++i) {
    worst = std::max(worst, std::fabs(fit.beta_period[i] - eb[i]));
  }
  for (std::size_t c = 0; c < eg.size(); ++c) {
    worst = std::max(worst, std::fabs(fit.gamma_cohort[c] - eg[c]));
  }
  require(worst <= 1e-8, "parameter error " + fmt(worst));

  // reparameterization invariance: the trend shift changes no fitted value
  double worst_shift = 0.0;
  const double d2 = 0.01;
  for (std::size_t i = 0; i < years.size(); ++i) {
    for (std::size_t j = 0; j < ages.size(); ++j) {
      const int cohort = years[i] - ages[j];
      const double perturbed = fit.m + (fit.alpha_age[j] + d2 * (ages[j] - x_bar)) +
                               (fit.beta_period[i] - d2 * (years[i] - t_bar)) +
                               (fit.gamma_for(cohort) + d2 * (cohort - c_bar));
      worst_shift = std::max(worst_shift, std::fabs(perturbed - fit.fitted(i, j)));
    }
  }
  require(worst_shift <= 1e-10, "reparameterization moved fits by " + fmt(worst_shift));
  return "max parameter error " + fmt(worst) + ", invariance slack " + fmt(worst_shift);
}

std::string mlc_scale_recovery() {
  CeiSeries cei;
  for (int c = 1950 - 49; c <= 2009; ++c) {
    cei.cohorts.push_back(c);
    cei.cei.push_back(0.4 + 0.3 * std::sin(0.15 * (c - 1900)));
    cei.support.push_back(10);
  }
  const auto base = [](int y, int a) { return -4.0 - 0.02 * (y - 1950) + 0.05 * a; };
  const auto s = testutil::make_surface(1950, 2009, 0, 49, [&](int y, int a) {
    return base(y, a) + 0.7 * *cei.value_for(y - a);
  });
  const ScaleEstimate clean = estimate_scale(s, cei);
  require(!clean.undefined, "scale flagged undefined");
  require(std::fabs(clean.value - 0.7) <= 1e-6,
          "noiseless estimate " + fmt(clean.value) + " missed 0.7");

  std::mt19937 rng(909);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto noisy = s;
  for (double& v : noisy.z.data()) v += noise(rng);
  const ScaleEstimate under_noise = estimate_scale(noisy, cei);
  require(std::fabs(under_noise.value - 0.7) <= 0.05,
          "noisy estimate " + fmt(under_noise.value) + " missed 0.7 by more than 0.05");
  return "clean " + fmt(clean.value) + ", noisy " + fmt(under_noise.value);
}

std::string mlc_lc_similarity() {
  std::vector<double> beta_raw(50);
  double beta_sum = 0.0;
  for (int a = 0; a < 50; ++a) {
    beta_raw[a] = 1.0 + 0.5 * std::sin(0.1 * a);
    beta_sum += beta_raw[a];
  }
  double worst_k = 1.0, worst_b = 1.0;
  for (const int c : {1935, 1950, 1965}) {
    const auto s = testutil::make_surface(1950, 2009, 0, 49, [&](int y, int a) {
      const double alpha = -8.0 + 0.07 * a;
      const double k = 25.0 - 0.85 * (y - 1950);
      const double d = static_cast<double>(y - a - c);
      return alpha + (beta_raw[a] / beta_sum) * k + 0.25 * std::exp(-d * d / 8.0);
    });
    MlcOptions opt;
    opt.field.padding = Padding::none;
    const MlcFit fit = mlc_fit(s, opt);
    const LeeCarterFit classical = lc_fit(s);
    worst_k = std::min(worst_k, testutil::pearson(fit.lc.k, classical.k));
    worst_b = std::min(worst_b, testutil::pearson(fit.lc.beta, classical.beta));
  }
  require(worst_k >= 0.95, "k correlation " + fmt(worst_k));
  require(worst_b >= 0.95, "beta correlation " + fmt(worst_b));
  return "corr(k) >= " + fmt(worst_k) + ", corr(beta) >= " + fmt(worst_b);
}

std::string uk_real_data() {
  std::string path;
  if (const char* env = std::getenv("MORTGEO_HMD_UK")) path = env;
  if (path.empty()) {
    for (const char* cand : {"data/GBR_Mx_1x1.txt", "data/GBRTENW.Mx_1x1.txt",
                             "data/GBR_NP.Mx_1x1.txt", "data/UK_Mx_1x1.txt"}) {
      if (fs::exists(cand)) {
        path = cand;
        break;
      }
    }
  }
  if (path.empty() || !fs::exists(path)) {
    return "SKIP:no local HMD UK Mx 1x1 file (set MORTGEO_HMD_UK)";
  }

  std::ifstream in(path);
  const MortalityTable table = parse_hmd_mx(in);
  const auto s = build_surface(table, SexSeries::total, {table.year_min, table.year_max},
                               {0, std::min(100, table.age_max)});
  const auto field = curvature_field(s, {Padding::zero});
  const auto series = cei_series(field);
  const auto trunc = truncate_series(series, default_truncation_policy(series));

  int argmax_year = 0;
  double argmax_val = -1.0;
  double mean_30s = 0.0, mean_50s = 0.0;
  int n_30s = 0, n_50s = 0;
  for (std::size_t k = 0; k < trunc.cohorts.size(); ++k) {
    const int c = trunc.cohorts[k];
    if (c >= 1900 && c <= 1960 && trunc.cei[k] > argmax_val) {
      argmax_val = trunc.cei[k];
      argmax_year = c;
    }
    if (c >= 1930 && c <= 1935) {
      mean_30s += trunc.cei[k];
      ++n_30s;
    }
    if (c >= 1950 && c <= 1960) {
      mean_50s += trunc.cei[k];
      ++n_50s;
    }
  }
  require(n_30s > 0 && n_50s > 0, "comparison windows not covered by the truncated series");
  mean_30s /= n_30s;
  mean_50s /= n_50s;
  require(argmax_year >= 1920 && argmax_year <= 1940,
          "peak cohort " + std::to_string(argmax_year) + " outside [1920, 1940]");
  require(mean_30s > mean_50s, "mean CEI 1930-35 (" + fmt(mean_30s) +
                                   ") not above 1950-60 (" + fmt(mean_50s) + ")");
  return "peak " + std::to_string(argmax_year) + ", mean30s " + fmt(mean_30s) + " > mean50s " +
         fmt(mean_50s);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "missing output file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cli_determinism(const std::string& cli) {
  require(!cli.empty(), "CLI binary path not supplied");
  const fs::path work = fs::temp_directory_path() / "mortgeo_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  // synthetic HMD input with a mild diagonal ridge and one missing cell
  const fs::path hmd = work / "input.txt";
  {
    std::ofstream out(hmd);
    out << testutil::make_hmd_text(1950, 1989, 29, [](int y, int a) {
      if (y == 1960 && a == 10) return 0.0;  // "."
      const double d = static_cast<double>(y - a - 1955);
      return 0.01 * std::exp(0.05 * a + 0.2 * std::exp(-d * d / 8.0) - 0.01 * (y - 1950));
    });
  }

  auto shell = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " >> " + (work / "log.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    require(rc == 0, "command failed: " + cmd);
  };

  shell("ingest --input " + hmd.string() + " --out " + (work / "a").string());
  shell("ingest --input " + hmd.string() + " --out " + (work / "b").string());
  const std::string surface_a = slurp(work / "a" / "surface.csv");
  require(surface_a == slurp(work / "b" / "surface.csv"), "ingest outputs differ between runs");

  // exact CSV round trip through the library
  std::istringstream sin(surface_a);
  const MortalitySurface s = read_surface_csv(sin);
  std::ostringstream sout;
  write_surface_csv(s, sout);
  require(sout.str() == surface_a, "surface CSV round trip is not byte-exact");

  const std::string cei_args = " --min-support 5 --pad zero --cei sum";
  shell("cei --input " + (work / "a" / "surface.csv").string() + cei_args + " --out " +
        (work / "c1").string());
  shell("cei --input " + (work / "a" / "surface.csv").string() + cei_args + " --out " +
        (work / "c2").string());
  const std::string cei_csv = slurp(work / "c1" / "cei.csv");
  require(cei_csv == slurp(work / "c2" / "cei.csv"), "cei.csv differs between runs");
  require(slurp(work / "c1" / "cei.svg") == slurp(work / "c2" / "cei.svg"),
          "cei.svg differs between runs");

  // the CLI pipeline on the written CSV equals the in-process pipeline
  const auto field = curvature_field(s, {Padding::zero});
  const auto full = cei_series(field);
  TruncationPolicy policy;
  policy.min_support = 5;
  policy.max_birth_year = default_truncation_policy(full).max_birth_year;
  const auto expected = truncate_series(full, policy);
  std::ostringstream cei_lib;
  write_cei_csv(expected, cei_lib);
  require(cei_lib.str() == cei_csv, "CLI cei output differs from the library pipeline");

  // model artifacts, charts included, are reproducible byte for byte
  const std::string fit_args = " --model mlc --min-support 5";
  shell("fit --input " + (work / "a" / "surface.csv").string() + fit_args + " --out " +
        (work / "f1").string());
  shell("fit --input " + (work / "a" / "surface.csv").string() + fit_args + " --out " +
        (work / "f2").string());
  for (const char* name : {"mlc_fit.csv", "lc_fit.csv", "adjustment.csv", "adjusted_surface.csv",
                           "mlc_report.txt", "k.svg", "beta.svg"}) {
    require(slurp(work / "f1" / name) == slurp(work / "f2" / name),
            std::string(name) + " differs between runs");
  }

  fs::remove_all(work);
  return "ingest, round trip, cei and mlc fit artifacts byte-identical";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run(1, "plane annihilation", plane_annihilation);
  run(2, "paraboloid curvature oracle", paraboloid_oracle);
  run(3, "normal estimation oracle", normal_oracle);
  run(4, "diagonal ridge detection", ridge_detection);
  run(5, "Lee-Carter exact recovery", lee_carter_recovery);
  run(6, "APC recovery and invariance", apc_recovery);
  run(7, "MLC scale recovery", mlc_scale_recovery);
  run(8, "MLC/LC similarity", mlc_lc_similarity);
  run(9, "UK real-data cohort peak", uk_real_data);
  run(10, "CLI determinism and round trip", [&] { return cli_determinism(cli); });

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed or skipped\n";
  return 0;
}
