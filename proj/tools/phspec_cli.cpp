// SPDX-License-Identifier: Apache-2.0
//
// phspec: command-line driver for the spectral toolkit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phspec/phspec.hpp"

namespace {

using phspec::complex;
using phspec::io::format_real;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;

struct Output {
  std::string dir = ".";
  std::string prefix;
};

class Run {
public:
  Run(std::string command, const Output& out) : out_(out), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    std::filesystem::create_directories(out_.dir);
  }

  json& parameters() { return manifest_.parameters; }
  void warn(const std::string& w) {
    std::cerr << "warning: " << w << '\n';
    manifest_.warnings.push_back(w);
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_.dir) / (out_.prefix + name)).string();
  }

  void write_table(const std::string& name, const phspec::io::Table& t) {
    const std::string p = path(name);
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot write " + p);
    phspec::io::write_table(os, t);
    manifest_.outputs.push_back(out_.prefix + name);
  }

  void finish(const std::string& manifest_name) {
    manifest_.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.write(path(manifest_name));
  }

private:
  Output out_;
  std::chrono::steady_clock::time_point start_;
  phspec::io::RunManifest manifest_;
};

struct ShootFlags {
  double theta0 = 1e-8;
  double step = 1e-4;
  int series_terms = 100;
  std::optional<double> end_offset;

  phspec::ShootingConfig config() const {
    phspec::ShootingConfig c;
    c.theta0 = theta0;
    c.step = step;
    c.series_terms = series_terms;
    c.end_offset = end_offset;
    c.validate();
    return c;
  }

  void record(json& p) const {
    p["theta0"] = theta0;
    p["step"] = step;
    p["series_terms"] = series_terms;
    p["end_offset"] = end_offset ? json(*end_offset) : json(nullptr);
  }
};

void add_shoot_flags(CLI::App* cmd, ShootFlags& f) {
  cmd->add_option("--theta0", f.theta0, "offset from the singular points")->capture_default_str();
  cmd->add_option("--step", f.step, "RK4 step")->capture_default_str();
  cmd->add_option("--series-terms", f.series_terms, "Frobenius truncation")->capture_default_str();
  cmd->add_option("--end-offset", f.end_offset, "read f_+ out at pi - end_offset (default theta0)");
}

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--out-dir", out.dir, "directory for CSV and manifest files")->capture_default_str();
  cmd->add_option("--prefix", out.prefix, "file name prefix");
}

phspec::ProblemParams positive_params(double eps, const char* name) {
  phspec::ProblemParams p(eps);
  if (!(eps > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive here (the spectrum is even in epsilon)");
  }
  return p;
}

void print_table(const phspec::io::Table& t) { phspec::io::write_table(std::cout, t); }

// shoot ---------------------------------------------------------------------

struct ShootArgs {
  double epsilon = 0.0;
  int count = 4;
  std::optional<double> omega_max;
  ShootFlags flags;
  Output out;
};

int cmd_shoot(const ShootArgs& a) {
  const auto params = positive_params(a.epsilon, "--epsilon");
  const auto config = a.flags.config();
  Run run("shoot", a.out);
  run.parameters()["epsilon"] = a.epsilon;
  a.flags.record(run.parameters());
  phspec::ImaginarySpectrum spectrum;
  if (a.omega_max) {
    run.parameters()["omega_max"] = *a.omega_max;
    spectrum = phspec::imaginary_spectrum(params, *a.omega_max, config);
  } else {
    if (a.count < 1) throw std::invalid_argument("--count must be >= 1");
    run.parameters()["count"] = a.count;
    spectrum = phspec::first_imaginary_eigenvalues(params, a.count, config);
  }
  for (const auto& f : spectrum.failures) {
    run.warn("scan failure in [" + format_real(f.omega_lo) + ", " + format_real(f.omega_hi) + "]: " + f.what);
  }
  std::vector<phspec::EigenvalueRecord> records(spectrum.records.begin() + 1, spectrum.records.end());
  const auto table = phspec::io::eigenvalue_table(records);
  run.write_table("eigenvalues.csv", table);
  run.finish("eigenvalues.manifest.json");
  print_table(table);
  return exit_ok;
}

// spectral ------------------------------------------------------------------

struct SpectralArgs {
  double epsilon = 0.0;
  int N = 2048;
  int k = 40;
  bool angles = false;
  std::string solver = "auto";
  Output out;
};

int cmd_spectral(const SpectralArgs& a) {
  if (!(std::abs(a.epsilon) < 2.0)) throw std::invalid_argument("--epsilon must satisfy |epsilon| < 2");
  if (a.N < 2) throw std::invalid_argument("-N must be >= 2");
  if (a.k < 1 || a.k > a.N) throw std::invalid_argument("-k must lie in [1, N]");
  phspec::EigenOptions opts;
  if (a.solver == "dense") {
    opts.solver = phspec::SolverKind::dense;
  } else if (a.solver == "shift-invert") {
    opts.solver = phspec::SolverKind::shift_invert;
  } else if (a.solver != "auto") {
    throw std::invalid_argument("--solver must be auto, dense or shift-invert");
  }
  const auto op = phspec::build_A(a.epsilon, a.N);
  Run run("spectral", a.out);
  auto& p = run.parameters();
  p["epsilon"] = a.epsilon;
  p["N"] = a.N;
  p["k"] = a.k;
  p["angles"] = a.angles;
  p["solver"] = a.solver;

  const auto pairs = phspec::eigendecompose(op, a.k, opts);
  std::vector<phspec::EigenvalueRecord> records;
  phspec::io::Table detail;
  detail.header = {"n", "re_lambda", "im_lambda", "on_axis", "cond"};
  if (a.angles) {
    detail.header.push_back("cos_plain");
    detail.header.push_back("cos_weighted");
  }
  int off_axis = 0;
  for (int j = 0; j < a.k; ++j) {
    const auto& pair = pairs[j];
    const complex lambda = pair.lambda();
    records.push_back({lambda, pair.backward_error, phspec::Method::spectral, a.epsilon, j + 1});
    std::string cond;
    try {
      cond = format_real(phspec::condition_number(pair.v));
    } catch (const phspec::NumericalError&) {
      cond = "inf";
    }
    if (!pair.on_axis()) ++off_axis;
    std::vector<std::string> row{std::to_string(j + 1), format_real(lambda.real()), format_real(lambda.imag()),
                                 pair.on_axis() ? "1" : "0", cond};
    if (a.angles) {
      if (j + 1 < a.k) {
        row.push_back(format_real(phspec::angle_cos(pair.v, pairs[j + 1].v, false)));
        row.push_back(format_real(phspec::angle_cos(pair.v, pairs[j + 1].v, true)));
      } else {
        row.push_back("nan");
        row.push_back("nan");
      }
    }
    detail.add(std::move(row));
  }
  p["off_axis_count"] = off_axis;
  if (off_axis > 0) run.warn(std::to_string(off_axis) + " eigenvalues lie off the imaginary axis");
  const auto table = phspec::io::eigenvalue_table(records);
  run.write_table("eigenvalues.csv", table);
  run.write_table("spectral.csv", detail);
  run.finish("spectral.manifest.json");
  print_table(detail);
  return exit_ok;
}

// winding -------------------------------------------------------------------

struct WindingArgs {
  double epsilon = 0.0;
  double r = 0.1;
  double R = 10.0;
  std::optional<double> center_re;
  std::optional<double> center_im;
  double half_width = 0.25;
  ShootFlags flags;
  Output out;
};

int cmd_winding(const WindingArgs& a) {
  const auto params = positive_params(a.epsilon, "--epsilon");
  const auto config = a.flags.config();
  Run run("winding", a.out);
  auto& p = run.parameters();
  p["epsilon"] = a.epsilon;
  a.flags.record(p);
  std::optional<phspec::Contour> contour;
  if (a.center_re || a.center_im) {
    const complex c{a.center_re.value_or(0.0), a.center_im.value_or(0.0)};
    p["contour"] = "square";
    p["center_re"] = c.real();
    p["center_im"] = c.imag();
    p["half_width"] = a.half_width;
    contour = phspec::Contour::square(c, a.half_width);
  } else {
    p["contour"] = "quadrant";
    p["r"] = a.r;
    p["R"] = a.R;
    contour = phspec::Contour::quadrant(a.r, a.R);
  }
  const auto result = phspec::winding_number(params, *contour, config);
  p["winding"] = result.winding;
  p["total_argument"] = result.total_argument;
  phspec::io::Table t;
  t.header = {"s", "re_lambda", "im_lambda", "re_F", "im_F"};
  for (const auto& s : result.samples) {
    t.add({format_real(s.s), format_real(s.lambda.real()), format_real(s.lambda.imag()), format_real(s.value.real()),
           format_real(s.value.imag())});
  }
  run.write_table("winding.csv", t);
  run.finish("winding.manifest.json");
  std::cout << "winding=" << result.winding << '\n';
  return exit_ok;
}

// wkb -----------------------------------------------------------------------

struct WkbArgs {
  double epsilon = 0.0;
  int n_max = 12;
  bool compare_shoot = false;
  bool riccati = false;
  ShootFlags flags;
  Output out;
};

int cmd_wkb(const WkbArgs& a) {
  const auto params = positive_params(a.epsilon, "--epsilon");
  if (a.n_max < 1) throw std::invalid_argument("--n-max must be >= 1");
  const auto config = a.flags.config();
  phspec::WkbQuery query;
  query.refine_riccati = a.riccati;
  Run run("wkb", a.out);
  auto& p = run.parameters();
  p["epsilon"] = a.epsilon;
  p["n_max"] = a.n_max;
  p["compare_shoot"] = a.compare_shoot;
  p["riccati"] = a.riccati;
  p["asymptotic_constant"] = phspec::asymptotic_constant(params, query);
  std::vector<double> shoot;
  if (a.compare_shoot) {
    a.flags.record(p);
    const auto s = phspec::first_imaginary_eigenvalues(params, a.n_max, config);
    for (int n = 1; n <= a.n_max; ++n) shoot.push_back(s.records[n].lambda.imag());
  }
  std::vector<double> wkb(a.n_max);
  phspec::parallel_for(static_cast<std::size_t>(a.n_max),
                       [&](std::size_t i) { wkb[i] = phspec::wkb_eigenvalue(params, int(i) + 1, query); });
  phspec::io::Table t;
  t.header = {"n", "omega_wkb"};
  if (a.compare_shoot) {
    t.header.push_back("omega_shoot");
    t.header.push_back("rel_error");
  }
  std::vector<phspec::EigenvalueRecord> records;
  for (int n = 1; n <= a.n_max; ++n) {
    const double w = wkb[n - 1];
    records.push_back({complex{0.0, w}, std::nan(""), phspec::Method::wkb, a.epsilon, n});
    std::vector<std::string> row{std::to_string(n), format_real(w)};
    if (a.compare_shoot) {
      const double s = shoot[n - 1];
      row.push_back(format_real(s));
      row.push_back(format_real(std::abs(w - s) / s));
    }
    t.add(std::move(row));
  }
  run.write_table("wkb.csv", t);
  run.write_table("eigenvalues.csv", phspec::io::eigenvalue_table(records));
  run.finish("wkb.manifest.json");
  print_table(t);
  return exit_ok;
}

// interlace -----------------------------------------------------------------

struct InterlaceArgs {
  double e0 = 0.0;
  double e1 = 0.0;
  int m = 15;
  ShootFlags flags;
  Output out;
};

int cmd_interlace(const InterlaceArgs& a) {
  const auto p0 = positive_params(a.e0, "--e0");
  const auto p1 = positive_params(a.e1, "--e1");
  const auto config = a.flags.config();
  Run run("interlace", a.out);
  auto& p = run.parameters();
  p["e0"] = a.e0;
  p["e1"] = a.e1;
  p["m"] = a.m;
  a.flags.record(p);
  const auto report = phspec::interlace_check(p0, p1, a.m, config);
  for (const auto& w : report.warnings) run.warn(w);
  p["alternates"] = report.alternates;
  p["identical"] = report.identical;
  phspec::io::Table t;
  t.header = {"n", "omega0", "residual0", "omega1", "residual1"};
  for (int n = 0; n < a.m; ++n) {
    t.add({std::to_string(n + 1), format_real(report.omega0[n]), format_real(report.residuals0[n]),
           format_real(report.omega1[n]), format_real(report.residuals1[n])});
  }
  run.write_table("interlace.csv", t);
  run.finish("interlace.manifest.json");
  print_table(t);
  std::cout << "alternates=" << (report.alternates ? "true" : "false");
  if (report.identical) std::cout << " identical=true";
  std::cout << '\n';
  return exit_ok;
}

// profile -------------------------------------------------------------------

struct ProfileArgs {
  double epsilon = 0.0;
  double omega = 0.0;
  long grid = 1000;
  ShootFlags flags;
  Output out;
};

int cmd_profile(const ProfileArgs& a) {
  const auto params = positive_params(a.epsilon, "--epsilon");
  if (!(a.omega > 0.0)) throw std::invalid_argument("--omega must be positive");
  const auto config = a.flags.config();
  Run run("profile", a.out);
  auto& p = run.parameters();
  p["epsilon"] = a.epsilon;
  p["omega"] = a.omega;
  p["grid"] = a.grid;
  a.flags.record(p);
  const auto prof = phspec::eigenfunction_profile(params, a.omega, a.grid, config);
  phspec::io::Table t;
  t.header = {"theta", "re_f", "im_f"};
  std::vector<double> re, im;
  for (const auto& s : prof) {
    t.add({format_real(s.theta), format_real(s.f.real()), format_real(s.f.imag())});
    if (s.theta > 0.0) {
      re.push_back(s.f.real());
      im.push_back(s.f.imag());
    }
  }
  p["zeros_re"] = phspec::count_sign_changes(re);
  p["zeros_im"] = phspec::count_sign_changes(im);
  run.write_table("profile.csv", t);
  run.finish("profile.manifest.json");
  std::cout << "samples=" << prof.size() << " zeros_re=" << phspec::count_sign_changes(re)
            << " zeros_im=" << phspec::count_sign_changes(im) << '\n';
  return exit_ok;
}

// ghat ----------------------------------------------------------------------

struct GhatArgs {
  double e0 = 0.0;
  double e1 = 0.0;
  phspec::SampleGrid grid;
  ShootFlags flags;
  Output out;
};

int cmd_ghat(const GhatArgs& a) {
  const auto p0 = positive_params(a.e0, "--e0");
  const auto p1 = positive_params(a.e1, "--e1");
  const auto config = a.flags.config();
  Run run("ghat", a.out);
  auto& p = run.parameters();
  p["e0"] = a.e0;
  p["e1"] = a.e1;
  p["re_min"] = a.grid.re_min;
  p["re_max"] = a.grid.re_max;
  p["im_min"] = a.grid.im_min;
  p["im_max"] = a.grid.im_max;
  p["grid_step"] = a.grid.step;
  a.flags.record(p);
  const auto report = phspec::g_hat_sample(p0, p1, a.grid, config);
  phspec::io::Table t;
  t.header = {"re_lambda", "im_lambda", "re_G", "im_G", "sign_agrees"};
  int violations = 0;
  for (const auto& s : report.samples) {
    if (!s.sign_agrees) ++violations;
    t.add({format_real(s.lambda.real()), format_real(s.lambda.imag()), format_real(s.value.real()),
           format_real(s.value.imag()), s.sign_agrees ? "1" : "0"});
  }
  json skipped = json::array();
  for (const auto& l : report.skipped) skipped.push_back({l.real(), l.imag()});
  p["skipped"] = skipped;
  p["violations"] = violations;
  if (!report.skipped.empty()) run.warn(std::to_string(report.skipped.size()) + " samples skipped near poles");
  run.write_table("ghat.csv", t);
  run.finish("ghat.manifest.json");
  std::cout << "samples=" << report.samples.size() << " skipped=" << report.skipped.size()
            << " violations=" << violations << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of the operator -d/dtheta - eps d/dtheta(sin(theta) d/dtheta) on the circle"};
  app.set_version_flag("--version", std::string(phspec::version));
  app.require_subcommand(1);

  ShootArgs shoot;
  auto* c_shoot = app.add_subcommand("shoot", "imaginary eigenvalues by shooting");
  c_shoot->add_option("--epsilon", shoot.epsilon)->required();
  auto* o_count = c_shoot->add_option("--count", shoot.count, "number of eigenvalues")->capture_default_str();
  auto* o_wmax = c_shoot->add_option("--omega-max", shoot.omega_max, "scan (0, omega_max] instead");
  o_count->excludes(o_wmax);
  add_shoot_flags(c_shoot, shoot.flags);
  add_output_flags(c_shoot, shoot.out);

  SpectralArgs spectral;
  auto* c_spec = app.add_subcommand("spectral", "eigenvalues of the truncated Fourier matrix");
  c_spec->add_option("--epsilon", spectral.epsilon)->required();
  c_spec->add_option("-N", spectral.N, "truncation")->capture_default_str();
  c_spec->add_option("-k", spectral.k, "number of eigenvalues of smallest modulus")->capture_default_str();
  c_spec->add_flag("--angles", spectral.angles, "cosines between consecutive eigenvectors");
  c_spec->add_option("--solver", spectral.solver, "auto, dense or shift-invert")->capture_default_str();
  add_output_flags(c_spec, spectral.out);

  WindingArgs winding;
  auto* c_wind = app.add_subcommand("winding", "argument principle on a contour");
  c_wind->add_option("--epsilon", winding.epsilon)->required();
  c_wind->add_option("-r", winding.r, "inner offset of the quadrant contour")->capture_default_str();
  c_wind->add_option("-R", winding.R, "outer radius of the quadrant contour")->capture_default_str();
  c_wind->add_option("--center-re", winding.center_re, "square contour centre (real part)");
  c_wind->add_option("--center-im", winding.center_im, "square contour centre (imaginary part)");
  c_wind->add_option("--half-width", winding.half_width, "square contour half width")->capture_default_str();
  add_shoot_flags(c_wind, winding.flags);
  add_output_flags(c_wind, winding.out);

  WkbArgs wkb;
  auto* c_wkb = app.add_subcommand("wkb", "asymptotic eigenvalues from the counting function");
  c_wkb->add_option("--epsilon", wkb.epsilon)->required();
  c_wkb->add_option("--n-max", wkb.n_max)->capture_default_str();
  c_wkb->add_flag("--compare-shoot", wkb.compare_shoot, "add shooting values and relative errors");
  c_wkb->add_flag("--riccati", wkb.riccati, "include the Riccati correction sweeps");
  add_shoot_flags(c_wkb, wkb.flags);
  add_output_flags(c_wkb, wkb.out);

  InterlaceArgs interlace;
  auto* c_int = app.add_subcommand("interlace", "interlacing of imaginary eigenvalues for two epsilons");
  c_int->add_option("--e0", interlace.e0)->required();
  c_int->add_option("--e1", interlace.e1)->required();
  c_int->add_option("-m", interlace.m, "eigenvalues per sequence")->capture_default_str();
  add_shoot_flags(c_int, interlace.flags);
  add_output_flags(c_int, interlace.out);

  ProfileArgs profile;
  auto* c_prof = app.add_subcommand("profile", "eigenfunction samples on (-pi, pi)");
  c_prof->add_option("--epsilon", profile.epsilon)->required();
  c_prof->add_option("--omega", profile.omega, "eigenvalue lambda = i omega")->required();
  c_prof->add_option("--grid", profile.grid, "approximate samples per half period")->capture_default_str();
  add_shoot_flags(c_prof, profile.flags);
  add_output_flags(c_prof, profile.out);

  GhatArgs ghat;
  auto* c_ghat = app.add_subcommand("ghat", "ratio F_e0 / F_e1 on a rectangle");
  c_ghat->add_option("--e0", ghat.e0)->required();
  c_ghat->add_option("--e1", ghat.e1)->required();
  c_ghat->add_option("--re-min", ghat.grid.re_min)->capture_default_str();
  c_ghat->add_option("--re-max", ghat.grid.re_max)->capture_default_str();
  c_ghat->add_option("--im-min", ghat.grid.im_min)->capture_default_str();
  c_ghat->add_option("--im-max", ghat.grid.im_max)->capture_default_str();
  c_ghat->add_option("--grid-step", ghat.grid.step)->capture_default_str();
  add_shoot_flags(c_ghat, ghat.flags);
  add_output_flags(c_ghat, ghat.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*c_shoot) return cmd_shoot(shoot);
    if (*c_spec) return cmd_spectral(spectral);
    if (*c_wind) return cmd_winding(winding);
    if (*c_wkb) return cmd_wkb(wkb);
    if (*c_int) return cmd_interlace(interlace);
    if (*c_prof) return cmd_profile(profile);
    if (*c_ghat) return cmd_ghat(ghat);
  } catch (const phspec::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_usage;
}
