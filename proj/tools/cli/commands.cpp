#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/formats.hpp"
#include "qpurify/analytic.hpp"
#include "qpurify/sde.hpp"
#include "qpurify/stats.hpp"

#ifndef QPURIFY_VERSION
#define QPURIFY_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace qpurify::cli {

namespace {

constexpr double kFpThreshold = 1e-9;

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Writes to the named file, or to `fallback` when the name is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write(os);
  if (!os) throw std::runtime_error("failed writing " + path);
}

// Either t values or eta*t values, normalized to t.
struct TimeList {
  std::vector<double> t;
  std::vector<double> etat;
  std::string etat_grid;

  bool empty() const { return t.empty() && etat.empty() && etat_grid.empty(); }

  std::vector<double> resolve(double eta, const std::string& default_grid) const {
    const int given = !t.empty() + !etat.empty() + !etat_grid.empty();
    if (given > 1) throw ConfigError("give only one of --t-list, --etat-list, --etat-grid");
    if (!t.empty()) return t;
    std::vector<double> dimless = !etat.empty() ? etat : parse_grid(etat_grid.empty() ? default_grid : etat_grid);
    for (double& v : dimless) v /= eta;
    return dimless;
  }

  void attach(CLI::App* app) {
    app->add_option("--t-list", t, "Times t (comma separated)")->delimiter(',');
    app->add_option("--etat-list", etat, "Dimensionless times eta*t (comma separated)")->delimiter(',');
    app->add_option("--etat-grid", etat_grid, "eta*t grid lo:hi:n");
  }
};

double resolve_time(const std::optional<double>& t, const std::optional<double>& etat, double eta) {
  if (t && etat) throw ConfigError("give either --t or --etat, not both");
  if (t) return *t;
  if (etat) return *etat / eta;
  throw ConfigError("a time is required (--t or --etat)");
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  SimConfig config;
  std::string backend = "langevin_q";
  std::string boundary = "record_only";
  std::vector<double> snapshots_etat;
  std::string out_dir;
};

int simulate(SimulateArgs& a, std::ostream& out, std::ostream& err) {
  SimConfig& c = a.config;
  const auto backend = parse_backend(a.backend);
  if (!backend) throw ConfigError("unknown backend '" + a.backend + "'");
  c.backend = *backend;
  const auto policy = parse_boundary_policy(a.boundary);
  if (!policy) throw ConfigError("unknown boundary policy '" + a.boundary + "'");
  c.boundary_policy = *policy;
  if (!a.snapshots_etat.empty()) {
    if (!c.snapshot_times.empty()) throw ConfigError("give either --snapshots or --snapshots-etat");
    if (!(c.eta > 0.0)) throw ConfigError("eta must be positive");
    for (double v : a.snapshots_etat) c.snapshot_times.push_back(v / c.eta);
  }
  if (c.snapshot_times.empty()) c.snapshot_times.push_back(static_cast<double>(c.n_steps) * c.dt);
  for (const auto& w : validate(c)) err << "warning: " << w << '\n';

  std::string dir = a.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env && *env ? env : "qpurify_out";
  }

  const auto start = std::chrono::steady_clock::now();
  const auto snapshots = run_ensemble(c);
  fs::create_directories(dir);

  nlohmann::json outputs = nlohmann::json::array();
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(3) << std::setfill('0') << i << ".csv";
    emit((fs::path(dir) / name.str()).string(), out, [&](std::ostream& os) { write_snapshot_csv(os, snapshots[i], c); });
    outputs.push_back({{"path", name.str()},
                       {"kind", "snapshot"},
                       {"t", snapshots[i].time},
                       {"etat", c.eta * snapshots[i].time},
                       {"step", snapshots[i].step},
                       {"excursion_count", snapshots[i].excursion_count}});
    out << (fs::path(dir) / name.str()).string() << '\n';
  }
  emit((fs::path(dir) / "config.toml").string(), out, [&](std::ostream& os) { os << to_toml(c); });
  outputs.push_back({{"path", "config.toml"}, {"kind", "config"}});

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json manifest = {
      {"tool", "qpurify"},
      {"version", QPURIFY_VERSION},
      {"command", "simulate"},
      {"timestamp", utc_timestamp()},
      {"wall_seconds", seconds},
      {"threads", c.threads},
      {"config", to_json(c)},
      {"config_file", "config.toml"},
      {"outputs", outputs},
  };
  emit((fs::path(dir) / "manifest.json").string(), out, [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
  out << (fs::path(dir) / "manifest.json").string() << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
  std::string which;
  double eta = 1.0;
  std::optional<double> t;
  std::optional<double> etat;
  std::string grid;
  std::string out;
};

std::vector<double> default_density_grid(DensityKind which, double t, double eta) {
  switch (which) {
    case DensityKind::P_Q: {
      const double half = eta * t + 6.0 * std::sqrt(eta * t);
      return parse_grid(format_double(-half) + ":" + format_double(half) + ":601");
    }
    case DensityKind::P_Omega: {
      const double half = eta + 6.0 * std::sqrt(eta / t);
      return parse_grid(format_double(-half) + ":" + format_double(half) + ":601");
    }
    case DensityKind::P_q: return parse_grid("-0.99:0.99:199");
    case DensityKind::P_tau: return parse_grid("0.5025:0.9975:199");
  }
  return {};
}

int density_cmd(const DensityArgs& a, std::ostream& out) {
  const auto which = parse_density_kind(a.which);
  if (!which) throw ConfigError("unknown density '" + a.which + "'");
  const Rate eta(a.eta);
  const double t = resolve_time(a.t, a.etat, a.eta);
  if (!(t > 0.0)) throw ConfigError("density requires t > 0");
  const auto grid = a.grid.empty() ? default_density_grid(*which, t, a.eta) : parse_grid(a.grid);
  const DensityCurve curve = sample_density(*which, eta, t, grid);
  emit(a.out, out, [&](std::ostream& os) { write_density_csv(os, curve); });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string samples;
  std::string which = "P_q";
  std::optional<double> eta;
  std::optional<double> t;
  std::optional<double> etat;
  double ks_threshold = 0.01;
  std::string out;
  std::string histogram;
};

int compare_cmd(const CompareArgs& a, std::ostream& out) {
  const auto which = parse_density_kind(a.which);
  if (!which) throw ConfigError("unknown density '" + a.which + "'");
  std::ifstream is(a.samples);
  if (!is) throw ConfigError("cannot open samples file '" + a.samples + "'");
  const SampleFile file = read_snapshot_csv(is);
  EnsembleSnapshot snapshot = file.to_snapshot();

  const double file_eta = file.number("eta");
  if (a.eta && !same_value(*a.eta, file_eta)) {
    throw ConfigError("--eta " + format_double(*a.eta) + " does not match sample metadata eta=" +
                      format_double(file_eta));
  }
  if (a.t || a.etat) {
    const double t = resolve_time(a.t, a.etat, file_eta);
    if (!same_value(t, snapshot.time)) {
      throw ConfigError("requested t=" + format_double(t) + " does not match sample metadata t=" +
                        format_double(snapshot.time));
    }
  }
  if (!(snapshot.time > 0.0)) throw ConfigError("comparison needs a snapshot at t > 0");

  const Rate eta(file_eta);
  const ComparisonReport report = compare_snapshot(snapshot, *which, eta);
  nlohmann::json j = to_json(report);
  j["ks_threshold"] = a.ks_threshold;
  j["samples_file"] = a.samples;
  const bool pass = report.ks_statistic && *report.ks_statistic < a.ks_threshold;
  j["pass"] = pass;
  emit(a.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });

  if (!a.histogram.empty()) {
    const auto x = samples_as(*which, snapshot);
    const Histogram h = build_histogram(x, default_edges(*which, snapshot.time, eta));
    emit(a.histogram, out, [&](std::ostream& os) {
      write_histogram_csv(os, h,
                          {{"which", a.which}, {"eta", format_double(file_eta)}, {"t", format_double(snapshot.time)}});
    });
  }
  return pass ? kSuccess : kComparisonFailed;
}

// ---------------------------------------------------------------------------
// fp-check

struct FpArgs {
  std::vector<double> etas{0.5, 1.0, 2.0};
  std::string q_grid = "-6:6:121";
  std::string t_grid = "0.1:5:50";
  std::string out;
};

int fp_check_cmd(const FpArgs& a, std::ostream& out) {
  const auto qs = parse_grid(a.q_grid);
  const auto ts = parse_grid(a.t_grid);
  for (double t : ts)
    if (!(t > 0.0)) throw ConfigError("t-grid must be strictly positive");
  if (a.etas.empty()) throw ConfigError("at least one eta is required");
  double worst = -1.0;
  double wq = 0.0, wt = 0.0, we = 0.0;
  std::size_t points = 0;
  for (double e : a.etas) {
    const Rate eta(e);
    for (double t : ts) {
      for (double q : qs) {
        const double r = std::abs(fokker_planck_residual(q, t, eta));
        ++points;
        if (!(r <= worst)) {
          worst = r;
          wq = q;
          wt = t;
          we = e;
        }
      }
    }
  }
  const bool pass = worst < kFpThreshold;
  const nlohmann::json j = {
      {"max_abs_relative_residual", worst},
      {"worst_point", {{"Q", wq}, {"t", wt}, {"eta", we}}},
      {"n_points", points},
      {"threshold", kFpThreshold},
      {"pass", pass},
  };
  emit(a.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return pass ? kSuccess : kComparisonFailed;
}

// ---------------------------------------------------------------------------
// roots

struct RootsArgs {
  double eta = 1.0;
  TimeList times;
  std::string out;
};

int roots_cmd(const RootsArgs& a, std::ostream& out) {
  const Rate eta(a.eta);
  const auto ts = a.times.resolve(a.eta, "0.2:5:49");
  for (double t : ts)
    if (!(t > 0.0)) throw ConfigError("times must be positive");
  emit(a.out, out, [&](std::ostream& os) {
    os << "# eta=" << format_double(a.eta) << '\n';
    os << "etat,inv_etat,above_threshold,n_extrema,omega_minus,omega_center,omega_plus,center_kind\n";
    for (double t : ts) {
      const ExtremaReport r = extremal_roots(t, eta);
      const double et = a.eta * t;
      os << format_double(et) << ',' << format_double(1.0 / et) << ',' << (r.above_threshold ? 1 : 0) << ','
         << r.extrema.size() << ',';
      if (r.above_threshold) {
        os << format_double(r.extrema.front().omega) << ",0," << format_double(r.extrema.back().omega) << ",max\n";
      } else {
        os << ",0,,min\n";
      }
    }
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// mean-purity

struct MeanPurityArgs {
  double eta = 1.0;
  TimeList times;
  std::string samples_dir;
  std::string out;
};

struct McPoint {
  double etat;
  double mean;
  double stderr_;
  long n;
};

std::vector<McPoint> load_mc_points(const std::string& dir, double eta) {
  if (!fs::is_directory(dir)) throw ConfigError("samples directory '" + dir + "' not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<McPoint> points;
  for (const auto& path : files) {
    std::ifstream is(path);
    const SampleFile file = read_snapshot_csv(is);
    if (!same_value(file.number("eta"), eta)) {
      throw ConfigError(path.string() + " has eta=" + file.metadata.at("eta") + ", expected " + format_double(eta));
    }
    const EnsembleSnapshot s = file.to_snapshot();
    const ComparisonReport r = moment_report(s, Rate(eta));
    const MomentRow* tau = r.moment("mean_tau");
    points.push_back({eta * s.time, tau->empirical, tau->stderr_, r.n_samples});
  }
  return points;
}

int mean_purity_cmd(const MeanPurityArgs& a, std::ostream& out) {
  const Rate eta(a.eta);
  const auto mc = a.samples_dir.empty() ? std::vector<McPoint>{} : load_mc_points(a.samples_dir, a.eta);
  // Without explicit times, a samples directory supplies its own snapshot times.
  std::vector<double> ts;
  if (!mc.empty() && a.times.empty()) {
    for (const McPoint& p : mc) ts.push_back(p.etat / a.eta);
    std::sort(ts.begin(), ts.end());
  } else {
    ts = a.times.resolve(a.eta, "0:4:21");
  }
  for (double t : ts)
    if (!(t >= 0.0)) throw ConfigError("times must be non-negative");
  bool all_within = true;
  emit(a.out, out, [&](std::ostream& os) {
    os << "# eta=" << format_double(a.eta) << '\n';
    os << "etat,mean_tau";
    if (!a.samples_dir.empty()) os << ",mc_mean_tau,mc_stderr,mc_n,within_3se";
    os << '\n';
    for (double t : ts) {
      const double et = a.eta * t;
      const double analytic = mean_purity(t, eta);
      os << format_double(et) << ',' << format_double(analytic);
      if (!a.samples_dir.empty()) {
        auto it = std::find_if(mc.begin(), mc.end(), [&](const McPoint& p) { return same_value(p.etat, et); });
        if (it == mc.end()) {
          os << ",,,,";
        } else {
          const bool within = std::abs(it->mean - analytic) <= 3.0 * it->stderr_;
          all_within = all_within && within;
          os << ',' << format_double(it->mean) << ',' << format_double(it->stderr_) << ',' << it->n << ','
             << (within ? 1 : 0);
        }
      }
      os << '\n';
    }
  });
  return all_within ? kSuccess : kComparisonFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qpurify: trajectories and exact distributions for a continuously monitored qubit", "qpurify"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QPURIFY_VERSION);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Run a trajectory ensemble and write snapshot CSVs");
  // CLI11 reads config files on the root app only; the file carries a
  // [simulate] section and `simulate --config` falls through to the root.
  app.set_config("--config", "", "TOML config file with a [simulate] section (flags override)");
  sim->fallthrough();
  sim->add_option("--eta", sim_args.config.eta, "Measurement rate");
  sim->add_option("--dt", sim_args.config.dt, "Time step");
  sim->add_option("--steps", sim_args.config.n_steps, "Number of steps");
  sim->add_option("--traj", sim_args.config.n_traj, "Number of trajectories");
  sim->add_option("--seed", sim_args.config.master_seed, "Master seed");
  sim->add_option("--backend", sim_args.backend, "langevin_q | langevin_Q | collisional");
  sim->add_option("--snapshots", sim_args.config.snapshot_times, "Snapshot times t")->delimiter(',');
  sim->add_option("--snapshots-etat", sim_args.snapshots_etat, "Snapshot times as eta*t")->delimiter(',');
  sim->add_option("--boundary", sim_args.boundary, "record_only | clamp");
  sim->add_option("--threads", sim_args.config.threads, "Worker cap (0 = all cores); results do not depend on it");
  sim->add_option("--out", sim_args.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./qpurify_out)");

  DensityArgs den_args;
  auto* den = app.add_subcommand("density", "Tabulate an exact density as x,density CSV");
  den->add_option("--which", den_args.which, "P_Q | P_Omega | P_q | P_tau")->required();
  den->add_option("--eta", den_args.eta, "Measurement rate");
  den->add_option("--t", den_args.t, "Time");
  den->add_option("--etat", den_args.etat, "Dimensionless time eta*t");
  den->add_option("--grid", den_args.grid, "lo:hi:n");
  den->add_option("--out", den_args.out, "Output CSV (default stdout)");

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "Compare snapshot samples with an exact density");
  cmp->add_option("--samples", cmp_args.samples, "Snapshot CSV from simulate")->required();
  cmp->add_option("--which", cmp_args.which, "P_Q | P_Omega | P_q | P_tau");
  cmp->add_option("--eta", cmp_args.eta, "Expected eta (checked against the file)");
  cmp->add_option("--t", cmp_args.t, "Expected time (checked against the file)");
  cmp->add_option("--etat", cmp_args.etat, "Expected eta*t (checked against the file)");
  cmp->add_option("--ks-threshold", cmp_args.ks_threshold, "Pass if KS distance is below this");
  cmp->add_option("--out", cmp_args.out, "Report JSON (default stdout)");
  cmp->add_option("--histogram", cmp_args.histogram, "Also write the sample histogram as x,density CSV");

  FpArgs fp_args;
  auto* fp = app.add_subcommand("fp-check", "Fokker-Planck residual of P_Q over a grid");
  fp->add_option("--eta", fp_args.etas, "Rates (comma separated)")->delimiter(',');
  fp->add_option("--Q-grid", fp_args.q_grid, "lo:hi:n");
  fp->add_option("--t-grid", fp_args.t_grid, "lo:hi:n");
  fp->add_option("--out", fp_args.out, "Report JSON (default stdout)");

  RootsArgs roots_args;
  auto* roots = app.add_subcommand("roots", "Stationary points of the action S(Omega, t)");
  roots->add_option("--eta", roots_args.eta, "Measurement rate");
  roots_args.times.attach(roots);
  roots->add_option("--out", roots_args.out, "Output CSV (default stdout)");

  MeanPurityArgs mp_args;
  auto* mp = app.add_subcommand("mean-purity", "Exact mean purity, optionally joined with Monte Carlo");
  mp->add_option("--eta", mp_args.eta, "Measurement rate");
  mp_args.times.attach(mp);
  mp->add_option("--samples-dir", mp_args.samples_dir, "Directory of snapshot CSVs to join");
  mp->add_option("--out", mp_args.out, "Output CSV (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*sim) return simulate(sim_args, out, err);
    if (*den) return density_cmd(den_args, out);
    if (*cmp) return compare_cmd(cmp_args, out);
    if (*fp) return fp_check_cmd(fp_args, out);
    if (*roots) return roots_cmd(roots_args, out);
    if (*mp) return mean_purity_cmd(mp_args, out);
  } catch (const std::invalid_argument& e) {  // ConfigError
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kConfigError;
}

}  // namespace qpurify::cli
