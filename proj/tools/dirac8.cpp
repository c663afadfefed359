// dirac8: command-line front end for the dispersion tables, the verification
// suite, the lattice chain, the plane-wave catalog and packet evolution.
//
// Exit codes: 0 success, 1 failed check or failed run, 2 usage error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirac8/csv.hpp"
#include "dirac8/dispersion.hpp"
#include "dirac8/lattice_chain.hpp"
#include "dirac8/pde_evolution.hpp"
#include "dirac8/plane_waves.hpp"
#include "dirac8/verification.hpp"

namespace {

using namespace dirac8;
using csv::format_double;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Units {
  std::string system = "natural";
  double m_e = 1.0;
  double c = 1.0;
  double hbar = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--units", system, "Unit system")->check(CLI::IsMember({"natural", "custom"}));
    app.add_option("--m-e", m_e, "Electron-sector mass (custom units)");
    app.add_option("--c", c, "Speed of light (custom units)");
    app.add_option("--hbar", hbar, "Reduced Planck constant (custom units)");
  }

  QuantumParams params(double epsilon) const {
    QuantumParams p = system == "natural" ? QuantumParams::natural(epsilon)
                                          : QuantumParams{m_e, epsilon, c, hbar};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }

  std::string header(const QuantumParams& p) const {
    return "units=" + system + " m_e=" + format_double(p.m_e) + " c=" + format_double(p.c) +
           " hbar=" + format_double(p.hbar) + " epsilon=" + format_double(p.epsilon);
  }

  nlohmann::json to_json(const QuantumParams& p) const {
    return {{"system", system}, {"m_e", p.m_e}, {"c", p.c}, {"hbar", p.hbar}, {"epsilon", p.epsilon}};
  }
};

// Writes to a file when a path is given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  return f;
}

// ---------------------------------------------------------------------------

struct DispersionCmd {
  Units units;
  std::vector<double> epsilons{0.5};
  double pmin = 0.0;
  double pmax = 3.0;
  int n = 121;
  std::string format = "csv";
  std::string output;

  void add_to(CLI::App& app) {
    units.add_to(app);
    app.add_option("--epsilon", epsilons, "Mass ratio; repeat for several tables")->expected(1, -1);
    app.add_option("--pmin", pmin, "Smallest momentum p_z");
    app.add_option("--pmax", pmax, "Largest momentum p_z");
    app.add_option("--n", n, "Number of momenta");
    app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", output, "Output file (default stdout)");
  }

  int run() const {
    for (double e : epsilons) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw UsageError("--epsilon must be >= 0");
    }
    std::vector<double> grid;
    try {
      grid = dispersion::momentum_grid(pmin, pmax, n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    Output out(output);
    auto& os = out.stream();
    if (format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (double e : epsilons) {
        const auto p = units.params(e);
        const auto rows = dispersion::branch_table(e, grid, p);
        nlohmann::json block{{"units", units.to_json(p)}, {"rows", nlohmann::json::array()}};
        for (const auto& r : rows) {
          block["rows"].push_back({{"p_z", r.p_z},
                                   {"E_acoustic_plus", r.e_acoustic_plus},
                                   {"E_acoustic_minus", r.e_acoustic_minus},
                                   {"E_optical_plus", r.e_optical_plus},
                                   {"E_optical_minus", r.e_optical_minus}});
        }
        j.push_back(block);
      }
      csv::write_comment(os, units.header(units.params(epsilons.front())));
      os << j.dump(2) << '\n';
      return kOk;
    }
    for (double e : epsilons) {
      const auto p = units.params(e);
      csv::write_comment(os, units.header(p));
      dispersion::write_branch_table_csv(os, dispersion::branch_table(e, grid, p));
    }
    return kOk;
  }
};

// ---------------------------------------------------------------------------

struct VerifyCmd {
  Units units;
  double epsilon = 0.5;
  std::uint64_t seed = verify::SuiteOptions{}.seed;
  bool quick = false;
  std::string corrupt = "none";
  std::string format = "text";
  std::string output;

  void add_to(CLI::App& app) {
    units.add_to(app);
    app.add_option("--epsilon", epsilon, "Mass ratio");
    app.add_option("--seed", seed, "Seed for the random draws");
    app.add_flag("--quick", quick, "Skip the chain and packet-evolution checks");
    app.add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("-o,--output", output, "Output file (default stdout)");
    // Test hook: deliberately break one relation to show the suite notices.
    app.add_option("--corrupt", corrupt)->check(CLI::IsMember(verify::fault_names()))->group("");
  }

  int run() const {
    if (!(epsilon >= 0.0)) throw UsageError("--epsilon must be >= 0");
    verify::SuiteOptions opt;
    opt.params = units.params(epsilon);
    opt.fault = verify::parse_fault(corrupt);
    opt.seed = seed;
    opt.include_chain = !quick;
    opt.include_evolution = !quick;
    const auto report = verify::run_suite(opt);

    Output out(output);
    auto& os = out.stream();
    csv::write_comment(os, units.header(opt.params));
    if (format == "json") {
      auto j = report.to_json();
      j["units"] = units.to_json(opt.params);
      os << j.dump(2) << '\n';
    } else if (format == "csv") {
      report.write_csv(os);
    } else {
      report.write_text(os);
    }
    if (!report.all_passed()) {
      std::cerr << "verification failed:\n";
      for (const auto& c : report.failures()) {
        std::cerr << "  " << c.name << ": measured " << format_double(c.measured) << ", tolerance "
                  << format_double(c.tolerance) << '\n';
      }
      return kFailed;
    }
    return kOk;
  }
};

// ---------------------------------------------------------------------------

struct ChainCmd {
  chain::ChainParams params;
  int mode = 2;
  std::size_t n_sites = 128;
  std::string branch = "acoustic";
  double periods = 20.0;
  double dt = 0.0;
  long sample_every = 10;
  std::vector<double> ka{0.2, 0.1, 0.05, 0.025};
  std::string trajectory;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--m", params.m, "Inner mass");
    app.add_option("--M", params.M, "Outer mass");
    app.add_option("--K", params.K, "Inner-outer spring");
    app.add_option("--I", params.I, "Spring between inner masses");
    app.add_option("--J", params.J, "Spring between outer masses");
    app.add_option("--a", params.a, "Lattice spacing");
    app.add_option("--mode", mode, "Ring mode index");
    app.add_option("--n", n_sites, "Number of sites");
    app.add_option("--branch", branch)->check(CLI::IsMember({"acoustic", "optical"}));
    app.add_option("--periods", periods, "Simulated periods");
    app.add_option("--dt", dt, "Time step (0 = automatic)");
    app.add_option("--sample-every", sample_every, "Trajectory rows every this many steps");
    app.add_option("--ka", ka, "ka values of the convergence sweep")->expected(2, -1);
    app.add_option("--trajectory", trajectory, "Trajectory CSV path");
    app.add_option("-o,--output", output, "Summary JSON path (default stdout)");
  }

  int run() const {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (n_sites < 2 || mode < 0 || static_cast<std::size_t>(mode) >= n_sites) {
      throw UsageError("--mode must lie in [0, n)");
    }
    if (!(periods > 0.0) || dt < 0.0 || sample_every < 1) {
      throw UsageError("--periods, --dt and --sample-every must be positive");
    }
    for (double x : ka) {
      if (!(x > 0.0)) throw UsageError("--ka values must be positive");
    }

    const auto kind = parse_branch_kind(branch);
    verify::ChainRun run;
    try {
      run = verify::run_chain_mode(params, n_sites, mode, kind, periods, dt);
    } catch (const chain::StabilityError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kFailed;
    }
    const auto study = chain::convergence_study(params, ka);
    const auto sc = chain::characteristic_scales(params);

    const double rel_err = run.omega_discrete > 0.0
                               ? std::abs(run.omega_measured - run.omega_discrete) / run.omega_discrete
                               : std::abs(run.omega_measured);
    const bool passed = rel_err < 1e-4;

    if (!trajectory.empty()) {
      auto f = open_file(trajectory);
      csv::write_comment(f, "units=chain epsilon=" + format_double(sc.epsilon));
      std::vector<chain::LatticeState> sampled;
      for (std::size_t i = 0; i < run.trajectory.size(); i += static_cast<std::size_t>(sample_every)) {
        sampled.push_back(run.trajectory[i]);
      }
      chain::write_trajectory_csv(f, sampled);
    }

    nlohmann::json j;
    j["params"] = {{"m", params.m}, {"M", params.M}, {"K", params.K},
                   {"I", params.I}, {"J", params.J}, {"a", params.a}};
    j["epsilon"] = sc.epsilon;
    j["mode"] = mode;
    j["n_sites"] = n_sites;
    j["branch"] = branch;
    j["k"] = chain::mode_wavenumber(n_sites, mode, params);
    j["dt"] = run.dt;
    j["steps"] = run.steps;
    j["omega_measured"] = run.omega_measured;
    j["omega_discrete"] = run.omega_discrete;
    j["omega_continuum"] = run.omega_continuum;
    j["relative_error"] = rel_err;
    j["energy_drift"] = run.energy_drift;
    j["passed"] = passed;
    nlohmann::json conv;
    conv["ka"] = ka;
    conv["acoustic_exponent"] = study.acoustic_exponent;
    conv["optical_exponent"] = study.optical_exponent;
    for (std::size_t i = 0; i < study.acoustic.size(); ++i) {
      conv["acoustic_relative_error"].push_back(study.acoustic[i].relative_error);
      conv["optical_relative_error"].push_back(study.optical[i].relative_error);
    }
    j["convergence"] = conv;

    Output out(output);
    csv::write_comment(out.stream(), "units=chain epsilon=" + format_double(sc.epsilon));
    out.stream() << j.dump(2) << '\n';
    if (!passed) {
      std::cerr << "measured frequency deviates from the discrete dispersion by " << format_double(rel_err)
                << '\n';
      return kFailed;
    }
    return kOk;
  }
};

// ---------------------------------------------------------------------------

struct SolutionsCmd {
  Units units;
  double epsilon = 0.5;
  double pz = 1.0;
  std::string output;

  void add_to(CLI::App& app) {
    units.add_to(app);
    app.add_option("--epsilon", epsilon, "Mass ratio");
    app.add_option("--pz", pz, "Momentum p_z");
    app.add_option("-o,--output", output, "Output file (default stdout)");
  }

  int run() const {
    if (!(epsilon >= 0.0) || !std::isfinite(pz)) throw UsageError("need --epsilon >= 0 and finite --pz");
    const auto p = units.params(epsilon);
    const auto cat = waves::catalog_eight(pz, p);
    const double tn = p.hbar / p.rest_energy();
    const double ln = p.hbar / (p.m_e * p.c);
    const std::vector<waves::SamplePoint> pts = {{0.0, 0.0}, {0.7 * tn, -1.3 * ln}, {2.5 * tn, 4.1 * ln}};

    nlohmann::json j;
    j["units"] = units.to_json(p);
    j["p_z"] = pz;
    j["solutions"] = nlohmann::json::array();
    double worst = 0.0;
    for (const auto& s : cat) {
      const double r = waves::relative_residual(s, pts, p);
      worst = std::max(worst, r);
      j["solutions"].push_back(waves::to_json(s, r));
    }
    const double det = std::abs(waves::amplitude_matrix(cat).determinant());
    j["determinant"] = det;
    j["max_residual"] = worst;
    const bool passed = worst < 1e-10 && det > 1e-8;
    j["passed"] = passed;

    Output out(output);
    csv::write_comment(out.stream(), units.header(p));
    out.stream() << j.dump(2) << '\n';
    return passed ? kOk : kFailed;
  }
};

// ---------------------------------------------------------------------------

struct EvolveCmd {
  Units units;
  double epsilon = 0.5;
  std::string branch = "optical+";
  std::string spin = "up";
  double k0 = 1.0;
  double sigma = 10.0;
  std::size_t n = 1024;
  double length = 200.0;
  double t_end = 30.0;
  int samples = 41;
  std::string method = "spectral";
  std::optional<double> center;
  std::string snapshot;
  std::string timeseries;
  std::string output;

  void add_to(CLI::App& app) {
    units.add_to(app);
    app.add_option("--epsilon", epsilon, "Mass ratio");
    app.add_option("--branch", branch)->check(CLI::IsMember({"acoustic+", "acoustic-", "optical+", "optical-"}));
    app.add_option("--spin", spin)->check(CLI::IsMember({"up", "down"}));
    app.add_option("--k0", k0, "Carrier wavenumber");
    app.add_option("--sigma", sigma, "Packet rms width");
    app.add_option("--n", n, "Grid points (power of two)");
    app.add_option("--L", length, "Domain length");
    app.add_option("--t-end", t_end, "Final time");
    app.add_option("--samples", samples, "Centroid samples");
    app.add_option("--method", method)->check(CLI::IsMember({"spectral", "rk4"}));
    app.add_option("--center", center, "Initial packet centre (default L/2)");
    app.add_option("--snapshot", snapshot, "Final snapshot CSV path");
    app.add_option("--timeseries", timeseries, "Centroid time series CSV path");
    app.add_option("-o,--output", output, "Summary JSON path (default stdout)");
  }

  int run() const {
    if (!(epsilon >= 0.0)) throw UsageError("--epsilon must be >= 0");
    const auto p = units.params(epsilon);
    evolution::EvolutionConfig cfg;
    cfg.grid = evolution::Grid{n, length};
    try {
      cfg.grid.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!(t_end > 0.0) || samples < 2) throw UsageError("need --t-end > 0 and --samples >= 2");
    cfg.t_end = t_end;
    cfg.n_samples = samples;
    cfg.method = method == "rk4" ? evolution::Method::rk4 : evolution::Method::spectral_exact;

    evolution::PacketSpec spec;
    spec.k0 = k0;
    spec.sigma = sigma;
    spec.branch = parse_branch(branch);
    spec.spin = parse_spin(spin);
    spec.center = center.value_or(0.5 * length);

    const double expected = dispersion::group_velocity(spec.branch, k0, p);
    evolution::CentroidTrack track;
    double measured = 0.0;
    bool passed = false;
    std::string criterion;
    try {
      if (k0 == 0.0 && spec.branch.kind == BranchKind::optical) {
        // Stationary packet: no displacement window, only a bound on the drift.
        track = evolution::track_packet(spec, cfg, p);
        measured = evolution::fit_velocity(track);
        passed = std::abs(measured) < 0.01 * p.c;
        criterion = "|v| < 0.01 c";
      } else {
        auto m = evolution::measure_group_velocity(spec, cfg, p);
        track = std::move(m.track);
        measured = m.velocity;
        const double tol = spec.branch.kind == BranchKind::acoustic ? 1e-3 : 1e-2;
        passed = std::abs(measured - expected) <= tol * std::abs(expected);
        criterion = "relative error <= " + format_double(tol);
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kFailed;
    }

    if (!snapshot.empty()) {
      auto f = open_file(snapshot);
      csv::write_comment(f, units.header(p) + " t=" + format_double(t_end));
      const auto init = evolution::init_packet(spec, cfg.grid, p);
      if (cfg.method == evolution::Method::spectral_exact) {
        evolution::write_snapshot_csv(f, evolution::evolve(init, t_end, 1, p));
      } else {
        const long steps = static_cast<long>(std::ceil(t_end / (cfg.grid.dz() / (8.0 * p.c))));
        evolution::write_snapshot_csv(f, evolution::evolve(init, t_end / steps, steps, p, cfg.method));
      }
    }
    if (!timeseries.empty()) {
      auto f = open_file(timeseries);
      csv::write_comment(f, units.header(p));
      evolution::write_timeseries_csv(f, track);
    }

    nlohmann::json j;
    j["units"] = units.to_json(p);
    j["branch"] = branch;
    j["spin"] = spin;
    j["k0"] = k0;
    j["sigma"] = sigma;
    j["grid"] = {{"n", n}, {"L", length}};
    j["t_end"] = t_end;
    j["method"] = method;
    j["group_velocity_measured"] = measured;
    j["group_velocity_expected"] = expected;
    j["displacement"] = track.centroid.back() - track.centroid.front();
    j["width_initial"] = track.width.front();
    j["width_final"] = track.width.back();
    j["criterion"] = criterion;
    j["passed"] = passed;

    Output out(output);
    csv::write_comment(out.stream(), units.header(p));
    out.stream() << j.dump(2) << '\n';
    return passed ? kOk : kFailed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersion, plane waves and evolution of the eight-component relativistic model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dirac8 1.0");

  DispersionCmd dispersion_cmd;
  VerifyCmd verify_cmd;
  ChainCmd chain_cmd;
  SolutionsCmd solutions_cmd;
  EvolveCmd evolve_cmd;
  std::function<int()> action;

  auto* sub = app.add_subcommand("dispersion", "Tabulate all four branch energies");
  dispersion_cmd.add_to(*sub);
  sub->callback([&] { action = [&] { return dispersion_cmd.run(); }; });

  sub = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd.add_to(*sub);
  sub->callback([&] { action = [&] { return verify_cmd.run(); }; });

  sub = app.add_subcommand("chain", "Simulate a ring mode of the mass-in-mass chain");
  chain_cmd.add_to(*sub);
  sub->callback([&] { action = [&] { return chain_cmd.run(); }; });

  sub = app.add_subcommand("solutions", "Emit the eight plane-wave solutions as JSON");
  solutions_cmd.add_to(*sub);
  sub->callback([&] { action = [&] { return solutions_cmd.run(); }; });

  sub = app.add_subcommand("evolve", "Evolve a wave packet and measure its group velocity");
  evolve_cmd.add_to(*sub);
  sub->callback([&] { action = [&] { return evolve_cmd.run(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
