#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "nhcycle/errors.hpp"
#include "nhcycle/scenario.hpp"

namespace sc = nhcycle::scenario;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Flags {
  std::string model = "h2";
  double eps_re = 0.5, eps_im = 0.0;
  double omega = 0.0, mu = 0.2, rho = 0.5, r = 1.0;
  double period = 0.0, t_min = 0.0, t_max = 0.0, t_step = 0.0;
  int steps = nhcycle::kDefaultSteps;
  std::string initial = "cyclic-";
  std::string out;
  std::string format = "csv";
  std::string precision = "auto";
  int jobs = 1;
};

struct Seen {
  CLI::Option* omega = nullptr;
  CLI::Option* period = nullptr;
  CLI::Option* t_min = nullptr;
  CLI::Option* t_max = nullptr;
  CLI::Option* t_step = nullptr;
};

sc::ScenarioConfig build_config(const Flags& f, const Seen& seen) {
  sc::ScenarioConfig cfg;
  cfg.model = sc::parse_model(f.model);
  cfg.epsilon = {f.eps_re, f.eps_im};
  if (seen.omega->count()) cfg.omega = f.omega;
  cfg.mu = f.mu;
  cfg.rho = f.rho;
  cfg.r = f.r;
  if (seen.period->count()) cfg.period = f.period;
  if (seen.t_min->count()) cfg.t_min = f.t_min;
  if (seen.t_max->count()) cfg.t_max = f.t_max;
  if (seen.t_step->count()) cfg.t_step = f.t_step;
  cfg.steps = f.steps;
  cfg.initial = sc::parse_initial(f.initial);
  cfg.out = f.out;
  cfg.format = sc::parse_format(f.format);
  cfg.jobs = f.jobs;
  cfg.precision = sc::parse_precision(f.precision);
  sc::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven non-Hermitian two-level systems: trajectories, geometric phases, hops"};
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  Seen seen;
  app.add_option("--model", f.model, "h1, h2 or bu")->capture_default_str();
  app.add_option("--epsilon-re", f.eps_re, "Re epsilon (h1)")->capture_default_str();
  app.add_option("--epsilon-im", f.eps_im, "Im epsilon (h1)")->capture_default_str();
  seen.omega = app.add_option("--omega", f.omega, "Driving frequency (h1, h2); T = 2 pi / omega");
  app.add_option("--mu", f.mu, "Coupling (h2)")->capture_default_str();
  app.add_option("--rho", f.rho, "Loop radius (bu)")->capture_default_str();
  app.add_option("--r", f.r, "Loop offset (bu)")->capture_default_str();
  seen.period = app.add_option("--period", f.period, "Period T");
  seen.t_min = app.add_option("--t-min", f.t_min, "Sweep start");
  seen.t_max = app.add_option("--t-max", f.t_max, "Sweep end (inclusive)");
  seen.t_step = app.add_option("--t-step", f.t_step, "Sweep step");
  app.add_option("--steps", f.steps, "RK4 steps per period")->capture_default_str();
  app.add_option("--initial", f.initial,
                 "cyclic+, cyclic-, eig+, eig-, mix:W+,W- or custom:ReA,ImA,ReB,ImB")
      ->capture_default_str();
  app.add_option("--out", f.out, "Output file (default stdout)");
  app.add_option("--format", f.format, "csv or json")->capture_default_str();
  app.add_option("--precision", f.precision, "auto, double or extended")->capture_default_str();
  app.add_option("--jobs", f.jobs, "Worker threads for sweeps")->capture_default_str();

  auto* trajectory = app.add_subcommand("trajectory", "State, ratio b/a and eigenpath ratios over one period");
  auto* sweep = app.add_subcommand("aa-sweep", "AA phases of both cyclic states over a period range");
  auto* hops = app.add_subcommand("hops", "Hop events and first-hop timing");
  auto* bloch = app.add_subcommand("bloch", "Bloch-sphere angles of the state and both eigenpaths");
  auto* critical = app.add_subcommand("critical", "Critical ratio c of the Berry-Uzdin model");
  bool equation = false, check_theta = false;
  critical->add_flag("--equation", equation, "Print the residual of the defining equation");
  critical->add_flag("--check-theta", check_theta, "Print Re exponent at rho/r = c, theta = pi");
  auto* stokes = app.add_subcommand("stokes", "Stokes exponent and |R-| exact vs asymptotic over theta");
  int grid = 256;
  stokes->add_option("--grid", grid, "Number of theta intervals")->capture_default_str();
  auto* bessel = app.add_subcommand("bessel-check", "Series vs uniform asymptotic Bessel values");
  std::vector<double> nus{10.5, 20.5, 40.5};
  double x = 0.4;
  bessel->add_option("--nu", nus, "Orders")->capture_default_str();
  bessel->add_option("--x", x, "Argument scale, nu * x is evaluated")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const sc::ScenarioConfig cfg = build_config(f, seen);
    std::string text;
    if (*trajectory || *bloch || *hops) {
      const sc::Run run = sc::run(cfg, sc::resolve_period(cfg));
      if (*trajectory) {
        text = sc::format_table(sc::trajectory_table(run), cfg.format);
      } else if (*bloch) {
        text = sc::format_table(sc::bloch_table(run), cfg.format);
      } else {
        const sc::HopsReport rep = sc::hops_report(cfg, run);
        text = cfg.format == sc::OutputFormat::Json ? rep.json
                                                    : sc::format_table(sc::hops_table(rep), cfg.format);
      }
    } else if (*sweep) {
      const sc::SweepOutput res = sc::aa_sweep(cfg);
      text = sc::format_table(res.table, cfg.format);
      std::string warn;
      for (const auto& w : res.warnings) warn += w + "\n";
      if (cfg.out.empty())
        std::cerr << warn;
      else
        sc::write_output(warn, cfg.out + ".warnings");
    } else if (*critical) {
      text = sc::critical_report(equation, check_theta);
    } else if (*stokes) {
      text = sc::format_table(sc::stokes_table(cfg.rho, cfg.r, sc::resolve_period(cfg), grid),
                              cfg.format);
    } else if (*bessel) {
      text = sc::format_table(sc::bessel_check_table(nus, x), cfg.format);
    }
    sc::write_output(text, cfg.out);
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const sc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const nhcycle::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return e.kind() == nhcycle::ErrorKind::InvalidArgument ? kConfig : kNumerical;
  }
  return kOk;
}
