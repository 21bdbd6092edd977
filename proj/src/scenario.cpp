#include "nhcycle/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nhcycle/asymptotics.hpp"
#include "nhcycle/geophase.hpp"

namespace nhcycle::scenario {

namespace {

const double kPi = std::acos(-1.0);

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Shortest text that parses back to x.
std::string fmt_short(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_numbers(const std::string& s, size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("malformed number '" + item + "' in " + what);
    }
  }
  if (out.size() != expected)
    throw ConfigError(what + " expects " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

double unit_overlap(const CVec2& x, const CVec2& y) {
  return std::abs(inner(x, y)) / (norm(x) * norm(y));
}

XCyclicState from_vector(const XVec2& u, const XMat2& U, Branch label) {
  XCyclicState c;
  c.u = canonical_phase(normalized(u));
  c.multiplier = inner(c.u, U * c.u);
  const xcplx lg = sm::clog(c.multiplier);
  c.alpha = xcplx(lg.imag(), -lg.real());
  c.label = label;
  return c;
}

bool is_scalar(const XMat2& U) {
  const xcplx h = U.trace() / ExtReal(2);
  return double(norm(U - h * XMat2::identity())) < 1e-9 * double(norm(U));
}

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

ModelId parse_model(const std::string& s) {
  if (s == "h1") return ModelId::H1;
  if (s == "h2") return ModelId::H2;
  if (s == "bu") return ModelId::BU;
  throw ConfigError("unknown model '" + s + "' (expected h1, h2 or bu)");
}

const char* to_string(ModelId m) {
  switch (m) {
    case ModelId::H1: return "h1";
    case ModelId::H2: return "h2";
    case ModelId::BU: return "bu";
  }
  return "h2";
}

InitialSelector parse_initial(const std::string& s) {
  InitialSelector sel;
  if (s == "cyclic+") {
    sel.kind = InitialKind::CyclicPlus;
  } else if (s == "cyclic-") {
    sel.kind = InitialKind::CyclicMinus;
  } else if (s == "eig+") {
    sel.kind = InitialKind::EigPlus;
  } else if (s == "eig-") {
    sel.kind = InitialKind::EigMinus;
  } else if (s.rfind("mix:", 0) == 0) {
    const auto w = parse_numbers(s.substr(4), 2, "mix");
    sel.kind = InitialKind::Mix;
    sel.w_plus = w[0];
    sel.w_minus = w[1];
  } else if (s.rfind("custom:", 0) == 0) {
    const auto v = parse_numbers(s.substr(7), 4, "custom");
    sel.kind = InitialKind::Custom;
    sel.custom = {cplx(v[0], v[1]), cplx(v[2], v[3])};
  } else {
    throw ConfigError("unknown initial state '" + s + "'");
  }
  return sel;
}

std::string to_string(const InitialSelector& s) {
  switch (s.kind) {
    case InitialKind::CyclicPlus: return "cyclic+";
    case InitialKind::CyclicMinus: return "cyclic-";
    case InitialKind::EigPlus: return "eig+";
    case InitialKind::EigMinus: return "eig-";
    case InitialKind::Mix: return "mix:" + fmt_short(s.w_plus) + "," + fmt_short(s.w_minus);
    case InitialKind::Custom:
      return "custom:" + fmt_short(s.custom.a.real()) + "," + fmt_short(s.custom.a.imag()) + "," +
             fmt_short(s.custom.b.real()) + "," + fmt_short(s.custom.b.imag());
  }
  return "";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

PrecisionMode parse_precision(const std::string& s) {
  if (s == "auto") return PrecisionMode::Auto;
  if (s == "double") return PrecisionMode::Double;
  if (s == "extended") return PrecisionMode::Extended;
  throw ConfigError("unknown precision '" + s + "' (expected auto, double or extended)");
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.steps < 16) throw ConfigError("steps must be >= 16");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.initial.kind == InitialKind::Mix && cfg.initial.w_plus == 0.0 &&
      cfg.initial.w_minus == 0.0)
    throw ConfigError("mix weights must not both be zero");
  if (cfg.initial.kind == InitialKind::Custom && norm(cfg.initial.custom) == 0.0)
    throw ConfigError("custom initial state must be nonzero");
  if (cfg.omega && !(*cfg.omega > 0.0)) throw ConfigError("omega must be positive");
  if (cfg.period && !(*cfg.period > 0.0)) throw ConfigError("period must be positive");
  if (cfg.model == ModelId::H2 && !(cfg.mu >= 0.0)) throw ConfigError("mu must be >= 0");
  if (cfg.model == ModelId::BU) {
    if (!(cfg.rho >= 0.0)) throw ConfigError("rho must be >= 0");
    if (cfg.r == 0.0 || !std::isfinite(cfg.r)) throw ConfigError("r must be nonzero");
  }
  const int n_sweep = int(bool(cfg.t_min)) + int(bool(cfg.t_max)) + int(bool(cfg.t_step));
  if (n_sweep != 0 && n_sweep != 3)
    throw ConfigError("--t-min, --t-max and --t-step must be given together");
  if (n_sweep == 3) {
    if (!(*cfg.t_min > 0.0 && *cfg.t_max >= *cfg.t_min && *cfg.t_step > 0.0))
      throw ConfigError("sweep requires 0 < t-min <= t-max and t-step > 0");
    if (cfg.period) throw ConfigError("--period conflicts with a sweep range");
    if (cfg.omega) throw ConfigError("--omega is fixed by the period in a sweep");
  }
}

double resolve_period(const ScenarioConfig& cfg) {
  const bool driven = cfg.model != ModelId::BU;
  if (cfg.period) {
    if (driven && cfg.omega && std::abs(2.0 * kPi / *cfg.omega - *cfg.period) > 1e-12 * *cfg.period)
      throw ConfigError("--period and --omega disagree (T must equal 2 pi / omega)");
    return *cfg.period;
  }
  if (driven && cfg.omega) return 2.0 * kPi / *cfg.omega;
  throw ConfigError("a period is required (--period, or --omega for h1/h2)");
}

std::vector<double> sweep_values(const ScenarioConfig& cfg) {
  if (!cfg.t_min) return {resolve_period(cfg)};
  const double lo = *cfg.t_min, hi = *cfg.t_max, step = *cfg.t_step;
  const long n = long(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  out.reserve(size_t(n + 1));
  for (long k = 0; k <= n; ++k) out.push_back(lo + double(k) * step);
  return out;
}

ModelSetup make_setup(const ScenarioConfig& cfg, double T) {
  if (!(T > 0.0)) throw ConfigError("period must be positive");
  ModelSetup s;
  s.id = cfg.model;
  s.T = T;
  const bool ext = cfg.precision == PrecisionMode::Extended ||
                   (cfg.precision == PrecisionMode::Auto && cfg.model != ModelId::H1);
  s.precision = ext ? Precision::Extended : Precision::Double;
  s.record.id = to_string(cfg.model);
  const double omega = 2.0 * kPi / T;
  switch (cfg.model) {
    case ModelId::H1: {
      s.h1 = {cfg.epsilon, omega};
      const Model1Params p = s.h1;
      s.H = [p](auto t) { return h1(p, t); };
      s.record.params = {{"epsilon_re", cfg.epsilon.real()},
                         {"epsilon_im", cfg.epsilon.imag()},
                         {"omega", omega}};
      break;
    }
    case ModelId::H2: {
      s.h2 = {cfg.mu, omega};
      const Model2Params p = s.h2;
      s.H = [p](auto t) { return h2(p, t); };
      s.record.params = {{"mu", cfg.mu}, {"omega", omega}};
      break;
    }
    case ModelId::BU: {
      s.bu = {cfg.rho, cfg.r, T};
      const BUParams p = s.bu;
      s.H = [p](auto t) { return hbu(p, t); };
      s.record.params = {{"rho", cfg.rho}, {"r", cfg.r}};
      break;
    }
  }
  return s;
}

std::pair<CVec2, CVec2> eigenbasis_at_start(const ModelSetup& s) {
  if (s.id == ModelId::BU) {
    const auto paths = bu_instantaneous(s.bu, {0.0});
    return {paths.first.vectors[0], paths.second.vectors[0]};
  }
  auto ep = eig2(s.H(0.0));
  const cplx a = ep[0].value, b = ep[1].value;
  if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()))
    std::swap(ep[0], ep[1]);
  return {ep[0].vector, ep[1].vector};
}

EigenPaths eigenpaths(const ModelSetup& s, int samples) {
  if (s.id == ModelId::BU) {
    std::vector<double> theta(size_t(samples) + 1);
    for (int k = 0; k <= samples; ++k) theta[size_t(k)] = 2.0 * kPi * double(k) / double(samples);
    auto paths = bu_instantaneous(s.bu, theta);
    // Store times rather than angles so the grid matches the trajectory.
    for (EigenPath* e : {&paths.first, &paths.second})
      for (int k = 0; k <= samples; ++k)
        e->grid[size_t(k)] = k == samples ? s.T : s.T * double(k) / double(samples);
    return paths;
  }
  return eigen_track(s.H, s.T, samples);
}

LabelledCyclic labelled_cyclic(const ModelSetup& s, int steps) {
  const XMat2 U = floquet_operator_ext(s.H, s.T, steps);
  LabelledCyclic out;
  std::pair<CVec2, CVec2> ref;
  if (s.id == ModelId::H1) {
    ref = {h1_cyclic_exact(s.h1, Branch::Plus, 0.0), h1_cyclic_exact(s.h1, Branch::Minus, 0.0)};
    if (is_scalar(U)) {
      out.degenerate = true;
      out.plus = from_vector(to_ext(ref.first), U, Branch::Plus);
      out.minus = from_vector(to_ext(ref.second), U, Branch::Minus);
      return out;
    }
  } else {
    ref = eigenbasis_at_start(s);
  }
  auto [c0, c1] = cyclic_states(U);
  const CVec2 u0 = to_double(c0.u), u1 = to_double(c1.u);
  const double keep = unit_overlap(u0, ref.first) + unit_overlap(u1, ref.second);
  const double swap = unit_overlap(u1, ref.first) + unit_overlap(u0, ref.second);
  if (swap > keep) std::swap(c0, c1);
  c0.label = Branch::Plus;
  c1.label = Branch::Minus;
  out.plus = c0;
  out.minus = c1;
  return out;
}

XVec2 initial_state(const ModelSetup& s, const InitialSelector& sel, int steps) {
  switch (sel.kind) {
    case InitialKind::EigPlus: return to_ext(eigenbasis_at_start(s).first);
    case InitialKind::EigMinus: return to_ext(eigenbasis_at_start(s).second);
    case InitialKind::Custom: return to_ext(sel.custom);
    default: break;
  }
  const LabelledCyclic lc = labelled_cyclic(s, steps);
  if (sel.kind == InitialKind::CyclicPlus) return lc.plus.u;
  if (sel.kind == InitialKind::CyclicMinus) return lc.minus.u;
  return ExtReal(sel.w_plus) * lc.plus.u + ExtReal(sel.w_minus) * lc.minus.u;
}

Trajectory run_trajectory(const ModelSetup& s, const XVec2& psi0, int steps) {
  PropagateOptions opt;
  opt.precision = s.precision;
  opt.model = s.record;
  if (s.precision == Precision::Extended) return propagate(s.H, psi0, s.T, steps, opt);
  return propagate(s.H, to_double(psi0), s.T, steps, opt);
}

HopOptions hop_options(const ModelSetup& s) {
  HopOptions h;
  if (s.id == ModelId::BU && s.bu.r > 0.0)
    h.window_fraction = std::max(h.window_fraction, 1.0 / (s.T * std::sqrt(s.bu.r)));
  return h;
}

Run run(const ScenarioConfig& cfg, double T) {
  Run out;
  out.setup = make_setup(cfg, T);
  const XVec2 psi0 = initial_state(out.setup, cfg.initial, cfg.steps);
  out.traj = run_trajectory(out.setup, psi0, cfg.steps);
  out.paths = eigenpaths(out.setup, cfg.steps);
  return out;
}

std::string format_table(const Table& t, OutputFormat f) {
  std::string out;
  if (f == OutputFormat::Csv) {
    for (size_t j = 0; j < t.header.size(); ++j) out += (j ? "," : "") + t.header[j];
    out += '\n';
    for (const auto& row : t.rows) {
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) out += ',';
        if (const double* d = std::get_if<double>(&row[j])) out += fmt17(*d);
        if (const std::string* s = std::get_if<std::string>(&row[j])) out += *s;
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (size_t j = 0; j < row.size() && j < t.header.size(); ++j) {
      if (const double* d = std::get_if<double>(&row[j]))
        obj[t.header[j]] = *d;
      else if (const std::string* s = std::get_if<std::string>(&row[j]))
        obj[t.header[j]] = *s;
      else
        obj[t.header[j]] = nullptr;
    }
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write to '" + path + "' failed");
}

Table trajectory_table(const Run& run) {
  Table t;
  t.header = {"t",      "theta",  "re_a",          "im_a",          "re_b",
              "im_b",   "re_psi", "im_psi",        "norm",          "re_psiE_plus",
              "im_psiE_plus",     "re_psiE_minus", "im_psiE_minus"};
  const Trajectory& tr = run.traj;
  const double T = tr.period;
  for (size_t k = 0; k < tr.states.size(); ++k) {
    const CVec2& s = tr.states[k];
    std::vector<Cell> row{tr.times[k],   2.0 * kPi * tr.times[k] / T,
                          s.a.real(),    s.a.imag(),
                          s.b.real(),    s.b.imag()};
    for (const CVec2* v : {&s, &run.paths.first.vectors[k], &run.paths.second.vectors[k]}) {
      const auto psi = try_component_ratio(*v);
      row.push_back(opt_cell(psi ? std::optional<double>(psi->real()) : std::nullopt));
      row.push_back(opt_cell(psi ? std::optional<double>(psi->imag()) : std::nullopt));
      if (v == &s) row.push_back(norm(s));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table bloch_table(const Run& run) {
  Table t;
  t.header = {"t", "Theta", "Phi", "Theta_plus", "Phi_plus", "Theta_minus", "Phi_minus"};
  const Trajectory& tr = run.traj;
  for (size_t k = 0; k < tr.states.size(); ++k) {
    std::vector<Cell> row{tr.times[k]};
    for (const CVec2* v : {&tr.states[k], &run.paths.first.vectors[k], &run.paths.second.vectors[k]}) {
      const BlochPoint b = bloch_coords(*v);
      row.push_back(b.Theta);
      row.push_back(b.Phi);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

SweepOutput aa_sweep(const ScenarioConfig& cfg) {
  const std::vector<double> Ts = sweep_values(cfg);
  struct Point {
    std::optional<double> plus, minus;
    std::string warning;
  };
  std::vector<Point> points(Ts.size());
  std::atomic<size_t> next{0};

  auto work = [&]() {
    for (size_t i = next++; i < Ts.size(); i = next++) {
      Point& pt = points[i];
      try {
        const ModelSetup s = make_setup(cfg, Ts[i]);
        const LabelledCyclic lc = labelled_cyclic(s, cfg.steps);
        pt.plus = aa_phase(run_trajectory(s, lc.plus.u, cfg.steps)).beta;
        pt.minus = aa_phase(run_trajectory(s, lc.minus.u, cfg.steps)).beta;
      } catch (const std::exception& e) {
        pt.warning = "T=" + fmt17(Ts[i]) + ": " + e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.jobs, int(Ts.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  SweepOutput out;
  out.table.header = {"T", "beta_plus", "beta_minus"};
  for (size_t i = 0; i < Ts.size(); ++i) {
    out.table.rows.push_back({Ts[i], opt_cell(points[i].plus), opt_cell(points[i].minus)});
    if (!points[i].warning.empty()) out.warnings.push_back(points[i].warning);
  }
  return out;
}

HopsReport hops_report(const ScenarioConfig& cfg, const Run& run) {
  HopsReport rep;
  rep.events = detect_hops(run.traj, run.paths, hop_options(run.setup));
  nlohmann::ordered_json j;
  j["model"] = to_string(run.setup.id);
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : run.setup.record.params) params[k] = v;
  j["params"] = params;
  j["period"] = run.setup.T;
  j["steps"] = cfg.steps;
  j["initial"] = to_string(cfg.initial);
  nlohmann::ordered_json ev = nlohmann::ordered_json::array();
  for (const HopEvent& e : rep.events) {
    nlohmann::ordered_json o;
    o["t_star"] = e.t_star;
    o["relative"] = e.relative;
    o["from"] = to_string(e.from);
    o["to"] = to_string(e.to);
    o["crossing_kind"] = to_string(e.crossing_kind);
    ev.push_back(o);
  }
  j["events"] = ev;
  nlohmann::ordered_json summary;
  summary["count"] = rep.events.size();
  if (rep.events.empty()) {
    summary["first_t_star"] = nullptr;
    summary["first_relative"] = nullptr;
  } else {
    summary["first_t_star"] = rep.events.front().t_star;
    summary["first_relative"] = rep.events.front().relative;
  }
  j["summary"] = summary;
  rep.json = j.dump(2) + "\n";
  return rep;
}

Table hops_table(const HopsReport& rep) {
  Table t;
  t.header = {"t_star", "relative", "from", "to", "crossing_kind"};
  for (const HopEvent& e : rep.events)
    t.rows.push_back({e.t_star, e.relative, std::string(to_string(e.from)),
                      std::string(to_string(e.to)), std::string(to_string(e.crossing_kind))});
  return t;
}

std::string critical_report(bool equation, bool check_theta) {
  const CriticalSolve cs = critical_ratio();
  std::string out = "c = " + fmt17(cs.c) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", cs.c);
  out += "c (6 decimals) = " + std::string(buf) + "\n";
  out += "iterations = " + std::to_string(cs.iterations) + "\n";
  out += "solver_residual = " + fmt17(cs.residual) + "\n";
  if (equation) out += "equation_residual = " + fmt17(std::abs(critical_equation(cs.c))) + "\n";
  if (check_theta)
    out += "re_exponent_at_pi = " + fmt17(xi_exponent(cs.c, 1.0, kPi).real()) + "\n";
  return out;
}

BesselOptions exact_bessel_options(const BUParams& p) {
  BesselOptions o;
  const double z = p.nu() * std::sqrt(p.rho / p.r);
  o.nu_max = std::numeric_limits<double>::infinity();
  o.envelope = z + 1.0;
  o.k_max = 200 + 4 * int(std::ceil(z));
  o.extended = true;
  return o;
}

Table stokes_table(double rho, double r, double T, int grid) {
  if (grid < 1) throw ConfigError("grid must be >= 1");
  if (!(rho > 0.0 && r > 0.0 && rho < r)) throw ConfigError("stokes requires 0 < rho < r");
  if (!(T > 0.0)) throw ConfigError("period must be positive");
  const BUParams p{rho, r, T};
  const BesselOptions bo = exact_bessel_options(p);
  Table t;
  t.header = {"theta", "re_exponent", "abs_R_minus_exact", "abs_R_minus_asym", "wedge"};
  for (int k = 0; k <= grid; ++k) {
    const double theta = 2.0 * kPi * double(k) / double(grid);
    const StokesPoint sp = stokes_point(rho, r, theta);
    std::optional<double> exact, asym;
    try {
      const CVec2 s = bu_floquet_bessel(p, Branch::Minus, theta * T / (2.0 * kPi), bo);
      const auto [ep, em] = bu_eigenbasis(p, theta);
      const auto [ap, am] = project(s, ep, em);
      exact = std::abs(ap / am);
    } catch (const Error&) {
    }
    if (sp.wedge != Wedge::Boundary) asym = std::abs(r_minus_asymptotic(rho, r, T, theta).value);
    t.rows.push_back({theta, sp.exponent.real(), opt_cell(exact), opt_cell(asym),
                      std::string(to_string(sp.wedge))});
  }
  return t;
}

Table bessel_check_table(const std::vector<double>& nus, double x) {
  if (!(x > 0.0 && x < 1.0)) throw ConfigError("bessel-check requires 0 < x < 1");
  Table t;
  t.header = {"nu",           "x",          "J_series",    "J_uniform",      "rel_err",
              "Jm_series",    "Jm_uniform", "rel_err_minus", "below_floor"};
  for (double nu : nus) {
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    const double z = nu * x;
    const int k_max = 200 + 4 * int(std::ceil(z));
    const XBesselValue jp = bessel_series_polar(ExtReal(nu), ExtReal(z), ExtReal(0), z + 1.0, k_max);
    const XBesselValue jm = bessel_series_polar(-ExtReal(nu), ExtReal(z), ExtReal(0), z + 1.0, k_max);
    const UniformBessel u = uniform_bessel(nu, cplx(x, 0.0));
    const cplx sp = to_double(jp.J), sm_ = to_double(jm.J);
    t.rows.push_back({nu, x, sp.real(), u.J_plus.real(), std::abs(u.J_plus - sp) / std::abs(sp),
                      sm_.real(), u.J_minus.real(), std::abs(u.J_minus - sm_) / std::abs(sm_),
                      u.below_validity_floor ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace nhcycle::scenario
