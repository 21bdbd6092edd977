#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nhcycle/adiabatic.hpp"
#include "nhcycle/models.hpp"
#include "nhcycle/numerics.hpp"

namespace nhcycle::scenario {

// Bad user input; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be written; exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelId { H1, H2, BU };
ModelId parse_model(const std::string& s);
const char* to_string(ModelId m);

enum class InitialKind { CyclicPlus, CyclicMinus, EigPlus, EigMinus, Mix, Custom };

struct InitialSelector {
  InitialKind kind = InitialKind::CyclicMinus;
  double w_plus = 0.0;  // mix weights
  double w_minus = 0.0;
  CVec2 custom{};
};

// Accepts cyclic+, cyclic-, eig+, eig-, mix:W+,W- and custom:Re a,Im a,Re b,Im b.
InitialSelector parse_initial(const std::string& s);
std::string to_string(const InitialSelector& s);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& s);

enum class PrecisionMode { Auto, Double, Extended };
PrecisionMode parse_precision(const std::string& s);

struct ScenarioConfig {
  ModelId model = ModelId::H2;
  cplx epsilon{0.5, 0.0};
  std::optional<double> omega;
  double mu = 0.2;
  double rho = 0.5;
  double r = 1.0;
  std::optional<double> period;
  std::optional<double> t_min, t_max, t_step;
  int steps = kDefaultSteps;
  InitialSelector initial;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  int jobs = 1;
  PrecisionMode precision = PrecisionMode::Auto;
};

// Throws ConfigError. A single period is resolved from --period, or from
// --omega for h1/h2 (T = 2 pi / omega).
void validate(const ScenarioConfig& cfg);
double resolve_period(const ScenarioConfig& cfg);
std::vector<double> sweep_values(const ScenarioConfig& cfg);

struct ModelSetup {
  ModelId id = ModelId::H2;
  Generator H;
  double T = 0.0;
  Precision precision = Precision::Double;
  ModelRecord record;
  Model1Params h1;
  Model2Params h2;
  BUParams bu;
};

ModelSetup make_setup(const ScenarioConfig& cfg, double T);

// Instantaneous eigenvectors at t = 0, first = +. h1/h2 order by Re E then
// Im E; bu uses the closed-form branch.
std::pair<CVec2, CVec2> eigenbasis_at_start(const ModelSetup& s);

// Eigenpaths on the propagation grid t_k = k T / samples.
EigenPaths eigenpaths(const ModelSetup& s, int samples);

struct LabelledCyclic {
  XCyclicState plus;
  XCyclicState minus;
  bool degenerate = false;  // U(T) proportional to identity (h1 only)
};

// Cyclic states of U(T), unit norm and canonical phase, labelled by the
// larger overlap with E+(0) / E-(0). For h1 with a scalar U(T) the closed-form
// cyclic states are used.
LabelledCyclic labelled_cyclic(const ModelSetup& s, int steps);

XVec2 initial_state(const ModelSetup& s, const InitialSelector& sel, int steps);

Trajectory run_trajectory(const ModelSetup& s, const XVec2& psi0, int steps);

HopOptions hop_options(const ModelSetup& s);

struct Run {
  ModelSetup setup;
  Trajectory traj;
  EigenPaths paths;
};

Run run(const ScenarioConfig& cfg, double T);

// Tabular output. Empty cells are written as "" (CSV) or null (JSON).
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_table(const Table& t, OutputFormat f);
// Writes to path, or stdout when path is empty. Throws IoError.
void write_output(const std::string& text, const std::string& path);

Table trajectory_table(const Run& run);
Table bloch_table(const Run& run);

struct SweepOutput {
  Table table;
  std::vector<std::string> warnings;
};

// Rows ordered by T regardless of worker completion order.
SweepOutput aa_sweep(const ScenarioConfig& cfg);

struct HopsReport {
  std::vector<HopEvent> events;
  std::string json;
};

HopsReport hops_report(const ScenarioConfig& cfg, const Run& run);
Table hops_table(const HopsReport& rep);

std::string critical_report(bool equation, bool check_theta);

// Bessel options that cover |nu x| for an exact H_BU Floquet state.
BesselOptions exact_bessel_options(const BUParams& p);

Table stokes_table(double rho, double r, double T, int grid);

Table bessel_check_table(const std::vector<double>& nus, double x);

}  // namespace nhcycle::scenario
