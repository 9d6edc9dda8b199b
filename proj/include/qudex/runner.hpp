#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qudex/matrix.hpp"
#include "qudex/models.hpp"

namespace qudex {

// One JSON document describes a run; command-line flags override the
// corresponding fields afterwards.
struct RunConfig {
  std::string command;  // spectrum | sweep | surface | inequality | figure
  std::string figure;   // fig1 | fig2a..fig2d | fig3 | fig4

  std::string model = "bec";  // qubit | bec | matrix
  double qubit_h[4] = {0.0, 0.0, 0.0, 1.0};  // h0..h3
  BecParams bec{0.5, 0.5, 0.5, 1.0};
  Matrix raw;  // model == "matrix"

  Vector constants;  // c_2..c_d; empty means pure (all zero)

  std::string sweep_param = "a";  // a | b | c | c2 | h1 | h2 | h3
  double sweep_min = -2.0;
  double sweep_max = 2.0;
  int sweep_points = 200;

  std::string surface_kind = "energy_entropy";  // or "observable"
  double h_min = 0.0, h_max = 6.0;
  int h_points = 121;
  double delta_min = 0.0, delta_max = 0.99;
  int delta_points = 100;
  double t_min = 0.0, t_max = 6.0;  // observable surface diagonal parameter
  int t_points = 121;

  int samples = 1000;

  std::uint64_t seed = 1;
  std::string out;  // empty -> stdout
  std::string format = "csv";
};

// Parses the JSON text; unknown keys rejected. Throws std::invalid_argument.
RunConfig parse_config(const std::string& json_text);

// path "-" reads stdin.
RunConfig load_config_file(const std::string& path);

// Each driver returns the process exit code: 0 ok, 1 invariant violation.
// Invalid input raises std::invalid_argument / std::domain_error, solver
// failure raises SolverFailure; the CLI maps those to codes 2 and 3.
int run_spectrum(const RunConfig& cfg, std::ostream& log);
int run_sweep(const RunConfig& cfg, std::ostream& log);
int run_surface(const RunConfig& cfg, std::ostream& log);
int run_inequality(const RunConfig& cfg, std::ostream& log);
int run_figure(const RunConfig& cfg, std::ostream& log);

int dispatch(const RunConfig& cfg, std::ostream& log);

}  // namespace qudex
