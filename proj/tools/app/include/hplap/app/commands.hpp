#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hplap/error.hpp"
#include "hplap/params.hpp"
#include "json.hpp"

namespace hplap::app {

using Json = nlohmann::ordered_json;

enum class Command { Classify, Region, Sinp, Barrier, Prufer, Hardy, Suite, Figure1 };
enum class Format { Json, Csv };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Classify;
  ProblemParams params;
  Format format = Format::Json;
  std::string out;  // empty writes to stdout
  std::uint64_t seed = 0;
  bool quick = false;

  // region and figure1
  double q_min = -3.0;
  double q_max = 6.0;
  double step = 0.25;
  std::vector<double> mu_list;
  // sinp
  double psi = 0.0;
  std::size_t samples = 65;
  // barrier: profile r^gamma (log r)^beta (log log r)^tau on t in [t_min, t_max]
  std::optional<double> gamma;
  double beta = 0.0;
  double tau = 0.0;
  double t_min = 5.0;
  double t_max = 4096.0;
  // prufer: case i..iv, empty infers it from the parameters
  std::string prufer_case;
  std::optional<double> t0;  // default 0, or 1 when eps > 0
  double t_end = 50.0;
  double fit_lo = -1.0;  // negative: second half of the run
  double fit_hi = -1.0;
  double tol = 0.05;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // hardy
  std::string mode = "rayleigh";
  double rho_in = 1e-3;
  double R_out = 1e4;
  std::size_t n_grid = 512;
  std::size_t draws = 100;
};

Json to_json(const RunConfig& config);

struct Outcome {
  std::string anchor;         // theorem or construction the run checks
  Json results;
  std::optional<bool> pass;   // absent for purely informational commands
  std::string csv;            // table form when the command has one
};

/// Dispatches to the owning module. Module errors propagate as hplap::Error.
Outcome run(const RunConfig& config);

/// Config echo, anchor, results and pass flag, in a fixed key order.
Json make_report(const RunConfig& config, const Outcome& outcome);

/// Boundary polylines and labelled points of the existence/nonexistence diagram.
std::string figure1_csv(double p, int N, const std::vector<double>& mu_list, double q_min,
                        double q_max, double step);

/// 0 pass or informational, 1 fail.
int exit_code(const Outcome& outcome);

/// 2 for rejected input, 3 for numerical failures.
int exit_code(const Error& error);

}  // namespace hplap::app
