#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "hplap/app/commands.hpp"
#include "hplap/error.hpp"

namespace {

using hplap::app::Command;
using hplap::app::Format;
using hplap::app::RunConfig;

struct Flags {
  std::string format;
  double rmin = 0.0;
  double rmax = 0.0;
  double R = 0.0;
};

void add_params(CLI::App* sub, RunConfig& cfg, Flags& flags) {
  auto& pp = cfg.params;
  sub->add_option("--p", pp.p, "p of the p-Laplacian (p > 1)");
  sub->add_option("--N", pp.N, "space dimension (N >= 2)");
  sub->add_option("--mu", pp.mu, "coefficient of |x|^-p");
  sub->add_option("--eps", pp.eps, "coefficient of |x|^-p log^-m |x|");
  sub->add_option("--q", pp.q, "exponent of the nonlinearity");
  sub->add_option("--sigma", pp.sigma, "weight exponent of the nonlinearity");
  sub->add_option("--C", pp.C, "coupling of the nonlinearity");
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", cfg.seed, "seed for random draws");
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

void write(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw hplap::Error(hplap::Errc::ConfigError, "cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-type p-Laplace problems in exterior domains"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags flags;
  std::map<CLI::App*, Command> subs;

  auto* classify = app.add_subcommand("classify", "existence or nonexistence verdict");
  classify->add_flag("--json", "JSON output (the default)");
  subs[classify] = Command::Classify;

  auto* region = app.add_subcommand("region", "critical line Lambda*(q) as a polyline");
  auto* figure = app.add_subcommand("figure1", "boundary and labelled points for several mu");
  for (auto* s : {region, figure}) {
    s->add_option("--qmin", cfg.q_min);
    s->add_option("--qmax", cfg.q_max);
    s->add_option("--step", cfg.step)->check(CLI::PositiveNumber);
  }
  figure->add_option("--mu-list", cfg.mu_list, "comma-separated mu values")->delimiter(',');
  subs[region] = Command::Region;
  subs[figure] = Command::Figure1;

  auto* sinp = app.add_subcommand("sinp", "generalized sine S_p");
  sinp->add_option("--psi", cfg.psi);
  subs[sinp] = Command::Sinp;

  auto* barrier = app.add_subcommand("barrier", "residual of a radial barrier profile");
  barrier->add_option("--gamma", cfg.gamma, "power of r (default gamma*)");
  barrier->add_option("--beta", cfg.beta, "power of log r");
  barrier->add_option("--tau", cfg.tau, "power of log log r");
  barrier->add_option("--rmin", flags.rmin, "smallest radius (overrides --tmin)");
  barrier->add_option("--rmax", flags.rmax, "largest radius (overrides --tmax)");
  barrier->add_option("--tmin", cfg.t_min, "log of the smallest radius");
  barrier->add_option("--tmax", cfg.t_max, "log of the largest radius");
  subs[barrier] = Command::Barrier;

  for (auto* s : {sinp, barrier}) s->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);

  auto* prufer = app.add_subcommand("prufer", "large sub-solution in polar coordinates");
  prufer->add_option("--R", flags.R, "radius where u vanishes");
  prufer->add_option("--t0", cfg.t0, "log of that radius (overrides --R)");
  prufer->add_option("--tend", cfg.t_end, "end of the run in log r");
  prufer->add_option("--case", cfg.prufer_case)->check(CLI::IsMember({"i", "ii", "iii", "iv"}));
  prufer->add_option("--fit-lo", cfg.fit_lo, "fit window start in log r");
  prufer->add_option("--fit-hi", cfg.fit_hi, "fit window end in log r");
  prufer->add_option("--tol", cfg.tol, "relative tolerance on the fitted exponents");
  prufer->add_option("--rtol", cfg.rel_tol)->check(CLI::PositiveNumber);
  prufer->add_option("--atol", cfg.abs_tol)->check(CLI::PositiveNumber);
  subs[prufer] = Command::Prufer;

  auto* hardy = app.add_subcommand("hardy", "Hardy inequality checks");
  hardy->add_option("--mode", cfg.mode)
      ->check(CLI::IsMember({"rayleigh", "improved", "sharpness", "witness"}));
  hardy->add_option("--rho-in", cfg.rho_in)->check(CLI::PositiveNumber);
  hardy->add_option("--R-out", cfg.R_out)->check(CLI::PositiveNumber);
  hardy->add_option("--n-grid", cfg.n_grid)->check(CLI::PositiveNumber);
  hardy->add_option("--draws", cfg.draws);
  subs[hardy] = Command::Hardy;

  auto* suite = app.add_subcommand("suite", "acceptance battery");
  suite->add_flag("--quick", cfg.quick, "smaller samples, same tolerances");
  subs[suite] = Command::Suite;

  for (auto& [s, c] : subs) add_params(s, cfg, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (auto& [s, c] : subs) {
    if (s->parsed()) cfg.command = c;
  }
  if (cfg.command == Command::Barrier) {
    if (barrier->count("--samples") == 0) cfg.samples = 400;
    if (flags.rmin > 0.0) cfg.t_min = std::log(flags.rmin);
    if (flags.rmax > 0.0) cfg.t_max = std::log(flags.rmax);
  }
  if (cfg.command == Command::Prufer && !cfg.t0 && flags.R > 0.0) cfg.t0 = std::log(flags.R);

  // Tables by default for the suite and for .csv targets.
  if (flags.format.empty()) {
    cfg.format = cfg.command == Command::Suite || ends_with(cfg.out, ".csv") ? Format::Csv
                                                                             : Format::Json;
  } else {
    cfg.format = flags.format == "csv" ? Format::Csv : Format::Json;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto outcome = hplap::app::run(cfg);
    const std::string report = hplap::app::make_report(cfg, outcome).dump(2) + "\n";
    if (cfg.format == Format::Csv && !outcome.csv.empty()) {
      write(cfg.out, outcome.csv);
      if (!cfg.out.empty()) std::cout << report;
    } else {
      write(cfg.out, report);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wall_time %.3f s\n", secs);
    return hplap::app::exit_code(outcome);
  } catch (const hplap::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return hplap::app::exit_code(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
