#include "hplap/app/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "hplap/app/battery.hpp"
#include "hplap/barriers.hpp"
#include "hplap/exponents.hpp"
#include "hplap/hardy.hpp"
#include "hplap/prufer.hpp"
#include "hplap/specfun.hpp"

namespace hplap::app {

namespace {

constexpr std::array<const char*, 8> kNames = {"classify", "region", "sinp",  "barrier",
                                               "prufer",   "hardy",  "suite", "figure1"};

// Shortest round-trip text for CSV cells, so identical runs give identical bytes.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

// JSON has no infinities; they are written as strings.
Json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

Json to_json(const ProblemParams& pp) {
  return {{"p", pp.p}, {"N", pp.N}, {"mu", pp.mu}, {"eps", pp.eps},
          {"q", pp.q}, {"sigma", pp.sigma}, {"C", pp.C}};
}

Json to_json(const barriers::RadialProfile& f) {
  return {{"gamma", f.gamma}, {"beta", f.beta}, {"tau", f.tau}, {"scale", f.scale}};
}

Json to_json(const prufer::AsymptoticFit& f) {
  return {{"quantity", f.quantity},
          {"t_lo", f.t_lo},
          {"t_hi", f.t_hi},
          {"fitted", f.fitted_exponent},
          {"predicted", f.predicted_exponent},
          {"rel_err", f.rel_err}};
}

Json to_json(const hardy::SharpnessReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members) members.push_back({{"log_R", m.log_R}, {"energy", m.energy}});
  return {{"case", hardy::to_string(r.which)},
          {"params", to_json(r.params)},
          {"profile", to_json(r.profile)},
          {"alpha", r.family.alpha},
          {"log_rho", r.family.log_rho},
          {"members", members},
          {"strictly_decreasing", r.strictly_decreasing},
          {"growth_exponent", r.growth_exponent},
          {"growth_ratio", r.growth_ratio}};
}

Json exponents_json(double p, int N, double mu, double eps) {
  const auto d = exponents::exponent_data(p, N, mu, eps);
  Json j = {{"C_H", d.constants.C_H},
            {"C_star", d.constants.C_star},
            {"m_star", d.constants.m_star},
            {"gamma_minus", d.gamma_minus},
            {"gamma_star", d.gamma_star},
            {"gamma_plus", d.gamma_plus}};
  j["beta_minus"] = d.beta_minus ? Json(*d.beta_minus) : Json(nullptr);
  j["beta_plus"] = d.beta_plus ? Json(*d.beta_plus) : Json(nullptr);
  return j;
}

Outcome run_classify(const RunConfig& cfg) {
  validate(cfg.params);
  const auto c = exponents::classify(cfg.params);
  Outcome o;
  o.anchor = "existence and nonexistence across the critical line sigma = Lambda*(q)";
  o.results = {{"verdict", exponents::to_string(c.verdict)}};
  o.results["lambda_star"] = c.lambda_star ? Json(*c.lambda_star) : Json(nullptr);
  if (cfg.params.q != cfg.params.p - 1.0) {
    o.results["lower_bound_exponent"] = exponents::nonlinear_exponent(cfg.params);
  }
  if (cfg.params.mu <= exponents::hardy_constants(cfg.params.p, cfg.params.N).C_H) {
    o.results["exponents"] = exponents_json(cfg.params.p, cfg.params.N, cfg.params.mu, 0.0);
  }
  return o;
}

Outcome run_region(const RunConfig& cfg) {
  validate(cfg.params);
  const auto poly = exponents::region_polyline(cfg.params.p, cfg.params.N, cfg.params.mu,
                                               cfg.q_min, cfg.q_max, cfg.step);
  Outcome o;
  o.anchor = "boundary of the nonexistence set with its kink at (p-1, p)";
  Json verts = Json::array();
  std::string csv = "# hplap region csv v1\nq,lambda_star\n";
  for (const auto& v : poly) {
    verts.push_back({v.q, v.lambda_star});
    csv += num(v.q) + "," + num(v.lambda_star) + "\n";
  }
  o.results = {{"kink", {cfg.params.p - 1.0, cfg.params.p}}, {"vertices", verts}};
  o.csv = std::move(csv);
  return o;
}

Outcome run_sinp(const RunConfig& cfg) {
  const double p = cfg.params.p;
  const auto gs = specfun::GenSine::build(p);
  const auto v = gs.eval(cfg.psi);
  const auto quarter = specfun::quarter_pi_p(gs);
  double first = 0.0;
  const std::size_t n = std::max<std::size_t>(cfg.samples, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = gs.eval(2.0 * gs.pi_p() * static_cast<double>(i) / static_cast<double>(n - 1));
    first = std::max(first, std::fabs(std::pow(std::fabs(w.sprime), p) +
                                      std::pow(std::fabs(w.s), p) / (p - 1.0) - 1.0));
  }
  Outcome o;
  o.anchor = "generalized sine: first integral and half period";
  o.results = {{"psi", cfg.psi},
               {"S_p", v.s},
               {"S_p_prime", v.sprime},
               {"pi_p", gs.pi_p()},
               {"quarter_pi_p", quarter.quarter},
               {"first_integral_max_error", first},
               {"samples", n}};
  o.pass = first <= 1e-8;
  return o;
}

Outcome run_barrier(const RunConfig& cfg) {
  validate(cfg.params);
  const double p = cfg.params.p;
  const int N = cfg.params.N;
  const barriers::RadialProfile prof{cfg.gamma.value_or(exponents::gamma_star(p, N)), cfg.beta,
                                     cfg.tau, 1.0};
  const auto rep = barriers::classify_barrier(prof, cfg.params, cfg.t_min, cfg.t_max,
                                              std::max<std::size_t>(cfg.samples, 4));
  Outcome o;
  o.anchor = "signs of r^gamma (log r)^beta (log log r)^tau against the linear operator";
  std::string csv = "# hplap barrier csv v1\nlog_r,r,residual,normalized\n";
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    csv += num(rep.t[i]) + "," + num(std::exp(rep.t[i])) + "," + num(rep.residual[i]) + "," +
           num(rep.normalized[i]) + "\n";
  }
  const auto [lo, hi] = std::minmax_element(rep.normalized.begin(), rep.normalized.end());
  o.results = {{"profile", to_json(prof)},
               {"classification", barriers::to_string(rep.classification)},
               {"threshold_log_r", rep.threshold_t},
               {"samples", rep.t.size()},
               {"normalized_min", *lo},
               {"normalized_max", *hi}};
  o.csv = std::move(csv);
  return o;
}

prufer::AsymptoticCase infer_case(const RunConfig& cfg) {
  using prufer::AsymptoticCase;
  const auto& pp = cfg.params;
  if (!cfg.prufer_case.empty()) {
    if (cfg.prufer_case == "i") return AsymptoticCase::PowerGrowth;
    if (cfg.prufer_case == "ii") return AsymptoticCase::CriticalHardy;
    if (cfg.prufer_case == "iii") return AsymptoticCase::CriticalDimension;
    if (cfg.prufer_case == "iv") return AsymptoticCase::LogPerturbed;
    throw Error(Errc::ConfigError, "case must be one of i, ii, iii, iv");
  }
  if (is_critical_dimension(pp.p, pp.N) && pp.mu == 0.0) return AsymptoticCase::CriticalDimension;
  if (exponents::mu_is_critical(pp.p, pp.N, pp.mu)) {
    return pp.eps > 0.0 ? AsymptoticCase::LogPerturbed : AsymptoticCase::CriticalHardy;
  }
  return AsymptoticCase::PowerGrowth;
}

Outcome run_prufer(const RunConfig& cfg) {
  validate(cfg.params);
  const auto& pp = cfg.params;
  const auto sine = specfun::GenSine::build(pp.p);
  const double t0 = cfg.t0.value_or(pp.eps > 0.0 ? 1.0 : 0.0);
  const auto which = infer_case(cfg);
  prufer::IntegrationOptions opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  const auto sol = prufer::integrate_large_subsolution(pp, sine, t0, cfg.t_end, opt);

  Outcome o;
  o.anchor = "asymptotics of the large sub-solution in generalized polar coordinates";
  Json fits = Json::array();
  bool ok = true;
  for (const auto& f : prufer::fit_asymptotics(sol, pp, which, cfg.fit_lo, cfg.fit_hi)) {
    fits.push_back(to_json(f));
    ok &= f.rel_err <= cfg.tol;
  }
  o.results = {{"case", prufer::to_string(which)},
               {"t0", t0},
               {"t_end", cfg.t_end},
               {"steps", sol.states().size()},
               {"closed_form", sol.closed_form()},
               {"fits", fits},
               {"tol", cfg.tol}};
  if (!sol.closed_form()) {
    double worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
      const double t = t0 + (cfg.t_end - t0) * k / 17.0;
      worst = std::max(worst, std::fabs(prufer::reconstruction_residual(sol, pp, sine, t)));
    }
    o.results["reconstruction_residual"] = worst;
    if (which != prufer::AsymptoticCase::LogPerturbed) {
      const auto law = which == prufer::AsymptoticCase::PowerGrowth
                           ? prufer::PerturbationLaw::Exponential
                       : which == prufer::AsymptoticCase::CriticalHardy
                           ? prufer::PerturbationLaw::InverseLog
                           : prufer::PerturbationLaw::LogPower;
      try {
        const auto r = prufer::perturbation_rate(sol, pp, sine, law);
        o.results["angle_rate"] = {{"law", prufer::to_string(r.law)},
                                   {"psi_limit", r.psi_limit},
                                   {"fitted", r.fitted},
                                   {"predicted", r.predicted},
                                   {"rel_err", r.rel_err}};
      } catch (const Error& e) {
        o.results["angle_rate"] = {{"law", prufer::to_string(law)}, {"error", e.what()}};
      }
    }
  }
  std::string csv = "# hplap prufer csv v1\nt,psi,log_rho,log_u\n";
  for (const auto& s : sol.states()) {
    csv += num(s.t) + "," + num(s.psi) + "," + num(s.log_rho) + "," + num(s.log_u) + "\n";
  }
  o.csv = std::move(csv);
  o.pass = ok;
  return o;
}

Outcome run_hardy(const RunConfig& cfg) {
  validate(cfg.params);
  const double p = cfg.params.p;
  const int N = cfg.params.N;
  const auto hc = exponents::hardy_constants(p, N);
  Outcome o;
  o.results = {{"mode", cfg.mode}, {"C_H", hc.C_H}, {"C_star", hc.C_star}};
  if (cfg.mode == "rayleigh") {
    o.anchor = "Hardy inequality with the sharp constant C_H";
    const auto r = hardy::rayleigh_min(p, N, cfg.rho_in, cfg.R_out, cfg.n_grid);
    const double hat = hardy::rayleigh_quotient(
        hardy::RadialTestFunction::hat(cfg.rho_in, cfg.R_out, cfg.n_grid), p, N);
    o.results["quotient"] = r.quotient;
    o.results["iterations"] = r.iterations;
    o.results["hat_quotient"] = hat;
    o.pass = r.quotient >= hc.C_H - 1e-9 * std::max(1.0, hc.C_H) && r.quotient <= hat;
  } else if (cfg.mode == "improved") {
    o.anchor = "improved Hardy inequality with the logarithmic remainder C* / log^m r";
    const auto rad = hardy::improved_hardy_radius(p, N);
    const double rho = std::exp(rad.log_rho);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.draws; ++i) {
      const auto v = hardy::random_test_function(rho, 50.0 * rho, 40, cfg.seed + i);
      const auto m = hardy::improved_hardy_check(p, N, rho, v);
      worst = std::min(worst, m.margin / m.scale);
    }
    o.results["log_rho"] = rad.log_rho;
    o.results["supersolution"] = to_json(rad.profile);
    o.results["draws"] = cfg.draws;
    o.results["min_relative_margin"] = jnum(worst);
    o.pass = worst >= -1e-10;
  } else if (cfg.mode == "sharpness") {
    o.anchor = "sharpness of C_H and C* through cutoff families";
    const auto mu = hardy::sharpness_family(
        p, N, hardy::SharpnessCase::MuAboveCH,
        {std::log(1e3), std::log(1e6), std::log(1e12), std::log(1e24)});
    const auto ep = hardy::sharpness_family(p, N, hardy::SharpnessCase::EpsAboveCstar,
                                            {1e2, 1e8, 1e32, 1e128, 1e300}, 0.1, -0.01);
    o.results["mu_family"] = to_json(mu);
    o.results["eps_family"] = to_json(ep);
    o.pass = mu.strictly_decreasing && mu.members.back().energy < 0.0 &&
             ep.strictly_decreasing && ep.members.back().energy < 0.0;
  } else if (cfg.mode == "witness") {
    o.anchor = "negative energy test function excluding positive super-solutions";
    const double mu = cfg.params.mu, eps = cfg.params.eps;
    const bool expected = mu > hc.C_H || (exponents::mu_is_critical(p, N, mu) && eps > hc.C_star);
    const auto w = hardy::nonexistence_witness(p, N, mu, eps);
    o.results["expected"] = expected;
    o.results["found"] = w.has_value();
    if (w) {
      o.results["family"] = hardy::to_string(w->family_case);
      o.results["profile"] = to_json(w->profile);
      o.results["log_R"] = w->family.log_R;
      o.results["alpha"] = w->family.alpha;
      o.results["energy"] = w->energy;
      if (w->discretized) o.results["grid_energy"] = w->discretized_energy;
    }
    o.pass = w.has_value() == expected && (!w || w->energy < 0.0);
  } else {
    throw Error(Errc::ConfigError, "mode must be rayleigh, improved, sharpness or witness");
  }
  return o;
}

Outcome run_suite(const RunConfig& cfg) {
  BatteryOptions opt;
  opt.quick = cfg.quick;
  opt.seed = cfg.seed;
  const auto all = run_battery(opt);
  Outcome o;
  o.anchor = "acceptance battery";
  o.results = Json::array();
  bool ok = true;
  std::string table;
  char buf[64];
  for (const auto& c : all) {
    o.results.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    std::snprintf(buf, sizeof buf, "[%s] %02d ", c.pass ? "PASS" : "FAIL", c.id);
    table += buf + c.name + ": " + c.detail + "\n";
    ok &= c.pass;
  }
  o.csv = std::move(table);
  o.pass = ok;
  return o;
}

Outcome run_figure1(const RunConfig& cfg) {
  validate(cfg.params);
  std::vector<double> mus = cfg.mu_list;
  if (mus.empty()) mus.push_back(cfg.params.mu);
  Outcome o;
  o.anchor = "data behind the existence and nonexistence diagram";
  o.csv = figure1_csv(cfg.params.p, cfg.params.N, mus, cfg.q_min, cfg.q_max, cfg.step);
  std::size_t rows = 0;
  for (char ch : o.csv) rows += ch == '\n';
  o.results = {{"panels", mus}, {"rows", rows - 2}};
  return o;
}

}  // namespace

std::string to_string(Command c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Command> parse_command(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i]) return static_cast<Command>(i);
  }
  return std::nullopt;
}

Json to_json(const RunConfig& c) {
  Json j = {{"command", to_string(c.command)},
            {"params", to_json(c.params)},
            {"format", c.format == Format::Json ? "json" : "csv"},
            {"seed", c.seed},
            {"quick", c.quick}};
  switch (c.command) {
    case Command::Region:
    case Command::Figure1:
      j["q_min"] = c.q_min;
      j["q_max"] = c.q_max;
      j["step"] = c.step;
      if (c.command == Command::Figure1) j["mu_list"] = c.mu_list;
      break;
    case Command::Sinp:
      j["psi"] = c.psi;
      j["samples"] = c.samples;
      break;
    case Command::Barrier:
      j["gamma"] = c.gamma ? Json(*c.gamma) : Json(nullptr);
      j["beta"] = c.beta;
      j["tau"] = c.tau;
      j["t_min"] = c.t_min;
      j["t_max"] = c.t_max;
      j["samples"] = c.samples;
      break;
    case Command::Prufer:
      j["case"] = c.prufer_case;
      j["t0"] = c.t0 ? Json(*c.t0) : Json(nullptr);
      j["t_end"] = c.t_end;
      j["fit_lo"] = c.fit_lo;
      j["fit_hi"] = c.fit_hi;
      j["tol"] = c.tol;
      j["rel_tol"] = c.rel_tol;
      j["abs_tol"] = c.abs_tol;
      break;
    case Command::Hardy:
      j["mode"] = c.mode;
      j["rho_in"] = c.rho_in;
      j["R_out"] = c.R_out;
      j["n_grid"] = c.n_grid;
      j["draws"] = c.draws;
      break;
    case Command::Classify:
    case Command::Suite:
      break;
  }
  return j;
}

Outcome run(const RunConfig& config) {
  switch (config.command) {
    case Command::Classify: return run_classify(config);
    case Command::Region: return run_region(config);
    case Command::Sinp: return run_sinp(config);
    case Command::Barrier: return run_barrier(config);
    case Command::Prufer: return run_prufer(config);
    case Command::Hardy: return run_hardy(config);
    case Command::Suite: return run_suite(config);
    case Command::Figure1: return run_figure1(config);
  }
  throw Error(Errc::ConfigError, "unknown command");
}

Json make_report(const RunConfig& config, const Outcome& outcome) {
  Json j = {{"command", to_string(config.command)},
            {"config", to_json(config)},
            {"anchor", outcome.anchor},
            {"results", outcome.results}};
  j["pass"] = outcome.pass ? Json(*outcome.pass) : Json(nullptr);
  return j;
}

std::string figure1_csv(double p, int N, const std::vector<double>& mu_list, double q_min,
                        double q_max, double step) {
  const double ch = exponents::hardy_constants(p, N).C_H;
  std::string out = "# hplap figure1 csv v1\nmu,kind,label,q,sigma,on_line_nonexistence\n";
  auto row = [&](double mu, const char* kind, const std::string& label, double q, double sigma,
                 const std::string& flag) {
    out += num(mu) + "," + kind + "," + label + "," + num(q) + "," + num(sigma) + "," + flag + "\n";
  };
  auto on_line = [&](double mu, double q, double sigma) -> std::string {
    ProblemParams pp;
    pp.p = p;
    pp.N = N;
    pp.mu = mu;
    pp.q = q;
    pp.sigma = sigma;
    const auto v = exponents::classify(pp).verdict;
    if (v == exponents::Verdict::ExcludedPoint) return "excluded";
    return v == exponents::Verdict::Existence ? "0" : "1";
  };
  for (double mu : mu_list) {
    if (mu > ch && !exponents::mu_is_critical(p, N, mu)) {
      row(mu, "note", "nonexistence_all_q", std::nan(""), std::nan(""), "1");
      continue;
    }
    for (const auto& v : exponents::region_polyline(p, N, mu, q_min, q_max, step)) {
      row(mu, "boundary", "", v.q, v.lambda_star, on_line(mu, v.q, v.lambda_star));
    }
    row(mu, "point", "kink", p - 1.0, p, "excluded");
    const auto g = exponents::gamma_roots(p, N, mu);
    // sigma = 0 crossings of the right (slope gamma-) and left (slope gamma+) branches.
    if (g.minus < 0.0) {
      row(mu, "point", "(p-1)-p/gamma-", (p - 1.0) - p / g.minus, 0.0, "");
    }
    if (g.plus > 0.0) {
      row(mu, "point", "(p-1)-p/gamma+", (p - 1.0) - p / g.plus, 0.0, "");
    }
    // q = 0 crossing of the left branch.
    row(mu, "point", "p-(p-1)gamma+", 0.0, p - (p - 1.0) * g.plus, "");
  }
  return out;
}

int exit_code(const Outcome& outcome) { return outcome.pass.value_or(true) ? 0 : 1; }

int exit_code(const Error& error) {
  switch (error.code()) {
    case Errc::ConfigError:
    case Errc::DomainError:
    case Errc::EpsOutOfRange:
    case Errc::DeltaOutOfRange:
    case Errc::HomogeneousCase:
    case Errc::NotInExistenceRegion:
    case Errc::NonpositivePotential:
    case Errc::WindowTooShort:
      return 2;
    default:
      return 3;
  }
}

}  // namespace hplap::app
