#include <string>

#include "doctest.h"
#include "hplap/app/battery.hpp"
#include "hplap/app/commands.hpp"
#include "hplap/error.hpp"

using namespace hplap;
using namespace hplap::app;

namespace {

RunConfig config(Command c, double p, int N, double mu) {
  RunConfig cfg;
  cfg.command = c;
  cfg.params.p = p;
  cfg.params.N = N;
  cfg.params.mu = mu;
  return cfg;
}

}  // namespace

TEST_CASE("command names round-trip") {
  for (auto c : {Command::Classify, Command::Region, Command::Sinp, Command::Barrier,
                 Command::Prufer, Command::Hardy, Command::Suite, Command::Figure1}) {
    CHECK(parse_command(to_string(c)) == c);
  }
  CHECK_FALSE(parse_command("plot").has_value());
}

TEST_CASE("classify example is nonexistence and informational") {
  auto cfg = config(Command::Classify, 2.0, 3, 0.0);
  cfg.params.q = 3.0;
  cfg.params.sigma = 0.0;
  const auto o = run(cfg);
  CHECK(o.results["verdict"] == "Nonexistence");
  CHECK_FALSE(o.pass.has_value());
  CHECK(exit_code(o) == 0);
  const auto rep = make_report(cfg, o);
  CHECK(rep["pass"].is_null());
  CHECK(rep["config"]["params"]["q"] == 3.0);
  CHECK_FALSE(rep["anchor"].get<std::string>().empty());
}

TEST_CASE("region contains the kink vertex") {
  const auto o = run(config(Command::Region, 2.0, 3, 0.1));
  CHECK(o.csv.rfind("# hplap region csv v1\nq,lambda_star\n", 0) == 0);
  CHECK(o.csv.find("\n1,2\n") != std::string::npos);
}

TEST_CASE("figure1 carries boundary rows and labelled intercepts") {
  const std::string csv = figure1_csv(2.0, 3, {-0.5, 0.0, 0.25}, -3.0, 6.0, 0.5);
  CHECK(csv.rfind("# hplap figure1 csv v1\nmu,kind,label,q,sigma,on_line_nonexistence\n", 0) == 0);
  CHECK(csv.find("-0.5,point,(p-1)-p/gamma-,") != std::string::npos);
  CHECK(csv.find("-0.5,point,(p-1)-p/gamma+,") != std::string::npos);
  CHECK(csv.find("0.25,boundary,") != std::string::npos);
  CHECK(csv.find(",point,kink,1,2,excluded") != std::string::npos);
  const std::string above = figure1_csv(2.0, 3, {0.5}, -3.0, 6.0, 0.5);
  CHECK(above.find("nonexistence_all_q") != std::string::npos);
}

TEST_CASE("verification commands report pass") {
  auto s = config(Command::Sinp, 3.0, 3, 0.0);
  s.psi = 0.4;
  CHECK(run(s).pass == true);

  auto pr = config(Command::Prufer, 3.0, 2, 0.02);
  pr.t_end = 25.0;
  pr.fit_lo = 12.0;
  const auto o = run(pr);
  CHECK(o.pass == true);
  CHECK(o.results["case"] == "power_growth");
  CHECK(o.csv.rfind("# hplap prufer csv v1\nt,psi,log_rho,log_u\n", 0) == 0);

  auto w = config(Command::Hardy, 2.0, 3, 0.2);
  w.mode = "witness";
  CHECK(run(w).pass == true);

  auto b = config(Command::Barrier, 2.0, 3, 0.25);
  b.beta = 0.5;
  b.samples = 50;
  const auto ob = run(b);
  CHECK(ob.results["classification"] == "SuperSolution");
}

TEST_CASE("same config gives byte-identical reports") {
  auto cfg = config(Command::Hardy, 2.0, 3, 0.0);
  cfg.mode = "improved";
  cfg.draws = 10;
  cfg.seed = 7;
  const auto a = make_report(cfg, run(cfg)).dump(2);
  const auto b = make_report(cfg, run(cfg)).dump(2);
  CHECK(a == b);

  RunConfig suite;
  suite.command = Command::Suite;
  suite.quick = true;
  CHECK(make_report(suite, run(suite)).dump() == make_report(suite, run(suite)).dump());
}

TEST_CASE("errors map to exit codes") {
  CHECK(exit_code(Error(Errc::ConfigError, "x")) == 2);
  CHECK(exit_code(Error(Errc::NotConverged, "x")) == 3);
  auto bad = config(Command::Classify, 0.5, 3, 0.0);
  CHECK_THROWS_AS(run(bad), Error);
  auto mode = config(Command::Hardy, 2.0, 3, 0.0);
  mode.mode = "plot";
  CHECK_THROWS_AS(run(mode), Error);
}

TEST_CASE("battery order does not depend on the thread count") {
  BatteryOptions one;
  one.quick = true;
  one.threads = 1;
  BatteryOptions many = one;
  many.threads = 4;
  const auto a = run_battery(one);
  const auto b = run_battery(many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == static_cast<int>(i) + 1);
    CHECK(a[i].detail == b[i].detail);
  }
}
