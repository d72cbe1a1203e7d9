// liekahler: verify invariant Kaehler structures on T*G from the command line.

#include "liekahler/errors.hpp"
#include "liekahler/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Flags {
  std::string config_path;
  std::string group, structure, out, csv;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double radius = 0, h = 0, tau = 0;
  unsigned threads = 1;
  std::vector<std::string> checks;
};

void add_common(CLI::App* app, Flags& f) {
  // --h is the finite-difference step, so help is --help only.
  app->set_help_flag("--help", "print this help and exit");
  app->add_option("--config", f.config_path, "JSON run configuration (flags override it)");
  app->add_option("--group", f.group, "su2, so3, su3, u1^N or an algebra JSON file");
  app->add_option("--structure", f.structure,
                  "standard | rescaled:<identity|arctan|sinh|file.json> | custom:<file.json>");
  app->add_option("--samples", f.samples, "number of sample points");
  app->add_option("--seed", f.seed, "sampler seed");
  app->add_option("--radius", f.radius, "sampling radius |a| <= r");
  app->add_option("--h", f.h, "finite-difference step");
  app->add_option("--tau", f.tau, "closedness threshold");
  app->add_option("--out", f.out, "write the JSON report here instead of stdout");
  app->add_option("--csv", f.csv, "also write per-point residuals as CSV");
  app->add_option("--threads", f.threads, "worker threads for point sweeps");
  app->add_flag("--timing", "include wall time in the JSON report");
}

liekahler::RunConfig build_config(CLI::App* app, const Flags& f) {
  liekahler::RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw liekahler::ConfigError("cannot open config '" + f.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    c = liekahler::config_from_json(ss.str(), c);
  }
  auto given = [app](const char* name) { return app->count(name) > 0; };
  if (given("--group")) c.group = f.group;
  if (given("--structure")) c.structure = f.structure;
  if (given("--samples")) c.samples = f.samples;
  if (given("--seed")) c.seed = f.seed;
  if (given("--radius")) c.radius = f.radius;
  if (given("--h")) c.h = f.h;
  if (given("--tau")) c.tau = f.tau;
  if (given("--out")) c.output = f.out;
  if (given("--threads")) c.threads = f.threads;
  if (given("--timing")) c.timing = true;
  if (app->get_option_no_throw("--checks") && given("--checks")) c.checks = f.checks;
  return c;
}

int execute(liekahler::RunConfig c, const std::string& csv) {
  const liekahler::VerificationReport rep = liekahler::run(c);
  const std::string json = rep.to_json();
  if (c.output.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(c.output, std::ios::binary);
    if (!(out << json)) throw liekahler::Error("cannot write '" + c.output + "'");
  }
  if (!csv.empty()) {
    std::ofstream out(csv, std::ios::binary);
    if (!(out << liekahler::emit_csv(rep))) throw liekahler::Error("cannot write '" + csv + "'");
  }
  std::cerr << "verdict " << rep.verdict << ", wall time " << rep.wall_time_s << " s\n";
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of invariant Kaehler structures on T*G"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Flags verify_flags, polar_flags, potential_flags;

  auto* verify = app.add_subcommand("verify", "full pipeline (checks from config or --checks)");
  add_common(verify, verify_flags);
  verify->add_option("--checks", verify_flags.checks,
                     "subset of admissible integrable closed kaehler polar quasi_equivariance potential")
      ->delimiter(',');
  auto* polar = app.add_subcommand("polar", "polar-map checks only");
  add_common(polar, polar_flags);
  auto* potential = app.add_subcommand("potential", "potential check only");
  add_common(potential, potential_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return execute(build_config(verify, verify_flags), verify_flags.csv);
    if (polar->parsed()) {
      auto c = build_config(polar, polar_flags);
      c.checks = {"admissible", "integrable", "polar", "quasi_equivariance"};
      return execute(c, polar_flags.csv);
    }
    auto c = build_config(potential, potential_flags);
    c.checks = {"admissible", "potential"};
    return execute(c, potential_flags.csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
