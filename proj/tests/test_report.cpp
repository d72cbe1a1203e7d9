#include "liekahler/errors.hpp"
#include "liekahler/report.hpp"
#include "liekahler/scalings.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace liekahler;

namespace {

RunConfig quick(std::vector<std::string> checks, std::size_t samples = 8) {
  RunConfig c;
  c.samples = samples;
  c.checks = std::move(checks);
  c.polar_samples = 2;
  c.gamma_steps = 200;
  return c;
}

}  // namespace

TEST(Report, ConfigValidation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.samples = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.h = 1e-1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.checks = {"closed", "bogus"};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(run(quick({"admissible"}, 0)), ConfigError);
}

TEST(Report, ConfigJsonRoundTrip) {
  RunConfig c;
  c.group = "su3";
  c.structure = "rescaled:arctan";
  c.samples = 12;
  c.seed = 99;
  c.h = 2e-4;
  c.checks = {"closed", "potential"};
  c.threads = 3;
  const RunConfig d = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_EQ(d.checks, c.checks);
  EXPECT_EQ(d.threads, 3u);
  EXPECT_THROW(config_from_json(R"({"sample": 3})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"samples": -3})"), ConfigError);
  EXPECT_THROW(config_from_json("[]"), ConfigError);
  EXPECT_EQ(config_from_json(R"({"seed": 5})").samples, RunConfig{}.samples);
}

TEST(Report, SampleBallIsSeededAndInsideRadius) {
  const auto g = su3();
  const auto a = sample_ball(*g, 100, 7, 2.0), b = sample_ball(*g, 100, 7, 2.0), c = sample_ball(*g, 100, 8, 2.0);
  ASSERT_EQ(a.size(), 100u);
  double rmax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].coords, b[i].coords);
    rmax = std::max(rmax, a[i].coords.norm());
  }
  EXPECT_LE(rmax, 2.0);
  EXPECT_GT(rmax, 1.5);
  EXPECT_NE(a[0].coords, c[0].coords);
  // Prefix property: a shorter sweep sees the same first points.
  EXPECT_EQ(sample_ball(*g, 10, 7, 2.0)[9].coords, a[9].coords);
}

TEST(Report, StandardRunPasses) {
  const VerificationReport r = run(quick(all_checks()));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_EQ(r.verdict, "KAHLER");
  for (const auto& name : all_checks()) {
    const CheckSummary* s = r.find(name);
    ASSERT_NE(s, nullptr) << name;
    EXPECT_TRUE(s->pass || s->skipped) << name;
  }
  EXPECT_TRUE(r.flags.at("integrability_tests_agree"));
}

TEST(Report, PrerequisitesAreAdded) {
  const VerificationReport r = run(quick({"kaehler"}));
  EXPECT_NE(r.find("admissible"), nullptr);
  EXPECT_NE(r.find("integrable"), nullptr);
  EXPECT_NE(r.find("closed"), nullptr);
  EXPECT_EQ(r.find("polar"), nullptr);
}

TEST(Report, CsvHasOneRowPerCheckAndPointAndRoundTrips) {
  const VerificationReport r = run(quick({"admissible", "integrable", "closed"}, 64));
  EXPECT_EQ(r.rows.size(), 192u);
  const std::string csv = emit_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,point,norm_a,value");
  const std::vector<PointRecord> back = parse_csv(csv);
  ASSERT_EQ(back.size(), r.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].check, r.rows[i].check);
    EXPECT_EQ(back[i].point, r.rows[i].point);
    EXPECT_EQ(back[i].norm_a, r.rows[i].norm_a);
    EXPECT_EQ(back[i].value, r.rows[i].value);
  }
}

TEST(Report, JsonIsDeterministicAndThreadIndependent) {
  RunConfig c = quick({"admissible", "integrable", "closed", "kaehler"}, 16);
  const std::string first = run(c).to_json();
  EXPECT_EQ(run(c).to_json(), first);
  c.threads = 4;
  EXPECT_EQ(run(c).to_json(), first);
  c.timing = true;
  EXPECT_NE(run(c).to_json().find("wall_time_s"), std::string::npos);
}

TEST(Report, NegativeVerdictExitCode) {
  // Writes a tabulated non-integrable pair and runs it through the custom route.
  const auto g = su2();
  const std::vector<double> axis{-2.5, -1.0, 0.0, 1.0, 2.5};
  const auto path = std::filesystem::temp_directory_path() / "liekahler_test_perturbed.json";
  {
    std::ofstream out(path);
    out << tabulate_pair_json(perturbed_pair(g, 0.2), {axis, axis, axis});
  }
  RunConfig c = quick({"admissible", "integrable"});
  c.structure = "custom:" + path.string();
  const VerificationReport r = run(c);
  std::filesystem::remove(path);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_EQ(r.verdict, "NON_INTEGRABLE");
}

TEST(Report, ResolvesStructures) {
  const auto g = su2();
  EXPECT_EQ(resolve_pair(g, "standard").provenance(), Provenance::standard);
  EXPECT_EQ(resolve_pair(g, "rescaled:arctan").provenance(), Provenance::rescaled);
  EXPECT_THROW(resolve_pair(g, "warped"), ConfigError);
  EXPECT_THROW(resolve_pair(g, "custom:/nonexistent/file.json"), ConfigError);
  EXPECT_THROW(resolve_algebra("g2"), ConfigError);
}

TEST(Report, RescaledRadiusBeyondDomainIsRejected) {
  RunConfig c = quick({"admissible"});
  c.structure = "rescaled:sinh";
  c.radius = 6.0;
  EXPECT_THROW(run(c), ConfigError);
}

TEST(Report, RescaledRunReportsPotential) {
  RunConfig c = quick({"potential"}, 8);
  c.structure = "rescaled:arctan";
  const VerificationReport r = run(c);
  const CheckSummary* s = r.find("potential");
  ASSERT_NE(s, nullptr);
  EXPECT_TRUE(s->pass);
}
