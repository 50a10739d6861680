#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace sdpp::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sdpp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ParseConfig, FigureThreePresetAlone) {
  const RunConfig c = parse_config("preset = fig3\n");
  EXPECT_EQ(c.preset, "fig3");
  EXPECT_DOUBLE_EQ(c.params.r1, 2.0);
  EXPECT_DOUBLE_EQ(c.params.r2, 2.3);
  EXPECT_DOUBLE_EQ(c.params.alpha1, 0.13);
  EXPECT_DOUBLE_EQ(c.params.alpha2, 0.17);
  EXPECT_DOUBLE_EQ(c.params.alpha3, 0.2);
  EXPECT_DOUBLE_EQ(c.params.beta, 1e-3);
  EXPECT_DOUBLE_EQ(c.params.delta, 0.02);
  EXPECT_DOUBLE_EQ(c.noise.sigma1, 1e-5);
  EXPECT_DOUBLE_EQ(c.noise.sigma3, 2e-3);
  EXPECT_DOUBLE_EQ(c.noise.q1, -0.04);
  EXPECT_DOUBLE_EQ(c.noise.lambda, 1.0);
  EXPECT_DOUBLE_EQ(c.params.a1, 0.05);
  EXPECT_DOUBLE_EQ(c.params.a2, 0.05);
  EXPECT_DOUBLE_EQ(c.step.dt, 0.01);
  EXPECT_DOUBLE_EQ(c.step.t_end, 200.0);
  EXPECT_DOUBLE_EQ(c.delays.tau3, 1.5);
  EXPECT_TRUE(c.assumed_transformation_rates);
}

TEST(ParseConfig, OverrideAppliesAfterPreset) {
  const RunConfig c = parse_config("sigma3 = 0\npreset = fig3\n");
  EXPECT_EQ(c.noise.sigma3, 0.0);
  EXPECT_DOUBLE_EQ(c.params.r1, 2.0);
  EXPECT_EQ(c.overrides, std::vector<std::string>{"sigma3"});
}

TEST(ParseConfig, LaterAssignmentWins) {
  const RunConfig c = parse_config("r1 = 0.3\nr1 = 0.4 # comment\n");
  EXPECT_DOUBLE_EQ(c.params.r1, 0.4);
}

TEST(ParseConfig, JumpMarkBoundNamed) {
  try {
    parse_config("preset = fig1\nq1 = -2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "q1");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("> -1"), std::string::npos);
  }
}

TEST(ParseConfig, UnknownKeyAndMalformedNumber) {
  try {
    parse_config("\n\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "bogus");
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("r1 = 0.7x\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "r1");
  }
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_config("preset = nope\n"), ConfigError);
  EXPECT_THROW(parse_config("preset = fig1\npreset = fig2\n"), ConfigError);
}

TEST(ParseConfig, DtMustDivideDelays) {
  try {
    parse_config("tau1 = 0.55\ndt = 0.1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "tau1");
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_config("dt = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "dt");
  }
  EXPECT_NO_THROW(parse_config("dt = 0.25\ntau1 = 0.5\ntau2 = 1\ntau3 = 1.5\ndt_list = 0.25, 0.125\n"));
  EXPECT_THROW(parse_config("dt_list = 0.005, 0.01\n"), ConfigError);
}

TEST(ParseConfig, HypothesisFailureIsOnlyAWarning) {
  const RunConfig c = parse_config("preset = fig1\n");
  bool found = false;
  for (const auto& w : c.warnings) found = found || w.find("delta > alpha3") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ParseConfig, OverridingBothRatesClearsAssumption) {
  EXPECT_TRUE(parse_config("preset = fig2\na1 = 0.1\n").assumed_transformation_rates);
  EXPECT_FALSE(parse_config("preset = fig2\na1 = 0.1\na2 = 0.2\n").assumed_transformation_rates);
  EXPECT_FALSE(parse_config("preset = persistence\n").assumed_transformation_rates);
}

TEST(ParseConfig, SweepPresets) {
  const RunConfig c = parse_config("preset = fig6\n");
  EXPECT_EQ(c.sweep_var, "tau1");
  EXPECT_EQ(c.sweep_values, (std::vector<double>{0.5, 2.0}));
  RunConfig all = parse_config("preset = fig9\n");
  set_sweep_value(all, all.sweep_var, 1.0);
  EXPECT_EQ(all.delays, (DelaySpec{1.0, 1.0, 1.0}));
  EXPECT_THROW(parse_config("sweep = seed\n"), ConfigError);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(parse_config("preset = " + name + "\n")) << name;
}

TEST(SerializeConfig, IsAFixedPoint) {
  const char* docs[] = {
      "preset = fig3\nsigma3 = 0\n",
      "r1 = 0.123456789\nq2 = -0.5\nseed = 18446744073709551615\njump_clock = independent\n",
      "preset = fig4a\nsweep_values = 0.01, 0.02\nsweep_kind = ensemble\ntol_slack = 0.3\n",
      "",
  };
  for (const char* doc : docs) {
    const std::string once = serialize_config(parse_config(doc));
    const std::string twice = serialize_config(parse_config(once));
    EXPECT_EQ(once, twice);
  }
  EXPECT_EQ(serialize_config(parse_config("sigma3 = 0\npreset = fig3\n")), "preset = fig3\nsigma3 = 0\n");
}

TEST(Commands, ClassifyExtinctionPrintsRegimeAndCoefficients) {
  RunConfig c = parse_config("preset = extinction\n");
  std::ostringstream out, err;
  EXPECT_EQ(run_subcommand(Command::Classify, c, out, err), kExitOk);
  const std::string text = out.str();
  EXPECT_NE(text.find("ExtinctionAll"), std::string::npos);
  EXPECT_NE(text.find("c1 = "), std::string::npos);
  EXPECT_NE(text.find("c2 = "), std::string::npos);
  EXPECT_NE(text.find("c3 = "), std::string::npos);
}

TEST(Commands, ClassifyIndeterminateStillSucceeds) {
  RunConfig c = parse_config("preset = fig3\n");
  std::ostringstream out, err;
  EXPECT_EQ(run_subcommand(Command::Classify, c, out, err), kExitOk);
  EXPECT_NE(out.str().find("Indeterminate"), std::string::npos);
}

TEST(Commands, SimulateTwiceIsByteIdentical) {
  const fs::path dir = scratch_dir("determinism");
  std::ostringstream out, err;
  RunConfig a = parse_config("preset = persistence\nt_end = 20\nseed = 42\noutput = " + (dir / "a.csv").string());
  RunConfig b = parse_config("preset = persistence\nt_end = 20\nseed = 42\noutput = " + (dir / "b.csv").string());
  ASSERT_EQ(run_subcommand(Command::Simulate, a, out, err), kExitOk);
  ASSERT_EQ(run_subcommand(Command::Simulate, b, out, err), kExitOk);
  const std::string csv = slurp(dir / "a.csv");
  EXPECT_EQ(csv, slurp(dir / "b.csv"));
  EXPECT_NE(csv.find("\nt,x,y,z\n"), std::string::npos);
  EXPECT_NE(csv.find("# seed: 42"), std::string::npos);
  EXPECT_NE(csv.find("# preset: persistence"), std::string::npos);
  EXPECT_NE(csv.find("0.01,"), std::string::npos);
}

TEST(Commands, SimulateRecordsAssumedRates) {
  RunConfig c = parse_config("preset = fig1\nt_end = 0.1\n");
  std::ostringstream out, err;
  ASSERT_EQ(run_subcommand(Command::Simulate, c, out, err), kExitOk);
  EXPECT_NE(out.str().find("# assumed a1/a2"), std::string::npos);
}

TEST(Commands, CsvValuesRoundTrip) {
  RunConfig c = parse_config("preset = persistence\nt_end = 0.5\nseed = 1\n");
  std::ostringstream out, err;
  ASSERT_EQ(run_subcommand(Command::Simulate, c, out, err), kExitOk);
  const Trajectory traj = simulate(c.params, c.noise, c.delays, c.history(), c.step);
  std::istringstream in(out.str());
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[1], traj.states[row].x);
    EXPECT_EQ(v[3], traj.states[row].z);
    ++row;
  }
  EXPECT_EQ(row, traj.size());
}

TEST(Commands, EnsembleWritesStatsAndSummary) {
  const fs::path dir = scratch_dir("ensemble");
  RunConfig c = parse_config("preset = persistence\nt_end = 5\nn_reps = 4\noutput = " + (dir / "e.csv").string());
  std::ostringstream out, err;
  ASSERT_EQ(run_subcommand(Command::Ensemble, c, out, err), kExitOk);
  const std::string csv = slurp(dir / "e.csv");
  EXPECT_NE(csv.find("t,mean_x,sd_x,q025_x,q500_x,q975_x,mean_y,sd_y,q025_y,q500_y,q975_y,mean_z,sd_z,q025_z,"
                     "q500_z,q975_z\n"),
            std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "e.csv.summary.txt"));
  EXPECT_NE(out.str().find("verdict:"), std::string::npos);
}

TEST(Commands, ConvergenceTable) {
  RunConfig c = parse_config("preset = fig3\nt_end = 2\n");
  std::ostringstream out, err;
  ASSERT_EQ(run_subcommand(Command::Convergence, c, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("dt,max_error,order\n"), std::string::npos);
  EXPECT_NE(out.str().find("# observed_order:"), std::string::npos);
}

TEST(Commands, SweepOverTau1WritesFilesAndIndex) {
  const fs::path dir = scratch_dir("sweep");
  RunConfig c = parse_config("preset = fig3\nt_end = 5\nsweep = tau1\nsweep_values = 0.5, 2\noutput = " +
                             (dir / "fig6").string());
  std::ostringstream out, err;
  ASSERT_EQ(run_subcommand(Command::Sweep, c, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "fig6_tau1_0.5.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig6_tau1_2.csv"));
  const std::string index = slurp(dir / "fig6_index.csv");
  EXPECT_NE(index.find("fig6_tau1_0.5.csv,ok"), std::string::npos);
  EXPECT_NE(index.find("fig6_tau1_2.csv,ok"), std::string::npos);
  EXPECT_NE(slurp(dir / "fig6_tau1_2.csv").find("# override: tau1 = 2"), std::string::npos);
}

TEST(Commands, RuntimeFaultsExitTwo) {
  RunConfig c = parse_config("preset = fig3\nt_end = 20\n");
  std::ostringstream out, err;
  EXPECT_EQ(run_subcommand(Command::Simulate, c, out, err), kExitFault);
  EXPECT_NE(err.str().find("non-finite"), std::string::npos);

  RunConfig unwritable = parse_config("preset = persistence\nt_end = 1\noutput = /nonexistent/dir/x.csv\n");
  EXPECT_EQ(run_subcommand(Command::Simulate, unwritable, out, err), kExitFault);
}

TEST(Commands, SweepRecordsFaultingValues) {
  const fs::path dir = scratch_dir("sweep_fault");
  RunConfig c = parse_config("preset = fig3\nt_end = 20\nsweep = tau1\nsweep_values = 0.5\noutput = " +
                             (dir / "s").string());
  std::ostringstream out, err;
  EXPECT_EQ(run_subcommand(Command::Sweep, c, out, err), kExitFault);
  EXPECT_NE(slurp(dir / "s_index.csv").find("fault:"), std::string::npos);
}

TEST(Commands, ParseCommandNames) {
  EXPECT_EQ(parse_command("sweep"), Command::Sweep);
  EXPECT_FALSE(parse_command("plot").has_value());
  EXPECT_EQ(to_string(Command::Convergence), "convergence");
}

}  // namespace
}  // namespace sdpp::cli
