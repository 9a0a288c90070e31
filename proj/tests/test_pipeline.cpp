#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fowt/config.hpp"
#include "fowt/pipeline.hpp"
#include "fowt/report.hpp"

using namespace fowt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fowt_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig smoke_config(const fs::path& out) {
  RunConfig cfg;
  cfg.n_points = 4;
  cfg.m_mc_factor = 20;
  cfg.n_mcs = 50;
  cfg.duration = 60.0;
  cfg.dt = 0.1;
  cfg.transient = 10.0;
  cfg.headings_deg = {0.0, 90.0};
  cfg.master_seed = 11;
  cfg.out_dir = out.string();
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FOWT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

void write_smoke_ini(const fs::path& path, const fs::path& out, std::uint64_t seed) {
  std::ofstream ini(path);
  ini << "[points]\nn = 4\nm_mc_factor = 20\n\n[mcs]\nn = 50\n\n"
      << "[run]\nseed = " << seed << "\nout_dir = " << out.string() << "\n\n"
      << "[simulation]\nduration_s = 60\ndt_s = 0.1\ntransient_s = 10\n"
      << "headings_deg = 0,90\n";
  ini.close();
}

}  // namespace

TEST_CASE("smoke run emits every declared artifact") {
  const auto dir = fresh_dir("smoke");
  Pipeline pipeline(smoke_config(dir), 2);
  const auto timings = pipeline.run();

  CHECK(timings.dpim_calls == 4 * 2);
  CHECK(timings.mcs_calls == 50 * 2);

  for (const std::string tag : {"h0", "h90"}) {
    for (const std::string prefix :
         {"points_", "response_", "mean_stress_", "reliability_", "mcs_response_",
          "mcs_reliability_", "pdf_stress_tower7_", "pdf_stress_blade_"}) {
      CHECK(fs::exists(dir / (prefix + tag + ".csv")));
    }
    for (const std::string t : {"T5", "T10", "T15", "T20", "T25"}) {
      CHECK(fs::exists(dir / ("pdf_damage_tower_" + t + "_" + tag + ".csv")));
      CHECK(fs::exists(dir / ("pdf_damage_blade_" + t + "_" + tag + ".csv")));
    }
  }
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "timings.json"));

  const auto summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"dpim\": 8") != std::string::npos);
  CHECK(summary.find("\"mcs\": 100") != std::string::npos);
  CHECK(summary.find("fnv1a64") != std::string::npos);

  // Probabilities in the emitted point set are a distribution.
  const auto points = read_points_csv((dir / "points_h0.csv").string());
  points.validate();
  CHECK(points.points.size() == 4);
}

TEST_CASE("reruns are byte-identical regardless of worker count") {
  const auto dir_a = fresh_dir("det_a");
  const auto dir_b = fresh_dir("det_b");
  Pipeline a(smoke_config(dir_a), 1);
  Pipeline b(smoke_config(dir_b), 4);
  a.run();
  b.run();

  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const auto name = entry.path().filename().string();
    if (name == "timings.json") continue;  // wall clock, intentionally excluded
    CHECK(slurp(dir_b / name) == slurp(entry.path()));
    ++compared;
  }
  CHECK(compared > 30);
}

TEST_CASE("different master seeds give different responses") {
  const auto dir_a = fresh_dir("seed_a");
  const auto dir_b = fresh_dir("seed_b");
  auto cfg_a = smoke_config(dir_a);
  auto cfg_b = smoke_config(dir_b);
  cfg_b.master_seed = 12;
  Pipeline(cfg_a, 2).run();
  Pipeline(cfg_b, 2).run();
  CHECK(slurp(dir_a / "response_h0.csv") != slurp(dir_b / "response_h0.csv"));
}

TEST_CASE("staged subcommands reproduce the in-memory run") {
  const auto run_dir = fresh_dir("stage_run");
  Pipeline pipeline(smoke_config(run_dir), 2);
  pipeline.run();

  const auto stage_dir = fresh_dir("stage_cli");
  const auto ini = stage_dir / "config.ini";
  write_smoke_ini(ini, stage_dir, 11);

  REQUIRE(run_cli("points --config " + ini.string()) == 0);
  REQUIRE(run_cli("simulate --config " + ini.string()) == 0);
  REQUIRE(run_cli("fatigue --config " + ini.string() +
                  " --export-stress --export-cycles") == 0);
  REQUIRE(run_cli("dpim --config " + ini.string()) == 0);
  REQUIRE(run_cli("mcs --config " + ini.string()) == 0);

  // The staged path goes through persisted loads CSVs; %.17g round-trips
  // doubles exactly, so the response tables must match byte for byte.
  for (const std::string tag : {"h0", "h90"}) {
    CHECK(slurp(stage_dir / ("response_" + tag + ".csv")) ==
          slurp(run_dir / ("response_" + tag + ".csv")));
    CHECK(slurp(stage_dir / ("reliability_" + tag + ".csv")) ==
          slurp(run_dir / ("reliability_" + tag + ".csv")));
    CHECK(slurp(stage_dir / ("mcs_reliability_" + tag + ".csv")) ==
          slurp(run_dir / ("mcs_reliability_" + tag + ".csv")));
  }

  // Stage artifacts exercise the declared side schemas.
  CHECK(fs::exists(stage_dir / "loads_h0_q1.csv"));
  CHECK(fs::exists(stage_dir / "damage_h0_q1.csv"));
  CHECK(fs::exists(stage_dir / "stress_tower_h0_q1.csv"));
  CHECK(fs::exists(stage_dir / "stress_blade_h0_q1.csv"));
  CHECK(fs::exists(stage_dir / "cycles_tower_h0_q1.csv"));
  const auto cycles = read_csv((stage_dir / "cycles_tower_h0_q1.csv").string());
  CHECK(cycles.columns == std::vector<std::string>{"range_pa", "mean_pa", "count"});
  const auto damage = read_csv((stage_dir / "damage_h0_q1.csv").string());
  CHECK(damage.columns ==
        std::vector<std::string>{"location", "node", "d_st", "dr_st_per_s"});

  const auto loads = read_csv((stage_dir / "loads_h0_q1.csv").string());
  REQUIRE(!loads.comments.empty());
  CHECK(loads.comments[0].find("beta_deg=0") != std::string::npos);
  CHECK(loads.comments[0].find("seed=") != std::string::npos);
  CHECK(loads.columns ==
        std::vector<std::string>{"t", "Nz", "Mx_t", "My_t", "Fx_b", "Fy_b", "Fz_b",
                                 "Mx_b", "My_b", "Mz_b"});
}

TEST_CASE("cli exit codes: config errors are 1, runtime failures are 2") {
  CHECK(run_cli("run --config /nonexistent.ini") == 1);

  const auto dir = fresh_dir("badcfg");
  std::ofstream bad(dir / "bad.ini");
  bad << "[points]\nn = 4\nnot_a_key = 7\n";
  bad.close();
  CHECK(run_cli("run --config " + (dir / "bad.ini").string()) == 1);

  std::ofstream bad2(dir / "bad2.ini");
  bad2 << "[simulation]\nduration_s = 61.03\n";  // not divisible by dt
  bad2.close();
  CHECK(run_cli("run --config " + (dir / "bad2.ini").string()) == 1);

  // Missing artifacts: report on an empty directory is a runtime failure.
  const auto empty = fresh_dir("empty_report");
  CHECK(run_cli("report --out " + empty.string()) == 2);

  CHECK(run_cli("definitely-not-a-command") == 1);
}

TEST_CASE("report names the absent stage on an empty directory") {
  const auto dir = fresh_dir("report_missing");
  try {
    write_report(dir.string());
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("points stage") != std::string::npos);
    CHECK(msg.find("dpim stage") != std::string::npos);
  }
}

TEST_CASE("report renders the summary and exact-valued plots") {
  const auto dir = fresh_dir("report_full");
  Pipeline pipeline(smoke_config(dir), 2);
  pipeline.run();
  write_report(dir.string(), true);

  const auto report = slurp(dir / "report.txt");
  CHECK(report.find("mean axial stress") != std::string::npos);
  for (int node = 1; node <= 7; ++node) {
    CHECK(report.find("\n" + std::to_string(node) + "\t") != std::string::npos);
  }
  CHECK(report.find("fatigue reliability (DPIM)") != std::string::npos);
  CHECK(report.find("MCS benchmark") != std::string::npos);

  // Plot polylines carry the CSV values verbatim (byte-for-byte).
  const auto svg = slurp(dir / "plots" / "reliability_tower.svg");
  const auto csv = read_csv((dir / "reliability_h0.csv").string());
  std::string expected;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    if (i > 0) expected += ' ';
    expected += csv.rows[i][0] + ',' + csv.rows[i][1];
  }
  CHECK(svg.find("points=\"" + expected + "\"") != std::string::npos);
  CHECK(fs::exists(dir / "plots" / "mean_stress.svg"));
  CHECK(fs::exists(dir / "plots" / "pdf_damage_tower_T20.svg"));
}

TEST_CASE("cli heading and seed overrides take effect") {
  const auto dir = fresh_dir("cli_overrides");
  const auto ini = dir / "config.ini";
  write_smoke_ini(ini, dir, 11);
  REQUIRE(run_cli("run --config " + ini.string() + " --heading 30 --seed 99 --threads 2") == 0);
  CHECK(fs::exists(dir / "points_h30.csv"));
  CHECK(!fs::exists(dir / "points_h0.csv"));
}

TEST_CASE("benchmark writes the timing record with call counts") {
  const auto dir = fresh_dir("bench");
  auto cfg = smoke_config(dir);
  cfg.n_points = 5;
  cfg.n_mcs = 50;
  cfg.headings_deg = {0.0};
  Pipeline pipeline(cfg, 2);
  const auto result = pipeline.benchmark();
  CHECK(result.dpim_calls == 5);
  CHECK(result.mcs_calls == 50);
  CHECK_THAT(result.call_ratio, Catch::Matchers::WithinRel(10.0, 1e-12));
  CHECK(result.dpim_s > 0.0);
  CHECK(result.mcs_s > 0.0);
  const auto json = slurp(dir / "benchmark.json");
  CHECK(json.find("\"call_ratio\": 10") != std::string::npos);
  CHECK(json.find("wall_clock_ratio") != std::string::npos);
}

TEST_CASE("config file round trip covers every section") {
  const auto dir = fresh_dir("config_full");
  std::ofstream ini(dir / "full.ini");
  ini << "[distributions]\nwind_scale = 12.0\nwind_shape = 2.5\nhs_mu = 0.5\n"
      << "tp_sigma = 0.2\n\n"
      << "[points]\nn = 16\nm_mc_factor = 25\nrearrange = true\n\n"
      << "[mcs]\nn = 200\n\n[run]\nseed = 5\nout_dir = " << (dir / "out").string()
      << "\n\n[simulation]\nduration_s = 120\ndt_s = 0.1\ntransient_s = 20\n"
      << "headings_deg = 0,30,60,90\nrealizations_per_point = 2\n"
      << "tower_fa_freq_hz = 0.5\ntower_fa_damping = 0.4\n\n"
      << "[turbine]\nhub_height_m = 90\nrated_wind_ms = 11.4\n\n"
      << "[model]\nthrust_coefficient = 0.65\nturbulence_intensity = 0.12\n\n"
      << "[stress]\nblade_root_diameter_m = 3.6\n\n"
      << "[fatigue]\ntower_lg_a = 12.164\nblade_lg_a = 16.0\nsigma_mf_mpa = 10\n\n"
      << "[reliability]\ntimes_years = 10,20\nthreshold = 1.0\nbandwidth = 0.05\n"
      << "pdf_grid_points = 256\n";
  ini.close();

  const auto cfg = load_config_file((dir / "full.ini").string());
  CHECK(std::get<TruncatedWeibull>(cfg.env.wind_speed).scale == 12.0);
  CHECK(std::get<Lognormal>(cfg.env.wave_height).mu == 0.5);
  CHECK(std::get<Lognormal>(cfg.env.peak_period).sigma == 0.2);
  CHECK(cfg.n_points == 16);
  CHECK(cfg.rearrange);
  CHECK(cfg.n_mcs == 200);
  CHECK(cfg.master_seed == 5);
  CHECK(cfg.realizations_per_point == 2);
  CHECK(cfg.tower_fa.damping_ratio == 0.4);
  CHECK(cfg.rom.thrust_coefficient == 0.65);
  CHECK(cfg.blade_root_diameter == 3.6);
  CHECK(cfg.fatigue.blade.lg_a == 16.0);
  CHECK(cfg.fatigue.sigma_mf == 10e6);
  CHECK(cfg.times_years == std::vector<double>{10.0, 20.0});
  CHECK(cfg.bandwidth == 0.05);
  CHECK(cfg.pdf_grid_points == 256);

  std::stringstream bad("[nope]\nx = 1\n");
  CHECK_THROWS_AS(load_config(bad, "inline"), config_error);
  std::stringstream bad2("[points]\nn = -3\n");
  CHECK_THROWS_AS(load_config(bad2, "inline"), config_error);
  std::stringstream bad3("[reliability]\ntimes_years = 20,10\n");
  CHECK_THROWS_AS(load_config(bad3, "inline"), config_error);
}

TEST_CASE("points csv round trip preserves values exactly") {
  const auto dir = fresh_dir("points_roundtrip");
  const EnvironmentSpecs env;
  const auto set = generate_gf_points(env, 32, 3);
  const auto path = (dir / "points.csv").string();
  write_points_csv(path, set);
  const auto back = read_points_csv(path);
  REQUIRE(back.points.size() == set.points.size());
  for (std::size_t q = 0; q < set.points.size(); ++q) {
    CHECK(back.points[q].v_w == set.points[q].v_w);
    CHECK(back.points[q].h_s == set.points[q].h_s);
    CHECK(back.points[q].t_p == set.points[q].t_p);
    CHECK(back.probabilities[q] == set.probabilities[q]);
  }
}

TEST_CASE("simulation failure is reported with the point index") {
  auto cfg = smoke_config(fresh_dir("fail_point"));
  Pipeline pipeline(cfg, 1);
  // Out-of-band wind speed cannot come from the truncated support, so force
  // the failure through a hand-built point.
  const std::vector<EnvironmentalPoint> bad{{11.0, 1.5, 8.0}, {26.0, 1.5, 8.0}};
  try {
    pipeline.evaluate_ensemble(bad, kStageDpim, 0);
    FAIL("expected simulation_error");
  } catch (const simulation_error& e) {
    CHECK(std::string(e.what()).find("point 2") != std::string::npos);
  }
}

TEST_CASE("realizations-per-point averaging is deterministic") {
  auto cfg = smoke_config(fresh_dir("realizations"));
  cfg.realizations_per_point = 3;
  Pipeline pipeline(cfg, 2);
  const std::vector<EnvironmentalPoint> pts{{11.4, 2.0, 8.0}};
  const auto a = pipeline.evaluate_ensemble(pts, kStageDpim, 0);
  const auto b = pipeline.evaluate_ensemble(pts, kStageDpim, 0);
  CHECK(a[0].dr_tower == b[0].dr_tower);
  CHECK(a[0].dr_tower > 0.0);
}
