// Command-line workbench: representative points, load simulation, fatigue
// evaluation, DPIM reliability, Monte Carlo benchmark, reports.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fowt/config.hpp"
#include "fowt/pipeline.hpp"
#include "fowt/report.hpp"

namespace fs = std::filesystem;
using namespace fowt;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::vector<double> headings;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "run configuration file (INI)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
  cmd->add_option("--heading", flags.headings, "wave heading override, degrees")
      ->delimiter(',');
}

RunConfig make_config(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty() ? RunConfig{} : load_config_file(flags.config_path);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.seed.has_value()) cfg.master_seed = *flags.seed;
  if (!flags.headings.empty()) cfg.headings_deg = flags.headings;
  cfg.validate();
  return cfg;
}

std::string heading_file(const RunConfig& cfg, const std::string& prefix, double heading) {
  return (fs::path(cfg.out_dir) / (prefix + detail::heading_tag(heading) + ".csv")).string();
}

int cmd_points(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  const auto set = pipeline.build_points(&std::cerr);
  fs::create_directories(cfg.out_dir);
  for (double heading : cfg.headings_deg) {
    write_points_csv(heading_file(cfg, "points_", heading), set);
  }
  std::cout << "wrote " << set.points.size() << " representative points for "
            << cfg.headings_deg.size() << " heading(s) under " << cfg.out_dir << "\n";
  return 0;
}

int cmd_simulate(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  fs::create_directories(cfg.out_dir);
  for (std::size_t h = 0; h < cfg.headings_deg.size(); ++h) {
    const double heading = cfg.headings_deg[h];
    const auto tag = detail::heading_tag(heading);
    const auto set = read_points_csv(heading_file(cfg, "points_", heading));
    for (std::size_t q = 0; q < set.points.size(); ++q) {
      const auto seed = simulation_seed(cfg.master_seed, kStageDpim, h, q, 0);
      const auto loads = pipeline.simulate_point(set.points[q], heading, seed);
      const auto path = (fs::path(cfg.out_dir) /
                         ("loads_" + tag + "_q" + std::to_string(q + 1) + ".csv"))
                            .string();
      write_loads_csv(path, loads, set.points[q], heading, seed);
    }
    std::cout << "heading " << heading << " deg: wrote " << set.points.size()
              << " load series\n";
  }
  return 0;
}

int cmd_fatigue(const CommonFlags& flags, bool export_stress, bool export_cycles) {
  const auto cfg = make_config(flags);
  for (std::size_t h = 0; h < cfg.headings_deg.size(); ++h) {
    const double heading = cfg.headings_deg[h];
    const auto tag = detail::heading_tag(heading);
    const auto set = read_points_csv(heading_file(cfg, "points_", heading));
    std::vector<PointResponse> responses(set.points.size());
    const auto tower_geom = cfg.tower_geometry();
    const auto blade_geom = cfg.blade_geometry();
    for (std::size_t q = 0; q < set.points.size(); ++q) {
      const auto loads_path = (fs::path(cfg.out_dir) /
                               ("loads_" + tag + "_q" + std::to_string(q + 1) + ".csv"))
                                  .string();
      const auto loads = read_loads_csv(loads_path);
      const auto nodes = tower_node_stresses(loads, tower_geom);
      const auto sigma0 = blade_axial_stress(loads, blade_geom);
      const auto tau0 = blade_shear_stress(loads, blade_geom);
      const auto sigma_eq = blade_equivalent_stress(sigma0, tau0);
      const auto damage = loads_to_damage(loads, cfg);

      PointResponse r;
      const auto n = static_cast<double>(loads.size());
      for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
        double mean = 0.0;
        for (double v : nodes[k].samples) mean += v;
        r.tower_node_mean_pa[k] = mean / n;
      }
      double blade_mean = 0.0;
      for (double v : sigma_eq.samples) blade_mean += v;
      r.blade_mean_pa = blade_mean / n;
      r.dr_tower = damage.tower_nodes[6].dr_st;
      r.dr_blade = damage.blade.dr_st;
      responses[q] = r;

      const auto qtag = tag + "_q" + std::to_string(q + 1);
      CsvWriter damage_csv((fs::path(cfg.out_dir) / ("damage_" + qtag + ".csv")).string());
      damage_csv.header({"location", "node", "d_st", "dr_st_per_s"});
      for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
        damage_csv.write_row_strings({"tower_base", std::to_string(k + 1),
                                      format_double(damage.tower_nodes[k].d_st),
                                      format_double(damage.tower_nodes[k].dr_st)});
      }
      damage_csv.write_row_strings({"blade_root", "0", format_double(damage.blade.d_st),
                                    format_double(damage.blade.dr_st)});
      damage_csv.close();

      if (export_stress) {
        write_stress_tower_csv(
            (fs::path(cfg.out_dir) / ("stress_tower_" + qtag + ".csv")).string(), nodes);
        write_stress_blade_csv(
            (fs::path(cfg.out_dir) / ("stress_blade_" + qtag + ".csv")).string(), sigma0,
            tau0, sigma_eq);
      }
      if (export_cycles) {
        write_cycles_csv(
            (fs::path(cfg.out_dir) / ("cycles_tower_" + qtag + ".csv")).string(),
            rainflow(nodes[6]));
        write_cycles_csv(
            (fs::path(cfg.out_dir) / ("cycles_blade_" + qtag + ".csv")).string(),
            rainflow(sigma_eq));
      }
    }
    write_response_csv(heading_file(cfg, "response_", heading), set.points,
                       set.probabilities, responses);
    Pipeline pipeline(cfg, flags.threads);
    pipeline.write_mean_stress_csv(heading_file(cfg, "mean_stress_", heading), responses,
                                   set.probabilities);
    std::cout << "heading " << heading << " deg: fatigue evaluated for "
              << set.points.size() << " load series\n";
  }
  return 0;
}

int cmd_dpim(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  for (double heading : cfg.headings_deg) {
    const auto table = read_response_csv(heading_file(cfg, "response_", heading));
    pipeline.write_dpim_outputs(cfg.out_dir, heading, table, &std::cerr);
    std::cout << "heading " << heading << " deg: dpim outputs written\n";
  }
  return 0;
}

int cmd_mcs(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  fs::create_directories(cfg.out_dir);
  const auto samples = pipeline.draw_mcs_environments();
  const std::vector<double> probs(samples.size(), 1.0 / static_cast<double>(samples.size()));
  for (std::size_t h = 0; h < cfg.headings_deg.size(); ++h) {
    const double heading = cfg.headings_deg[h];
    const auto responses = pipeline.evaluate_ensemble(samples, kStageMcs, h);
    write_response_csv(heading_file(cfg, "mcs_response_", heading), samples, probs,
                       responses);
    ResponseTable table;
    table.probs = probs;
    for (const auto& r : responses) {
      table.mean_tower7.push_back(r.tower_node_mean_pa[6]);
      table.mean_blade.push_back(r.blade_mean_pa);
      table.dr_tower.push_back(r.dr_tower);
      table.dr_blade.push_back(r.dr_blade);
    }
    pipeline.write_mcs_reliability_csv(heading_file(cfg, "mcs_reliability_", heading),
                                       table);
    std::cout << "heading " << heading << " deg: mcs benchmark with " << samples.size()
              << " samples\n";
  }
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  const auto timings = pipeline.run(&std::cout);
  std::cout << "run complete: dpim " << timings.dpim_s << " s (" << timings.dpim_calls
            << " simulator calls), mcs " << timings.mcs_s << " s (" << timings.mcs_calls
            << " calls)\n";
  return 0;
}

int cmd_report(const CommonFlags& flags, bool plots) {
  const auto cfg = make_config(flags);
  write_report(cfg.out_dir, plots, &std::cout);
  return 0;
}

int cmd_benchmark(const CommonFlags& flags) {
  const auto cfg = make_config(flags);
  Pipeline pipeline(cfg, flags.threads);
  const auto result = pipeline.benchmark(&std::cout);
  std::cout << "benchmark record written to "
            << (fs::path(cfg.out_dir) / "benchmark.json").string() << "\n";
  return result.dpim_calls > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fatigue-reliability workbench for a floating offshore wind turbine"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool export_stress = false;
  bool export_cycles = false;
  bool plots = false;

  auto* points = app.add_subcommand("points", "construct representative point sets");
  add_common(points, flags);
  auto* simulate = app.add_subcommand("simulate", "simulate loads for persisted points");
  add_common(simulate, flags);
  auto* fatigue = app.add_subcommand("fatigue", "fatigue damage from persisted loads");
  add_common(fatigue, flags);
  fatigue->add_flag("--export-stress", export_stress, "write stress time series CSVs");
  fatigue->add_flag("--export-cycles", export_cycles, "write rainflow cycle CSVs");
  auto* dpim = app.add_subcommand("dpim", "density and reliability from responses");
  add_common(dpim, flags);
  auto* mcs = app.add_subcommand("mcs", "Monte Carlo benchmark stage");
  add_common(mcs, flags);
  auto* run = app.add_subcommand("run", "full pipeline (all stages)");
  add_common(run, flags);
  auto* report = app.add_subcommand("report", "human-readable summary and plots");
  add_common(report, flags);
  report->add_flag("--plots", plots, "emit SVG plot files");
  auto* benchmark = app.add_subcommand("benchmark", "DPIM vs MCS timing comparison");
  add_common(benchmark, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (points->parsed()) return cmd_points(flags);
    if (simulate->parsed()) return cmd_simulate(flags);
    if (fatigue->parsed()) return cmd_fatigue(flags, export_stress, export_cycles);
    if (dpim->parsed()) return cmd_dpim(flags);
    if (mcs->parsed()) return cmd_mcs(flags);
    if (run->parsed()) return cmd_run(flags);
    if (report->parsed()) return cmd_report(flags, plots);
    if (benchmark->parsed()) return cmd_benchmark(flags);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
