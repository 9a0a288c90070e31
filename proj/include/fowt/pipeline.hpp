#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "fowt/config.hpp"
#include "fowt/csv.hpp"
#include "fowt/dpim.hpp"
#include "fowt/fatigue.hpp"
#include "fowt/pointset.hpp"
#include "fowt/simulator.hpp"
#include "fowt/stress.hpp"

namespace fowt {

// Per-environment responses at one heading: time-mean stresses and
// short-term damage rates for the two hot spots.
struct PointResponse {
  std::array<double, kTowerNodeCount> tower_node_mean_pa{};
  double blade_mean_pa = 0.0;
  double dr_tower = 0.0;  // node 7, 1/s
  double dr_blade = 0.0;  // equivalent-stress channel, 1/s
};

namespace detail {

inline void parallel_for(std::size_t n, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t workers = std::min(threads, n);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::string heading_tag(double heading_deg) {
  char buf[32];
  if (heading_deg == std::floor(heading_deg)) {
    std::snprintf(buf, sizeof(buf), "h%d", static_cast<int>(heading_deg));
  } else {
    std::snprintf(buf, sizeof(buf), "h%g", heading_deg);
  }
  return buf;
}

inline std::string years_tag(double years) {
  char buf[32];
  if (years == std::floor(years)) {
    std::snprintf(buf, sizeof(buf), "T%d", static_cast<int>(years));
  } else {
    std::snprintf(buf, sizeof(buf), "T%g", years);
  }
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Seed splitting: every simulation draws its seed from the master seed, the
// stage, the heading index, the point index, and the realization index, so
// results are independent of evaluation order and worker count.
inline std::uint64_t simulation_seed(std::uint64_t master, std::uint64_t stage,
                                     std::size_t heading_idx, std::size_t point_idx,
                                     std::size_t realization) {
  return derive_seed(master, {stage, heading_idx, point_idx, realization});
}

inline constexpr std::uint64_t kStageDpim = 1;
inline constexpr std::uint64_t kStageMcs = 2;
inline constexpr std::uint64_t kStagePoints = 3;
inline constexpr std::uint64_t kStageMcsEnv = 4;

// CSV schemas ------------------------------------------------------------

inline void write_points_csv(const std::string& path, const RepresentativePointSet& set) {
  CsvWriter w(path);
  w.header({"q", "v_w", "h_s", "t_p", "p_q"});
  for (std::size_t q = 0; q < set.points.size(); ++q) {
    w.row({static_cast<double>(q + 1), set.points[q].v_w, set.points[q].h_s,
           set.points[q].t_p, set.probabilities[q]});
  }
  w.close();
}

inline RepresentativePointSet read_points_csv(const std::string& path) {
  const auto table = read_csv(path);
  RepresentativePointSet set;
  const auto v = table.column("v_w");
  const auto h = table.column("h_s");
  const auto t = table.column("t_p");
  set.probabilities = table.column("p_q");
  set.points.resize(v.size());
  for (std::size_t q = 0; q < v.size(); ++q) set.points[q] = {v[q], h[q], t[q]};
  set.validate();
  return set;
}

inline const std::vector<std::string>& response_columns() {
  static const std::vector<std::string> cols{
      "q",        "v_w",  "h_s", "t_p", "p_q", "mean_stress_t7_pa",
      "mean_stress_blade_pa", "dr_tower_per_s", "dr_blade_per_s"};
  return cols;
}

inline void write_response_csv(const std::string& path,
                               const std::vector<EnvironmentalPoint>& points,
                               const std::vector<double>& probs,
                               const std::vector<PointResponse>& responses) {
  CsvWriter w(path);
  w.header(response_columns());
  for (std::size_t q = 0; q < points.size(); ++q) {
    w.row({static_cast<double>(q + 1), points[q].v_w, points[q].h_s, points[q].t_p,
           probs[q], responses[q].tower_node_mean_pa[6], responses[q].blade_mean_pa,
           responses[q].dr_tower, responses[q].dr_blade});
  }
  w.close();
}

struct ResponseTable {
  std::vector<double> probs;
  std::vector<double> mean_tower7;
  std::vector<double> mean_blade;
  std::vector<double> dr_tower;
  std::vector<double> dr_blade;
};

inline ResponseTable read_response_csv(const std::string& path) {
  const auto table = read_csv(path);
  ResponseTable r;
  r.probs = table.column("p_q");
  r.mean_tower7 = table.column("mean_stress_t7_pa");
  r.mean_blade = table.column("mean_stress_blade_pa");
  r.dr_tower = table.column("dr_tower_per_s");
  r.dr_blade = table.column("dr_blade_per_s");
  return r;
}

inline void write_loads_csv(const std::string& path, const LoadTimeSeries& loads,
                            const EnvironmentalPoint& theta, double heading_deg,
                            std::uint64_t seed) {
  CsvWriter w(path);
  w.comment("theta_v_w=" + format_double(theta.v_w) +
            " theta_h_s=" + format_double(theta.h_s) +
            " theta_t_p=" + format_double(theta.t_p) +
            " beta_deg=" + format_double(heading_deg) + " seed=" + std::to_string(seed));
  w.header({"t", "Nz", "Mx_t", "My_t", "Fx_b", "Fy_b", "Fz_b", "Mx_b", "My_b", "Mz_b"});
  for (std::size_t i = 0; i < loads.size(); ++i) {
    std::vector<double> row{static_cast<double>(i) * loads.dt};
    for (std::size_t c = 0; c < 9; ++c) row.push_back(loads.channel(c)[i]);
    w.row(row);
  }
  w.close();
}

inline LoadTimeSeries read_loads_csv(const std::string& path) {
  const auto table = read_csv(path);
  LoadTimeSeries l;
  const auto t = table.column("t");
  if (t.size() >= 2) l.dt = t[1] - t[0];
  l.tower_nz = table.column("Nz");
  l.tower_mx = table.column("Mx_t");
  l.tower_my = table.column("My_t");
  l.blade_fx = table.column("Fx_b");
  l.blade_fy = table.column("Fy_b");
  l.blade_fz = table.column("Fz_b");
  l.blade_mx = table.column("Mx_b");
  l.blade_my = table.column("My_b");
  l.blade_mz = table.column("Mz_b");
  return l;
}

inline void write_cycles_csv(const std::string& path, const std::vector<StressCycle>& cycles) {
  CsvWriter w(path);
  w.header({"range_pa", "mean_pa", "count"});
  for (const auto& c : cycles) w.row({c.range, c.mean, c.count});
  w.close();
}

inline void write_stress_tower_csv(const std::string& path,
                                   const std::array<StressTimeSeries, kTowerNodeCount>& nodes) {
  CsvWriter w(path);
  std::vector<std::string> cols{"t"};
  for (std::size_t k = 1; k <= kTowerNodeCount; ++k) {
    cols.push_back("sigma_node" + std::to_string(k));
  }
  w.header(cols);
  for (std::size_t i = 0; i < nodes[0].samples.size(); ++i) {
    std::vector<double> row{static_cast<double>(i) * nodes[0].dt};
    for (const auto& n : nodes) row.push_back(n.samples[i]);
    w.row(row);
  }
  w.close();
}

inline void write_stress_blade_csv(const std::string& path, const StressTimeSeries& sigma0,
                                   const StressTimeSeries& tau0,
                                   const StressTimeSeries& sigma_eq) {
  CsvWriter w(path);
  w.header({"t", "sigma0", "tau0", "sigma_eq"});
  for (std::size_t i = 0; i < sigma0.samples.size(); ++i) {
    w.row({static_cast<double>(i) * sigma0.dt, sigma0.samples[i], tau0.samples[i],
           sigma_eq.samples[i]});
  }
  w.close();
}

// Per-point fatigue evaluation ---------------------------------------------

struct HotspotDamage {
  std::array<DamageResult, kTowerNodeCount> tower_nodes;
  DamageResult blade;
};

inline HotspotDamage loads_to_damage(const LoadTimeSeries& loads, const RunConfig& cfg) {
  HotspotDamage out;
  const auto tower_geom = cfg.tower_geometry();
  const auto blade_geom = cfg.blade_geometry();
  const auto nodes = tower_node_stresses(loads, tower_geom);
  for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
    out.tower_nodes[k] =
        short_term_damage(rainflow(nodes[k]), cfg.fatigue.tower, cfg.duration,
                          cfg.fatigue.sigma_mf, cfg.fatigue.goodman_epsilon);
  }
  const auto sigma_eq = blade_equivalent_stress(blade_axial_stress(loads, blade_geom),
                                                blade_shear_stress(loads, blade_geom));
  out.blade = short_term_damage(rainflow(sigma_eq), cfg.fatigue.blade, cfg.duration,
                                cfg.fatigue.sigma_mf, cfg.fatigue.goodman_epsilon);
  return out;
}

// Orchestrator: owns the configuration, counts simulator calls, and runs the
// staged pipeline with a deterministic worker pool.
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg, std::size_t threads = 0)
      : cfg_(std::move(cfg)),
        threads_(threads > 0 ? threads : std::thread::hardware_concurrency()) {
    cfg_.validate();
    if (threads_ == 0) threads_ = 1;
  }

  const RunConfig& config() const { return cfg_; }
  std::uint64_t simulator_calls() const { return sim_calls_.load(); }
  void reset_call_counter() { sim_calls_.store(0); }

  RepresentativePointSet build_points(std::ostream* warn = nullptr) const {
    GfPointOptions opts;
    opts.m_mc_factor = cfg_.m_mc_factor;
    opts.rearrange = cfg_.rearrange;
    return generate_gf_points(cfg_.env, cfg_.n_points,
                              derive_seed(cfg_.master_seed, {kStagePoints}), opts, warn);
  }

  std::vector<EnvironmentalPoint> draw_mcs_environments() const {
    return sample_mcs(cfg_.env, cfg_.n_mcs, derive_seed(cfg_.master_seed, {kStageMcsEnv}));
  }

  LoadTimeSeries simulate_point(const EnvironmentalPoint& theta, double heading_deg,
                                std::uint64_t seed) const {
    ++sim_calls_;
    return simulate(theta, cfg_.simulation_config(heading_deg, seed), cfg_.turbine,
                    cfg_.rom);
  }

  PointResponse evaluate_point(const EnvironmentalPoint& theta, std::uint64_t stage,
                               std::size_t heading_idx, std::size_t point_idx) const {
    const double heading = cfg_.headings_deg.at(heading_idx);
    PointResponse acc;
    for (std::size_t r = 0; r < cfg_.realizations_per_point; ++r) {
      const auto seed =
          simulation_seed(cfg_.master_seed, stage, heading_idx, point_idx, r);
      LoadTimeSeries loads;
      try {
        loads = simulate_point(theta, heading, seed);
      } catch (const std::exception& e) {
        throw simulation_error("point " + std::to_string(point_idx + 1) + " at heading " +
                               format_double(heading) + " deg failed: " + e.what());
      }
      const auto tower_geom = cfg_.tower_geometry();
      const auto blade_geom = cfg_.blade_geometry();
      const auto nodes = tower_node_stresses(loads, tower_geom);
      const auto damage = loads_to_damage(loads, cfg_);
      const auto n = static_cast<double>(loads.size());
      for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
        double mean = 0.0;
        for (double v : nodes[k].samples) mean += v;
        acc.tower_node_mean_pa[k] += mean / n;
      }
      const auto sigma_eq = blade_equivalent_stress(
          blade_axial_stress(loads, blade_geom), blade_shear_stress(loads, blade_geom));
      double blade_mean = 0.0;
      for (double v : sigma_eq.samples) blade_mean += v;
      acc.blade_mean_pa += blade_mean / n;
      acc.dr_tower += damage.tower_nodes[6].dr_st;
      acc.dr_blade += damage.blade.dr_st;
    }
    const auto r = static_cast<double>(cfg_.realizations_per_point);
    for (auto& v : acc.tower_node_mean_pa) v /= r;
    acc.blade_mean_pa /= r;
    acc.dr_tower /= r;
    acc.dr_blade /= r;
    return acc;
  }

  std::vector<PointResponse> evaluate_ensemble(const std::vector<EnvironmentalPoint>& thetas,
                                               std::uint64_t stage,
                                               std::size_t heading_idx) const {
    std::vector<PointResponse> out(thetas.size());
    detail::parallel_for(thetas.size(), threads_, [&](std::size_t q) {
      out[q] = evaluate_point(thetas[q], stage, heading_idx, q);
    });
    return out;
  }

  // DPIM post-processing for one heading: response/damage PDFs and the
  // reliability curve, written as CSV artifacts.
  void write_dpim_outputs(const std::string& dir, double heading_deg,
                          const ResponseTable& t, std::ostream* warn = nullptr) const {
    namespace fs = std::filesystem;
    const auto tag = detail::heading_tag(heading_deg);
    const GridSpec grid{cfg_.pdf_grid_points, 6.0};
    const std::optional<double> bw =
        cfg_.bandwidth > 0.0 ? std::optional<double>(cfg_.bandwidth) : std::nullopt;

    const auto write_pdf = [&](const std::string& path, const std::vector<double>& values,
                               const std::string& label) {
      ResponseEnsemble e{values, t.probs, label};
      const auto est = estimate_pdf(e, grid, bw, warn);
      CsvWriter w(path);
      w.comment("bandwidth=" + format_double(est.bandwidth));
      w.header({"y", "density"});
      for (std::size_t i = 0; i < est.grid.size(); ++i) w.row({est.grid[i], est.density[i]});
      w.close();
    };

    write_pdf((fs::path(dir) / ("pdf_stress_tower7_" + tag + ".csv")).string(),
              t.mean_tower7, "tower node 7 mean stress");
    write_pdf((fs::path(dir) / ("pdf_stress_blade_" + tag + ".csv")).string(),
              t.mean_blade, "blade root mean stress");

    for (double years : cfg_.times_years) {
      const double seconds = years * cfg_.seconds_per_year;
      const auto ytag = detail::years_tag(years);
      std::vector<double> d_tower(t.dr_tower.size()), d_blade(t.dr_blade.size());
      for (std::size_t q = 0; q < t.dr_tower.size(); ++q) {
        d_tower[q] = point_cumulative_damage(t.dr_tower[q], seconds);
        d_blade[q] = point_cumulative_damage(t.dr_blade[q], seconds);
      }
      write_pdf((fs::path(dir) / ("pdf_damage_tower_" + ytag + "_" + tag + ".csv")).string(),
                d_tower, "tower damage at " + ytag);
      write_pdf((fs::path(dir) / ("pdf_damage_blade_" + ytag + "_" + tag + ".csv")).string(),
                d_blade, "blade damage at " + ytag);
    }

    const auto tower_curve = reliability_curve(t.dr_tower, t.probs, cfg_.times_years,
                                               cfg_.threshold, cfg_.seconds_per_year);
    const auto blade_curve = reliability_curve(t.dr_blade, t.probs, cfg_.times_years,
                                               cfg_.threshold, cfg_.seconds_per_year);
    CsvWriter w((fs::path(dir) / ("reliability_" + tag + ".csv")).string());
    w.header({"years", "r_tower_node7", "r_blade_root"});
    for (std::size_t i = 0; i < cfg_.times_years.size(); ++i) {
      w.row({cfg_.times_years[i], tower_curve.r[i], blade_curve.r[i]});
    }
    w.close();
  }

  void write_mean_stress_csv(const std::string& path,
                             const std::vector<PointResponse>& responses,
                             const std::vector<double>& probs) const {
    CsvWriter w(path);
    w.header({"node", "alpha_deg", "mean_stress_pa"});
    for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
      double mean = 0.0;
      for (std::size_t q = 0; q < responses.size(); ++q) {
        mean += probs[q] * responses[q].tower_node_mean_pa[k];
      }
      w.row({static_cast<double>(k + 1), 30.0 * static_cast<double>(k), mean});
    }
    w.close();
  }

  void write_mcs_reliability_csv(const std::string& path, const ResponseTable& t) const {
    CsvWriter w(path);
    w.header({"years", "r_tower_node7", "se_tower_node7", "r_blade_root", "se_blade_root"});
    for (double years : cfg_.times_years) {
      const double seconds = years * cfg_.seconds_per_year;
      const auto tower = mcs_reliability(t.dr_tower, seconds, cfg_.threshold);
      const auto blade = mcs_reliability(t.dr_blade, seconds, cfg_.threshold);
      w.row({years, tower.r_hat, tower.standard_error, blade.r_hat, blade.standard_error});
    }
    w.close();
  }

  struct StageTimings {
    double points_s = 0.0;
    double dpim_s = 0.0;
    double mcs_s = 0.0;
    std::uint64_t dpim_calls = 0;
    std::uint64_t mcs_calls = 0;
  };

  // Full pipeline: representative points, per-heading DPIM stage, per-heading
  // MCS benchmark, summary with checksums.
  StageTimings run(std::ostream* log = nullptr) {
    namespace fs = std::filesystem;
    using clock = std::chrono::steady_clock;
    const auto seconds_since = [](clock::time_point t0) {
      return std::chrono::duration<double>(clock::now() - t0).count();
    };

    fs::create_directories(cfg_.out_dir);
    if (!fs::is_directory(cfg_.out_dir)) {
      throw std::runtime_error("output directory is not writable: " + cfg_.out_dir);
    }
    StageTimings timings;

    auto t0 = clock::now();
    const auto points = build_points(log);
    timings.points_s = seconds_since(t0);

    // DPIM stage.
    reset_call_counter();
    t0 = clock::now();
    std::vector<ResponseTable> dpim_tables;
    for (std::size_t h = 0; h < cfg_.headings_deg.size(); ++h) {
      const double heading = cfg_.headings_deg[h];
      const auto tag = detail::heading_tag(heading);
      if (log != nullptr) {
        *log << "dpim stage: heading " << heading << " deg, " << points.points.size()
             << " points\n";
      }
      write_points_csv((fs::path(cfg_.out_dir) / ("points_" + tag + ".csv")).string(),
                       points);
      const auto responses = evaluate_ensemble(points.points, kStageDpim, h);
      write_response_csv((fs::path(cfg_.out_dir) / ("response_" + tag + ".csv")).string(),
                         points.points, points.probabilities, responses);
      write_mean_stress_csv(
          (fs::path(cfg_.out_dir) / ("mean_stress_" + tag + ".csv")).string(), responses,
          points.probabilities);
      ResponseTable table;
      table.probs = points.probabilities;
      for (const auto& r : responses) {
        table.mean_tower7.push_back(r.tower_node_mean_pa[6]);
        table.mean_blade.push_back(r.blade_mean_pa);
        table.dr_tower.push_back(r.dr_tower);
        table.dr_blade.push_back(r.dr_blade);
      }
      write_dpim_outputs(cfg_.out_dir, heading, table, log);
      dpim_tables.push_back(std::move(table));
    }
    timings.dpim_s = seconds_since(t0);
    timings.dpim_calls = simulator_calls();

    // MCS benchmark stage.
    reset_call_counter();
    t0 = clock::now();
    const auto samples = draw_mcs_environments();
    const std::vector<double> sample_probs(samples.size(),
                                           1.0 / static_cast<double>(samples.size()));
    for (std::size_t h = 0; h < cfg_.headings_deg.size(); ++h) {
      const double heading = cfg_.headings_deg[h];
      const auto tag = detail::heading_tag(heading);
      if (log != nullptr) {
        *log << "mcs stage: heading " << heading << " deg, " << samples.size()
             << " samples\n";
      }
      const auto responses = evaluate_ensemble(samples, kStageMcs, h);
      write_response_csv(
          (fs::path(cfg_.out_dir) / ("mcs_response_" + tag + ".csv")).string(), samples,
          sample_probs, responses);
      ResponseTable table;
      table.probs = sample_probs;
      for (const auto& r : responses) {
        table.mean_tower7.push_back(r.tower_node_mean_pa[6]);
        table.mean_blade.push_back(r.blade_mean_pa);
        table.dr_tower.push_back(r.dr_tower);
        table.dr_blade.push_back(r.dr_blade);
      }
      write_mcs_reliability_csv(
          (fs::path(cfg_.out_dir) / ("mcs_reliability_" + tag + ".csv")).string(), table);
    }
    timings.mcs_s = seconds_since(t0);
    timings.mcs_calls = simulator_calls();

    write_summary(timings);
    return timings;
  }

  // Deterministic summary (file inventory with checksums and call counts)
  // plus a separate, non-deterministic timing record.
  void write_summary(const StageTimings& timings) const {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(cfg_.out_dir)) {
      if (!entry.is_regular_file()) continue;
      const auto name = entry.path().filename().string();
      if (name.ends_with(".csv")) names.push_back(name);
    }
    std::sort(names.begin(), names.end());

    std::ofstream out(fs::path(cfg_.out_dir) / "summary.json", std::ios::binary);
    out << "{\n  \"seed\": " << cfg_.master_seed << ",\n";
    out << "  \"n_points\": " << cfg_.n_points << ",\n";
    out << "  \"n_mcs\": " << cfg_.n_mcs << ",\n";
    out << "  \"headings_deg\": [";
    for (std::size_t i = 0; i < cfg_.headings_deg.size(); ++i) {
      out << (i > 0 ? ", " : "") << format_double(cfg_.headings_deg[i]);
    }
    out << "],\n";
    out << "  \"simulator_calls\": {\"dpim\": " << timings.dpim_calls
        << ", \"mcs\": " << timings.mcs_calls << "},\n";
    out << "  \"files\": [\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::ifstream in(fs::path(cfg_.out_dir) / names[i], std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
      char hash[32];
      std::snprintf(hash, sizeof(hash), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
      out << "    {\"name\": \"" << detail::json_escape(names[i])
          << "\", \"bytes\": " << bytes.size() << ", \"fnv1a64\": \"" << hash << "\"}"
          << (i + 1 < names.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    out.close();

    std::ofstream tim(fs::path(cfg_.out_dir) / "timings.json", std::ios::binary);
    tim << "{\n  \"points_s\": " << format_double(timings.points_s)
        << ",\n  \"dpim_s\": " << format_double(timings.dpim_s)
        << ",\n  \"mcs_s\": " << format_double(timings.mcs_s)
        << ",\n  \"dpim_calls\": " << timings.dpim_calls
        << ",\n  \"mcs_calls\": " << timings.mcs_calls << "\n}\n";
  }

  struct BenchmarkResult {
    double dpim_s = 0.0;
    double mcs_s = 0.0;
    std::uint64_t dpim_calls = 0;
    std::uint64_t mcs_calls = 0;
    double wall_clock_ratio = 0.0;
    double call_ratio = 0.0;
  };

  // Times the DPIM stage (point construction + simulations + reliability)
  // against the MCS stage on identical hardware; no artifacts besides the
  // benchmark record.
  BenchmarkResult benchmark(std::ostream* log = nullptr) {
    using clock = std::chrono::steady_clock;
    BenchmarkResult result;

    reset_call_counter();
    auto t0 = clock::now();
    const auto points = build_points();
    std::vector<ReliabilityCurve> dpim_curves;
    for (std::size_t h = 0; h < cfg_.headings_deg.size(); ++h) {
      const auto responses = evaluate_ensemble(points.points, kStageDpim, h);
      std::vector<double> rates;
      rates.reserve(responses.size());
      for (const auto& r : responses) rates.push_back(r.dr_tower);
      dpim_curves.push_back(reliability_curve(rates, points.probabilities,
                                              cfg_.times_years, cfg_.threshold,
                                              cfg_.seconds_per_year));
    }
    result.dpim_s = std::chrono::duration<double>(clock::now() - t0).count();
    result.dpim_calls = simulator_calls();

    reset_call_counter();
    t0 = clock::now();
    const auto samples = draw_mcs_environments();
    for (std::size_t h = 0; h < cfg_.headings_deg.size(); ++h) {
      const auto responses = evaluate_ensemble(samples, kStageMcs, h);
      std::vector<double> rates;
      rates.reserve(responses.size());
      for (const auto& r : responses) rates.push_back(r.dr_tower);
      for (double years : cfg_.times_years) {
        mcs_reliability(rates, years * cfg_.seconds_per_year, cfg_.threshold);
      }
    }
    result.mcs_s = std::chrono::duration<double>(clock::now() - t0).count();
    result.mcs_calls = simulator_calls();

    result.wall_clock_ratio = result.mcs_s / result.dpim_s;
    result.call_ratio = static_cast<double>(result.mcs_calls) /
                        static_cast<double>(result.dpim_calls);
    if (log != nullptr) {
      *log << "benchmark: dpim " << result.dpim_s << " s (" << result.dpim_calls
           << " simulator calls), mcs " << result.mcs_s << " s (" << result.mcs_calls
           << " calls), wall-clock ratio " << result.wall_clock_ratio
           << ", call ratio " << result.call_ratio << "\n";
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg_.out_dir);
    std::ofstream out(fs::path(cfg_.out_dir) / "benchmark.json", std::ios::binary);
    out << "{\n  \"dpim_s\": " << format_double(result.dpim_s)
        << ",\n  \"mcs_s\": " << format_double(result.mcs_s)
        << ",\n  \"dpim_calls\": " << result.dpim_calls
        << ",\n  \"mcs_calls\": " << result.mcs_calls
        << ",\n  \"wall_clock_ratio\": " << format_double(result.wall_clock_ratio)
        << ",\n  \"call_ratio\": " << format_double(result.call_ratio)
        << ",\n  \"full_model_reference\": {\"dpim_s\": 22910, \"mcs_s\": 611770, "
        << "\"note\": \"reported CPU times for the same protocol on the full "
        << "aero-hydro-servo-elastic model; context, not a target\"}\n}\n";
    return result;
  }

 private:
  RunConfig cfg_;
  std::size_t threads_;
  mutable std::atomic<std::uint64_t> sim_calls_{0};
};

}  // namespace fowt
