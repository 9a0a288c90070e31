#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "fowt/csv.hpp"

namespace fowt {

namespace detail {

// Minimal SVG line plot. Polyline points carry the raw data values; the
// viewBox plus a y-flip transform map them onto the canvas, so plotted
// numbers can be compared byte-for-byte with the CSV columns.
class SvgPlot {
 public:
  SvgPlot(std::string title) : title_(std::move(title)) {}

  void add_series(const std::string& name, const std::vector<double>& x,
                  const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) {
      throw std::invalid_argument("SvgPlot: bad series " + name);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      x_min_ = std::min(x_min_, x[i]);
      x_max_ = std::max(x_max_, x[i]);
      y_min_ = std::min(y_min_, y[i]);
      y_max_ = std::max(y_max_, y[i]);
    }
    std::string pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0) pts += ' ';
      pts += format_double(x[i]) + ',' + format_double(y[i]);
    }
    series_.emplace_back(name, std::move(pts));
  }

  void write(const std::string& path) const {
    if (series_.empty()) throw std::invalid_argument("SvgPlot: no series");
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    const double pad_x = 0.05 * (x_max_ - x_min_ + 1e-300);
    const double pad_y = 0.05 * (y_max_ - y_min_ + 1e-300);
    const double vx = x_min_ - pad_x;
    const double vw = (x_max_ - x_min_) + 2.0 * pad_x;
    const double vy = -(y_max_ + pad_y);
    const double vh = (y_max_ - y_min_) + 2.0 * pad_y;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
        << "viewBox=\"" << format_double(vx) << ' ' << format_double(vy) << ' '
        << format_double(vw) << ' ' << format_double(vh)
        << "\" preserveAspectRatio=\"none\">\n";
    out << "  <title>" << title_ << "</title>\n";
    out << "  <desc>x: [" << format_double(x_min_) << ", " << format_double(x_max_)
        << "], y: [" << format_double(y_min_) << ", " << format_double(y_max_)
        << "]</desc>\n";
    out << "  <g transform=\"scale(1,-1)\">\n";
    std::size_t color = 0;
    for (const auto& [name, pts] : series_) {
      out << "    <polyline data-series=\"" << name << "\" fill=\"none\" stroke=\""
          << palette[color % 6]
          << "\" vector-effect=\"non-scaling-stroke\" stroke-width=\"1.5\" points=\""
          << pts << "\"/>\n";
      ++color;
    }
    out << "  </g>\n</svg>\n";
    out.close();
    if (!out) throw std::runtime_error("plot write failed: " + path);
  }

 private:
  std::string title_;
  std::vector<std::pair<std::string, std::string>> series_;
  double x_min_ = 1e300, x_max_ = -1e300, y_min_ = 1e300, y_max_ = -1e300;
};

// Files named like prefix_<tag>.csv in a directory, keyed by tag.
inline std::map<std::string, std::string> files_by_tag(const std::string& dir,
                                                       const std::string& prefix) {
  namespace fs = std::filesystem;
  std::map<std::string, std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.ends_with(".csv")) {
      out[name.substr(prefix.size(), name.size() - prefix.size() - 4)] =
          entry.path().string();
    }
  }
  return out;
}

}  // namespace detail

// Renders the human-readable run summary and, optionally, the plot files.
// Everything is derived from the persisted CSV artifacts.
inline void write_report(const std::string& dir, bool plots = false,
                         std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  const auto points = detail::files_by_tag(dir, "points_");
  const auto mean_stress = detail::files_by_tag(dir, "mean_stress_");
  const auto reliability = detail::files_by_tag(dir, "reliability_");
  const auto mcs_rel = detail::files_by_tag(dir, "mcs_reliability_");

  std::vector<std::string> missing;
  if (points.empty()) missing.push_back("points stage (points_h*.csv)");
  if (mean_stress.empty()) missing.push_back("fatigue stage (mean_stress_h*.csv)");
  if (reliability.empty()) missing.push_back("dpim stage (reliability_h*.csv)");
  if (!missing.empty()) {
    std::string msg = "report: missing run artifacts:";
    for (const auto& m : missing) msg += " " + m + ";";
    throw std::runtime_error(msg);
  }

  std::ofstream out(fs::path(dir) / "report.txt", std::ios::binary);
  out << "run report\n==========\n\n";

  out << "mean axial stress at the tower base (MPa)\n";
  out << "node";
  for (const auto& [tag, path] : mean_stress) out << "\t" << tag;
  out << "\n";
  {
    std::vector<std::vector<double>> node_means;
    std::vector<double> node_ids;
    for (const auto& [tag, path] : mean_stress) {
      const auto t = read_csv(path);
      node_ids = t.column("node");
      node_means.push_back(t.column("mean_stress_pa"));
    }
    for (std::size_t k = 0; k < node_ids.size(); ++k) {
      out << static_cast<int>(node_ids[k]);
      for (const auto& means : node_means) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", means[k] / 1e6);
        out << "\t" << buf;
      }
      out << "\n";
    }
  }

  out << "\nfatigue reliability (DPIM)\n";
  for (const auto& [tag, path] : reliability) {
    const auto t = read_csv(path);
    const auto years = t.column("years");
    const auto tower = t.column("r_tower_node7");
    const auto blade = t.column("r_blade_root");
    out << "heading " << tag << ":\n  years";
    for (double y : years) out << "\t" << y;
    out << "\n  tower";
    for (double r : tower) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", r);
      out << "\t" << buf;
    }
    out << "\n  blade";
    for (double r : blade) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", r);
      out << "\t" << buf;
    }
    out << "\n";
  }

  if (!mcs_rel.empty()) {
    out << "\nfatigue reliability (MCS benchmark, r +- se)\n";
    for (const auto& [tag, path] : mcs_rel) {
      const auto t = read_csv(path);
      const auto years = t.column("years");
      const auto rt = t.column("r_tower_node7");
      const auto st = t.column("se_tower_node7");
      const auto rb = t.column("r_blade_root");
      const auto sb = t.column("se_blade_root");
      out << "heading " << tag << ":\n";
      for (std::size_t i = 0; i < years.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "  %g y: tower %.4f +- %.4f, blade %.4f +- %.4f\n",
                      years[i], rt[i], st[i], rb[i], sb[i]);
        out << buf;
      }
    }
  }
  out.close();

  if (plots) {
    fs::create_directories(fs::path(dir) / "plots");

    detail::SvgPlot tower_plot("tower-base fatigue reliability vs operating years");
    detail::SvgPlot blade_plot("blade-root fatigue reliability vs operating years");
    for (const auto& [tag, path] : reliability) {
      const auto t = read_csv(path);
      tower_plot.add_series(tag, t.column("years"), t.column("r_tower_node7"));
      blade_plot.add_series(tag, t.column("years"), t.column("r_blade_root"));
    }
    tower_plot.write((fs::path(dir) / "plots" / "reliability_tower.svg").string());
    blade_plot.write((fs::path(dir) / "plots" / "reliability_blade.svg").string());

    detail::SvgPlot stress_plot("probability-weighted mean stress per tower node");
    for (const auto& [tag, path] : mean_stress) {
      const auto t = read_csv(path);
      stress_plot.add_series(tag, t.column("node"), t.column("mean_stress_pa"));
    }
    stress_plot.write((fs::path(dir) / "plots" / "mean_stress.svg").string());

    for (const char* hotspot : {"tower", "blade"}) {
      const auto pdfs =
          detail::files_by_tag(dir, std::string("pdf_damage_") + hotspot + "_");
      std::map<std::string, detail::SvgPlot> by_time;
      for (const auto& [tag, path] : pdfs) {
        const auto sep = tag.find('_');
        if (sep == std::string::npos) continue;
        const std::string ytag = tag.substr(0, sep);
        const std::string htag = tag.substr(sep + 1);
        const auto t = read_csv(path);
        auto [it, inserted] = by_time.try_emplace(
            ytag, std::string(hotspot) + " damage PDF at " + ytag);
        it->second.add_series(htag, t.column("y"), t.column("density"));
      }
      for (const auto& [ytag, plot] : by_time) {
        plot.write((fs::path(dir) / "plots" /
                    (std::string("pdf_damage_") + hotspot + "_" + ytag + ".svg"))
                       .string());
      }
    }

    const auto stress_pdfs = detail::files_by_tag(dir, "pdf_stress_tower7_");
    if (!stress_pdfs.empty()) {
      detail::SvgPlot plot("tower node 7 mean-stress PDF");
      for (const auto& [tag, path] : stress_pdfs) {
        const auto t = read_csv(path);
        plot.add_series(tag, t.column("y"), t.column("density"));
      }
      plot.write((fs::path(dir) / "plots" / "pdf_stress_tower7.svg").string());
    }
  }

  if (log != nullptr) {
    *log << "report written to " << (fs::path(dir) / "report.txt").string()
         << (plots ? " (with plots/)" : "") << "\n";
  }
}

}  // namespace fowt
