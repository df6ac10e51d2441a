#include "kerncollab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace kerncollab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_rounds_csv(const std::string& path, const RunRecord& rec) {
  auto out = open_out(path);
  out << "round,client,query_index,reward,inst_regret,cum_regret_total,"
         "comm_scalars_total\n";
  for (const RoundRow& r : rec.rows)
    out << r.round << ',' << r.client << ',' << r.query_index << ','
        << format_double(r.reward) << ',' << format_double(r.inst_regret)
        << ',' << format_double(r.cum_regret_total) << ','
        << r.comm_scalars_total << '\n';
}

void write_summary_csv(const std::string& path, const ExperimentResult& res) {
  auto out = open_out(path);
  out << "policy,T,K,seed,final_regret_mean,final_regret_stderr,comm_total\n";
  out << policy_name(res.config.policy) << ',' << res.config.horizon_T << ','
      << res.config.clients_K << ',' << res.config.seed << ','
      << format_double(res.final_regret_mean) << ','
      << format_double(res.final_regret_stderr) << ','
      << format_double(res.comm_total_mean) << '\n';
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series) {
  constexpr int kW = 720, kH = 480;
  constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series)
    for (size_t i = 0; i < s.xs.size(); ++i) {
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;

  auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double y) {
    return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h;
  };

  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\">" << y_label << "</text>\n";

  // axis extreme labels
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(xmin) << "</text>\n"
      << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(xmax) << "</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(ymin) << "</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(ymax) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[s].xs.size(); ++i) {
      if (i) out << ' ';
      out << format_double(px(series[s].xs[i])) << ','
          << format_double(py(series[s].ys[i]));
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(s);
    out << "<rect x=\"" << kLeft + plot_w - 150 << "\" y=\"" << ly + 4
        << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << kLeft + plot_w - 132 << "\" y=\"" << ly + 10
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

void report_run(const ExperimentResult& res, const std::string& out_dir) {
  for (size_t r = 0; r < res.runs.size(); ++r)
    write_rounds_csv(out_dir + "/rounds_" + std::to_string(r) + ".csv",
                     res.runs[r]);
  write_summary_csv(out_dir + "/summary.csv", res);

  Series mean_curve;
  mean_curve.label = policy_name(res.config.policy);
  const size_t horizon = res.runs.front().cum_regret.size();
  for (size_t t = 0; t < horizon; ++t) {
    double s = 0.0;
    for (const RunRecord& rec : res.runs) s += rec.cum_regret[t];
    mean_curve.xs.push_back(static_cast<double>(t + 1));
    mean_curve.ys.push_back(s / static_cast<double>(res.runs.size()));
  }
  write_svg_plot(out_dir + "/regret.svg", "Cumulative regret", "round",
                 "cumulative regret", {mean_curve});
}

CompareResult compare(const std::vector<ExperimentConfig>& configs,
                      const std::string& out_dir) {
  if (configs.empty()) throw std::invalid_argument("compare: no configs");
  for (const auto& c : configs) {
    if (c.seed != configs.front().seed ||
        c.horizon_T != configs.front().horizon_T ||
        c.clients_K != configs.front().clients_K ||
        c.grid_per_dim != configs.front().grid_per_dim)
      throw std::invalid_argument(
          "compare: configs must share instance seed, T, K, and grid");
  }

  CompareResult result;
  std::vector<Series> series;
  for (const auto& cfg : configs) {
    const ExperimentResult res = run_experiment(cfg);
    std::vector<double> mean(static_cast<size_t>(cfg.horizon_T), 0.0);
    for (const RunRecord& rec : res.runs)
      for (size_t t = 0; t < mean.size(); ++t)
        mean[t] += rec.cum_regret[t] / static_cast<double>(res.runs.size());
    Series s;
    s.label = policy_name(cfg.policy);
    for (size_t t = 0; t < mean.size(); ++t) {
      s.xs.push_back(static_cast<double>(t + 1));
      s.ys.push_back(mean[t]);
    }
    series.push_back(std::move(s));
    result.policies.push_back(policy_name(cfg.policy));
    result.mean_cum_regret.push_back(std::move(mean));
  }

  auto out = open_out(out_dir + "/compare.csv");
  out << "round";
  for (const auto& p : result.policies) out << ',' << p;
  out << '\n';
  for (long t = 0; t < configs.front().horizon_T; ++t) {
    out << (t + 1);
    for (const auto& col : result.mean_cum_regret)
      out << ',' << format_double(col[static_cast<size_t>(t)]);
    out << '\n';
  }
  write_svg_plot(out_dir + "/compare.svg", "Cumulative regret by policy",
                 "round", "cumulative regret", series);
  return result;
}

std::vector<SweepPoint> sweep_inducing(const ExperimentConfig& base,
                                       const std::vector<double>& q0_list,
                                       const std::string& out_dir) {
  if (q0_list.empty())
    throw std::invalid_argument("sweep_inducing: empty q0 list");
  if (!(base.n_T > 0.0))
    throw std::invalid_argument("sweep_inducing: requires explicit n_T");

  ExperimentConfig cepe_cfg = base;
  cepe_cfg.policy = Policy::CEPE;
  const ExperimentResult cepe = run_experiment(cepe_cfg);

  std::vector<SweepPoint> points;
  for (const double q0 : q0_list) {
    ExperimentConfig cfg = base;
    cfg.policy = Policy::SCEPE;
    cfg.q0 = q0;
    const ExperimentResult res = run_experiment(cfg);
    SweepPoint p;
    p.q0 = q0;
    p.regret_scepe = res.final_regret_mean;
    p.regret_cepe = cepe.final_regret_mean;
    p.regret_ratio = res.final_regret_mean / cepe.final_regret_mean;
    p.cost_scepe = res.comm_total_mean;
    p.cost_cepe = cepe.comm_total_mean;
    if (res.comm_total_mean <= 0.0) {
      std::cerr << "warning: S-CEPE at q0=" << q0
                << " sent nothing (empty inducing sets); cost ratio is inf\n";
      p.cost_ratio = std::numeric_limits<double>::infinity();
    } else {
      p.cost_ratio = cepe.comm_total_mean / res.comm_total_mean;
    }
    points.push_back(p);
  }

  auto out = open_out(out_dir + "/sweep.csv");
  out << "q0,regret_scepe,regret_cepe,regret_ratio,cost_scepe,cost_cepe,"
         "cost_ratio\n";
  Series s;
  s.label = "S-CEPE";
  for (const SweepPoint& p : points) {
    out << format_double(p.q0) << ',' << format_double(p.regret_scepe) << ','
        << format_double(p.regret_cepe) << ',' << format_double(p.regret_ratio)
        << ',' << format_double(p.cost_scepe) << ','
        << format_double(p.cost_cepe) << ',' << format_double(p.cost_ratio)
        << '\n';
    if (std::isfinite(p.cost_ratio)) {
      s.xs.push_back(p.cost_ratio);
      s.ys.push_back(p.regret_ratio);
    }
  }
  write_svg_plot(out_dir + "/sweep.svg",
                 "Regret ratio vs communication reduction",
                 "comm cost CEPE / S-CEPE", "regret S-CEPE / CEPE", {s});
  return points;
}

}  // namespace kerncollab
