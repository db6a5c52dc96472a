#ifndef RD2D_REPORT_HPP
#define RD2D_REPORT_HPP

#include "experiment.hpp"
#include "io.hpp"
#include "metrics.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace rd2d {

inline std::string canonical_config_text(const kv_config& cfg)
{
  std::ostringstream out;
  for (const auto& [k, v] : cfg.values())
    out << k << '=' << v << '\n';
  return out.str();
}

inline std::string hex64(std::uint64_t h)
{
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

struct run_outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  json manifest;
};

inline run_outputs build_outputs(const experiment_config& e, const kv_config& cfg)
{
  run_outputs out;
  json aggregates = json::object();

  if (e.run_convergence) {
    csv_table trace({"ue_per_relay", "seed", "relay", "t", "rate_bps"});
    csv_table summary({"ue_per_relay", "cues_per_relay", "d2d_per_relay", "seeds", "converged_fraction",
                       "mean_avg_rate_bps", "mean_iterations"});
    for (double k : e.convergence_ue_per_relay) {
      const auto recs = convergence_study(e, static_cast<int>(k));
      for (const auto& r : recs)
        for (std::size_t l = 0; l < r.traces.size(); ++l)
          for (std::size_t t = 0; t < r.traces[l].size(); ++t)
            trace.row().add(r.ue_per_relay).add(r.seed).add(l).add(t + 1).add(r.traces[l][t]);
      const auto s = summarize(recs, e.convergence_cue_fraction);
      summary.row().add(s.ue_per_relay).add(s.cues_per_relay).add(s.d2d_per_relay).add(s.seeds)
        .add(s.converged_fraction).add(s.mean_avg_rate_bps).add(s.mean_iterations);
      aggregates["convergence"][std::to_string(s.ue_per_relay)] = {
        {"converged_fraction", s.converged_fraction}, {"mean_avg_rate_bps", s.mean_avg_rate_bps}};
    }
    out.files.emplace_back("fig6_convergence_trace.csv", trace.str());
    out.files.emplace_back("fig6_convergence_summary.csv", summary.str());
  }

  csv_table records({"figure", "d_rd_m", "d_dd_m", "seed", "converged", "max_iterations", "prop_d2d_mean_bps",
                     "ref_d2d_mean_bps", "gain_pct", "admitted"});
  auto add_records = [&](const std::string& fig, const distance_point& p) {
    for (const auto& s : p.snapshots) {
      int it = 0;
      for (int v : s.iterations)
        it = std::max(it, v);
      const auto g = rate_gain_pct(s.prop_d2d_mean(), s.ref_d2d_mean());
      records.row().add(fig).add(p.d_rd_m).add(p.d_dd_m).add(s.seed).add(static_cast<int>(s.converged)).add(it)
        .add(s.prop_d2d_mean()).add(s.ref_d2d_mean()).add(g ? *g : std::nan("")).add(s.admitted);
    }
  };

  const auto axis = sweep_axis(e.sweep_start_m, e.sweep_stop_m, e.sweep_step_m);
  if (e.run_distance) {
    std::vector<std::pair<double, double>> pts;
    for (double d : axis)
      pts.emplace_back(e.params.d_rd_m, d);
    const auto res = distance_study(e, pts);
    csv_table t({"d_rd_m", "d_dd_m", "placed", "snapshots", "prop_d2d_mean_bps", "ref_d2d_mean_bps",
                 "converged_fraction"});
    for (const auto& p : res) {
      t.row().add(p.d_rd_m).add(p.d_dd_m).add(static_cast<int>(p.placed)).add(p.snapshots.size())
        .add(p.prop_d2d_mean()).add(p.ref_d2d_mean()).add(p.converged_fraction());
      add_records("fig7", p);
    }
    out.files.emplace_back("fig7_rate_vs_distance.csv", t.str());
  }

  if (e.run_sweep) {
    const auto res = distance_study(e, sweep_points(e));
    csv_table gain({"d_rd_m", "d_dd_m", "placed", "prop_d2d_mean_bps", "ref_d2d_mean_bps", "gain_pct"});
    csv_table delay({"d_rd_m", "d_dd_m", "placed", "median_two_hop_ms", "median_one_hop_ms", "median_diff_ms"});
    std::vector<double> all2, all1;
    for (const auto& p : res) {
      const auto g = rate_gain_pct(p.prop_d2d_mean(), p.ref_d2d_mean());
      gain.row().add(p.d_rd_m).add(p.d_dd_m).add(static_cast<int>(p.placed)).add(p.prop_d2d_mean())
        .add(p.ref_d2d_mean()).add(g ? *g : std::nan(""));
      const auto d2 = p.delays_two_hop(), d1 = p.delays_one_hop();
      const double m2 = d2.empty() ? std::nan("") : median(d2);
      const double m1 = d1.empty() ? std::nan("") : median(d1);
      delay.row().add(p.d_rd_m).add(p.d_dd_m).add(static_cast<int>(p.placed)).add(m2).add(m1).add(m2 - m1);
      all2.insert(all2.end(), d2.begin(), d2.end());
      all1.insert(all1.end(), d1.begin(), d1.end());
      add_records("fig9", p);
    }
    out.files.emplace_back("fig9_rate_gain.csv", gain.str());
    out.files.emplace_back("fig11_delay.csv", delay.str());

    csv_table cc({"t_ms", "ccdf_two_hop", "ccdf_one_hop"});
    if (!all2.empty() && !all1.empty()) {
      double hi = 0;
      for (double v : all2)
        if (std::isfinite(v))
          hi = std::max(hi, v);
      for (double v : all1)
        if (std::isfinite(v))
          hi = std::max(hi, v);
      std::vector<double> grid;
      for (int i = 0; i < e.ccdf_points; ++i)
        grid.push_back(hi * i / (e.ccdf_points - 1));
      const auto c2 = ccdf(all2, grid), c1 = ccdf(all1, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        cc.row().add(grid[i]).add(c2[i].second).add(c1[i].second);
      aggregates["delay"] = {{"median_two_hop_ms", median(all2)}, {"median_one_hop_ms", median(all1)}};
    }
    out.files.emplace_back("fig11_delay_ccdf.csv", cc.str());
  }
  out.files.emplace_back("records.csv", records.str());

  const auto canon = canonical_config_text(cfg);
  json m;
  m["config"] = canon;
  m["config_hash"] = hex64(fnv1a64(canon));
  m["params"] = params_to_text(e.params);
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < e.seeds; ++k)
    seeds.push_back(e.seed_base + static_cast<std::uint64_t>(k));
  m["seeds"] = seeds;
  m["files"] = json::object();
  for (const auto& [name, content] : out.files)
    m["files"][name] = {{"rows", std::count(content.begin(), content.end(), '\n') - 1},
                        {"fnv1a64", hex64(fnv1a64(content))}};
  m["aggregates"] = aggregates;
  out.manifest = m;
  return out;
}

inline void write_outputs(const run_outputs& o, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : o.files)
    write_text(dir / name, content);
  write_text(dir / "manifest.json", o.manifest.dump(2) + "\n");
}

} // namespace rd2d

#endif
