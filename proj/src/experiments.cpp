#include "rankpromo/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "rankpromo/analytics.hpp"

namespace rankpromo {

namespace {

std::string g6(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  // Written to a temp name first so a file is never observed half-done.
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

void write_curve(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows, const ScenarioConfig& meta) {
  std::string csv = header + "\n";
  for (const auto& row : rows) csv += row + "\n";
  write_file(path, csv);
  write_file(path + ".meta", describe(meta));
}

ScenarioConfig default_scaled(double scale, const std::vector<std::uint64_t>& seeds) {
  ScenarioConfig s;
  apply_scale(s, scale);
  s.run.seeds = seeds;
  return s;
}

double top_quality_of(const ScenarioConfig& s) { return s.community.q_max; }

/// Mean TBP of the top-quality page across seeds; seeds without a crossing
/// contribute nothing.
SampleStats tbp_stats(const std::vector<MetricsSeries>& runs, double q_top) {
  std::vector<double> values;
  for (const auto& series : runs) {
    auto t = series.measure_tbp(q_top * (1.0 - 1e-12), 1.0);
    if (t) values.push_back(*t);
  }
  return sample_stats(values);
}

SampleStats qpc_stats(const std::vector<MetricsSeries>& runs, double normalizer) {
  std::vector<double> values;
  for (const auto& series : runs) values.push_back(series.measure_qpc() / normalizer);
  return sample_stats(values);
}

}  // namespace

SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats s;
  s.count = static_cast<long>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                          static_cast<double>(values.size()));
  }
  return s;
}

std::vector<MetricsSeries> run_seeds(const ScenarioConfig& scenario) {
  const auto& seeds = scenario.run.seeds;
  std::vector<MetricsSeries> results(seeds.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(seeds.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i)
      results[i] = run(scenario.community, scenario.ranking, scenario.mixed,
                       scenario.horizon(), scenario.warmup(), seeds[i]);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1))
        results[i] = run(scenario.community, scenario.ranking, scenario.mixed,
                         scenario.horizon(), scenario.warmup(), seeds[i]);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

std::vector<std::string> figure_ids() {
  return {"tbp_vs_r", "qpc_vs_r", "qpc_k_r", "size", "lifetime",
          "visits",   "users",    "mixed",   "awareness_hist"};
}

namespace {

struct Curve {
  std::string name;
  RankingConfig ranking;
};

std::vector<std::string> qpc_sweep_figure(
    const std::string& figure_id, const std::string& axis_name,
    const std::vector<double>& axis_values,
    const std::function<void(ScenarioConfig&, double)>& apply_axis,
    const std::vector<Curve>& curves, const ScenarioConfig& base, const std::string& out_dir) {
  std::vector<std::string> written;
  for (const Curve& curve : curves) {
    std::vector<std::string> rows;
    ScenarioConfig meta = base;
    meta.ranking = curve.ranking;
    for (double value : axis_values) {
      ScenarioConfig point = base;
      point.ranking = curve.ranking;
      apply_axis(point, value);
      auto runs = run_seeds(point);
      SampleStats qpc = qpc_stats(runs, ideal_qpc(point.community));
      rows.push_back(g6(value) + "," + g6(qpc.mean) + "," + g6(qpc.stderr_) + "," +
                     std::to_string(qpc.count));
    }
    std::string path = out_dir + "/" + figure_id + "_" + curve.name + ".csv";
    write_curve(path, axis_name + ",qpc_norm_mean,qpc_norm_stderr,seeds", rows, meta);
    written.push_back(path);
  }
  return written;
}

}  // namespace

std::vector<std::string> run_figure(const std::string& figure_id, double scale,
                                    const std::string& out_dir,
                                    const std::vector<std::uint64_t>& seeds) {
  std::filesystem::create_directories(out_dir);
  ScenarioConfig base = default_scaled(scale, seeds);
  // Long enough past warmup for TBP samples and stable QPC windows.
  base.run.horizon_days = base.warmup() + 2000;
  std::vector<std::string> written;

  const std::vector<double> r_grid = {0.0, 0.05, 0.1, 0.2};
  auto set_r = [](ScenarioConfig& s, double r) { s.ranking.r = r; };

  if (figure_id == "tbp_vs_r") {
    base.run.horizon_days = base.warmup() + 4000;
    for (const Curve& curve : {Curve{"selective", {PromotionRule::selective, 1, 0.0}},
                               Curve{"uniform", {PromotionRule::uniform, 1, 0.0}}}) {
      std::vector<std::string> rows;
      ScenarioConfig meta = base;
      meta.ranking = curve.ranking;
      for (double r : r_grid) {
        ScenarioConfig point = base;
        point.ranking = curve.ranking;
        point.ranking.r = r;
        auto runs = run_seeds(point);
        SampleStats tbp = tbp_stats(runs, top_quality_of(point));
        rows.push_back(g6(r) + "," + g6(tbp.mean) + "," + g6(tbp.stderr_) + "," +
                       std::to_string(tbp.count));
      }
      std::string path = out_dir + "/tbp_vs_r_" + curve.name + ".csv";
      write_curve(path, "r,tbp_mean,tbp_stderr,seeds_with_sample", rows, meta);
      written.push_back(path);
    }
    return written;
  }

  if (figure_id == "qpc_vs_r") {
    return qpc_sweep_figure(figure_id, "r", {0.0, 0.02, 0.05, 0.1, 0.15, 0.2}, set_r,
                            {Curve{"selective", {PromotionRule::selective, 1, 0.0}},
                             Curve{"uniform", {PromotionRule::uniform, 1, 0.0}}},
                            base, out_dir);
  }

  if (figure_id == "qpc_k_r") {
    std::vector<Curve> curves;
    for (int k : {1, 2, 5, 10, 20})
      curves.push_back({"k" + std::to_string(k), {PromotionRule::selective, k, 0.0}});
    return qpc_sweep_figure(figure_id, "r", {0.0, 0.05, 0.1, 0.2, 0.3, 0.5}, set_r, curves,
                            base, out_dir);
  }

  const std::vector<Curve> robustness_curves = {
      Curve{"deterministic", {PromotionRule::none, 1, 0.0}},
      Curve{"selective_k1", {PromotionRule::selective, 1, 0.1}},
      Curve{"selective_k2", {PromotionRule::selective, 2, 0.1}}};

  if (figure_id == "size") {
    // u/n, m/u, v_u/u ratios of the default scenario are preserved.
    auto apply = [](ScenarioConfig& s, double n) {
      s.community.n = std::lround(n);
      s.community.u = std::max<long>(1, std::lround(n * 0.1));
      s.community.m = std::max<long>(1, std::lround(n * 0.01));
      s.community.v_u = static_cast<double>(s.community.u);
    };
    return qpc_sweep_figure(figure_id, "n", {250, 500, 1000, 2000}, apply, robustness_curves,
                            base, out_dir);
  }

  if (figure_id == "lifetime") {
    auto apply = [](ScenarioConfig& s, double l) {
      s.community.l = l;
      s.run.warmup_days = std::lround(2.0 * l);
      s.run.horizon_days = s.run.warmup_days + 2000;
    };
    return qpc_sweep_figure(figure_id, "l", {137, 274, 547.5, 1095}, apply, robustness_curves,
                            base, out_dir);
  }

  if (figure_id == "visits") {
    auto apply = [](ScenarioConfig& s, double v_u) {
      s.community.v_u = v_u;
      s.community.u = std::max<long>(1, std::lround(v_u));
      s.community.m = std::max<long>(1, std::lround(v_u * 0.1));
    };
    return qpc_sweep_figure(figure_id, "v_u", {25, 50, 100, 200, 400}, apply, robustness_curves,
                            base, out_dir);
  }

  if (figure_id == "users") {
    auto apply = [](ScenarioConfig& s, double u) {
      s.community.u = std::max<long>(1, std::lround(u));
      s.community.m = std::max<long>(1, std::lround(u * 0.1));
    };
    return qpc_sweep_figure(figure_id, "u", {25, 50, 100, 200, 400}, apply, robustness_curves,
                            base, out_dir);
  }

  if (figure_id == "mixed") {
    // Absolute QPC; the quality-perfect normalizer does not apply once part
    // of the traffic bypasses the ranked list.
    for (const Curve& curve : {Curve{"deterministic", {PromotionRule::none, 1, 0.0}},
                               Curve{"selective", {PromotionRule::selective, 1, 0.1}}}) {
      std::vector<std::string> rows;
      ScenarioConfig meta = base;
      meta.ranking = curve.ranking;
      meta.mixed = MixedSurfing{0.0, 0.15};
      for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        ScenarioConfig point = base;
        point.ranking = curve.ranking;
        point.mixed = MixedSurfing{x, 0.15};
        auto runs = run_seeds(point);
        SampleStats qpc = qpc_stats(runs, 1.0);  // absolute, flagged in the header
        rows.push_back(g6(x) + "," + g6(qpc.mean) + "," + g6(qpc.stderr_) + "," +
                       std::to_string(qpc.count));
      }
      std::string path = out_dir + "/mixed_" + curve.name + ".csv";
      write_curve(path, "x,qpc_abs_mean,qpc_abs_stderr,seeds", rows, meta);
      written.push_back(path);
    }
    return written;
  }

  if (figure_id == "awareness_hist") {
    for (const Curve& curve : {Curve{"deterministic", {PromotionRule::none, 1, 0.0}},
                               Curve{"selective", {PromotionRule::selective, 1, 0.2}}}) {
      ScenarioConfig point = base;
      point.ranking = curve.ranking;
      auto runs = run_seeds(point);
      std::vector<double> hist(static_cast<std::size_t>(point.community.m) + 1, 0.0);
      double total = 0.0;
      for (const auto& series : runs)
        for (std::size_t i = 0; i < hist.size(); ++i) {
          hist[i] += static_cast<double>(series.top_awareness_hist[i]);
          total += static_cast<double>(series.top_awareness_hist[i]);
        }
      std::vector<std::string> rows;
      for (std::size_t i = 0; i < hist.size(); ++i) {
        double a = static_cast<double>(i) / static_cast<double>(point.community.m);
        rows.push_back(g6(a) + "," + g6(total > 0 ? hist[i] / total : 0.0));
      }
      std::string path = out_dir + "/awareness_hist_" + curve.name + ".csv";
      write_curve(path, "awareness,fraction", rows, point);
      written.push_back(path);
    }
    return written;
  }

  throw ConfigError("unknown figure id '" + figure_id + "'");
}

void compare_analytic_vs_sim(const ScenarioConfig& scenario, std::ostream& out) {
  if (scenario.ranking.rule == PromotionRule::uniform)
    throw ConfigError("compare: no analytic form for uniform promotion");
  if (scenario.ranking.rule == PromotionRule::selective && scenario.ranking.r >= 0.2)
    std::cerr << "warning: the analytic model is only intended for r < 0.2 "
                 "(requested r = " << scenario.ranking.r << "); running anyway\n";

  const CommunityConfig& community = scenario.community;
  VisitFunction F = solve_visit_function(community, scenario.ranking);
  VisitRateFn fn = [&F](double x) { return F(x); };
  std::vector<double> qualities = make_quality_vector(community);
  double q_top = qualities[0];
  double lambda = community.retirement_rate();

  AwarenessDistribution analytic_hist = awareness_closed_form(q_top, fn, lambda, community.m);
  double analytic_qpc = qpc_analytic(qualities, fn, lambda, community.m);
  double analytic_tbp = tbp_analytic(q_top, fn, lambda, community.m);

  auto runs = run_seeds(scenario);

  std::vector<std::vector<double>> hist_fracs(static_cast<std::size_t>(community.m) + 1);
  std::vector<double> qpcs;
  std::vector<double> tbps;
  for (const auto& series : runs) {
    double total = 0.0;
    for (long c : series.top_awareness_hist) total += static_cast<double>(c);
    for (std::size_t i = 0; i < hist_fracs.size(); ++i)
      hist_fracs[i].push_back(total > 0 ? static_cast<double>(series.top_awareness_hist[i]) / total
                                        : 0.0);
    qpcs.push_back(series.measure_qpc());
    auto t = series.measure_tbp(q_top * (1.0 - 1e-12), 1.0);
    if (t) tbps.push_back(*t);
  }

  auto emit = [&](const std::string& name, double analytic, const SampleStats& sim) {
    double gap = sim.mean != 0.0 ? std::abs(analytic - sim.mean) / std::abs(sim.mean)
                                 : std::abs(analytic);
    out << name << ',' << g6(analytic) << ',' << g6(sim.mean) << ',' << g6(sim.stderr_) << ','
        << g6(gap) << '\n';
  };

  out << "quantity,analytic,sim_mean,sim_stderr,rel_gap\n";
  for (std::size_t i = 0; i < hist_fracs.size(); ++i)
    emit("awareness_a" + std::to_string(i), analytic_hist.probs[i], sample_stats(hist_fracs[i]));
  emit("tbp_top_quality", analytic_tbp, sample_stats(tbps));
  emit("qpc", analytic_qpc, sample_stats(qpcs));
  if (!F.converged) out << "# warning: visit-function solver did not converge\n";
}

}  // namespace rankpromo
