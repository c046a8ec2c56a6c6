#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rankpromo/analytics.hpp"
#include "rankpromo/experiments.hpp"
#include "rankpromo/scenario.hpp"
#include "rankpromo/simulator.hpp"

namespace {

using namespace rankpromo;

std::string value_tag(double v) {
  std::string s = std::to_string(v);
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == 'p') s.pop_back();
  return s;
}

int cmd_run(const std::string& config_path, const std::vector<std::uint64_t>& seed_override,
            const std::string& out_dir) {
  ScenarioConfig scenario = load_config(config_path);
  if (!seed_override.empty()) scenario.run.seeds = seed_override;
  std::filesystem::create_directories(out_dir);

  auto points = expand_sweep(scenario);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::string stem = "run";
    if (scenario.sweep)
      stem += "_" + scenario.sweep->parameter + "_" + value_tag(scenario.sweep->values[p]);
    auto runs = run_seeds(points[p]);
    for (std::size_t s = 0; s < runs.size(); ++s) {
      std::string path =
          out_dir + "/" + stem + "_seed" + std::to_string(points[p].run.seeds[s]) + ".csv";
      std::ofstream os(path, std::ios::binary);
      runs[s].write_csv(os);
      std::ofstream meta(path + ".meta", std::ios::binary);
      ScenarioConfig echo = points[p];
      echo.run.seeds = {points[p].run.seeds[s]};
      meta << describe(echo);
      std::cout << path << "\n";
    }
  }
  return 0;
}

int cmd_figure(const std::string& id, double scale, const std::string& out_dir, int seed_count) {
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= seed_count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  for (const auto& path : run_figure(id, scale, out_dir, seeds)) std::cout << path << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path) {
  ScenarioConfig scenario = load_config(config_path);
  compare_analytic_vs_sim(scenario, std::cout);
  return 0;
}

int cmd_solve_f(const std::string& config_path, const std::string& out_path) {
  ScenarioConfig scenario = load_config(config_path);
  VisitFunction F = solve_visit_function(scenario.community, scenario.ranking);
  if (!F.converged)
    std::cerr << "warning: solver did not converge after " << F.iterations << " iterations\n";
  if (out_path.empty()) {
    F.write_csv(std::cout);
  } else {
    std::ofstream os(out_path, std::ios::binary);
    F.write_csv(os);
    std::cout << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized rank promotion laboratory: simulation and analytic models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::uint64_t> seeds;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario config; one CSV per sweep point and seed");
  run_cmd->add_option("config", config_path, "scenario config file")->required();
  run_cmd->add_option("--seed", seeds, "override the config's seed list");
  run_cmd->add_option("--out", out_dir, "output directory");

  std::string figure_id;
  double scale = 0.1;
  int seed_count = 10;
  std::string fig_out = "figures";
  auto* figure_cmd = app.add_subcommand("figure", "Reproduce one figure family as CSV curves");
  figure_cmd->add_option("id", figure_id, "one of: tbp_vs_r qpc_vs_r qpc_k_r size lifetime visits users mixed awareness_hist")
      ->required();
  figure_cmd->add_option("--scale", scale, "community scale factor (default 0.1)");
  figure_cmd->add_option("--seeds", seed_count, "seeds per sweep point (default 10)");
  figure_cmd->add_option("--out", fig_out, "output directory");

  auto* compare_cmd = app.add_subcommand("compare", "Analytic vs simulated report (CSV to stdout)");
  compare_cmd->add_option("config", config_path, "scenario config file")->required();

  std::string solve_out;
  auto* solve_cmd = app.add_subcommand("solve-f", "Solve the visit function and dump its table");
  solve_cmd->add_option("config", config_path, "scenario config file")->required();
  solve_cmd->add_option("--out", solve_out, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, seeds, out_dir);
    if (figure_cmd->parsed()) return cmd_figure(figure_id, scale, fig_out, seed_count);
    if (compare_cmd->parsed()) return cmd_compare(config_path);
    if (solve_cmd->parsed()) return cmd_solve_f(config_path, solve_out);
  } catch (const rankpromo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
