#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankpromo/scenario.hpp"
#include "rankpromo/simulator.hpp"

namespace rankpromo {

struct SampleStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  long count = 0;
};

SampleStats sample_stats(const std::vector<double>& values);

/// Runs the scenario once per seed, in parallel; results come back in seed
/// order so output is deterministic.
std::vector<MetricsSeries> run_seeds(const ScenarioConfig& scenario);

/// Known figure identifiers for run_figure.
std::vector<std::string> figure_ids();

/// Produces the CSV curves (plus a .meta config sidecar per file) for one
/// figure family at the given community scale. Throws ConfigError on an
/// unknown id. Returns the paths written.
std::vector<std::string> run_figure(const std::string& figure_id, double scale,
                                    const std::string& out_dir,
                                    const std::vector<std::uint64_t>& seeds);

/// Analytic-vs-simulation report: awareness histogram bins for the top
/// quality, TBP, and QPC; columns quantity, analytic, sim_mean, sim_stderr,
/// rel_gap. A warning line goes to stderr for r >= 0.2 (outside the model's
/// declared validity range), but the comparison still runs.
void compare_analytic_vs_sim(const ScenarioConfig& scenario, std::ostream& out);

}  // namespace rankpromo
