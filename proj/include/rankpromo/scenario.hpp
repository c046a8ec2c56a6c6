#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankpromo/core.hpp"
#include "rankpromo/ranking.hpp"
#include "rankpromo/simulator.hpp"

namespace rankpromo {

/// Configuration problem: parse error (with line number) or a named
/// constraint violation. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunWindow {
  long horizon_days = 0;  ///< 0 = derive from warmup
  long warmup_days = -1;  ///< -1 = derive as 2*l
  std::vector<std::uint64_t> seeds = {1};
};

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct ScenarioConfig {
  CommunityConfig community;
  RankingConfig ranking;
  std::optional<MixedSurfing> mixed;
  RunWindow run;
  std::optional<SweepAxis> sweep;

  long warmup() const;
  long horizon() const;
};

/// Parses the sectioned key=value format ([community], [ranking], [mixed],
/// [run], [sweep]). Unset fields take the default scenario values. Throws
/// ConfigError with line info on parse problems and named constraint
/// violations.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Shrinks n, u, m, v_u by `factor` (>= some positive minimum per field),
/// preserving the scenario's dimensionless ratios. Lifetime is unchanged.
void apply_scale(ScenarioConfig& scenario, double factor);

/// One scenario per sweep value (seeds stay inside each scenario).
/// A scenario without a sweep expands to itself.
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& scenario);

/// Sets a parameter by its config-file name (n, u, m, v_u, l,
/// quality_exponent, q_max, k, r, x, c). Throws ConfigError on unknown names.
void set_parameter(ScenarioConfig& scenario, const std::string& name, double value);

/// Full config echo, re-parseable by parse_config; used for sidecar files.
std::string describe(const ScenarioConfig& scenario);

}  // namespace rankpromo
