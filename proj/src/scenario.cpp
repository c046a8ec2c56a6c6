#include "rankpromo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rankpromo {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    double d = std::stod(value, &pos);
    if (pos != value.size()) fail(line, "trailing characters in number '" + value + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + value + "'");
  }
}

long parse_long(const std::string& value, int line) {
  double d = parse_number(value, line);
  if (d != std::floor(d)) fail(line, "expected an integer, got '" + value + "'");
  return static_cast<long>(d);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

long ScenarioConfig::warmup() const {
  if (run.warmup_days >= 0) return run.warmup_days;
  return std::lround(2.0 * community.l);
}

long ScenarioConfig::horizon() const {
  if (run.horizon_days > 0) return run.horizon_days;
  return warmup() + 1000;
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig scenario;
  bool mixed_section = false;
  bool sweep_section = false;

  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = trim(raw);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail(line, "unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section != "community" && section != "ranking" && section != "mixed" &&
          section != "run" && section != "sweep")
        fail(line, "unknown section [" + section + "]");
      if (section == "mixed") mixed_section = true;
      if (section == "sweep") sweep_section = true;
      continue;
    }
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");
    if (value.empty()) fail(line, "empty value for '" + key + "'");

    if (section == "community") {
      if (key == "n") scenario.community.n = parse_long(value, line);
      else if (key == "u") scenario.community.u = parse_long(value, line);
      else if (key == "m") scenario.community.m = parse_long(value, line);
      else if (key == "v_u") scenario.community.v_u = parse_number(value, line);
      else if (key == "l") scenario.community.l = parse_number(value, line);
      else if (key == "quality_exponent") scenario.community.quality_exponent = parse_number(value, line);
      else if (key == "q_max") scenario.community.q_max = parse_number(value, line);
      else fail(line, "unknown community key '" + key + "'");
    } else if (section == "ranking") {
      if (key == "rule") {
        if (value == "none") scenario.ranking.rule = PromotionRule::none;
        else if (value == "uniform") scenario.ranking.rule = PromotionRule::uniform;
        else if (value == "selective") scenario.ranking.rule = PromotionRule::selective;
        else fail(line, "rule must be none, uniform, or selective");
      } else if (key == "k") scenario.ranking.k = static_cast<int>(parse_long(value, line));
      else if (key == "r") scenario.ranking.r = parse_number(value, line);
      else fail(line, "unknown ranking key '" + key + "'");
    } else if (section == "mixed") {
      if (!scenario.mixed) scenario.mixed = MixedSurfing{};
      if (key == "x") scenario.mixed->x = parse_number(value, line);
      else if (key == "c") scenario.mixed->c = parse_number(value, line);
      else fail(line, "unknown mixed key '" + key + "'");
    } else if (section == "run") {
      if (key == "horizon") scenario.run.horizon_days = parse_long(value, line);
      else if (key == "warmup") scenario.run.warmup_days = parse_long(value, line);
      else if (key == "seeds") {
        scenario.run.seeds.clear();
        for (const std::string& s : split_list(value))
          scenario.run.seeds.push_back(static_cast<std::uint64_t>(parse_long(s, line)));
      } else fail(line, "unknown run key '" + key + "'");
    } else if (section == "sweep") {
      if (!scenario.sweep) scenario.sweep = SweepAxis{};
      if (key == "parameter") scenario.sweep->parameter = value;
      else if (key == "values") {
        scenario.sweep->values.clear();
        for (const std::string& s : split_list(value))
          scenario.sweep->values.push_back(parse_number(s, line));
      } else fail(line, "unknown sweep key '" + key + "'");
    }
  }

  if (mixed_section && !scenario.mixed) scenario.mixed = MixedSurfing{};
  if (sweep_section && !scenario.sweep) throw ConfigError("sweep: section is empty");

  // Constraint checks, named per field.
  try {
    scenario.community.validate();
    scenario.ranking.validate(scenario.community.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (scenario.mixed) {
    if (scenario.mixed->x < 0.0 || scenario.mixed->x > 1.0) throw ConfigError("mixed: x must be in [0,1]");
    if (scenario.mixed->c < 0.0 || scenario.mixed->c > 1.0) throw ConfigError("mixed: c must be in [0,1]");
  }
  if (scenario.run.seeds.empty()) throw ConfigError("run: seeds must be nonempty");
  if (scenario.horizon() <= scenario.warmup())
    throw ConfigError("run: horizon must exceed warmup");
  if (scenario.sweep) {
    if (scenario.sweep->values.empty()) throw ConfigError("sweep: values must be nonempty");
    for (double value : scenario.sweep->values) {
      ScenarioConfig probe = scenario;
      probe.sweep.reset();
      set_parameter(probe, scenario.sweep->parameter, value);
    }
  }
  return scenario;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

void apply_scale(ScenarioConfig& scenario, double factor) {
  if (factor <= 0.0 || factor > 1.0) throw ConfigError("scale factor must be in (0,1]");
  auto scaled = [factor](long value) { return std::max<long>(1, std::lround(value * factor)); };
  scenario.community.n = scaled(scenario.community.n);
  scenario.community.u = scaled(scenario.community.u);
  scenario.community.m = scaled(scenario.community.m);
  scenario.community.v_u = std::max(1.0, scenario.community.v_u * factor);
  scenario.community.m = std::min(scenario.community.m, scenario.community.u);
  scenario.ranking.k = static_cast<int>(std::min<long>(scenario.ranking.k, scenario.community.n));
}

void set_parameter(ScenarioConfig& scenario, const std::string& name, double value) {
  if (name == "n") scenario.community.n = std::lround(value);
  else if (name == "u") scenario.community.u = std::lround(value);
  else if (name == "m") scenario.community.m = std::lround(value);
  else if (name == "v_u") scenario.community.v_u = value;
  else if (name == "l") scenario.community.l = value;
  else if (name == "quality_exponent") scenario.community.quality_exponent = value;
  else if (name == "q_max") scenario.community.q_max = value;
  else if (name == "k") scenario.ranking.k = static_cast<int>(std::lround(value));
  else if (name == "r") scenario.ranking.r = value;
  else if (name == "x") {
    if (!scenario.mixed) scenario.mixed = MixedSurfing{};
    scenario.mixed->x = value;
  } else if (name == "c") {
    if (!scenario.mixed) scenario.mixed = MixedSurfing{};
    scenario.mixed->c = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
  try {
    scenario.community.validate();
    scenario.ranking.validate(scenario.community.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& scenario) {
  if (!scenario.sweep) return {scenario};
  std::vector<ScenarioConfig> out;
  for (double value : scenario.sweep->values) {
    ScenarioConfig point = scenario;
    point.sweep.reset();
    set_parameter(point, scenario.sweep->parameter, value);
    out.push_back(std::move(point));
  }
  return out;
}

std::string describe(const ScenarioConfig& s) {
  std::ostringstream os;
  os << "[community]\n"
     << "n = " << s.community.n << "\n"
     << "u = " << s.community.u << "\n"
     << "m = " << s.community.m << "\n"
     << "v_u = " << s.community.v_u << "\n"
     << "l = " << s.community.l << "\n"
     << "quality_exponent = " << s.community.quality_exponent << "\n"
     << "q_max = " << s.community.q_max << "\n"
     << "[ranking]\n"
     << "rule = "
     << (s.ranking.rule == PromotionRule::none
             ? "none"
             : s.ranking.rule == PromotionRule::uniform ? "uniform" : "selective")
     << "\n"
     << "k = " << s.ranking.k << "\n"
     << "r = " << s.ranking.r << "\n";
  if (s.mixed) {
    os << "[mixed]\n"
       << "x = " << s.mixed->x << "\n"
       << "c = " << s.mixed->c << "\n";
  }
  os << "[run]\n"
     << "horizon = " << s.horizon() << "\n"
     << "warmup = " << s.warmup() << "\n"
     << "seeds = ";
  for (std::size_t i = 0; i < s.run.seeds.size(); ++i)
    os << (i ? "," : "") << s.run.seeds[i];
  os << "\n";
  if (s.sweep) {
    os << "[sweep]\n"
       << "parameter = " << s.sweep->parameter << "\n"
       << "values = ";
    for (std::size_t i = 0; i < s.sweep->values.size(); ++i)
      os << (i ? "," : "") << s.sweep->values[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace rankpromo
