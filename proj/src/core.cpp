#include "rankpromo/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rankpromo {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("CommunityConfig: " + what);
}
}  // namespace

void CommunityConfig::validate() const {
  require(n > 0, "n must be positive");
  require(u > 0, "u must be positive");
  require(m > 0, "m must be positive");
  require(m <= u, "m must not exceed u");
  require(v_u >= 0, "v_u must be nonnegative");
  require(l > 0, "l must be positive");
  require(quality_exponent >= 0, "quality_exponent must be nonnegative");
  require(q_max > 0 && q_max <= 1.0, "q_max must be in (0,1]");
}

double popularity(const Page& page, long m) {
  if (page.aware_count > m) throw std::invalid_argument("popularity: awareness exceeds m");
  if (m <= 0) throw std::invalid_argument("popularity: m must be positive");
  return page.quality * static_cast<double>(page.aware_count) / static_cast<double>(m);
}

std::vector<double> make_quality_vector(const CommunityConfig& config) {
  config.validate();
  std::vector<double> q(static_cast<std::size_t>(config.n));
  for (long j = 1; j <= config.n; ++j) {
    double value = config.q_max * std::pow(static_cast<double>(j), -config.quality_exponent);
    q[static_cast<std::size_t>(j - 1)] = std::clamp(value, 0.0, 1.0);
  }
  return q;
}

}  // namespace rankpromo
