#pragma once

#include <cstdint>
#include <vector>

namespace rankpromo {

/// Parameters of a simulated Web community. The time unit is one day
/// throughout; rates are per day.
struct CommunityConfig {
  long n = 10000;         ///< number of pages
  long u = 1000;          ///< number of users
  long m = 100;           ///< number of monitored users
  double v_u = 1000.0;    ///< total user visits per day
  double l = 547.5;       ///< expected page lifetime in days
  double quality_exponent = 2.1;  ///< power-law exponent of the quality curve
  double q_max = 0.4;     ///< quality of the best page, in (0,1]

  /// Monitored visits per day: v = v_u * m / u.
  double monitored_visits() const { return v_u * static_cast<double>(m) / static_cast<double>(u); }

  /// Page retirement rate: lambda = 1 / l.
  double retirement_rate() const { return 1.0 / l; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// One page. Awareness is tracked as an explicit per-monitored-user flag
/// set so that repeat visits by an already-aware user are non-events.
struct Page {
  std::int64_t id = 0;
  double quality = 0.0;
  long birth_day = 0;
  std::vector<std::uint8_t> aware;  // one flag per monitored user
  int aware_count = 0;

  Page() = default;
  Page(std::int64_t id_, double quality_, long birth_day_, long m)
      : id(id_), quality(quality_), birth_day(birth_day_),
        aware(static_cast<std::size_t>(m), 0) {}

  /// Marks a monitored user as aware. Returns true if this was a first visit.
  bool mark_aware(long user) {
    auto& flag = aware[static_cast<std::size_t>(user)];
    if (flag) return false;
    flag = 1;
    ++aware_count;
    return true;
  }

  /// Popularity P = A * Q with A = aware_count / m.
  double popularity() const {
    if (aware.empty()) return 0.0;
    return quality * static_cast<double>(aware_count) / static_cast<double>(aware.size());
  }
};

/// Popularity of a page measured over m monitored users.
double popularity(const Page& page, long m);

/// Quality values for all n pages, sorted descending:
/// Q(j) = q_max * j^(-quality_exponent), clipped to [0,1], j = 1..n.
std::vector<double> make_quality_vector(const CommunityConfig& config);

}  // namespace rankpromo
