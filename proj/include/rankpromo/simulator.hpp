#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rankpromo/core.hpp"
#include "rankpromo/ranking.hpp"
#include "rankpromo/rng.hpp"
#include "rankpromo/visits.hpp"

namespace rankpromo {

struct MixedSurfing {
  double x = 0.0;   ///< fraction of browsing done by random surfing
  double c = 0.15;  ///< teleportation probability
};

struct MetricsRow {
  long day = 0;
  double qpc = 0.0;      ///< visit-weighted quality of that day's visits
  long zero_aware = 0;   ///< pages with zero awareness at end of day
  long retired = 0;      ///< pages replaced that day
  std::array<double, 10> pop_decile{};  ///< mean popularity, q1 = top decile
};

/// A page that crossed the popularity threshold before retirement.
struct TbpRecord {
  double quality = 0.0;
  long birth_day = 0;
  long tbp_days = 0;  ///< end-of-day convention: crossing on the birth day is 1
};

struct MetricsSeries {
  std::vector<MetricsRow> rows;
  double visit_quality_sum = 0.0;
  long visit_count = 0;
  std::vector<TbpRecord> tbp;                   ///< pages born in the window
  std::vector<long> top_awareness_hist;          ///< page-days of top-quality pages per level
  std::vector<long> rank_visit_counts;           ///< window visits tallied by rank

  /// QPC over the measurement window. Throws std::domain_error on zero visits.
  double measure_qpc() const;

  /// Mean TBP over recorded pages with quality in [q_lo, q_hi]; empty sample
  /// yields nullopt.
  std::optional<double> measure_tbp(double q_lo, double q_hi) const;

  /// Header: day,qpc,zero_aware,retired,pop_q1..pop_q10. Floats with six
  /// significant digits.
  void write_csv(std::ostream& os) const;
};

/// One community run. Strictly sequential; independent runs with separate
/// seeds may execute in parallel.
class Simulation {
 public:
  Simulation(const CommunityConfig& community, const RankingConfig& ranking,
             std::optional<MixedSurfing> mixed, std::uint64_t seed);

  /// One day: Poisson retirement/replacement, ranked-list build, visit
  /// allocation, awareness updates, end-of-day crossing checks. Metrics are
  /// accumulated into `series` only when `measure` is set.
  void step(MetricsSeries& series, bool measure);

  long day() const { return day_; }
  const std::vector<Page>& pages() const { return pages_; }
  double top_quality() const { return qualities_[0]; }

 private:
  CommunityConfig community_;
  RankingConfig ranking_;
  std::optional<MixedSurfing> mixed_;
  std::vector<double> qualities_;
  RankVisitModel visit_model_;
  Rng rng_;
  std::vector<Page> pages_;
  std::vector<std::uint8_t> crossed_;   // per page instance
  std::vector<long> decile_of_;          // per page, 0 = top quality decile
  long day_ = 0;
  long v_ = 0;                           // monitored visits per day
  std::int64_t next_id_ = 0;
  double threshold_ = 0.99;
};

/// Full run: executes `horizon_days` steps, measuring after `warmup_days`.
/// Deterministic given (community, ranking, mixed, seed).
MetricsSeries run(const CommunityConfig& community, const RankingConfig& ranking,
                  std::optional<MixedSurfing> mixed, long horizon_days, long warmup_days,
                  std::uint64_t seed);

/// Visit-weighted quality of the quality-perfect ranking; the QPC = 1.0
/// normalization constant.
double ideal_qpc(const CommunityConfig& community);

}  // namespace rankpromo
