#include "rankpromo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rankpromo {

namespace {
void append_g6(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  out += buf;
}
}  // namespace

double MetricsSeries::measure_qpc() const {
  if (visit_count == 0) throw std::domain_error("measure_qpc: no measured visits");
  return visit_quality_sum / static_cast<double>(visit_count);
}

std::optional<double> MetricsSeries::measure_tbp(double q_lo, double q_hi) const {
  double sum = 0.0;
  long count = 0;
  for (const auto& rec : tbp) {
    if (rec.quality < q_lo || rec.quality > q_hi) continue;
    sum += static_cast<double>(rec.tbp_days);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

void MetricsSeries::write_csv(std::ostream& os) const {
  std::string out = "day,qpc,zero_aware,retired";
  for (int d = 1; d <= 10; ++d) out += ",pop_q" + std::to_string(d);
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.day);
    out += ',';
    append_g6(out, row.qpc);
    out += ',' + std::to_string(row.zero_aware) + ',' + std::to_string(row.retired);
    for (double p : row.pop_decile) {
      out += ',';
      append_g6(out, p);
    }
    out += '\n';
  }
  os << out;
}

Simulation::Simulation(const CommunityConfig& community, const RankingConfig& ranking,
                       std::optional<MixedSurfing> mixed, std::uint64_t seed)
    : community_(community),
      ranking_(ranking),
      mixed_(mixed),
      qualities_(make_quality_vector(community)),
      visit_model_(community.n, community.monitored_visits()),
      rng_(seed) {
  ranking_.validate(community_.n);
  if (mixed_ && (mixed_->x < 0.0 || mixed_->x > 1.0 || mixed_->c < 0.0 || mixed_->c > 1.0))
    throw std::invalid_argument("Simulation: mixed-surfing x and c must be in [0,1]");
  v_ = std::lround(community_.monitored_visits());
  pages_.reserve(qualities_.size());
  for (std::size_t i = 0; i < qualities_.size(); ++i)
    pages_.emplace_back(next_id_++, qualities_[i], 0, community_.m);
  crossed_.assign(pages_.size(), 0);
  decile_of_.resize(pages_.size());
  for (std::size_t i = 0; i < pages_.size(); ++i)
    decile_of_[i] = std::min<long>(9, static_cast<long>(i) * 10 / community_.n);
}

void Simulation::step(MetricsSeries& series, bool measure) {
  const double p_retire = 1.0 - std::exp(-community_.retirement_rate());
  long retired = 0;
  for (std::size_t i = 0; i < pages_.size(); ++i) {
    if (u01(rng_) < p_retire) {
      // Replacement of equal quality, zero awareness.
      pages_[i] = Page(next_id_++, pages_[i].quality, day_, community_.m);
      crossed_[i] = 0;
      ++retired;
    }
  }

  RankedList list = build_ranked_list(pages_, ranking_, rng_);
  VisitAllocation alloc =
      mixed_ ? allocate_mixed_visits(pages_, list, visit_model_, mixed_->x, mixed_->c, v_,
                                     community_.m, rng_)
             : allocate_search_visits(list, visit_model_, v_, community_.m, rng_);

  double day_quality_sum = 0.0;
  for (const Visit& visit : alloc.visits) {
    pages_[static_cast<std::size_t>(visit.page)].mark_aware(visit.user);
    if (measure) {
      double q = pages_[static_cast<std::size_t>(visit.page)].quality;
      day_quality_sum += q;
      series.visit_quality_sum += q;
      ++series.visit_count;
      if (!series.rank_visit_counts.empty())
        ++series.rank_visit_counts[static_cast<std::size_t>(visit.rank - 1)];
    }
  }

  // End-of-day crossing checks (TBP convention: crossing on the birth day is 1).
  for (std::size_t i = 0; i < pages_.size(); ++i) {
    if (crossed_[i]) continue;
    const Page& page = pages_[i];
    if (page.quality > 0.0 && page.popularity() >= threshold_ * page.quality) {
      crossed_[i] = 1;
      if (measure)
        series.tbp.push_back({page.quality, page.birth_day, day_ - page.birth_day + 1});
    }
  }

  if (measure) {
    MetricsRow row;
    row.day = day_;
    row.qpc = alloc.visits.empty() ? 0.0
                                   : day_quality_sum / static_cast<double>(alloc.visits.size());
    row.retired = retired;
    std::array<double, 10> pop_sum{};
    std::array<long, 10> pop_count{};
    for (std::size_t i = 0; i < pages_.size(); ++i) {
      if (pages_[i].aware_count == 0) ++row.zero_aware;
      pop_sum[static_cast<std::size_t>(decile_of_[i])] += pages_[i].popularity();
      ++pop_count[static_cast<std::size_t>(decile_of_[i])];
    }
    for (int d = 0; d < 10; ++d)
      row.pop_decile[static_cast<std::size_t>(d)] =
          pop_count[static_cast<std::size_t>(d)] > 0
              ? pop_sum[static_cast<std::size_t>(d)] / static_cast<double>(pop_count[static_cast<std::size_t>(d)])
              : 0.0;
    series.rows.push_back(row);

    if (!series.top_awareness_hist.empty()) {
      for (const Page& page : pages_)
        if (page.quality == qualities_[0])
          ++series.top_awareness_hist[static_cast<std::size_t>(page.aware_count)];
    }
  }

  ++day_;
}

MetricsSeries run(const CommunityConfig& community, const RankingConfig& ranking,
                  std::optional<MixedSurfing> mixed, long horizon_days, long warmup_days,
                  std::uint64_t seed) {
  if (horizon_days <= warmup_days)
    throw std::invalid_argument("run: horizon must exceed warmup");
  Simulation sim(community, ranking, mixed, seed);
  MetricsSeries series;
  series.top_awareness_hist.assign(static_cast<std::size_t>(community.m) + 1, 0);
  series.rank_visit_counts.assign(static_cast<std::size_t>(community.n), 0);
  for (long day = 0; day < horizon_days; ++day) sim.step(series, day >= warmup_days);
  // Keep only fully observed pages: born inside the measurement window.
  std::erase_if(series.tbp, [&](const TbpRecord& rec) { return rec.birth_day < warmup_days; });
  return series;
}

double ideal_qpc(const CommunityConfig& community) {
  std::vector<double> qualities = make_quality_vector(community);
  RankVisitModel model(community.n, community.monitored_visits());
  double num = 0.0;
  double den = 0.0;
  for (long j = 1; j <= community.n; ++j) {
    double f = model.f2(j);
    num += f * qualities[static_cast<std::size_t>(j - 1)];
    den += f;
  }
  return num / den;
}

}  // namespace rankpromo
