#include "rankpromo/visits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rankpromo {

RankVisitModel::RankVisitModel(long n, double v) : n_(n), v_(v) {
  if (n <= 0) throw std::invalid_argument("RankVisitModel: n must be positive");
  if (v < 0) throw std::invalid_argument("RankVisitModel: v must be nonnegative");
  double sum = 0.0;
  cum_.resize(static_cast<std::size_t>(n));
  for (long i = 1; i <= n; ++i) {
    sum += std::pow(static_cast<double>(i), -1.5);
    cum_[static_cast<std::size_t>(i - 1)] = sum;
  }
  theta_ = v / sum;
  for (double& c : cum_) c /= sum;
  cum_.back() = 1.0;
}

double RankVisitModel::f2(long rank) const {
  if (rank < 1 || rank > n_) throw std::out_of_range("f2: rank out of [1, n]");
  return theta_ * std::pow(static_cast<double>(rank), -1.5);
}

double RankVisitModel::f2_real(double rank) const {
  double clamped = std::clamp(rank, 1.0, static_cast<double>(n_));
  return theta_ * std::pow(clamped, -1.5);
}

long RankVisitModel::sample_rank(Rng& rng) const {
  double u = u01(rng);
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) --it;
  return static_cast<long>(it - cum_.begin()) + 1;
}

VisitAllocation allocate_search_visits(const RankedList& list, const RankVisitModel& model,
                                       long v, long m, Rng& rng) {
  if (v < 0) throw std::invalid_argument("allocate_search_visits: v must be nonnegative");
  VisitAllocation alloc;
  alloc.visits.reserve(static_cast<std::size_t>(v));
  for (long i = 0; i < v; ++i) {
    long rank = model.sample_rank(rng);
    long page = list.order[static_cast<std::size_t>(rank - 1)];
    long user = uniform_index(rng, m);
    alloc.visits.push_back({page, user, rank});
  }
  return alloc;
}

VisitAllocation allocate_mixed_visits(std::span<const Page> pages, const RankedList& list,
                                      const RankVisitModel& model, double x, double c,
                                      long v, long m, Rng& rng) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("allocate_mixed_visits: x must be in [0,1]");
  if (c < 0.0 || c > 1.0) throw std::invalid_argument("allocate_mixed_visits: c must be in [0,1]");

  const long n = static_cast<long>(pages.size());
  std::vector<long> rank_of(pages.size());
  for (long pos = 0; pos < list.size(); ++pos)
    rank_of[static_cast<std::size_t>(list.order[static_cast<std::size_t>(pos)])] = pos + 1;

  // Cumulative popularity for the proportional surf term.
  std::vector<double> cum_pop(pages.size());
  double total_pop = 0.0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    total_pop += pages[i].popularity();
    cum_pop[i] = total_pop;
  }

  VisitAllocation alloc;
  alloc.visits.reserve(static_cast<std::size_t>(v));
  for (long i = 0; i < v; ++i) {
    long page;
    if (u01(rng) < 1.0 - x) {
      long rank = model.sample_rank(rng);
      page = list.order[static_cast<std::size_t>(rank - 1)];
    } else if (u01(rng) < c || total_pop <= 0.0) {
      // Teleportation; also the fallback when no page has popularity yet.
      page = uniform_index(rng, n);
    } else {
      double target = u01(rng) * total_pop;
      auto it = std::upper_bound(cum_pop.begin(), cum_pop.end(), target);
      if (it == cum_pop.end()) --it;
      page = static_cast<long>(it - cum_pop.begin());
    }
    long user = uniform_index(rng, m);
    alloc.visits.push_back({page, user, rank_of[static_cast<std::size_t>(page)]});
  }
  return alloc;
}

}  // namespace rankpromo
