#pragma once

#include <span>
#include <vector>

#include "rankpromo/core.hpp"
#include "rankpromo/ranking.hpp"
#include "rankpromo/rng.hpp"

namespace rankpromo {

/// Rank-to-visit-rate map F2(rank) = theta * rank^(-3/2), with theta chosen
/// so that the rates over ranks 1..n sum to v.
class RankVisitModel {
 public:
  RankVisitModel(long n, double v);

  long n() const { return n_; }
  double v() const { return v_; }
  double theta() const { return theta_; }

  /// F2 at an integer rank; throws std::out_of_range outside [1, n].
  double f2(long rank) const;

  /// F2 extended to real-valued (expected) ranks, clamped to [1, n].
  double f2_real(double rank) const;

  /// Draws a 1-based rank with probability proportional to f2.
  long sample_rank(Rng& rng) const;

 private:
  long n_;
  double v_;
  double theta_;
  std::vector<double> cum_;  // cumulative rank probabilities
};

struct Visit {
  long page;  ///< index into the page collection
  long user;  ///< monitored user id in [0, m)
  long rank;  ///< 1-based position of the page in the ranked list
};

/// Visits allocated for one tick. Conservation: visits.size() == v.
struct VisitAllocation {
  std::vector<Visit> visits;
};

/// v visits drawn independently over rank positions with probabilities
/// f2(i)/v; each visit gets a uniform-random monitored user.
VisitAllocation allocate_search_visits(const RankedList& list, const RankVisitModel& model,
                                       long v, long m, Rng& rng);

/// Mixed surfing and searching: each visit is rank-biased with probability
/// (1-x); otherwise it is a random-surf visit landing on page p with
/// probability (1-c)*P(p)/sum(P) + c/n (uniform if all popularities are 0).
VisitAllocation allocate_mixed_visits(std::span<const Page> pages, const RankedList& list,
                                      const RankVisitModel& model, double x, double c,
                                      long v, long m, Rng& rng);

}  // namespace rankpromo
