#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rankpromo/core.hpp"
#include "rankpromo/rng.hpp"

namespace rankpromo {

enum class PromotionRule { none, uniform, selective };

struct RankingConfig {
  PromotionRule rule = PromotionRule::none;
  int k = 1;       ///< ranks better than k are never displaced by promotion
  double r = 0.0;  ///< per-slot probability of drawing from the promotion pool

  /// Throws std::invalid_argument on bad k/r (k checked against n when known).
  void validate(long n = 0) const;
};

enum class Provenance : std::uint8_t { deterministic, promoted };

/// A full result list. `order` holds indices into the page collection the
/// list was built from; `provenance` flags how each slot was filled.
struct RankedList {
  std::vector<long> order;
  std::vector<Provenance> provenance;

  long size() const { return static_cast<long>(order.size()); }
};

/// Descending popularity; ties broken by age (older first), then by id.
RankedList rank_deterministic(std::span<const Page> pages);

/// Promotion pool selection. uniform: each page independently with
/// probability r. selective: exactly the zero-awareness pages.
std::vector<long> select_pool(std::span<const Page> pages, const RankingConfig& config, Rng& rng);

/// Biased-coin merge. The first k-1 slots come from `deterministic`; each
/// later slot takes the head of `pool` with probability r, else the head of
/// `deterministic`; an exhausted list falls through to the other.
/// `pool` must already be randomly permuted and disjoint from `deterministic`.
RankedList merge_promoted(std::vector<long> deterministic, std::vector<long> pool,
                          int k, double r, Rng& rng);

/// One-stop list construction: pool selection, pool shuffle, deterministic
/// ranking of the rest, merge. With rule none this is rank_deterministic.
RankedList build_ranked_list(std::span<const Page> pages, const RankingConfig& config, Rng& rng);

}  // namespace rankpromo
