#include "rankpromo/ranking.hpp"

#include <algorithm>
#include <stdexcept>

namespace rankpromo {

void RankingConfig::validate(long n) const {
  if (k < 1) throw std::invalid_argument("RankingConfig: k must be >= 1");
  if (n > 0 && k > n) throw std::invalid_argument("RankingConfig: k must not exceed n");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("RankingConfig: r must be in [0,1]");
}

RankedList rank_deterministic(std::span<const Page> pages) {
  if (pages.empty()) throw std::invalid_argument("rank_deterministic: no pages");
  std::vector<long> order(pages.size());
  for (std::size_t i = 0; i < pages.size(); ++i) order[i] = static_cast<long>(i);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    const Page& pa = pages[static_cast<std::size_t>(a)];
    const Page& pb = pages[static_cast<std::size_t>(b)];
    double popa = pa.popularity();
    double popb = pb.popularity();
    if (popa != popb) return popa > popb;
    if (pa.birth_day != pb.birth_day) return pa.birth_day < pb.birth_day;  // older first
    return pa.id < pb.id;
  });
  RankedList list;
  list.order = std::move(order);
  list.provenance.assign(pages.size(), Provenance::deterministic);
  return list;
}

std::vector<long> select_pool(std::span<const Page> pages, const RankingConfig& config, Rng& rng) {
  if (config.rule == PromotionRule::none)
    throw std::invalid_argument("select_pool: rule is none");
  config.validate(static_cast<long>(pages.size()));
  std::vector<long> pool;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    bool in = config.rule == PromotionRule::uniform
                  ? u01(rng) < config.r
                  : pages[i].aware_count == 0;
    if (in) pool.push_back(static_cast<long>(i));
  }
  return pool;
}

RankedList merge_promoted(std::vector<long> deterministic, std::vector<long> pool,
                          int k, double r, Rng& rng) {
  if (k < 1) throw std::invalid_argument("merge_promoted: k must be >= 1");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("merge_promoted: r must be in [0,1]");

  const std::size_t n = deterministic.size() + pool.size();
  RankedList list;
  list.order.reserve(n);
  list.provenance.reserve(n);

  std::size_t d = 0;  // head of deterministic
  std::size_t p = 0;  // head of pool
  while (d < deterministic.size() && list.order.size() + 1 < static_cast<std::size_t>(k)) {
    list.order.push_back(deterministic[d++]);
    list.provenance.push_back(Provenance::deterministic);
  }
  while (list.order.size() < n) {
    bool take_pool;
    if (p >= pool.size())
      take_pool = false;
    else if (d >= deterministic.size())
      take_pool = true;
    else
      take_pool = u01(rng) < r;
    if (take_pool) {
      list.order.push_back(pool[p++]);
      list.provenance.push_back(Provenance::promoted);
    } else {
      list.order.push_back(deterministic[d++]);
      list.provenance.push_back(Provenance::deterministic);
    }
  }
  return list;
}

RankedList build_ranked_list(std::span<const Page> pages, const RankingConfig& config, Rng& rng) {
  if (config.rule == PromotionRule::none) return rank_deterministic(pages);
  config.validate(static_cast<long>(pages.size()));

  std::vector<long> pool = select_pool(pages, config, rng);
  std::vector<std::uint8_t> in_pool(pages.size(), 0);
  for (long idx : pool) in_pool[static_cast<std::size_t>(idx)] = 1;

  std::vector<long> rest;
  rest.reserve(pages.size() - pool.size());
  for (std::size_t i = 0; i < pages.size(); ++i)
    if (!in_pool[i]) rest.push_back(static_cast<long>(i));

  std::sort(rest.begin(), rest.end(), [&](long a, long b) {
    const Page& pa = pages[static_cast<std::size_t>(a)];
    const Page& pb = pages[static_cast<std::size_t>(b)];
    double popa = pa.popularity();
    double popb = pb.popularity();
    if (popa != popb) return popa > popb;
    if (pa.birth_day != pb.birth_day) return pa.birth_day < pb.birth_day;
    return pa.id < pb.id;
  });

  shuffle(pool, rng);
  return merge_promoted(std::move(rest), std::move(pool), config.k, config.r, rng);
}

}  // namespace rankpromo
