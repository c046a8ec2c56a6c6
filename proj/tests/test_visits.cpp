#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rankpromo/visits.hpp"

using namespace rankpromo;

namespace {

RankedList identity_list(long n) {
  RankedList list;
  for (long i = 0; i < n; ++i) {
    list.order.push_back(i);
    list.provenance.push_back(Provenance::deterministic);
  }
  return list;
}

}  // namespace

TEST_CASE("single page receives all visits") {
  RankVisitModel model(1, 100.0);
  CHECK(model.f2(1) == doctest::Approx(100.0));
}

TEST_CASE("f2 follows the -3/2 power law") {
  RankVisitModel model(100, 50.0);
  CHECK(model.f2(1) / model.f2(4) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("theta normalizes the rates to v") {
  // Independent sum of i^-1.5 for i = 1..10,000.
  double sum = 0.0;
  for (long i = 1; i <= 10000; ++i) sum += std::pow(static_cast<double>(i), -1.5);
  RankVisitModel model(10000, 100.0);
  CHECK(model.theta() == doctest::Approx(100.0 / sum).epsilon(1e-12));
  CHECK(model.theta() == doctest::Approx(38.57).epsilon(1e-3));
  double total = 0.0;
  for (long i = 1; i <= 10000; ++i) total += model.f2(i);
  CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("f2 rejects ranks outside [1, n]") {
  RankVisitModel model(10, 5.0);
  CHECK_THROWS_AS(model.f2(0), std::out_of_range);
  CHECK_THROWS_AS(model.f2(11), std::out_of_range);
  CHECK(model.f2_real(0.5) == doctest::Approx(model.f2(1)));
}

TEST_CASE("empty and singleton allocations") {
  Rng rng(1);
  RankVisitModel model(3, 10.0);
  auto none = allocate_search_visits(identity_list(3), model, 0, 5, rng);
  CHECK(none.visits.empty());

  RankVisitModel single(1, 10.0);
  auto all = allocate_search_visits(identity_list(1), single, 10, 5, rng);
  CHECK(all.visits.size() == 10);
  for (const auto& v : all.visits) CHECK(v.page == 0);
}

TEST_CASE("rank-1 share concentrates around the f2 ratio") {
  Rng rng(123);
  RankVisitModel model(2, 10.0);
  const long v = 1000000;
  auto alloc = allocate_search_visits(identity_list(2), model, v, 5, rng);
  CHECK(alloc.visits.size() == static_cast<std::size_t>(v));  // conservation
  long first = 0;
  for (const auto& visit : alloc.visits)
    if (visit.rank == 1) ++first;
  double p = 1.0 / (1.0 + std::pow(2.0, -1.5));
  double sigma = std::sqrt(p * (1.0 - p) / v);
  CHECK(std::abs(static_cast<double>(first) / v - p) < 3.0 * sigma);
}

TEST_CASE("pure teleportation is uniform") {
  Rng rng(7);
  const long n = 4;
  std::vector<Page> pages;
  for (long i = 0; i < n; ++i) pages.emplace_back(i, 0.1, 0, 5);
  RankVisitModel model(n, 10.0);
  const long v = 100000;
  auto alloc = allocate_mixed_visits(pages, identity_list(n), model, 1.0, 1.0, v, 5, rng);
  std::vector<long> counts(n, 0);
  for (const auto& visit : alloc.visits) ++counts[static_cast<std::size_t>(visit.page)];
  double p = 1.0 / n;
  double sigma = std::sqrt(p * (1.0 - p) / v);
  for (long c : counts) CHECK(std::abs(static_cast<double>(c) / v - p) < 4.0 * sigma);
}

TEST_CASE("random-surf landing probabilities mix popularity and teleportation") {
  Rng rng(99);
  std::vector<Page> pages;
  pages.emplace_back(0, 0.3, 0, 10);
  pages.emplace_back(1, 0.1, 0, 10);
  for (long u = 0; u < 10; ++u) {
    pages[0].mark_aware(u);  // popularity 0.3
    pages[1].mark_aware(u);  // popularity 0.1
  }
  RankVisitModel model(2, 10.0);
  const long v = 200000;
  auto alloc = allocate_mixed_visits(pages, identity_list(2), model, 1.0, 0.15, v, 10, rng);
  long first = 0;
  for (const auto& visit : alloc.visits)
    if (visit.page == 0) ++first;
  // Direct evaluation of the surf mixture: 0.85*0.75 + 0.15/2.
  double p = 0.7125;
  double sigma = std::sqrt(p * (1.0 - p) / v);
  CHECK(std::abs(static_cast<double>(first) / v - p) < 3.0 * sigma);
}

TEST_CASE("all-zero popularity degrades to uniform without dividing by zero") {
  Rng rng(5);
  std::vector<Page> pages;
  for (long i = 0; i < 5; ++i) pages.emplace_back(i, 0.2, 0, 10);
  RankVisitModel model(5, 10.0);
  auto alloc = allocate_mixed_visits(pages, identity_list(5), model, 1.0, 0.0, 50000, 10, rng);
  CHECK(alloc.visits.size() == 50000);
  std::vector<long> counts(5, 0);
  for (const auto& visit : alloc.visits) ++counts[static_cast<std::size_t>(visit.page)];
  for (long c : counts) CHECK(std::abs(c / 50000.0 - 0.2) < 0.02);
}

TEST_CASE("x=0 mixed allocation behaves like pure search") {
  Rng rng(31);
  std::vector<Page> pages;
  for (long i = 0; i < 3; ++i) pages.emplace_back(i, 0.2, 0, 10);
  RankVisitModel model(3, 10.0);
  const long v = 100000;
  auto alloc = allocate_mixed_visits(pages, identity_list(3), model, 0.0, 0.15, v, 10, rng);
  long first = 0;
  for (const auto& visit : alloc.visits)
    if (visit.rank == 1) ++first;
  double p = model.f2(1) / 10.0;
  double sigma = std::sqrt(p * (1.0 - p) / v);
  CHECK(std::abs(static_cast<double>(first) / v - p) < 3.0 * sigma);
}
