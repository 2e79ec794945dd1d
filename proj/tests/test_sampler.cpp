#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fairauc/sampler.hpp"
#include "helpers.hpp"

using namespace fairauc;
using fairauc::testing::make_dataset;

TEST_CASE("stratified sizes follow the ceiling rule") {
  // n=100 with n^{a+}=30 -> m^{a+} = ceil(10*30/100) = 3
  Dataset ds = make_dataset({30, 30, 20, 20}, 2, 1);
  RngState rng(7);
  Batch b = stratified_sample(ds, 10, rng);
  CHECK(b.size(Group::A, +1) == 3);
  CHECK(b.size(Group::A, -1) == 3);
  CHECK(b.size(Group::B, +1) == 2);
  CHECK(b.size(Group::B, -1) == 2);
  CHECK(b.m_actual == 10);
}

TEST_CASE("ceiling rule can exceed the nominal batch size") {
  Dataset ds = make_dataset({10, 10, 10, 3}, 2, 1);
  RngState rng(1);
  Batch b = stratified_sample(ds, 10, rng);
  // ceil(10*10/33)=4 (x3), ceil(10*3/33)=1 -> 13 rows
  CHECK(b.m_actual == 13);
}

TEST_CASE("m = n selects every index exactly once") {
  Dataset ds = make_dataset({13, 7, 9, 11}, 2, 2);
  RngState rng(3);
  Batch b = stratified_sample(ds, ds.n, rng);
  CHECK(b.m_actual == ds.n);
  std::set<int> seen;
  for (int s = 0; s < 4; ++s)
    for (int r : b.stratum_rows[s]) {
      CHECK(seen.insert(r).second);  // no duplicates
      // row belongs to its claimed stratum
      CHECK(std::binary_search(ds.strata[s].begin(), ds.strata[s].end(), r));
    }
  CHECK(static_cast<int>(seen.size()) == ds.n);
}

TEST_CASE("within-batch draws are without replacement") {
  Dataset ds = make_dataset({50, 50, 50, 50}, 2, 4);
  RngState rng(9);
  for (int t = 0; t < 100; ++t) {
    Batch b = stratified_sample(ds, 40, rng);
    for (int s = 0; s < 4; ++s) {
      std::set<int> uniq(b.stratum_rows[s].begin(), b.stratum_rows[s].end());
      CHECK(uniq.size() == b.stratum_rows[s].size());
    }
  }
}

TEST_CASE("epoch batch count and determinism") {
  Dataset ds = make_dataset({1000, 1000, 1000, 1000}, 2, 5);
  RngState r1(11), r2(11);
  auto e1 = epoch_batches(ds, 1000, r1);
  auto e2 = epoch_batches(ds, 1000, r2);
  CHECK(e1.size() == 4);  // ceil(4000/1000)
  REQUIRE(e1.size() == e2.size());
  for (std::size_t i = 0; i < e1.size(); ++i)
    for (int s = 0; s < 4; ++s)
      CHECK(e1[i].stratum_rows[s] == e2[i].stratum_rows[s]);
}

TEST_CASE("epoch batches are independent draws, not a partition") {
  // With 2 rows per stratum and batches of half the data, two batches drawing
  // the same row is near-certain over a few epochs.
  Dataset ds = make_dataset({2, 2, 2, 2}, 2, 6);
  RngState rng(13);
  bool collision = false;
  for (int t = 0; t < 50 && !collision; ++t) {
    auto epoch = epoch_batches(ds, 4, rng);
    REQUIRE(epoch.size() == 2);
    for (int s = 0; s < 4 && !collision; ++s)
      for (int r : epoch[0].stratum_rows[s])
        if (std::find(epoch[1].stratum_rows[s].begin(),
                      epoch[1].stratum_rows[s].end(),
                      r) != epoch[1].stratum_rows[s].end())
          collision = true;
  }
  CHECK(collision);
}

TEST_CASE("uniform sampling buckets rows by stratum without replacement") {
  Dataset ds = make_dataset({40, 30, 20, 10}, 2, 7);
  RngState rng(17);
  Batch b = uniform_sample(ds, 25, rng);
  CHECK(b.m_actual == 25);
  std::set<int> seen;
  int total = 0;
  for (int s = 0; s < 4; ++s)
    for (int r : b.stratum_rows[s]) {
      ++total;
      CHECK(seen.insert(r).second);
      CHECK(std::binary_search(ds.strata[s].begin(), ds.strata[s].end(), r));
    }
  CHECK(total == 25);
}

TEST_CASE("uniform sampling is unbiased over rows") {
  Dataset ds = make_dataset({10, 10, 10, 10}, 2, 8);
  RngState rng(19);
  std::vector<int> hits(ds.n, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Batch b = uniform_sample(ds, 8, rng);
    for (int r : b.all_rows()) ++hits[r];
  }
  // each row appears with probability 8/40 = 0.2
  for (int r = 0; r < ds.n; ++r) {
    double p = static_cast<double>(hits[r]) / trials;
    CHECK(p == doctest::Approx(0.2).epsilon(0.1));
  }
}

TEST_CASE("invalid batch sizes are rejected") {
  Dataset ds = make_dataset({5, 5, 5, 5}, 2, 9);
  RngState rng(1);
  CHECK_THROWS_AS(stratified_sample(ds, 0, rng), ArgumentError);
  CHECK_THROWS_AS(stratified_sample(ds, ds.n + 1, rng), ArgumentError);
  CHECK_THROWS_AS(uniform_sample(ds, 0, rng), ArgumentError);
}
