#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fairauc/metrics.hpp"
#include "fairauc/model.hpp"
#include "fairauc/util.hpp"
#include "helpers.hpp"

using namespace fairauc;
using fairauc::testing::make_dataset;
using fairauc::testing::TmpDir;

namespace {

Batch full_batch(const Dataset& ds) {
  Batch b;
  b.stratum_rows = ds.strata;
  b.m_actual = ds.n;
  return b;
}

double weighted_batch_risk(Model& m, const Dataset& ds, const Batch& b,
                           const Vec4& w) {
  RiskVector r = batch_risks(m, ds, b);
  double out = 0;
  for (int k = 0; k < 4; ++k) out += w[k] * r[k];
  return out;
}

}  // namespace

TEST_CASE("initialization is deterministic with zero biases") {
  Model a = Model::init_mlp(5, 7);
  Model b = Model::init_mlp(5, 7);
  CHECK(a.theta == b.theta);
  CHECK(a.theta != Model::init_mlp(5, 8).theta);

  const int d = 5;
  // biases: b1 after W1(d*d), b2 after W2, b3 last
  for (int j = 0; j < d; ++j) {
    CHECK(a.theta[d * d + j] == 0.0);
    CHECK(a.theta[d * d + d + d * d + j] == 0.0);
  }
  CHECK(a.theta.back() == 0.0);

  Model lin = Model::init_linear(3, 1);
  CHECK(lin.theta.size() == 4);
  CHECK(lin.theta.back() == 0.0);
}

TEST_CASE("hidden-layer weights have variance near 2/d") {
  const int d = 50;
  std::vector<double> w1;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Model m = Model::init_mlp(d, seed);
    w1.insert(w1.end(), m.theta.begin(), m.theta.begin() + d * d);
  }
  REQUIRE(w1.size() == 10000);
  double mean = 0, var = 0;
  for (double v : w1) mean += v;
  mean /= w1.size();
  for (double v : w1) var += (v - mean) * (v - mean);
  var /= w1.size();
  CHECK(std::abs(var - 2.0 / d) < 0.1 * (2.0 / d));
  // uniform bound sqrt(6/d)
  double bound = std::sqrt(6.0 / d);
  CHECK(*std::max_element(w1.begin(), w1.end()) <= bound);
  CHECK(*std::min_element(w1.begin(), w1.end()) >= -bound);
}

TEST_CASE("train-mode output is batch-normalized") {
  Dataset ds = make_dataset({8, 8, 8, 8}, 4, 3);
  Model m = Model::init_mlp(4, 5);
  auto out = m.forward(ds.features.data(), ds.n, ForwardMode::Train);
  double mean = 0, var = 0;
  for (double v : out) mean += v;
  mean /= out.size();
  for (double v : out) var += (v - mean) * (v - mean);
  var /= out.size();
  CHECK(std::abs(mean) < 1e-9);
  CHECK(std::abs(var - 1.0) < 1e-3);  // epsilon in the denominator
}

TEST_CASE("all-zero parameters give all-zero outputs") {
  Dataset ds = make_dataset({4, 4, 4, 4}, 3, 4);
  Model m = Model::init_mlp(3, 0);
  std::fill(m.theta.begin(), m.theta.end(), 0.0);
  auto raw = m.raw_scores(ds.features.data(), ds.n);
  for (double v : raw) CHECK(v == 0.0);
  // equal raw scores: variance guard keeps the normalized output finite zero
  auto out = m.forward(ds.features.data(), ds.n, ForwardMode::Train);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("eval scores are frozen") {
  Dataset ds = make_dataset({6, 6, 6, 6}, 3, 6);
  Model m = Model::init_mlp(3, 2);
  m.forward(ds.features.data(), ds.n, ForwardMode::Train, true);
  auto e1 = m.forward_eval(ds.features.data(), ds.n);
  auto e2 = m.forward_eval(ds.features.data(), ds.n);
  auto e3 = m.scores_eval(ds);
  CHECK(e1 == e2);
  CHECK(e1 == e3);
  CHECK(m.forward(ds.features.data(), ds.n, ForwardMode::Eval) == e1);
}

TEST_CASE("train-mode forward requires at least two rows") {
  Dataset ds = make_dataset({1, 1, 1, 1}, 2, 1);
  Model m = Model::init_mlp(2, 1);
  CHECK_THROWS_AS(m.forward(ds.features.data(), 1, ForwardMode::Train),
                  BatchTooSmallError);
}

TEST_CASE("vertex weights select a single pair's gradient") {
  Dataset ds = make_dataset({6, 6, 6, 6}, 3, 8);
  Batch b = full_batch(ds);
  Model m1 = Model::init_mlp(3, 4);
  Model m2 = m1;
  RiskGrad full = weighted_risk_and_grad(m1, ds, b, {1.0, 0.0, 0.0, 0.0});
  RiskGrad again = weighted_risk_and_grad(m2, ds, b, {1.0, 0.0, 0.0, 0.0});
  CHECK(full.grad == again.grad);  // deterministic
  // risks are reported for all four pairs regardless of the weights
  for (double r : full.risks) CHECK(r > 0.0);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 eng(42);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int t = 0; t < 25; ++t) {
    int d = dim(eng);
    Dataset ds = make_dataset({3, 3, 3, 3}, d, 900 + t);
    Batch b = full_batch(ds);
    Vec4 w{0.1, 0.2, 0.3, 0.4};
    Model m = Model::init_mlp(d, 100 + t);
    // jitter every parameter so no pre-activation sits exactly on a ReLU
    // kink (zero-init biases otherwise pin z2 = 0 for inactive rows, where
    // central differences measure the half-slope)
    std::normal_distribution<double> jitter(0.0, 0.05);
    for (auto& v : m.theta) v += jitter(eng);
    RiskGrad g = weighted_risk_and_grad(m, ds, b, w);
    const double h = 1e-5;
    for (std::size_t j = 0; j < m.theta.size(); j += 7) {  // sampled coordinates
      Model mp = m, mm = m;
      mp.theta[j] += h;
      mm.theta[j] -= h;
      double fd =
          (weighted_batch_risk(mp, ds, b, w) - weighted_batch_risk(mm, ds, b, w)) /
          (2 * h);
      double denom = std::max({std::abs(fd), std::abs(g.grad[j]), 1e-2});
      CHECK(std::abs(fd - g.grad[j]) / denom < 1e-4);
    }
  }
}

TEST_CASE("linear model gradient matches the closed form on singleton strata") {
  std::mt19937_64 eng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = 3;
  Dataset ds = make_dataset({1, 1, 1, 1}, d, 55);
  Batch b = full_batch(ds);
  Model m = Model::init_linear(d, 9);
  for (auto& v : m.theta) v = gauss(eng);
  Vec4 w{0.25, 0.25, 0.25, 0.25};
  RiskGrad g = weighted_risk_and_grad(m, ds, b, w);

  std::vector<double> expect_w(d, 0.0);
  RiskVector expect_r{};
  for (int k = 0; k < 4; ++k) {
    int ip = ds.strata[stratum_index(GroupPairIndex::pos_group(k), +1)][0];
    int in = ds.strata[stratum_index(GroupPairIndex::neg_group(k), -1)][0];
    double margin = 0;
    std::vector<double> diff(d);
    for (int j = 0; j < d; ++j) {
      diff[j] = ds.row(ip)[j] - ds.row(in)[j];
      margin += m.theta[j] * diff[j];
    }
    expect_r[k] = logistic_loss(margin);
    for (int j = 0; j < d; ++j)
      expect_w[j] += w[k] * logistic_loss_grad(margin) * diff[j];
  }
  for (int j = 0; j < d; ++j)
    CHECK(g.grad[j] == doctest::Approx(expect_w[j]).epsilon(1e-12));
  CHECK(g.grad[d] == doctest::Approx(0.0).epsilon(1e-12));  // bias cancels
  for (int k = 0; k < 4; ++k)
    CHECK(g.risks[k] == doctest::Approx(expect_r[k]).epsilon(1e-12));
}

TEST_CASE("nonzero weight on an empty batch stratum is an error") {
  Dataset ds = make_dataset({3, 3, 3, 3}, 2, 5);
  Batch b = full_batch(ds);
  b.stratum_rows[0].clear();
  Model m = Model::init_mlp(2, 3);
  CHECK_THROWS_AS(weighted_risk_and_grad(m, ds, b, {0.25, 0.25, 0.25, 0.25}),
                  EmptyStratumError);
  // zero weight on the empty stratum: pairs touching it report zero risk
  Model m2 = Model::init_mlp(2, 3);
  RiskGrad g = weighted_risk_and_grad(m2, ds, b, {0.0, 0.0, 0.5, 0.5});
  CHECK(g.risks[0] == 0.0);
  CHECK(g.risks[1] == 0.0);
  CHECK(g.risks[2] > 0.0);
}

TEST_CASE("checkpoints round trip bit-exactly") {
  TmpDir tmp("model_ckpt");
  Dataset ds = make_dataset({5, 5, 5, 5}, 4, 7);
  Model m = Model::init_mlp(4, 11);
  m.forward(ds.features.data(), ds.n, ForwardMode::Train, true);  // move stats
  save_checkpoint(m, tmp.file("ck.json"));
  Model r = load_checkpoint(tmp.file("ck.json"));
  CHECK(r.kind == m.kind);
  CHECK(r.d == m.d);
  CHECK(r.theta == m.theta);
  CHECK(r.norm.running_mean == m.norm.running_mean);
  CHECK(r.norm.running_var == m.norm.running_var);
  // identical model scores after reload
  CHECK(r.scores_eval(ds) == m.scores_eval(ds));
  // re-saving produces a byte-identical file
  save_checkpoint(r, tmp.file("ck2.json"));
  CHECK(read_file(tmp.file("ck.json")) == read_file(tmp.file("ck2.json")));
}

TEST_CASE("corrupt checkpoints are rejected") {
  TmpDir tmp("model_ckpt_bad");
  write_file(tmp.file("bad.json"), "{\"format_version\": 99}");
  CHECK_THROWS_AS(load_checkpoint(tmp.file("bad.json")), ParseError);
  write_file(tmp.file("junk.json"), "not json");
  CHECK_THROWS_AS(load_checkpoint(tmp.file("junk.json")), ParseError);
  CHECK_THROWS_AS(load_checkpoint(tmp.file("missing.json")), IoError);
}
