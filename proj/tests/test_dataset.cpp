#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fairauc/dataset.hpp"
#include "fairauc/runconfig.hpp"
#include "fairauc/util.hpp"
#include "helpers.hpp"

using namespace fairauc;
using fairauc::testing::TmpDir;

namespace {

ColumnSchema demo_schema() {
  ColumnSchema s;
  s.label_column = "outcome";
  s.label_positive = "yes";
  s.label_negative = "no";
  s.group_column = "grp";
  s.group_a = "x";
  s.group_b = "y";
  s.categorical_columns = {"color"};
  s.numeric_columns = {"age", "score"};
  s.drop_columns = {"id"};
  return s;
}

const char* kDemoCsv =
    "id,age,color,score,outcome,grp\n"
    "1,30,red,0.5,yes,x\n"
    "2,40,blue,0.25,no,x\n"
    "3,50,red,0.75,yes,y\n"
    "4,20,green,0.1,no,y\n"
    "5,25,blue,0.9,yes,x\n"
    "6,35,red,0.3,no,y\n";

}  // namespace

TEST_CASE("csv loading with schema") {
  TmpDir tmp("dataset_csv");
  write_file(tmp.file("demo.csv"), kDemoCsv);
  LoadResult r = load_csv(tmp.file("demo.csv"), demo_schema());
  const Dataset& ds = r.dataset;
  CHECK(ds.n == 6);
  // 2 numeric + one-hot over {red, blue, green} in first-appearance order
  CHECK(ds.d == 5);
  REQUIRE(r.encoding.categories.size() == 1);
  CHECK(r.encoding.categories[0].first == "color");
  CHECK(r.encoding.categories[0].second ==
        std::vector<std::string>{"red", "blue", "green"});
  CHECK(ds.labels == std::vector<int>{1, -1, 1, -1, 1, -1});
  CHECK(ds.groups[0] == Group::A);
  CHECK(ds.groups[3] == Group::B);
  // columns: categorical one-hots first, then numerics.
  // row 0: color=red -> (1,0,0), age=30, score=0.5
  CHECK(ds.row(0)[0] == 1.0);
  CHECK(ds.row(0)[1] == 0.0);
  CHECK(ds.row(0)[2] == 0.0);
  CHECK(ds.row(0)[3] == 30.0);
  CHECK(ds.row(0)[4] == 0.5);
  // row 3: color=green -> (0,0,1)
  CHECK(ds.row(3)[2] == 1.0);
  CHECK(ds.stratum_count(Group::A, +1) == 2);
  CHECK(ds.stratum_count(Group::B, -1) == 2);
}

TEST_CASE("csv errors") {
  TmpDir tmp("dataset_err");
  SUBCASE("third group value names the offender") {
    write_file(tmp.file("bad.csv"),
               "age,outcome,grp\n1,yes,x\n2,no,z\n");
    ColumnSchema s = demo_schema();
    s.categorical_columns.clear();
    s.numeric_columns = {"age"};
    s.drop_columns.clear();
    try {
      load_csv(tmp.file("bad.csv"), s);
      FAIL("expected ValueError");
    } catch (const ValueError& e) {
      CHECK(std::string(e.what()).find("z") != std::string::npos);
    }
  }
  SUBCASE("unmapped label value") {
    write_file(tmp.file("bad.csv"), "age,outcome,grp\n1,maybe,x\n");
    ColumnSchema s = demo_schema();
    s.categorical_columns.clear();
    s.numeric_columns = {"age"};
    s.drop_columns.clear();
    CHECK_THROWS_AS(load_csv(tmp.file("bad.csv"), s), ValueError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv(tmp.file("nope.csv"), demo_schema()), IoError);
  }
  SUBCASE("non-numeric cell in numeric column") {
    write_file(tmp.file("bad.csv"), "age,outcome,grp\nfoo,yes,x\n");
    ColumnSchema s = demo_schema();
    s.categorical_columns.clear();
    s.numeric_columns = {"age"};
    s.drop_columns.clear();
    CHECK_THROWS_AS(load_csv(tmp.file("bad.csv"), s), ParseError);
  }
  SUBCASE("schema column absent from header") {
    write_file(tmp.file("bad.csv"), "age,outcome\n1,yes\n");
    ColumnSchema s = demo_schema();
    s.categorical_columns.clear();
    s.numeric_columns = {"age"};
    s.drop_columns.clear();
    CHECK_THROWS_AS(load_csv(tmp.file("bad.csv"), s), SchemaError);
  }
}

TEST_CASE("balanced split has exact stratum sizes") {
  Dataset ds = fairauc::testing::make_dataset({1000, 1000, 1000, 1000}, 2, 11);
  SplitResult sr = split(ds, SplitRatios{0.6, 0.2, 0.2}, 5);
  for (int s = 0; s < 4; ++s) {
    CHECK(sr.train.strata[s].size() == 600);
    CHECK(sr.val.strata[s].size() == 200);
    CHECK(sr.test.strata[s].size() == 200);
  }
}

TEST_CASE("split is deterministic and partitions every stratum") {
  Dataset ds = fairauc::testing::make_dataset({1000, 1000, 1000, 1000}, 2, 3);
  SplitResult a = split(ds, SplitRatios{0.6, 0.2, 0.2}, 42);
  SplitResult b = split(ds, SplitRatios{0.6, 0.2, 0.2}, 42);
  CHECK(a.train.features == b.train.features);
  CHECK(a.val.features == b.val.features);
  CHECK(a.test.features == b.test.features);

  // union of the split parts = original rows, pairwise disjoint, per stratum.
  // features are unique with probability 1, so compare the row contents.
  auto row_key = [](const Dataset& d, int i) {
    return std::vector<double>(d.row(i), d.row(i) + d.d);
  };
  std::multiset<std::vector<double>> orig, parts;
  for (int i = 0; i < ds.n; ++i) orig.insert(row_key(ds, i));
  for (const Dataset* part : {&a.train, &a.val, &a.test})
    for (int i = 0; i < part->n; ++i) parts.insert(row_key(*part, i));
  CHECK(orig == parts);
}

TEST_CASE("split rejects degenerate inputs") {
  Dataset tiny = fairauc::testing::make_dataset({2, 2, 2, 2}, 2, 1);
  CHECK_THROWS_AS(split(tiny, SplitRatios{0.6, 0.2, 0.2}, 0), SplitError);
  SplitRatios bad{0.5, 0.2, 0.2};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("gaussian synthetic benchmark shape") {
  Dataset ds = synth_gaussian2d(Gaussian2dSpec::paper(), 1);
  CHECK(ds.n == 4000);
  CHECK(ds.d == 2);
  for (int s = 0; s < 4; ++s) CHECK(ds.strata[s].size() == 1000);
  CHECK(synth_gaussian2d(Gaussian2dSpec::paper(), 1).features == ds.features);
}

TEST_CASE("gaussian cells: tiny variance pins points to the mean") {
  Gaussian2dSpec spec = Gaussian2dSpec::paper();
  for (auto& c : spec.cells) c.variance = 1e-12;
  Dataset ds = synth_gaussian2d(spec, 2);
  for (int s = 0; s < 4; ++s)
    for (int r : ds.strata[s]) {
      CHECK(std::abs(ds.row(r)[0] - spec.cells[s].mean[0]) < 1e-5);
      CHECK(std::abs(ds.row(r)[1] - spec.cells[s].mean[1]) < 1e-5);
    }
}

TEST_CASE("gaussian cells: large-sample mean near the spec mean") {
  Gaussian2dSpec spec = Gaussian2dSpec::paper();
  for (auto& c : spec.cells) c.count = 100000;
  Dataset ds = synth_gaussian2d(spec, 9);
  for (int s = 0; s < 4; ++s) {
    double mx = 0, my = 0;
    for (int r : ds.strata[s]) {
      mx += ds.row(r)[0];
      my += ds.row(r)[1];
    }
    mx /= ds.strata[s].size();
    my /= ds.strata[s].size();
    CHECK(std::abs(mx - spec.cells[s].mean[0]) < 0.02);
    CHECK(std::abs(my - spec.cells[s].mean[1]) < 0.02);
  }
}

TEST_CASE("score synthetic: shapes and range") {
  auto lists = synth_scores(ScoreSynthSpec::figure1(), 3);
  for (const auto& l : lists) {
    CHECK(l.size() == 1000);
    for (double v : l) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("score synthetic: degenerate variance gives logistic(mean)") {
  ScoreSynthSpec spec = ScoreSynthSpec::figure1();
  for (auto& c : spec.cells) {
    c.mean = 0.0;
    c.variance = 1e-16;
  }
  auto lists = synth_scores(spec, 4);
  for (const auto& l : lists)
    for (double v : l) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("group stats: priors") {
  SUBCASE("balanced") {
    Dataset ds = fairauc::testing::make_dataset({100, 100, 100, 100}, 2, 5);
    GroupStats g = group_stats(ds);
    for (double p : g.pair_priors) CHECK(p == 0.25);
  }
  SUBCASE("hand-computed skewed counts") {
    Dataset ds = fairauc::testing::make_dataset({1, 1, 1, 3}, 2, 5);
    GroupStats g = group_stats(ds);
    CHECK(g.pair_priors[0] == 0.125);
    CHECK(g.pair_priors[1] == 0.375);
    CHECK(g.pair_priors[2] == 0.125);
    CHECK(g.pair_priors[3] == 0.375);
  }
  SUBCASE("priors sum to exactly 1") {
    Dataset ds = fairauc::testing::make_dataset({7, 13, 5, 17}, 3, 6);
    GroupStats g = group_stats(ds);
    CHECK(g.pair_priors[0] + g.pair_priors[1] + g.pair_priors[2] +
              g.pair_priors[3] ==
          1.0);
  }
}

TEST_CASE("csv round trip through the synthetic layout") {
  TmpDir tmp("dataset_rt");
  Dataset ds = fairauc::testing::make_dataset({5, 5, 5, 5}, 3, 8);
  write_csv(ds, tmp.file("rt.csv"));
  LoadResult r = load_dataset_auto(tmp.file("rt.csv"), std::nullopt);
  CHECK(r.dataset.n == ds.n);
  CHECK(r.dataset.d == ds.d);
  CHECK(r.dataset.features == ds.features);  // 17-digit floats round trip
  CHECK(r.dataset.labels == ds.labels);
  CHECK(r.dataset.groups == ds.groups);
}

TEST_CASE("standardizer normalizes train columns") {
  Dataset ds = fairauc::testing::make_dataset({50, 50, 50, 50}, 4, 10);
  for (int i = 0; i < ds.n; ++i)
    for (int j = 0; j < ds.d; ++j)
      ds.features[static_cast<std::size_t>(i) * ds.d + j] =
          ds.features[static_cast<std::size_t>(i) * ds.d + j] * (j + 1) + 10 * j;
  Standardizer st = Standardizer::fit(ds);
  st.apply(ds);
  for (int j = 0; j < ds.d; ++j) {
    double m = 0, v = 0;
    for (int i = 0; i < ds.n; ++i) m += ds.row(i)[j];
    m /= ds.n;
    for (int i = 0; i < ds.n; ++i) {
      double c = ds.row(i)[j] - m;
      v += c * c;
    }
    v /= ds.n;
    CHECK(std::abs(m) < 1e-9);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
  }
}
