#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <string>

#include "fairauc.h"
#include "helpers.hpp"

using fairauc::testing::TmpDir;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kTrainConfig = R"({
  "dataset": {"synthetic": {"spec": "custom",
    "a_pos": {"count": 60}, "a_neg": {"count": 60},
    "b_pos": {"count": 60}, "b_neg": {"count": 60},
    "seed": 5}},
  "split": {"train": 0.6, "val": 0.2, "test": 0.2, "seed": 1},
  "model": "mlp",
  "algorithm": "minimax",
  "trainer": {"iters": 40, "batch_size": 24, "eta_theta": 0.05, "kappa": 1.0},
  "seeds": [0]
})";

}  // namespace

TEST_CASE("version and error bookkeeping") {
  CHECK(std::strlen(fairauc_version()) > 0);
  CHECK(fairauc_dataset_load_csv(nullptr, nullptr, nullptr) == FAIRAUC_ERR_ARGUMENT);
  CHECK(std::strlen(fairauc_last_error()) > 0);
}

TEST_CASE("synthetic dataset handle lifecycle") {
  fairauc_dataset* ds = nullptr;
  REQUIRE(fairauc_dataset_synth(nullptr, 3, &ds) == FAIRAUC_OK);
  CHECK(fairauc_dataset_rows(ds) == 4000);
  CHECK(fairauc_dataset_dim(ds) == 2);

  char* stats = nullptr;
  REQUIRE(fairauc_dataset_stats_json(ds, &stats) == FAIRAUC_OK);
  std::string s(stats);
  fairauc_string_free(stats);
  CHECK(s.find("\"p_aa\": 0.25") != std::string::npos);

  fairauc_dataset *tr = nullptr, *va = nullptr, *te = nullptr;
  REQUIRE(fairauc_dataset_split(ds, 0.6, 0.2, 0.2, 7, &tr, &va, &te) == FAIRAUC_OK);
  CHECK(fairauc_dataset_rows(tr) == 2400);
  CHECK(fairauc_dataset_rows(va) == 800);
  CHECK(fairauc_dataset_rows(te) == 800);
  fairauc_dataset_free(tr);
  fairauc_dataset_free(va);
  fairauc_dataset_free(te);
  fairauc_dataset_free(ds);
}

TEST_CASE("csv write and reload round trip") {
  TmpDir tmp("capi_csv");
  fairauc_dataset* ds = nullptr;
  const char* spec = R"({"spec":"custom","a_pos":{"count":8},"a_neg":{"count":8},
                         "b_pos":{"count":8},"b_neg":{"count":8}})";
  REQUIRE(fairauc_dataset_synth(spec, 11, &ds) == FAIRAUC_OK);
  REQUIRE(fairauc_dataset_write_csv(ds, tmp.file("d.csv").c_str()) == FAIRAUC_OK);

  fairauc_dataset* back = nullptr;
  REQUIRE(fairauc_dataset_load_csv(tmp.file("d.csv").c_str(), nullptr, &back) ==
          FAIRAUC_OK);
  CHECK(fairauc_dataset_rows(back) == 32);
  CHECK(fairauc_dataset_dim(back) == 2);
  fairauc_dataset_free(back);
  fairauc_dataset_free(ds);
}

TEST_CASE("csv schema errors surface as statuses with messages") {
  TmpDir tmp("capi_err");
  CHECK(fairauc_dataset_load_csv(tmp.file("missing.csv").c_str(), nullptr, nullptr) ==
        FAIRAUC_ERR_ARGUMENT);  // null out pointer wins first
  fairauc_dataset* ds = nullptr;
  CHECK(fairauc_dataset_load_csv(tmp.file("missing.csv").c_str(), nullptr, &ds) ==
        FAIRAUC_ERR_IO);
  std::ofstream(tmp.file("bad.csv")) << "x0,label,group\n1.0,+1,z\n";
  CHECK(fairauc_dataset_load_csv(tmp.file("bad.csv").c_str(), nullptr, &ds) ==
        FAIRAUC_ERR_VALUE);
  CHECK(std::string(fairauc_last_error()).find("z") != std::string::npos);
}

TEST_CASE("train, evaluate and compare through the C API") {
  TmpDir tmp("capi_train");
  char* manifest = nullptr;
  REQUIRE(fairauc_train(kTrainConfig, tmp.file("run").c_str(), &manifest) ==
          FAIRAUC_OK);
  std::string m(manifest);
  fairauc_string_free(manifest);
  CHECK(m.find("\"library_version\"") != std::string::npos);
  CHECK(m.find("\"config\"") != std::string::npos);  // full echo for replay
  CHECK(m.find("\"ok\": true") != std::string::npos);

  fairauc_dataset* ds = nullptr;
  const char* spec = R"({"spec":"custom","a_pos":{"count":20},"a_neg":{"count":20},
                         "b_pos":{"count":20},"b_neg":{"count":20}})";
  REQUIRE(fairauc_dataset_synth(spec, 9, &ds) == FAIRAUC_OK);
  char* report = nullptr;
  REQUIRE(fairauc_evaluate(tmp.file("run/seed_0/checkpoint.json").c_str(), ds,
                           tmp.file("eval").c_str(), 1, &report) == FAIRAUC_OK);
  std::string rep(report);
  fairauc_string_free(report);
  fairauc_dataset_free(ds);
  CHECK(rep.find("\"overall_auc\"") != std::string::npos);
  CHECK(slurp(tmp.file("eval/roc_overall.csv")).rfind("threshold,fpr,tpr\n", 0) == 0);
  CHECK(slurp(tmp.file("eval/roc_aa.svg")).find("<svg") != std::string::npos);

  // second run for the comparison table
  REQUIRE(fairauc_train(kTrainConfig, tmp.file("run2").c_str(), nullptr) ==
          FAIRAUC_OK);
  std::string d1 = tmp.file("run"), d2 = tmp.file("run2");
  const char* dirs[2] = {d1.c_str(), d2.c_str()};
  char* csv = nullptr;
  char* text = nullptr;
  REQUIRE(fairauc_compare(dirs, 2, &csv, &text) == FAIRAUC_OK);
  CHECK(std::string(csv).rfind("algorithm,", 0) == 0);
  CHECK(std::string(text).find("**") != std::string::npos);
  fairauc_string_free(csv);
  fairauc_string_free(text);
}

TEST_CASE("bad configs are usage errors") {
  TmpDir tmp("capi_badcfg");
  CHECK(fairauc_train("{not json", tmp.file("x").c_str(), nullptr) ==
        FAIRAUC_ERR_ARGUMENT);
  CHECK(fairauc_train(R"({"dataset":{},"seeds":[0]})", tmp.file("x").c_str(),
                      nullptr) == FAIRAUC_ERR_ARGUMENT);
  // invalid eta surfaces the field name
  std::string cfg = kTrainConfig;
  auto pos = cfg.find("0.05");
  cfg.replace(pos, 4, "-1.0");
  CHECK(fairauc_train(cfg.c_str(), tmp.file("x").c_str(), nullptr) ==
        FAIRAUC_ERR_ARGUMENT);
  CHECK(std::string(fairauc_last_error()).find("eta_theta") != std::string::npos);
}

TEST_CASE("sweep ranks the grid") {
  TmpDir tmp("capi_sweep");
  std::string cfg = kTrainConfig;
  cfg.insert(cfg.find_last_of('}'),
             R"(,"grid":{"eta_theta":[0.05,0.01],"kappa":[1.0,0.1]})");
  char* csv = nullptr;
  REQUIRE(fairauc_sweep(cfg.c_str(), tmp.file("sw").c_str(), &csv) == FAIRAUC_OK);
  std::string s(csv);
  fairauc_string_free(csv);
  // header + 4 ranked rows
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
  CHECK(s.rfind("rank,", 0) == 0);
  CHECK(slurp(tmp.file("sw/best_config.json")).find("eta_theta") !=
        std::string::npos);
}
