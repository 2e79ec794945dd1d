#include "fairauc.h"

#include <cstring>
#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "fairauc/common.hpp"
#include "fairauc/dataset.hpp"
#include "fairauc/metrics.hpp"
#include "fairauc/runconfig.hpp"

using json = nlohmann::json;

struct fairauc_dataset {
  fairauc::Dataset ds;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fairauc_status classify(const std::exception& e) {
  using namespace fairauc;
  if (dynamic_cast<const ParseError*>(&e)) return FAIRAUC_ERR_PARSE;
  if (dynamic_cast<const ValueError*>(&e)) return FAIRAUC_ERR_VALUE;
  if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const UsageError*>(&e) ||
      dynamic_cast<const ArgumentError*>(&e))
    return FAIRAUC_ERR_ARGUMENT;
  if (dynamic_cast<const SplitError*>(&e) ||
      dynamic_cast<const EmptyStratumError*>(&e) ||
      dynamic_cast<const EmptyClassError*>(&e) ||
      dynamic_cast<const DegenerateDatasetError*>(&e) ||
      dynamic_cast<const BatchTooSmallError*>(&e) ||
      dynamic_cast<const BatchDegenerateError*>(&e))
    return FAIRAUC_ERR_DATA;
  if (dynamic_cast<const DivergenceError*>(&e) ||
      dynamic_cast<const NumericError*>(&e))
    return FAIRAUC_ERR_NUMERIC;
  if (dynamic_cast<const IoError*>(&e)) return FAIRAUC_ERR_IO;
  return FAIRAUC_ERR_INTERNAL;
}

template <typename Fn>
fairauc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FAIRAUC_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return FAIRAUC_ERR_INTERNAL;
  }
}

fairauc_status require(bool ok, const char* msg) {
  if (ok) return FAIRAUC_OK;
  g_last_error = msg;
  return FAIRAUC_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* fairauc_version(void) { return fairauc::kVersion; }

const char* fairauc_last_error(void) { return g_last_error.c_str(); }

void fairauc_string_free(char* s) { delete[] s; }

fairauc_status fairauc_dataset_load_csv(const char* path, const char* schema_json,
                                        fairauc_dataset** out) {
  if (auto st = require(path && out, "path and out must be non-null")) return st;
  return guarded([&] {
    std::optional<fairauc::ColumnSchema> schema;
    if (schema_json) {
      // reuse the config-schema parser by wrapping in a csv dataset config
      json wrapper = {{"dataset",
                       {{"csv", {{"path", path}, {"schema", json::parse(schema_json)}}}}},
                      {"seeds", {0}}};
      schema = fairauc::parse_run_config(wrapper.dump()).schema;
    }
    auto loaded = fairauc::load_dataset_auto(path, schema);
    *out = new fairauc_dataset{std::move(loaded.dataset)};
  });
}

fairauc_status fairauc_dataset_synth(const char* spec_json, uint64_t seed,
                                     fairauc_dataset** out) {
  if (auto st = require(out != nullptr, "out must be non-null")) return st;
  return guarded([&] {
    json wrapper = {{"dataset", {{"synthetic", spec_json ? json::parse(spec_json)
                                                         : json::object()}}},
                    {"seeds", {0}}};
    wrapper["dataset"]["synthetic"]["seed"] = seed;
    fairauc::RunConfig cfg = fairauc::parse_run_config(wrapper.dump());
    *out = new fairauc_dataset{fairauc::synth_gaussian2d(cfg.gaussian, seed)};
  });
}

fairauc_status fairauc_dataset_write_csv(const fairauc_dataset* ds, const char* path) {
  if (auto st = require(ds && path, "dataset and path must be non-null")) return st;
  return guarded([&] { fairauc::write_csv(ds->ds, path); });
}

fairauc_status fairauc_dataset_split(const fairauc_dataset* ds, double train_frac,
                                     double val_frac, double test_frac, uint64_t seed,
                                     fairauc_dataset** out_train,
                                     fairauc_dataset** out_val,
                                     fairauc_dataset** out_test) {
  if (auto st = require(ds != nullptr, "dataset must be non-null")) return st;
  return guarded([&] {
    fairauc::SplitRatios r{train_frac, val_frac, test_frac};
    r.validate();
    fairauc::SplitResult sr = fairauc::split(ds->ds, r, seed);
    if (out_train) *out_train = new fairauc_dataset{std::move(sr.train)};
    if (out_val) *out_val = new fairauc_dataset{std::move(sr.val)};
    if (out_test) *out_test = new fairauc_dataset{std::move(sr.test)};
  });
}

fairauc_status fairauc_dataset_stats_json(const fairauc_dataset* ds, char** out_json) {
  if (auto st = require(ds && out_json, "dataset and out must be non-null")) return st;
  return guarded([&] {
    fairauc::GroupStats g = fairauc::group_stats(ds->ds);
    json j;
    j["n"] = ds->ds.n;
    j["d"] = ds->ds.d;
    j["stratum_counts"] = {{"a_pos", g.stratum_counts[0]},
                           {"a_neg", g.stratum_counts[1]},
                           {"b_pos", g.stratum_counts[2]},
                           {"b_neg", g.stratum_counts[3]}};
    j["n_pos"] = g.n_pos;
    j["n_neg"] = g.n_neg;
    j["n_a"] = g.n_a;
    j["n_b"] = g.n_b;
    json priors = json::object();
    for (int k = 0; k < 4; ++k)
      priors["p_" + fairauc::GroupPairIndex::name(k)] = g.pair_priors[k];
    j["pair_priors"] = priors;
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

int64_t fairauc_dataset_rows(const fairauc_dataset* ds) { return ds ? ds->ds.n : -1; }

int64_t fairauc_dataset_dim(const fairauc_dataset* ds) { return ds ? ds->ds.d : -1; }

void fairauc_dataset_free(fairauc_dataset* ds) { delete ds; }

fairauc_status fairauc_train(const char* config_json, const char* out_dir,
                             char** out_manifest_json) {
  if (auto st = require(config_json && out_dir, "config and out_dir must be non-null"))
    return st;
  return guarded([&] {
    fairauc::RunConfig cfg = fairauc::parse_run_config(config_json);
    std::string manifest;
    fairauc::run_train(cfg, out_dir, &manifest);
    if (out_manifest_json) *out_manifest_json = dup_string(manifest);
  });
}

fairauc_status fairauc_evaluate(const char* checkpoint_path, const fairauc_dataset* ds,
                                const char* out_dir, int write_svg,
                                char** out_report_json) {
  if (auto st = require(checkpoint_path && ds && out_dir,
                        "checkpoint, dataset and out_dir must be non-null"))
    return st;
  return guarded([&] {
    std::string report =
        fairauc::run_evaluate(checkpoint_path, ds->ds, out_dir, write_svg != 0);
    if (out_report_json) *out_report_json = dup_string(report);
  });
}

fairauc_status fairauc_compare(const char* const* run_dirs, int n_dirs,
                               char** out_csv, char** out_text) {
  if (auto st = require(run_dirs && n_dirs > 0, "run_dirs must be non-empty"))
    return st;
  return guarded([&] {
    std::vector<std::string> dirs(run_dirs, run_dirs + n_dirs);
    fairauc::CompareOutput out = fairauc::run_compare(dirs);
    if (out_csv) *out_csv = dup_string(out.csv);
    if (out_text) *out_text = dup_string(out.text);
  });
}

fairauc_status fairauc_sweep(const char* config_json, const char* out_dir,
                             char** out_csv) {
  if (auto st = require(config_json && out_dir, "config and out_dir must be non-null"))
    return st;
  return guarded([&] {
    std::string csv = fairauc::run_sweep(config_json, out_dir);
    if (out_csv) *out_csv = dup_string(csv);
  });
}

}  // extern "C"
