#ifndef FAIRAUC_RUNCONFIG_HPP
#define FAIRAUC_RUNCONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "fairauc/dataset.hpp"
#include "fairauc/fairtrain.hpp"
#include "fairauc/model.hpp"

namespace fairauc {

// One JSON document drives every command; see README for the schema.
struct RunConfig {
  // dataset source: exactly one of csv_path / synthetic spec
  bool synthetic = false;
  std::string csv_path;
  ColumnSchema schema;
  std::string synth_spec;  // gaussian2d_paper | custom
  Gaussian2dSpec gaussian;
  std::uint64_t data_seed = 0;

  SplitRatios ratios;
  std::uint64_t split_seed = 0;
  bool standardize = true;

  ModelKind model_kind = ModelKind::Mlp;
  Algorithm algorithm = Algorithm::Minimax;
  TrainerConfig trainer;
  bool eta_lambda_from_kappa = false;
  double kappa = 1.0;  // eta_lambda = kappa * eta_theta when set

  std::vector<std::uint64_t> seeds{0};
  std::string init_from;  // warm-start checkpoint, optional
  std::string output_dir;
  int jobs = 1;  // worker threads over seeds / grid points

  std::string echo_json;  // canonicalized config for manifests
};

RunConfig parse_run_config(const std::string& json_text);  // throws UsageError

struct PreparedData {
  Dataset train;
  Dataset val;
  Dataset test;
  EncodingMap encoding;
};

PreparedData prepare_data(const RunConfig& cfg);

// Loads either a schema-described CSV or the synth format
// (x0..x{d-1},label,group with labels +1/-1 and groups a/b).
LoadResult load_dataset_auto(const std::string& path,
                             const std::optional<ColumnSchema>& schema);

// Trains every seed, writes per-seed artifacts plus manifest.json under
// out_dir. Returns the number of failed seeds; manifest JSON via out param.
int run_train(const RunConfig& cfg, const std::string& out_dir,
              std::string* manifest_json);

// Writes report.json plus six ROC CSVs (and optional SVGs); returns the
// report JSON.
std::string run_evaluate(const std::string& checkpoint_path, const Dataset& ds,
                         const std::string& out_dir, bool svg);

struct CompareOutput {
  std::string csv;
  std::string text;  // aligned table, best cell wrapped in **
};
CompareOutput run_compare(const std::vector<std::string>& run_dirs);

// Cartesian-product hyperparameter sweep; returns the ranked CSV and writes
// sweep.csv + best_config.json under out_dir.
std::string run_sweep(const std::string& config_json, const std::string& out_dir);

}  // namespace fairauc

#endif  // FAIRAUC_RUNCONFIG_HPP
