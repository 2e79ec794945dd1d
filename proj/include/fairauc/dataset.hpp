#ifndef FAIRAUC_DATASET_HPP
#define FAIRAUC_DATASET_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fairauc/common.hpp"

namespace fairauc {

// Immutable after construction; safe to share across concurrent readers.
struct Dataset {
  std::vector<double> features;  // row-major n x d
  std::vector<int> labels;       // +1 / -1
  std::vector<Group> groups;
  std::array<std::vector<int>, 4> strata;  // stratum_index(z, y) -> sorted rows
  int d = 0;
  int n = 0;

  const double* row(int i) const { return features.data() + static_cast<std::size_t>(i) * d; }
  int stratum_count(Group z, int label) const {
    return static_cast<int>(strata[stratum_index(z, label)].size());
  }
  // Recomputes strata from labels/groups; call after filling the raw columns.
  void rebuild_strata();
  void require_all_strata() const;  // throws EmptyStratumError
};

struct ColumnSchema {
  std::string label_column;
  std::string label_positive;  // cell value mapped to +1
  std::string label_negative;  // cell value mapped to -1
  std::string group_column;
  std::string group_a;  // cell value mapped to group a
  std::string group_b;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> drop_columns;
};

// One-hot encoding map: per categorical column, categories in first-appearance
// order. Persisted with run outputs so encodings replay exactly.
struct EncodingMap {
  std::vector<std::pair<std::string, std::vector<std::string>>> categories;
  std::vector<std::string> feature_names;  // expanded width d
  int rows_dropped_missing = 0;
  std::string to_json() const;
};

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
  void validate() const;  // positive, sum to 1 within 1e-12
};

struct GaussianCell {
  std::array<double, 2> mean{0.0, 0.0};
  double variance = 1.0;  // isotropic
  int count = 0;
};

// Indexed by stratum_index(z, y).
struct Gaussian2dSpec {
  std::array<GaussianCell, 4> cells;
  void validate() const;
  static Gaussian2dSpec paper();  // the 2-D synthetic benchmark spec
};

struct ScoreCell {
  double mean = 0.0;
  double variance = 1.0;
  int count = 0;
};

struct ScoreSynthSpec {
  std::array<ScoreCell, 4> cells;
  void validate() const;
  static ScoreSynthSpec figure1();
};

struct GroupStats {
  std::array<int, 4> stratum_counts{};  // n^{zy}, stratum order
  int n_pos = 0;
  int n_neg = 0;
  int n_a = 0;
  int n_b = 0;
  Vec4 pair_priors{};  // p_{z,z'} = n^{z+} n^{z'-} / (n^+ n^-), pair order
};

struct LoadResult {
  Dataset dataset;
  EncodingMap encoding;
};

struct SplitResult {
  Dataset train;
  Dataset val;
  Dataset test;
};

// Per-column standardization parameters, fitted on the training split.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1/stddev, 1 where stddev ~ 0
  static Standardizer fit(const Dataset& train);
  void apply(Dataset& ds) const;
};

LoadResult load_csv(const std::string& path, const ColumnSchema& schema);

SplitResult split(const Dataset& ds, const SplitRatios& ratios, std::uint64_t seed);

Dataset synth_gaussian2d(const Gaussian2dSpec& spec, std::uint64_t seed);

// Per-cell score lists (stratum order), logistic-squashed Gaussian draws.
std::array<std::vector<double>, 4> synth_scores(const ScoreSynthSpec& spec,
                                                std::uint64_t seed);

GroupStats group_stats(const Dataset& ds);

Dataset subset(const Dataset& ds, const std::vector<int>& rows);

// Writes columns x0..x{d-1},label,group with 17-significant-digit floats.
void write_csv(const Dataset& ds, const std::string& path);

}  // namespace fairauc

#endif  // FAIRAUC_DATASET_HPP
