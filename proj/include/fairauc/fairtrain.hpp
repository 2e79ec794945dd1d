#ifndef FAIRAUC_FAIRTRAIN_HPP
#define FAIRAUC_FAIRTRAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "fairauc/common.hpp"
#include "fairauc/dataset.hpp"
#include "fairauc/metrics.hpp"
#include "fairauc/model.hpp"

namespace fairauc {

// Dual variable on the 4-simplex, pair order.
struct SimplexWeights {
  Vec4 v{0.25, 0.25, 0.25, 0.25};
  void validate(double tol = 1e-9) const;  // sum 1, entries >= 0
};

enum class OutputRule { EarlyStopBest, UniformIterate, Last };
enum class GroupMode { All, IntraOnly, InterOnly };
enum class Algorithm { Minimax, AucMax, EqualAuc };

struct TrainerConfig {
  int iters = 2000;        // T
  int batch_size = 256;    // m
  double eta_theta = 0.05;
  double eta_lambda = 0.05;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  int eval_every = 1;      // epochs between validation checks
  int patience = 20;       // early-stopping checks without improvement
  OutputRule output_rule = OutputRule::EarlyStopBest;
  GroupMode group_mode = GroupMode::All;
  void validate(int n_train) const;
};

struct TrajectoryPoint {
  int step = 0;  // iteration index
  RiskVector train_risks{};        // full-sample train surrogate risks
  GroupAucVector val_group_aucs{};
  Vec4 lambda{};
  double primal = 0.0;             // max full-sample train risk
  double val_overall_auc = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  void write_csv(const std::string& path) const;
};

struct TrainResult {
  Model model;
  Trajectory trajectory;
  std::string output_rule;
  int checkpoint_step = 0;
  int total_steps = 0;
  std::uint64_t seed = 0;
  bool early_stopped = false;
};

// Multiplicative (exponential-weights) dual update, equal to a mirror-ascent
// step under the negative-entropy mirror map. Max-subtraction keeps the
// exponentials bounded; zero entries of lambda stay zero.
SimplexWeights exp_weight_update(const SimplexWeights& lambda, const RiskVector& r,
                                 double eta_lambda);

// lambda_{z,z'} = n^{z+} n^{z'-} / (n^+ n^-), computed over the common
// denominator so the sum is exactly 1.
SimplexWeights lambda_init(const Dataset& ds_train);

// Max over the four full-sample surrogate risks (the linear objective over
// the simplex attains its max at a vertex).
double primal_objective(Model& model, const Dataset& ds);

TrainResult minimax_fair_auc(const Dataset& train, const Dataset& val, Model model0,
                             const TrainerConfig& cfg);

TrainResult auc_max(const Dataset& train, const Dataset& val, Model model0,
                    const TrainerConfig& cfg);

TrainResult equal_auc(const Dataset& train, const Dataset& val, Model model0,
                      const TrainerConfig& cfg);

TrainResult train(Algorithm alg, const Dataset& train_ds, const Dataset& val_ds,
                  Model model0, const TrainerConfig& cfg);

struct SeedRunOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double test_overall = 0.0;
  double test_min_max = 0.0;
};

struct SeedSweepReport {
  std::vector<SeedRunOutcome> runs;
  int successes = 0;
  double overall_mean = 0.0, overall_std = 0.0;
  double min_max_mean = 0.0, min_max_std = 0.0;
};

// Runs the trainer once per seed and aggregates test Overall / Min-Max as
// mean +/- population standard deviation over the successful runs.
SeedSweepReport seed_sweep(Algorithm alg, const Dataset& train_ds,
                           const Dataset& val_ds, const Dataset& test_ds,
                           const Model& model0, const TrainerConfig& base_cfg,
                           const std::vector<std::uint64_t>& seeds);

}  // namespace fairauc

#endif  // FAIRAUC_FAIRTRAIN_HPP
