#ifndef FAIRAUC_MODEL_HPP
#define FAIRAUC_MODEL_HPP

#include <string>
#include <vector>

#include "fairauc/common.hpp"
#include "fairauc/dataset.hpp"
#include "fairauc/metrics.hpp"
#include "fairauc/sampler.hpp"

namespace fairauc {

// Output batch-normalization state. gamma=1 and beta=0 are fixed constants,
// never trained.
struct NormState {
  double running_mean = 0.0;
  double running_var = 1.0;
  double momentum = 0.1;
  double epsilon = 1e-5;
};

enum class ModelKind { Mlp, Linear };

enum class ForwardMode { Train, Eval };

// Scoring function f_theta. Mlp: two hidden ReLU layers of width d plus a
// scalar output with batch normalization on the output score. Linear: w.x + b
// with no normalization (analytic-oracle target).
//
// Parameters live in one flat vector so SGD steps, weight decay and
// finite-difference checks are a single loop. Mlp layout:
//   [W1 (d*d row-major) | b1 (d) | W2 (d*d) | b2 (d) | w3 (d) | b3]
// Linear layout: [w (d) | b].
struct Model {
  ModelKind kind = ModelKind::Linear;
  int d = 0;
  std::vector<double> theta;
  NormState norm;

  static Model init_mlp(int d, std::uint64_t seed);  // He-style uniform, zero biases
  static Model init_linear(int d, std::uint64_t seed);

  std::size_t param_count() const { return theta.size(); }

  // Raw (pre-normalization) scores, one per row of X (row-major rows x d).
  std::vector<double> raw_scores(const double* X, int rows) const;

  // Train mode normalizes with the batch statistics (biased variance) and
  // optionally folds them into the running averages; requires rows >= 2.
  // Eval mode uses the stored running statistics and never mutates state.
  // Linear models return raw scores in both modes.
  std::vector<double> forward(const double* X, int rows, ForwardMode mode,
                              bool update_running = false);
  std::vector<double> forward_eval(const double* X, int rows) const;

  std::vector<double> scores_eval(const Dataset& ds) const;
};

// Gradient of the weight^T RiskVector objective on one batch, backpropagated
// through the network and (for Mlp) through the batch-normalization
// statistics. `weights` are arbitrary finite per-pair coefficients; callers
// that require a simplex validate before calling.
struct RiskGrad {
  RiskVector risks{};
  std::vector<double> grad;  // same layout as Model::theta
};

RiskGrad weighted_risk_and_grad(Model& model, const Dataset& ds, const Batch& batch,
                                const Vec4& weights, bool update_running = false);

// Weighted batch risk alone (same forward path), for finite-difference checks.
RiskVector batch_risks(Model& model, const Dataset& ds, const Batch& batch);

void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace fairauc

#endif  // FAIRAUC_MODEL_HPP
