#include "fairauc/fairtrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairauc/sampler.hpp"
#include "fairauc/util.hpp"

namespace fairauc {

void SimplexWeights::validate(double tol) const {
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) throw ArgumentError("simplex weight negative or NaN");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ArgumentError("simplex weights must sum to 1");
}

void TrainerConfig::validate(int n_train) const {
  if (iters < 1) throw ArgumentError("iters must be >= 1");
  if (batch_size < 1 || batch_size > n_train)
    throw ArgumentError("batch_size must satisfy 1 <= m <= n_train");
  if (eta_theta <= 0) throw ArgumentError("eta_theta must be > 0");
  if (eta_lambda < 0) throw ArgumentError("eta_lambda must be >= 0");
  if (weight_decay < 0) throw ArgumentError("weight_decay must be >= 0");
  if (eval_every < 1) throw ArgumentError("eval_every must be >= 1");
  if (patience < 1) throw ArgumentError("patience must be >= 1");
}

SimplexWeights exp_weight_update(const SimplexWeights& lambda, const RiskVector& r,
                                 double eta_lambda) {
  for (double x : r)
    if (!std::isfinite(x)) throw ArgumentError("non-finite risk entry");
  double rmax = *std::max_element(r.begin(), r.end());
  SimplexWeights out;
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    out.v[k] = lambda.v[k] == 0.0
                   ? 0.0
                   : lambda.v[k] * std::exp(eta_lambda * (r[k] - rmax));
    sum += out.v[k];
  }
  for (double& x : out.v) x /= sum;
  return out;
}

SimplexWeights lambda_init(const Dataset& ds_train) {
  ds_train.require_all_strata();
  GroupStats st = group_stats(ds_train);
  SimplexWeights out;
  out.v = st.pair_priors;
  return out;
}

double primal_objective(Model& model, const Dataset& ds) {
  auto scores = model.scores_eval(ds);
  RiskVector r = surrogate_risks(scores, ds);
  return *std::max_element(r.begin(), r.end());
}

void Trajectory::write_csv(const std::string& path) const {
  std::ostringstream out;
  out << "step,risk_aa,risk_ab,risk_ba,risk_bb,"
         "lambda_aa,lambda_ab,lambda_ba,lambda_bb,primal,"
         "val_auc_aa,val_auc_ab,val_auc_ba,val_auc_bb,val_overall\n";
  for (const auto& p : points) {
    out << p.step;
    for (double x : p.train_risks) out << "," << format_double(x);
    for (double x : p.lambda) out << "," << format_double(x);
    out << "," << format_double(p.primal);
    for (double x : p.val_group_aucs) out << "," << format_double(x);
    out << "," << format_double(p.val_overall_auc) << "\n";
  }
  write_file(path, out.str());
}

namespace {

constexpr double kDivergenceGuard = 1e6;

void check_divergence(const RiskVector& r, int step) {
  for (double x : r)
    if (!std::isfinite(x) || x > kDivergenceGuard)
      throw DivergenceError("training diverged at step " + std::to_string(step));
}

void sgd_step(Model& model, const std::vector<double>& grad, double eta,
              double weight_decay) {
  for (std::size_t i = 0; i < model.theta.size(); ++i)
    model.theta[i] -= eta * grad[i];
  if (weight_decay > 0.0) {
    // decoupled decay, applied after the gradient step
    const double shrink = 1.0 - eta * weight_decay;
    for (double& t : model.theta) t *= shrink;
  }
}

// Per-epoch substream rule: epoch e draws from rng.substream(e).
struct EpochRng {
  RngState base;
  int epoch = -1;
  RngState current;
  explicit EpochRng(std::uint64_t seed) : base(seed), current(0) {}
  RngState& at_step(int step, int iters_per_epoch) {
    int e = step / iters_per_epoch;
    if (e != epoch) {
      epoch = e;
      current = base.substream(static_cast<std::uint64_t>(e));
    }
    return current;
  }
};

struct EvalSnapshot {
  Model model;
  int step;
};

// Shared evaluation/recording/early-stop state for the three trainers.
// `val_criterion` is minimized; lower is better.
struct TrainLoopState {
  Trajectory trajectory;
  std::vector<EvalSnapshot> snapshots;
  Model best_model;
  int best_step = 0;
  double best_criterion = std::numeric_limits<double>::infinity();
  double best_tiebreak = std::numeric_limits<double>::infinity();
  int stale_checks = 0;
  bool early_stopped = false;

  explicit TrainLoopState(const Model& m0) : best_model(m0) {}

  // Returns true when patience is exhausted.
  bool record(Model& model, int step, const Dataset& train, const Dataset& val,
              const Vec4& lambda, double criterion, double tiebreak,
              const TrainerConfig& cfg) {
    auto train_scores = model.scores_eval(train);
    RiskVector train_r = surrogate_risks(train_scores, train);
    auto val_scores = model.scores_eval(val);
    TrajectoryPoint p;
    p.step = step;
    p.train_risks = train_r;
    p.lambda = lambda;
    p.primal = *std::max_element(train_r.begin(), train_r.end());
    p.val_group_aucs = group_aucs(val_scores, val);
    p.val_overall_auc = overall_auc(val_scores, val);
    trajectory.points.push_back(p);
    if (cfg.output_rule == OutputRule::UniformIterate)
      snapshots.push_back({model, step});
    if (criterion < best_criterion ||
        (criterion == best_criterion && tiebreak < best_tiebreak)) {
      best_criterion = criterion;
      best_tiebreak = tiebreak;
      best_model = model;
      best_step = step;
      stale_checks = 0;
    } else {
      ++stale_checks;
    }
    return cfg.output_rule == OutputRule::EarlyStopBest && stale_checks >= cfg.patience;
  }

  TrainResult finish(Model model, int last_step, const TrainerConfig& cfg) {
    TrainResult res;
    res.trajectory = std::move(trajectory);
    res.total_steps = last_step;
    res.seed = cfg.seed;
    res.early_stopped = early_stopped;
    switch (cfg.output_rule) {
      case OutputRule::EarlyStopBest:
        res.model = std::move(best_model);
        res.checkpoint_step = best_step;
        res.output_rule = "early_stop_best";
        break;
      case OutputRule::UniformIterate: {
        // dedicated substream so batch sampling is unaffected
        RngState pick = RngState(cfg.seed).substream(0x756e6966ULL);
        if (snapshots.empty()) {
          res.model = std::move(model);
          res.checkpoint_step = last_step;
        } else {
          std::size_t i = pick.below(snapshots.size());
          res.model = snapshots[i].model;
          res.checkpoint_step = snapshots[i].step;
        }
        res.output_rule = "uniform_iterate";
        break;
      }
      case OutputRule::Last:
        res.model = std::move(model);
        res.checkpoint_step = last_step;
        res.output_rule = "last";
        break;
    }
    return res;
  }
};

double val_max_group_risk(Model& model, const Dataset& val) {
  auto scores = model.scores_eval(val);
  RiskVector r = surrogate_risks(scores, val);
  return *std::max_element(r.begin(), r.end());
}

// Overall pairwise surrogate risk (all positives vs all negatives).
double overall_surrogate_risk(const std::vector<double>& scores, const Dataset& ds) {
  RiskVector r = surrogate_risks(scores, ds);
  GroupStats st = group_stats(ds);
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += st.pair_priors[k] * r[k];
  return acc;
}

SimplexWeights masked_init(const Dataset& train, GroupMode mode) {
  SimplexWeights lambda = lambda_init(train);
  if (mode == GroupMode::All) return lambda;
  // intra pairs are (a,a),(b,b) = indices 0,3; inter are 1,2
  const bool keep_intra = mode == GroupMode::IntraOnly;
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    const bool intra = (k == 0 || k == 3);
    if (intra != keep_intra) lambda.v[k] = 0.0;
    sum += lambda.v[k];
  }
  for (double& x : lambda.v) x /= sum;  // renormalize over the unmasked support
  return lambda;
}

}  // namespace

TrainResult minimax_fair_auc(const Dataset& train, const Dataset& val, Model model0,
                             const TrainerConfig& cfg) {
  train.require_all_strata();
  val.require_all_strata();
  cfg.validate(train.n);

  SimplexWeights lambda = masked_init(train, cfg.group_mode);
  const int iters_per_epoch = (train.n + cfg.batch_size - 1) / cfg.batch_size;
  const int eval_stride = cfg.eval_every * iters_per_epoch;
  EpochRng rng(cfg.seed);
  TrainLoopState state(model0);
  Model model = std::move(model0);

  int t = 0;
  for (; t < cfg.iters; ++t) {
    RngState& r = rng.at_step(t, iters_per_epoch);
    Batch batch = stratified_sample(train, cfg.batch_size, r);
    RiskGrad rg = weighted_risk_and_grad(model, train, batch, lambda.v, true);
    check_divergence(rg.risks, t);
    sgd_step(model, rg.grad, cfg.eta_theta, cfg.weight_decay);
    // dual step uses the same batch risks (theta_{t-1} on B_t)
    lambda = exp_weight_update(lambda, rg.risks, cfg.eta_lambda);
    if ((t + 1) % eval_stride == 0 || t + 1 == cfg.iters) {
      double crit = val_max_group_risk(model, val);
      if (state.record(model, t + 1, train, val, lambda.v, crit, crit, cfg)) {
        state.early_stopped = true;
        ++t;
        break;
      }
    }
  }
  return state.finish(std::move(model), t, cfg);
}

TrainResult auc_max(const Dataset& train, const Dataset& val, Model model0,
                    const TrainerConfig& cfg) {
  cfg.validate(train.n);
  GroupStats train_stats = group_stats(train);  // also checks both classes
  (void)train_stats;

  const int iters_per_epoch = (train.n + cfg.batch_size - 1) / cfg.batch_size;
  const int eval_stride = cfg.eval_every * iters_per_epoch;
  EpochRng rng(cfg.seed);
  TrainLoopState state(model0);
  Model model = std::move(model0);
  const Vec4 lambda_echo = group_stats(train).pair_priors;

  int t = 0;
  for (; t < cfg.iters; ++t) {
    RngState& r = rng.at_step(t, iters_per_epoch);
    Batch batch;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      batch = uniform_sample(train, cfg.batch_size, r);
      int mp = batch.size(Group::A, +1) + batch.size(Group::B, +1);
      int mn = batch.size(Group::A, -1) + batch.size(Group::B, -1);
      if (mp > 0 && mn > 0) {
        ok = true;
        break;
      }
    }
    if (!ok) throw BatchDegenerateError("could not sample a batch with both classes");

    // Overall batch risk = batch-prior mixture of the pair risks, so the
    // gradient is the weighted gradient with batch-empirical priors.
    const double mp = batch.size(Group::A, +1) + batch.size(Group::B, +1);
    const double mn = batch.size(Group::A, -1) + batch.size(Group::B, -1);
    Vec4 w{};
    for (int k = 0; k < 4; ++k) {
      double bp = batch.size(GroupPairIndex::pos_group(k), +1);
      double bn = batch.size(GroupPairIndex::neg_group(k), -1);
      w[k] = bp * bn / (mp * mn);
    }
    RiskGrad rg = weighted_risk_and_grad(model, train, batch, w, true);
    check_divergence(rg.risks, t);
    sgd_step(model, rg.grad, cfg.eta_theta, cfg.weight_decay);
    if ((t + 1) % eval_stride == 0 || t + 1 == cfg.iters) {
      auto val_scores = model.scores_eval(val);
      double crit = overall_surrogate_risk(val_scores, val);
      if (state.record(model, t + 1, train, val, lambda_echo, crit, crit, cfg)) {
        state.early_stopped = true;
        ++t;
        break;
      }
    }
  }
  return state.finish(std::move(model), t, cfg);
}

TrainResult equal_auc(const Dataset& train, const Dataset& val, Model model0,
                      const TrainerConfig& cfg) {
  train.require_all_strata();
  val.require_all_strata();
  cfg.validate(train.n);

  const Vec4 p = group_stats(train).pair_priors;
  Vec4 lambda{};  // unconstrained equality-constraint multipliers, start at 0
  const int iters_per_epoch = (train.n + cfg.batch_size - 1) / cfg.batch_size;
  const int eval_stride = cfg.eval_every * iters_per_epoch;
  EpochRng rng(cfg.seed);
  TrainLoopState state(model0);
  Model model = std::move(model0);

  int t = 0;
  for (; t < cfg.iters; ++t) {
    RngState& r = rng.at_step(t, iters_per_epoch);
    Batch batch;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      batch = uniform_sample(train, cfg.batch_size, r);
      ok = true;
      for (const auto& s : batch.stratum_rows)
        if (s.empty()) ok = false;
      if (ok) break;
    }
    if (!ok)
      throw BatchDegenerateError("could not sample a batch covering all strata");

    double lambda_sum = lambda[0] + lambda[1] + lambda[2] + lambda[3];
    Vec4 coeff{};
    for (int k = 0; k < 4; ++k) coeff[k] = lambda[k] + (1.0 - lambda_sum) * p[k];
    // coefficients may be negative (ascent direction on a group); permitted
    RiskGrad rg = weighted_risk_and_grad(model, train, batch, coeff, true);
    check_divergence(rg.risks, t);
    sgd_step(model, rg.grad, cfg.eta_theta, cfg.weight_decay);
    double rbar = 0.0;
    for (int k = 0; k < 4; ++k) rbar += p[k] * rg.risks[k];
    for (int k = 0; k < 4; ++k) lambda[k] += cfg.eta_lambda * (rg.risks[k] - rbar);
    for (double x : lambda)
      if (!std::isfinite(x)) throw DivergenceError("dual multipliers diverged");

    if ((t + 1) % eval_stride == 0 || t + 1 == cfg.iters) {
      auto val_scores = model.scores_eval(val);
      RiskVector vr = surrogate_risks(val_scores, val);
      GroupStats vs = group_stats(val);
      double v_overall = 0.0;
      for (int k = 0; k < 4; ++k) v_overall += vs.pair_priors[k] * vr[k];
      double viol = 0.0;
      for (int k = 0; k < 4; ++k) viol = std::max(viol, std::abs(vr[k] - v_overall));
      if (state.record(model, t + 1, train, val, lambda, viol + v_overall,
                       v_overall, cfg)) {
        state.early_stopped = true;
        ++t;
        break;
      }
    }
  }
  return state.finish(std::move(model), t, cfg);
}

TrainResult train(Algorithm alg, const Dataset& train_ds, const Dataset& val_ds,
                  Model model0, const TrainerConfig& cfg) {
  switch (alg) {
    case Algorithm::Minimax:
      return minimax_fair_auc(train_ds, val_ds, std::move(model0), cfg);
    case Algorithm::AucMax:
      return auc_max(train_ds, val_ds, std::move(model0), cfg);
    case Algorithm::EqualAuc:
      return equal_auc(train_ds, val_ds, std::move(model0), cfg);
  }
  throw ArgumentError("unknown algorithm");
}

SeedSweepReport seed_sweep(Algorithm alg, const Dataset& train_ds,
                           const Dataset& val_ds, const Dataset& test_ds,
                           const Model& model0, const TrainerConfig& base_cfg,
                           const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ArgumentError("seed_sweep needs at least one seed");
  SeedSweepReport rep;
  std::vector<std::uint64_t> sorted_seeds = seeds;
  std::sort(sorted_seeds.begin(), sorted_seeds.end());
  for (std::uint64_t s : sorted_seeds) {
    SeedRunOutcome out;
    out.seed = s;
    try {
      TrainerConfig cfg = base_cfg;
      cfg.seed = s;
      TrainResult tr = train(alg, train_ds, val_ds, model0, cfg);
      auto scores = tr.model.scores_eval(test_ds);
      out.test_overall = overall_auc(scores, test_ds);
      out.test_min_max = min_max_ratio(group_aucs(scores, test_ds));
      out.ok = true;
    } catch (const Error& e) {
      out.error = e.what();
      log(LogLevel::Warn, "seed " + std::to_string(s) + " failed: " + out.error);
    }
    rep.runs.push_back(out);
  }
  double so = 0, sm = 0;
  for (const auto& r : rep.runs)
    if (r.ok) {
      ++rep.successes;
      so += r.test_overall;
      sm += r.test_min_max;
    }
  if (rep.successes > 0) {
    rep.overall_mean = so / rep.successes;
    rep.min_max_mean = sm / rep.successes;
    double vo = 0, vm = 0;
    for (const auto& r : rep.runs)
      if (r.ok) {
        vo += (r.test_overall - rep.overall_mean) * (r.test_overall - rep.overall_mean);
        vm += (r.test_min_max - rep.min_max_mean) * (r.test_min_max - rep.min_max_mean);
      }
    rep.overall_std = std::sqrt(vo / rep.successes);
    rep.min_max_std = std::sqrt(vm / rep.successes);
  }
  return rep;
}

}  // namespace fairauc
