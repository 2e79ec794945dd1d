#ifndef FAIRAUC_METRICS_HPP
#define FAIRAUC_METRICS_HPP

#include <string>
#include <vector>

#include "fairauc/common.hpp"
#include "fairauc/dataset.hpp"
#include "fairauc/sampler.hpp"

namespace fairauc {

enum class TiePolicy { Half, Strict };

// Surrogate risks R^l_{z,z'}, pair order. Entries are nonnegative.
using RiskVector = Vec4;
// Group-level AUCs, pair order. Entries in [0,1].
using GroupAucVector = Vec4;

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) .. (1,1), both rates nondecreasing
  double trapezoid_area() const;
  void write_csv(const std::string& path) const;  // header threshold,fpr,tpr
};

struct MetricsReport {
  double overall = 0.0;
  GroupAucVector group_aucs{};
  double min_max = 0.0;
  double bnsp_a = 0.0, bnsp_b = 0.0;
  double bpsn_a = 0.0, bpsn_b = 0.0;
  Vec4 pair_priors{};
  std::array<int, 4> stratum_counts{};
  int n = 0;
  std::string to_json() const;
};

// O(|pos|*|neg|) reference implementation of the pairwise AUC.
double auc_naive(const std::vector<double>& pos, const std::vector<double>& neg,
                 TiePolicy tie = TiePolicy::Half);

// Sort-based rank-statistic path; agrees with auc_naive exactly (both count
// strict wins and ties in integer arithmetic before the final division).
double auc_fast(const std::vector<double>& pos, const std::vector<double>& neg,
                TiePolicy tie = TiePolicy::Half);

GroupAucVector group_aucs(const std::vector<double>& scores, const Dataset& ds,
                          TiePolicy tie = TiePolicy::Half);

double overall_auc(const std::vector<double>& scores, const Dataset& ds,
                   TiePolicy tie = TiePolicy::Half);

// Pairwise logistic surrogate risk per group pair over the full dataset.
RiskVector surrogate_risks(const std::vector<double>& scores, const Dataset& ds);
// Same over a batch; averages use the batch's actual per-stratum sizes.
RiskVector surrogate_risks(const std::vector<double>& batch_scores,
                           const Batch& batch, const Dataset& ds);

RocCurve roc_curve(const std::vector<double>& pos, const std::vector<double>& neg);

struct BnspBpsn {
  double bnsp_a, bnsp_b, bpsn_a, bpsn_b;
};
BnspBpsn bnsp_bpsn(const std::vector<double>& scores, const Dataset& ds,
                   TiePolicy tie = TiePolicy::Half);

double min_max_ratio(const GroupAucVector& g);

MetricsReport full_report(const std::vector<double>& scores, const Dataset& ds,
                          TiePolicy tie = TiePolicy::Half);

// Numerically stable logistic loss l(s) = log(1 + exp(-s)) and its derivative
// l'(s) = -1 / (1 + exp(s)).
double logistic_loss(double s);
double logistic_loss_grad(double s);

}  // namespace fairauc

#endif  // FAIRAUC_METRICS_HPP
