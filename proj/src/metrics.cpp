#include "fairauc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairauc/util.hpp"

namespace fairauc {

using json = nlohmann::json;

double logistic_loss(double s) {
  // log(1 + exp(-s)) without overflow on either tail.
  if (s >= 0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

double logistic_loss_grad(double s) {
  // -1 / (1 + exp(s)) = -sigmoid(-s)
  if (s >= 0) {
    double e = std::exp(-s);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(s));
}

namespace {

struct PairCounts {
  std::uint64_t wins = 0;  // pairs with pos > neg
  std::uint64_t ties = 0;  // pairs with pos == neg
};

void check_nonempty_finite(const std::vector<double>& pos,
                           const std::vector<double>& neg) {
  if (pos.empty() || neg.empty())
    throw EmptyClassError("auc requires nonempty positive and negative lists");
  for (double s : pos)
    if (!std::isfinite(s)) throw NumericError("non-finite positive score");
  for (double s : neg)
    if (!std::isfinite(s)) throw NumericError("non-finite negative score");
}

double auc_from_counts(const PairCounts& c, std::size_t np, std::size_t nn,
                       TiePolicy tie) {
  const double total = static_cast<double>(np) * static_cast<double>(nn);
  if (tie == TiePolicy::Half)
    return (static_cast<double>(c.wins) + 0.5 * static_cast<double>(c.ties)) / total;
  return static_cast<double>(c.wins) / total;
}

PairCounts count_pairs_naive(const std::vector<double>& pos,
                             const std::vector<double>& neg) {
  PairCounts c;
  for (double p : pos)
    for (double q : neg) {
      if (p > q) ++c.wins;
      else if (p == q) ++c.ties;
    }
  return c;
}

// Sorted two-pointer count: O(P log P + N log N).
PairCounts count_pairs_sorted(std::vector<double> pos, std::vector<double> neg) {
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  PairCounts c;
  std::size_t lo = 0, hi = 0;  // neg < p, neg <= p
  for (double p : pos) {
    while (lo < neg.size() && neg[lo] < p) ++lo;
    if (hi < lo) hi = lo;
    while (hi < neg.size() && neg[hi] <= p) ++hi;
    c.wins += lo;
    c.ties += hi - lo;
  }
  return c;
}

std::vector<double> gather(const std::vector<double>& scores,
                           const std::vector<int>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(scores[r]);
  return out;
}

// Pairwise logistic risk mean over pos x neg, long double accumulation.
double pair_risk(const std::vector<double>& pos, const std::vector<double>& neg) {
  long double acc = 0.0L;
  for (double p : pos)
    for (double q : neg) acc += static_cast<long double>(logistic_loss(p - q));
  return static_cast<double>(acc / (static_cast<long double>(pos.size()) *
                                    static_cast<long double>(neg.size())));
}

}  // namespace

double auc_naive(const std::vector<double>& pos, const std::vector<double>& neg,
                 TiePolicy tie) {
  check_nonempty_finite(pos, neg);
  return auc_from_counts(count_pairs_naive(pos, neg), pos.size(), neg.size(), tie);
}

double auc_fast(const std::vector<double>& pos, const std::vector<double>& neg,
                TiePolicy tie) {
  check_nonempty_finite(pos, neg);
  return auc_from_counts(count_pairs_sorted(pos, neg), pos.size(), neg.size(), tie);
}

GroupAucVector group_aucs(const std::vector<double>& scores, const Dataset& ds,
                          TiePolicy tie) {
  if (static_cast<int>(scores.size()) != ds.n)
    throw ArgumentError("scores not aligned with dataset rows");
  ds.require_all_strata();
  GroupAucVector out{};
  for (int k = 0; k < 4; ++k) {
    const auto& pos_rows = ds.strata[stratum_index(GroupPairIndex::pos_group(k), +1)];
    const auto& neg_rows = ds.strata[stratum_index(GroupPairIndex::neg_group(k), -1)];
    out[k] = auc_fast(gather(scores, pos_rows), gather(scores, neg_rows), tie);
  }
  return out;
}

double overall_auc(const std::vector<double>& scores, const Dataset& ds,
                   TiePolicy tie) {
  if (static_cast<int>(scores.size()) != ds.n)
    throw ArgumentError("scores not aligned with dataset rows");
  std::vector<double> pos, neg;
  for (int i = 0; i < ds.n; ++i)
    (ds.labels[i] > 0 ? pos : neg).push_back(scores[i]);
  if (pos.empty() || neg.empty())
    throw DegenerateDatasetError("dataset lacks a class");
  return auc_fast(pos, neg, tie);
}

RiskVector surrogate_risks(const std::vector<double>& scores, const Dataset& ds) {
  if (static_cast<int>(scores.size()) != ds.n)
    throw ArgumentError("scores not aligned with dataset rows");
  ds.require_all_strata();
  RiskVector out{};
  for (int k = 0; k < 4; ++k) {
    const auto& pos_rows = ds.strata[stratum_index(GroupPairIndex::pos_group(k), +1)];
    const auto& neg_rows = ds.strata[stratum_index(GroupPairIndex::neg_group(k), -1)];
    out[k] = pair_risk(gather(scores, pos_rows), gather(scores, neg_rows));
  }
  return out;
}

RiskVector surrogate_risks(const std::vector<double>& batch_scores,
                           const Batch& batch, const Dataset& /*ds*/) {
  // batch_scores are aligned with the concatenation of the batch's stratum
  // lists in stratum order.
  std::array<std::vector<double>, 4> per_stratum;
  std::size_t off = 0;
  for (int k = 0; k < 4; ++k) {
    std::size_t cnt = batch.stratum_rows[k].size();
    if (cnt == 0)
      throw EmptyStratumError("batch stratum " + std::to_string(k) + " is empty");
    per_stratum[k].assign(batch_scores.begin() + off, batch_scores.begin() + off + cnt);
    off += cnt;
  }
  if (off != batch_scores.size())
    throw ArgumentError("batch scores not aligned with batch");
  RiskVector out{};
  for (int k = 0; k < 4; ++k) {
    const auto& pos = per_stratum[stratum_index(GroupPairIndex::pos_group(k), +1)];
    const auto& neg = per_stratum[stratum_index(GroupPairIndex::neg_group(k), -1)];
    out[k] = pair_risk(pos, neg);
  }
  return out;
}

RocCurve roc_curve(const std::vector<double>& pos, const std::vector<double>& neg) {
  check_nonempty_finite(pos, neg);
  struct Tagged {
    double score;
    bool positive;
  };
  std::vector<Tagged> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.score > b.score; });
  RocCurve curve;
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < all.size()) {
    double t = all[i].score;
    // consume the whole tie run at this threshold
    while (i < all.size() && all[i].score == t) {
      if (all[i].positive) ++tp;
      else ++fp;
      ++i;
    }
    curve.points.push_back({t, static_cast<double>(fp) / nn,
                            static_cast<double>(tp) / np});
  }
  curve.points.back().fpr = 1.0;  // exact endpoints
  curve.points.back().tpr = 1.0;
  return curve;
}

double RocCurve::trapezoid_area() const {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) * 0.5;
  return area;
}

void RocCurve::write_csv(const std::string& path) const {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  for (const auto& p : points)
    out << format_double(p.threshold) << "," << format_double(p.fpr) << ","
        << format_double(p.tpr) << "\n";
  write_file(path, out.str());
}

BnspBpsn bnsp_bpsn(const std::vector<double>& scores, const Dataset& ds,
                   TiePolicy tie) {
  if (static_cast<int>(scores.size()) != ds.n)
    throw ArgumentError("scores not aligned with dataset rows");
  std::vector<double> pos_a, pos_b, neg_a, neg_b;
  for (int i = 0; i < ds.n; ++i) {
    auto& dst = ds.labels[i] > 0 ? (ds.groups[i] == Group::A ? pos_a : pos_b)
                                 : (ds.groups[i] == Group::A ? neg_a : neg_b);
    dst.push_back(scores[i]);
  }
  std::vector<double> all_pos = pos_a, all_neg = neg_a;
  all_pos.insert(all_pos.end(), pos_b.begin(), pos_b.end());
  all_neg.insert(all_neg.end(), neg_b.begin(), neg_b.end());
  // entries whose subgroup is absent are NaN rather than an error, so a
  // single-group dataset still reports the present group's values.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BnspBpsn r{};
  r.bnsp_a = pos_a.empty() ? nan : auc_fast(pos_a, all_neg, tie);
  r.bnsp_b = pos_b.empty() ? nan : auc_fast(pos_b, all_neg, tie);
  r.bpsn_a = neg_a.empty() ? nan : auc_fast(all_pos, neg_a, tie);
  r.bpsn_b = neg_b.empty() ? nan : auc_fast(all_pos, neg_b, tie);
  return r;
}

double min_max_ratio(const GroupAucVector& g) {
  double lo = *std::min_element(g.begin(), g.end());
  double hi = *std::max_element(g.begin(), g.end());
  if (hi <= 0) throw DegenerateDatasetError("max group AUC is zero");
  return lo / hi;
}

MetricsReport full_report(const std::vector<double>& scores, const Dataset& ds,
                          TiePolicy tie) {
  MetricsReport rep;
  rep.overall = overall_auc(scores, ds, tie);
  rep.group_aucs = group_aucs(scores, ds, tie);
  rep.min_max = min_max_ratio(rep.group_aucs);
  auto bb = bnsp_bpsn(scores, ds, tie);
  rep.bnsp_a = bb.bnsp_a;
  rep.bnsp_b = bb.bnsp_b;
  rep.bpsn_a = bb.bpsn_a;
  rep.bpsn_b = bb.bpsn_b;
  auto st = group_stats(ds);
  rep.pair_priors = st.pair_priors;
  rep.stratum_counts = st.stratum_counts;
  rep.n = ds.n;
  return rep;
}

std::string MetricsReport::to_json() const {
  json j;
  j["overall_auc"] = overall;
  json g = json::object();
  for (int k = 0; k < 4; ++k) g["auc_" + GroupPairIndex::name(k)] = group_aucs[k];
  j["group_aucs"] = g;
  j["min_max_ratio"] = min_max;
  j["bnsp"] = {{"a", bnsp_a}, {"b", bnsp_b}};
  j["bpsn"] = {{"a", bpsn_a}, {"b", bpsn_b}};
  json priors = json::object();
  for (int k = 0; k < 4; ++k) priors["p_" + GroupPairIndex::name(k)] = pair_priors[k];
  j["pair_priors"] = priors;
  j["stratum_counts"] = {{"a_pos", stratum_counts[0]},
                         {"a_neg", stratum_counts[1]},
                         {"b_pos", stratum_counts[2]},
                         {"b_neg", stratum_counts[3]}};
  j["n"] = n;
  return j.dump(2) + "\n";
}

}  // namespace fairauc
