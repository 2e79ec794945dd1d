#ifndef FAIRAUC_SAMPLER_HPP
#define FAIRAUC_SAMPLER_HPP

#include <array>
#include <vector>

#include "fairauc/common.hpp"
#include "fairauc/dataset.hpp"

namespace fairauc {

// Mini-batch as per-stratum index lists into the parent dataset.
// Sizes follow the ceiling rule m^{zy} = ceil(m * n^{zy} / n), so the actual
// batch size can exceed the nominal m; averaging always uses the actual sizes.
struct Batch {
  std::array<std::vector<int>, 4> stratum_rows;  // stratum order
  int m_actual = 0;

  int size(Group z, int label) const {
    return static_cast<int>(stratum_rows[stratum_index(z, label)].size());
  }
  std::vector<int> all_rows() const;
};

Batch stratified_sample(const Dataset& ds, int m, RngState& rng);

// ceil(n/m) independent stratified draws. Batches are fresh draws each call,
// not a partition of the dataset.
std::vector<Batch> epoch_batches(const Dataset& ds, int m, RngState& rng);

// Uniform sampler without replacement over all rows; used by AUCMax and
// EqualAUC. The result is reported in Batch form (rows bucketed by stratum).
Batch uniform_sample(const Dataset& ds, int m, RngState& rng);

}  // namespace fairauc

#endif  // FAIRAUC_SAMPLER_HPP
