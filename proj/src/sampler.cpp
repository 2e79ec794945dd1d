#include "fairauc/sampler.hpp"

#include <algorithm>

namespace fairauc {

std::vector<int> Batch::all_rows() const {
  std::vector<int> out;
  out.reserve(m_actual);
  for (const auto& s : stratum_rows) out.insert(out.end(), s.begin(), s.end());
  return out;
}

namespace {

// Uniform sample of k distinct elements from `pool` via partial Fisher-Yates
// on a scratch copy.
std::vector<int> draw_without_replacement(const std::vector<int>& pool, int k,
                                          RngState& rng) {
  std::vector<int> scratch = pool;
  const int n = static_cast<int>(scratch.size());
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(scratch[i], scratch[j]);
  }
  scratch.resize(k);
  return scratch;
}

}  // namespace

Batch stratified_sample(const Dataset& ds, int m, RngState& rng) {
  if (m < 1 || m > ds.n)
    throw ArgumentError("batch size m must satisfy 1 <= m <= n");
  ds.require_all_strata();
  Batch batch;
  for (int k = 0; k < 4; ++k) {
    const auto& pool = ds.strata[k];
    const std::int64_t n_zy = static_cast<std::int64_t>(pool.size());
    // m^{zy} = ceil(m * n^{zy} / n); m <= n guarantees m^{zy} <= n^{zy}.
    const int m_zy =
        static_cast<int>((static_cast<std::int64_t>(m) * n_zy + ds.n - 1) / ds.n);
    batch.stratum_rows[k] = draw_without_replacement(pool, m_zy, rng);
    batch.m_actual += m_zy;
  }
  return batch;
}

std::vector<Batch> epoch_batches(const Dataset& ds, int m, RngState& rng) {
  if (m < 1 || m > ds.n)
    throw ArgumentError("batch size m must satisfy 1 <= m <= n");
  const int count = (ds.n + m - 1) / m;
  std::vector<Batch> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(stratified_sample(ds, m, rng));
  return out;
}

Batch uniform_sample(const Dataset& ds, int m, RngState& rng) {
  if (m < 1 || m > ds.n)
    throw ArgumentError("batch size m must satisfy 1 <= m <= n");
  std::vector<int> all(ds.n);
  for (int i = 0; i < ds.n; ++i) all[i] = i;
  std::vector<int> rows = draw_without_replacement(all, m, rng);
  Batch batch;
  for (int r : rows) batch.stratum_rows[stratum_index(ds.groups[r], ds.labels[r])].push_back(r);
  for (auto& s : batch.stratum_rows) std::sort(s.begin(), s.end());
  batch.m_actual = m;
  return batch;
}

}  // namespace fairauc
