#include "fairauc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fairauc/util.hpp"

namespace fairauc {

using json = nlohmann::json;

void Dataset::rebuild_strata() {
  for (auto& s : strata) s.clear();
  for (int i = 0; i < n; ++i)
    strata[stratum_index(groups[i], labels[i])].push_back(i);
}

void Dataset::require_all_strata() const {
  for (int k = 0; k < 4; ++k) {
    if (strata[k].empty()) {
      Group z = static_cast<Group>(k / 2);
      int y = (k % 2 == 0) ? 1 : -1;
      throw EmptyStratumError(std::string("empty stratum (") + group_char(z) +
                              (y > 0 ? ",+1)" : ",-1)"));
    }
  }
}

void SplitRatios::validate() const {
  if (train <= 0 || val <= 0 || test <= 0)
    throw ArgumentError("split ratios must be positive");
  if (std::abs(train + val + test - 1.0) > 1e-12)
    throw ArgumentError("split ratios must sum to 1");
}

void Gaussian2dSpec::validate() const {
  for (const auto& c : cells) {
    if (c.variance <= 0) throw ArgumentError("gaussian cell variance must be > 0");
    if (c.count < 1) throw ArgumentError("gaussian cell count must be >= 1");
  }
}

Gaussian2dSpec Gaussian2dSpec::paper() {
  Gaussian2dSpec spec;
  spec.cells[stratum_index(Group::A, -1)] = {{-1.0, 1.0}, 0.5, 1000};
  spec.cells[stratum_index(Group::A, +1)] = {{-1.5, 0.5}, 0.5, 1000};
  spec.cells[stratum_index(Group::B, -1)] = {{-2.0, -1.0}, 1.0, 1000};
  spec.cells[stratum_index(Group::B, +1)] = {{1.0, 0.0}, 1.0, 1000};
  return spec;
}

void ScoreSynthSpec::validate() const {
  for (const auto& c : cells) {
    if (c.variance <= 0) throw ArgumentError("score cell variance must be > 0");
    if (c.count < 1) throw ArgumentError("score cell count must be >= 1");
  }
}

ScoreSynthSpec ScoreSynthSpec::figure1() {
  // The source parameter list states mu_{0b} twice; the second entry is read
  // as mu_{1b} = 1.0, the reading consistent with equal inter-group gaps.
  ScoreSynthSpec spec;
  spec.cells[stratum_index(Group::A, -1)] = {0.3, 0.5, 1000};
  spec.cells[stratum_index(Group::A, +1)] = {0.7, 0.5, 1000};
  spec.cells[stratum_index(Group::B, -1)] = {0.0, 0.5, 1000};
  spec.cells[stratum_index(Group::B, +1)] = {1.0, 0.5, 1000};
  return spec;
}

// ---------------------------------------------------------------------------
// CSV parsing (RFC 4180: quoted fields, embedded commas/quotes/newlines).
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  std::size_t i = 0;
  const std::size_t len = text.size();
  auto end_field = [&] { row.push_back(std::move(field)); field.clear(); };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < len) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < len && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      // swallow; \r\n handled at \n
    } else if (c == '\n') {
      end_row();
    } else {
      field.push_back(c);
    }
    ++i;
  }
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

LoadResult load_csv(const std::string& path, const ColumnSchema& schema) {
  auto rows = parse_csv(read_file(path));
  if (rows.empty()) throw ParseError("empty csv: " + path);
  const auto& header = rows[0];

  std::unordered_map<std::string, int> col_of;
  for (std::size_t c = 0; c < header.size(); ++c) col_of[trim(header[c])] = static_cast<int>(c);

  auto find_col = [&](const std::string& name) {
    auto it = col_of.find(name);
    if (it == col_of.end()) throw SchemaError("missing column: " + name);
    return it->second;
  };

  int label_col = find_col(schema.label_column);
  int group_col = find_col(schema.group_column);
  if (label_col == group_col)
    throw SchemaError("label and group columns must be distinct");

  struct Retained {
    std::string name;
    int col;
    bool categorical;
  };
  std::vector<Retained> retained;
  for (const auto& name : schema.categorical_columns)
    retained.push_back({name, find_col(name), true});
  for (const auto& name : schema.numeric_columns)
    retained.push_back({name, find_col(name), false});
  for (const auto& r : retained)
    if (r.col == label_col || r.col == group_col)
      throw SchemaError("feature column overlaps label/group: " + r.name);

  // First pass: collect category vocabularies in first-appearance order and
  // drop rows with missing retained cells.
  std::vector<std::unordered_map<std::string, int>> cat_index(retained.size());
  std::vector<std::vector<std::string>> cat_order(retained.size());
  std::vector<int> kept_rows;
  int dropped = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() == 1 && cells[0].empty()) continue;  // trailing blank line
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(r) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    bool missing = trim(cells[label_col]).empty() || trim(cells[group_col]).empty();
    for (const auto& ret : retained)
      if (trim(cells[ret.col]).empty()) missing = true;
    if (missing) {
      ++dropped;
      continue;
    }
    kept_rows.push_back(static_cast<int>(r));
    for (std::size_t f = 0; f < retained.size(); ++f) {
      if (!retained[f].categorical) continue;
      std::string v = trim(cells[retained[f].col]);
      if (cat_index[f].emplace(v, static_cast<int>(cat_order[f].size())).second)
        cat_order[f].push_back(v);
    }
  }
  if (dropped > 0)
    log(LogLevel::Info, "load_csv: dropped " + std::to_string(dropped) +
                            " rows with missing values");

  EncodingMap enc;
  enc.rows_dropped_missing = dropped;
  std::vector<int> feature_offset(retained.size());
  int d = 0;
  for (std::size_t f = 0; f < retained.size(); ++f) {
    feature_offset[f] = d;
    if (retained[f].categorical) {
      enc.categories.emplace_back(retained[f].name, cat_order[f]);
      for (const auto& cat : cat_order[f])
        enc.feature_names.push_back(retained[f].name + "=" + cat);
      d += static_cast<int>(cat_order[f].size());
    } else {
      enc.feature_names.push_back(retained[f].name);
      d += 1;
    }
  }

  Dataset ds;
  ds.d = d;
  ds.n = static_cast<int>(kept_rows.size());
  ds.features.assign(static_cast<std::size_t>(ds.n) * d, 0.0);
  ds.labels.resize(ds.n);
  ds.groups.resize(ds.n);

  for (int i = 0; i < ds.n; ++i) {
    const auto& cells = rows[kept_rows[i]];
    std::string lv = trim(cells[label_col]);
    if (lv == schema.label_positive) ds.labels[i] = 1;
    else if (lv == schema.label_negative) ds.labels[i] = -1;
    else throw ValueError("label value outside declared mapping: '" + lv + "'");
    std::string gv = trim(cells[group_col]);
    if (gv == schema.group_a) ds.groups[i] = Group::A;
    else if (gv == schema.group_b) ds.groups[i] = Group::B;
    else throw ValueError("group value outside declared mapping: '" + gv + "'");

    double* out = ds.features.data() + static_cast<std::size_t>(i) * d;
    for (std::size_t f = 0; f < retained.size(); ++f) {
      std::string v = trim(cells[retained[f].col]);
      if (retained[f].categorical) {
        out[feature_offset[f] + cat_index[f].at(v)] = 1.0;
      } else {
        char* endp = nullptr;
        double x = std::strtod(v.c_str(), &endp);
        if (endp == v.c_str() || *endp != '\0' || !std::isfinite(x))
          throw ParseError("row " + std::to_string(kept_rows[i]) +
                           ": unparseable numeric cell '" + v + "' in column " +
                           retained[f].name);
        out[feature_offset[f]] = x;
      }
    }
  }
  ds.rebuild_strata();
  return {std::move(ds), std::move(enc)};
}

std::string EncodingMap::to_json() const {
  json j;
  j["rows_dropped_missing"] = rows_dropped_missing;
  j["feature_names"] = feature_names;
  json cats = json::object();
  for (const auto& [col, vals] : categories) cats[col] = vals;
  j["categories"] = cats;
  return j.dump(2) + "\n";
}

Dataset subset(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.d = ds.d;
  out.n = static_cast<int>(rows.size());
  out.features.resize(static_cast<std::size_t>(out.n) * ds.d);
  out.labels.resize(out.n);
  out.groups.resize(out.n);
  for (int i = 0; i < out.n; ++i) {
    std::copy_n(ds.row(rows[i]), ds.d,
                out.features.data() + static_cast<std::size_t>(i) * ds.d);
    out.labels[i] = ds.labels[rows[i]];
    out.groups[i] = ds.groups[rows[i]];
  }
  out.rebuild_strata();
  return out;
}

SplitResult split(const Dataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  if (ds.n < 10) throw SplitError("dataset too small to split (n < 10)");
  for (int k = 0; k < 4; ++k) {
    if (ds.strata[k].size() < 3)
      throw SplitError(std::string("stratum (") +
                       group_char(static_cast<Group>(k / 2)) +
                       (k % 2 == 0 ? ",+1)" : ",-1)") + " has fewer than 3 members");
  }

  std::vector<int> train_rows, val_rows, test_rows;
  RngState rng(seed);
  for (int k = 0; k < 4; ++k) {
    std::vector<int> idx = ds.strata[k];
    RngState sub = rng.substream(static_cast<std::uint64_t>(k));
    std::shuffle(idx.begin(), idx.end(), sub.engine());
    int cnt = static_cast<int>(idx.size());
    int n_val = static_cast<int>(std::floor(ratios.val * cnt));
    int n_test = static_cast<int>(std::floor(ratios.test * cnt));
    int n_train = cnt - n_val - n_test;  // floor(train*cnt) + remainder
    for (int i = 0; i < n_train; ++i) train_rows.push_back(idx[i]);
    for (int i = n_train; i < n_train + n_val; ++i) val_rows.push_back(idx[i]);
    for (int i = n_train + n_val; i < cnt; ++i) test_rows.push_back(idx[i]);
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {subset(ds, train_rows), subset(ds, val_rows), subset(ds, test_rows)};
}

Dataset synth_gaussian2d(const Gaussian2dSpec& spec, std::uint64_t seed) {
  spec.validate();
  Dataset ds;
  ds.d = 2;
  ds.n = 0;
  for (const auto& c : spec.cells) ds.n += c.count;
  ds.features.reserve(static_cast<std::size_t>(ds.n) * 2);
  ds.labels.reserve(ds.n);
  ds.groups.reserve(ds.n);
  RngState rng(seed);
  for (int k = 0; k < 4; ++k) {
    const auto& cell = spec.cells[k];
    RngState sub = rng.substream(static_cast<std::uint64_t>(k));
    std::normal_distribution<double> dist(0.0, std::sqrt(cell.variance));
    Group z = static_cast<Group>(k / 2);
    int y = (k % 2 == 0) ? 1 : -1;
    for (int i = 0; i < cell.count; ++i) {
      ds.features.push_back(cell.mean[0] + dist(sub.engine()));
      ds.features.push_back(cell.mean[1] + dist(sub.engine()));
      ds.labels.push_back(y);
      ds.groups.push_back(z);
    }
  }
  ds.rebuild_strata();
  return ds;
}

std::array<std::vector<double>, 4> synth_scores(const ScoreSynthSpec& spec,
                                                std::uint64_t seed) {
  spec.validate();
  std::array<std::vector<double>, 4> out;
  RngState rng(seed);
  for (int k = 0; k < 4; ++k) {
    const auto& cell = spec.cells[k];
    RngState sub = rng.substream(static_cast<std::uint64_t>(k));
    std::normal_distribution<double> dist(cell.mean, std::sqrt(cell.variance));
    out[k].reserve(cell.count);
    for (int i = 0; i < cell.count; ++i) {
      double s = dist(sub.engine());
      out[k].push_back(1.0 / (1.0 + std::exp(-s)));
    }
  }
  return out;
}

GroupStats group_stats(const Dataset& ds) {
  GroupStats st;
  for (int k = 0; k < 4; ++k)
    st.stratum_counts[k] = static_cast<int>(ds.strata[k].size());
  st.n_pos = st.stratum_counts[0] + st.stratum_counts[2];
  st.n_neg = st.stratum_counts[1] + st.stratum_counts[3];
  st.n_a = st.stratum_counts[0] + st.stratum_counts[1];
  st.n_b = st.stratum_counts[2] + st.stratum_counts[3];
  if (st.n_pos == 0 || st.n_neg == 0)
    throw DegenerateDatasetError("dataset lacks a class");
  const double denom = static_cast<double>(st.n_pos) * st.n_neg;
  for (int k = 0; k < 4; ++k) {
    int npos = ds.stratum_count(GroupPairIndex::pos_group(k), +1);
    int nneg = ds.stratum_count(GroupPairIndex::neg_group(k), -1);
    st.pair_priors[k] = static_cast<double>(npos) * nneg / denom;
  }
  return st;
}

Standardizer Standardizer::fit(const Dataset& train) {
  Standardizer s;
  s.mean.assign(train.d, 0.0);
  s.scale.assign(train.d, 1.0);
  if (train.n == 0) return s;
  for (int i = 0; i < train.n; ++i)
    for (int j = 0; j < train.d; ++j) s.mean[j] += train.row(i)[j];
  for (int j = 0; j < train.d; ++j) s.mean[j] /= train.n;
  std::vector<double> var(train.d, 0.0);
  for (int i = 0; i < train.n; ++i)
    for (int j = 0; j < train.d; ++j) {
      double c = train.row(i)[j] - s.mean[j];
      var[j] += c * c;
    }
  for (int j = 0; j < train.d; ++j) {
    double sd = std::sqrt(var[j] / train.n);
    s.scale[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return s;
}

void Standardizer::apply(Dataset& ds) const {
  if (static_cast<int>(mean.size()) != ds.d)
    throw ArgumentError("standardizer dimension mismatch");
  for (int i = 0; i < ds.n; ++i) {
    double* r = ds.features.data() + static_cast<std::size_t>(i) * ds.d;
    for (int j = 0; j < ds.d; ++j) r[j] = (r[j] - mean[j]) * scale[j];
  }
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ostringstream out;
  for (int j = 0; j < ds.d; ++j) out << "x" << j << ",";
  out << "label,group\n";
  for (int i = 0; i < ds.n; ++i) {
    for (int j = 0; j < ds.d; ++j) out << format_double(ds.row(i)[j]) << ",";
    out << (ds.labels[i] > 0 ? "+1" : "-1") << "," << group_char(ds.groups[i])
        << "\n";
  }
  write_file(path, out.str());
}

}  // namespace fairauc
