#include "fairauc/model.hpp"

#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "fairauc/util.hpp"

namespace fairauc {

using json = nlohmann::json;

namespace {

// Flat-layout offsets for the Mlp parameter vector.
struct MlpLayout {
  int d;
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return static_cast<std::size_t>(d) * d; }
  std::size_t w2() const { return b1() + d; }
  std::size_t b2() const { return w2() + static_cast<std::size_t>(d) * d; }
  std::size_t w3() const { return b2() + d; }
  std::size_t b3() const { return w3() + d; }
  std::size_t total() const { return b3() + 1; }
};

double uniform_he(std::mt19937_64& eng, int fan_in) {
  // Zero-mean uniform with variance 2/fan_in: U[-sqrt(6/fan_in), sqrt(6/fan_in)].
  const double limit = std::sqrt(6.0 / fan_in);
  std::uniform_real_distribution<double> dist(-limit, limit);
  return dist(eng);
}

}  // namespace

Model Model::init_mlp(int d, std::uint64_t seed) {
  if (d < 1) throw ArgumentError("dimension must be >= 1");
  Model m;
  m.kind = ModelKind::Mlp;
  m.d = d;
  MlpLayout lay{d};
  m.theta.assign(lay.total(), 0.0);
  RngState rng(seed);
  auto& eng = rng.engine();
  for (int i = 0; i < d * d; ++i) m.theta[lay.w1() + i] = uniform_he(eng, d);
  for (int i = 0; i < d * d; ++i) m.theta[lay.w2() + i] = uniform_he(eng, d);
  for (int i = 0; i < d; ++i) m.theta[lay.w3() + i] = uniform_he(eng, d);
  // biases stay zero
  return m;
}

Model Model::init_linear(int d, std::uint64_t seed) {
  if (d < 1) throw ArgumentError("dimension must be >= 1");
  Model m;
  m.kind = ModelKind::Linear;
  m.d = d;
  m.theta.assign(static_cast<std::size_t>(d) + 1, 0.0);
  RngState rng(seed);
  auto& eng = rng.engine();
  for (int i = 0; i < d; ++i) m.theta[i] = uniform_he(eng, d);
  return m;
}

std::vector<double> Model::raw_scores(const double* X, int rows) const {
  std::vector<double> out(rows);
  if (kind == ModelKind::Linear) {
    for (int i = 0; i < rows; ++i) {
      const double* x = X + static_cast<std::size_t>(i) * d;
      double s = theta[d];
      for (int j = 0; j < d; ++j) s += theta[j] * x[j];
      out[i] = s;
    }
    return out;
  }
  MlpLayout lay{d};
  std::vector<double> h1(d), h2(d);
  for (int i = 0; i < rows; ++i) {
    const double* x = X + static_cast<std::size_t>(i) * d;
    for (int u = 0; u < d; ++u) {
      double z = theta[lay.b1() + u];
      const double* w = theta.data() + lay.w1() + static_cast<std::size_t>(u) * d;
      for (int j = 0; j < d; ++j) z += w[j] * x[j];
      h1[u] = z > 0 ? z : 0.0;
    }
    for (int u = 0; u < d; ++u) {
      double z = theta[lay.b2() + u];
      const double* w = theta.data() + lay.w2() + static_cast<std::size_t>(u) * d;
      for (int j = 0; j < d; ++j) z += w[j] * h1[j];
      h2[u] = z > 0 ? z : 0.0;
    }
    double s = theta[lay.b3()];
    for (int j = 0; j < d; ++j) s += theta[lay.w3() + j] * h2[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> Model::forward(const double* X, int rows, ForwardMode mode,
                                   bool update_running) {
  std::vector<double> raw = raw_scores(X, rows);
  if (kind == ModelKind::Linear) return raw;
  if (mode == ForwardMode::Eval) {
    const double inv = 1.0 / std::sqrt(norm.running_var + norm.epsilon);
    for (double& s : raw) s = (s - norm.running_mean) * inv;
    return raw;
  }
  if (rows < 2) throw BatchTooSmallError("train-mode forward needs batch size >= 2");
  double mean = 0.0;
  for (double s : raw) mean += s;
  mean /= rows;
  double var = 0.0;
  for (double s : raw) var += (s - mean) * (s - mean);
  var /= rows;  // biased
  if (update_running) {
    norm.running_mean = (1.0 - norm.momentum) * norm.running_mean + norm.momentum * mean;
    norm.running_var = (1.0 - norm.momentum) * norm.running_var + norm.momentum * var;
  }
  const double inv = 1.0 / std::sqrt(var + norm.epsilon);
  for (double& s : raw) s = (s - mean) * inv;
  return raw;
}

std::vector<double> Model::forward_eval(const double* X, int rows) const {
  std::vector<double> raw = raw_scores(X, rows);
  if (kind == ModelKind::Linear) return raw;
  const double inv = 1.0 / std::sqrt(norm.running_var + norm.epsilon);
  for (double& s : raw) s = (s - norm.running_mean) * inv;
  return raw;
}

std::vector<double> Model::scores_eval(const Dataset& ds) const {
  return forward_eval(ds.features.data(), ds.n);
}

namespace {

struct BatchData {
  std::vector<double> X;            // rows in stratum-concatenation order
  std::array<int, 4> offsets{};     // start of each stratum block
  std::array<int, 4> sizes{};
  int rows = 0;
};

BatchData gather_batch(const Dataset& ds, const Batch& batch) {
  BatchData bd;
  for (int k = 0; k < 4; ++k) {
    bd.offsets[k] = bd.rows;
    bd.sizes[k] = static_cast<int>(batch.stratum_rows[k].size());
    bd.rows += bd.sizes[k];
  }
  bd.X.resize(static_cast<std::size_t>(bd.rows) * ds.d);
  int r = 0;
  for (int k = 0; k < 4; ++k)
    for (int row : batch.stratum_rows[k])
      std::copy_n(ds.row(row), ds.d, bd.X.data() + static_cast<std::size_t>(r++) * ds.d);
  return bd;
}

// Risks and per-score loss gradient from normalized scores.
RiskVector risks_and_score_grad(const std::vector<double>& s, const BatchData& bd,
                                const Vec4& weights, std::vector<double>* g_s) {
  RiskVector risks{};
  for (int k = 0; k < 4; ++k) {
    const int kp = stratum_index(GroupPairIndex::pos_group(k), +1);
    const int kn = stratum_index(GroupPairIndex::neg_group(k), -1);
    const int mp = bd.sizes[kp], mn = bd.sizes[kn];
    if (mp == 0 || mn == 0) {
      // A pair with no support contributes nothing when its weight is zero
      // (the uniform-batch overall objective); otherwise it is an error.
      if (weights[k] == 0.0) {
        risks[k] = 0.0;
        continue;
      }
      throw EmptyStratumError("batch stratum empty for pair " + GroupPairIndex::name(k));
    }
    const double c = weights[k] / (static_cast<double>(mp) * mn);
    long double acc = 0.0L;
    for (int i = 0; i < mp; ++i) {
      const int pi = bd.offsets[kp] + i;
      for (int j = 0; j < mn; ++j) {
        const int nj = bd.offsets[kn] + j;
        const double u = s[pi] - s[nj];
        acc += static_cast<long double>(logistic_loss(u));
        if (g_s && c != 0.0) {
          const double lg = c * logistic_loss_grad(u);
          (*g_s)[pi] += lg;
          (*g_s)[nj] -= lg;
        }
      }
    }
    risks[k] = static_cast<double>(acc / (static_cast<long double>(mp) * mn));
  }
  return risks;
}

}  // namespace

RiskVector batch_risks(Model& model, const Dataset& ds, const Batch& batch) {
  BatchData bd = gather_batch(ds, batch);
  std::vector<double> s = model.forward(bd.X.data(), bd.rows, ForwardMode::Train);
  return risks_and_score_grad(s, bd, Vec4{}, nullptr);
}

RiskGrad weighted_risk_and_grad(Model& model, const Dataset& ds, const Batch& batch,
                                const Vec4& weights, bool update_running) {
  for (double w : weights)
    if (!std::isfinite(w)) throw ArgumentError("non-finite pair weight");

  BatchData bd = gather_batch(ds, batch);
  const int d = model.d;
  const int rows = bd.rows;

  // Forward with caches.
  std::vector<double> raw(rows);
  std::vector<double> z1, h1, z2, h2;  // Mlp caches, rows x d
  MlpLayout lay{d};
  if (model.kind == ModelKind::Mlp) {
    z1.resize(static_cast<std::size_t>(rows) * d);
    h1.resize(z1.size());
    z2.resize(z1.size());
    h2.resize(z1.size());
    for (int i = 0; i < rows; ++i) {
      const double* x = bd.X.data() + static_cast<std::size_t>(i) * d;
      double* z1i = z1.data() + static_cast<std::size_t>(i) * d;
      double* h1i = h1.data() + static_cast<std::size_t>(i) * d;
      double* z2i = z2.data() + static_cast<std::size_t>(i) * d;
      double* h2i = h2.data() + static_cast<std::size_t>(i) * d;
      for (int u = 0; u < d; ++u) {
        double z = model.theta[lay.b1() + u];
        const double* w = model.theta.data() + lay.w1() + static_cast<std::size_t>(u) * d;
        for (int j = 0; j < d; ++j) z += w[j] * x[j];
        z1i[u] = z;
        h1i[u] = z > 0 ? z : 0.0;
      }
      for (int u = 0; u < d; ++u) {
        double z = model.theta[lay.b2() + u];
        const double* w = model.theta.data() + lay.w2() + static_cast<std::size_t>(u) * d;
        for (int j = 0; j < d; ++j) z += w[j] * h1i[j];
        z2i[u] = z;
        h2i[u] = z > 0 ? z : 0.0;
      }
      double s = model.theta[lay.b3()];
      for (int j = 0; j < d; ++j) s += model.theta[lay.w3() + j] * h2i[j];
      raw[i] = s;
    }
  } else {
    raw = model.raw_scores(bd.X.data(), rows);
  }
  for (double v : raw)
    if (!std::isfinite(v)) throw NumericError("non-finite score in forward pass");

  // Output normalization over the whole batch (Mlp only).
  std::vector<double> s = raw;
  double bn_mean = 0.0, bn_inv = 1.0;
  if (model.kind == ModelKind::Mlp) {
    if (rows < 2) throw BatchTooSmallError("train-mode forward needs batch size >= 2");
    for (double v : raw) bn_mean += v;
    bn_mean /= rows;
    double var = 0.0;
    for (double v : raw) var += (v - bn_mean) * (v - bn_mean);
    var /= rows;
    if (update_running) {
      model.norm.running_mean =
          (1.0 - model.norm.momentum) * model.norm.running_mean + model.norm.momentum * bn_mean;
      model.norm.running_var =
          (1.0 - model.norm.momentum) * model.norm.running_var + model.norm.momentum * var;
    }
    bn_inv = 1.0 / std::sqrt(var + model.norm.epsilon);
    for (double& v : s) v = (v - bn_mean) * bn_inv;
  }

  RiskGrad out;
  std::vector<double> g_s(rows, 0.0);
  out.risks = risks_and_score_grad(s, bd, weights, &g_s);

  // Backprop through the batch-normalization statistics:
  // dL/dr_i = inv * (g_i - mean(g) - s_i * mean(g .* s))
  std::vector<double> g_r(rows);
  if (model.kind == ModelKind::Mlp) {
    double g_mean = 0.0, gs_mean = 0.0;
    for (int i = 0; i < rows; ++i) {
      g_mean += g_s[i];
      gs_mean += g_s[i] * s[i];
    }
    g_mean /= rows;
    gs_mean /= rows;
    for (int i = 0; i < rows; ++i)
      g_r[i] = bn_inv * (g_s[i] - g_mean - s[i] * gs_mean);
  } else {
    g_r = g_s;
  }

  out.grad.assign(model.theta.size(), 0.0);
  if (model.kind == ModelKind::Linear) {
    for (int i = 0; i < rows; ++i) {
      const double* x = bd.X.data() + static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) out.grad[j] += g_r[i] * x[j];
      out.grad[d] += g_r[i];
    }
    return out;
  }

  std::vector<double> dh2(d), dz2(d), dh1(d), dz1(d);
  for (int i = 0; i < rows; ++i) {
    const double gr = g_r[i];
    if (gr == 0.0) continue;
    const double* x = bd.X.data() + static_cast<std::size_t>(i) * d;
    const double* z1i = z1.data() + static_cast<std::size_t>(i) * d;
    const double* h1i = h1.data() + static_cast<std::size_t>(i) * d;
    const double* z2i = z2.data() + static_cast<std::size_t>(i) * d;
    const double* h2i = h2.data() + static_cast<std::size_t>(i) * d;
    for (int u = 0; u < d; ++u) {
      out.grad[lay.w3() + u] += gr * h2i[u];
      dh2[u] = gr * model.theta[lay.w3() + u];
      dz2[u] = z2i[u] > 0 ? dh2[u] : 0.0;
    }
    out.grad[lay.b3()] += gr;
    for (int u = 0; u < d; ++u) {
      if (dz2[u] != 0.0) {
        double* gw = out.grad.data() + lay.w2() + static_cast<std::size_t>(u) * d;
        for (int j = 0; j < d; ++j) gw[j] += dz2[u] * h1i[j];
        out.grad[lay.b2() + u] += dz2[u];
      }
    }
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int u = 0; u < d; ++u)
        acc += dz2[u] * model.theta[lay.w2() + static_cast<std::size_t>(u) * d + j];
      dh1[j] = acc;
      dz1[j] = z1i[j] > 0 ? acc : 0.0;
    }
    for (int u = 0; u < d; ++u) {
      if (dz1[u] != 0.0) {
        double* gw = out.grad.data() + lay.w1() + static_cast<std::size_t>(u) * d;
        for (int j = 0; j < d; ++j) gw[j] += dz1[u] * x[j];
        out.grad[lay.b1() + u] += dz1[u];
      }
    }
  }
  return out;
}

void save_checkpoint(const Model& model, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["library_version"] = kVersion;
  j["kind"] = model.kind == ModelKind::Mlp ? "mlp" : "linear";
  j["d"] = model.d;
  if (model.kind == ModelKind::Mlp) {
    MlpLayout lay{model.d};
    j["layout"] = json::array({
        json{{"name", "w1"}, {"shape", {model.d, model.d}}},
        json{{"name", "b1"}, {"shape", {model.d}}},
        json{{"name", "w2"}, {"shape", {model.d, model.d}}},
        json{{"name", "b2"}, {"shape", {model.d}}},
        json{{"name", "w3"}, {"shape", {model.d}}},
        json{{"name", "b3"}, {"shape", {1}}},
    });
    (void)lay;
  } else {
    j["layout"] = json::array({
        json{{"name", "w"}, {"shape", {model.d}}},
        json{{"name", "b"}, {"shape", {1}}},
    });
  }
  j["theta_hex"] = doubles_to_hex(model.theta);
  j["norm"] = {{"running_mean_hex", double_to_hex(model.norm.running_mean)},
               {"running_var_hex", double_to_hex(model.norm.running_var)},
               {"momentum", model.norm.momentum},
               {"epsilon", model.norm.epsilon}};
  write_file_atomic(path, j.dump(2) + "\n");
}

Model load_checkpoint(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  Model m;
  try {
    if (j.at("format_version").get<int>() != 1)
      throw ParseError("unsupported checkpoint format version");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "mlp") m.kind = ModelKind::Mlp;
    else if (kind == "linear") m.kind = ModelKind::Linear;
    else throw ParseError("unknown model kind: " + kind);
    m.d = j.at("d").get<int>();
    m.theta = hex_to_doubles(j.at("theta_hex").get<std::string>());
    const auto& nj = j.at("norm");
    m.norm.running_mean = hex_to_double(nj.at("running_mean_hex").get<std::string>());
    m.norm.running_var = hex_to_double(nj.at("running_var_hex").get<std::string>());
    m.norm.momentum = nj.at("momentum").get<double>();
    m.norm.epsilon = nj.at("epsilon").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  const std::size_t expect = m.kind == ModelKind::Mlp
                                 ? MlpLayout{m.d}.total()
                                 : static_cast<std::size_t>(m.d) + 1;
  if (m.theta.size() != expect) throw ParseError("checkpoint parameter size mismatch");
  return m;
}

}  // namespace fairauc
