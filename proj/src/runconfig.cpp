#include "fairauc/runconfig.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "fairauc/util.hpp"

namespace fairauc {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void usage_error(const std::string& msg) { throw UsageError(msg); }

ColumnSchema parse_schema(const json& j) {
  ColumnSchema s;
  try {
    const auto& lbl = j.at("label");
    s.label_column = lbl.at("column").get<std::string>();
    s.label_positive = lbl.at("positive").get<std::string>();
    s.label_negative = lbl.at("negative").get<std::string>();
    const auto& grp = j.at("group");
    s.group_column = grp.at("column").get<std::string>();
    s.group_a = grp.at("a").get<std::string>();
    s.group_b = grp.at("b").get<std::string>();
    if (j.contains("categorical"))
      s.categorical_columns = j.at("categorical").get<std::vector<std::string>>();
    if (j.contains("numeric"))
      s.numeric_columns = j.at("numeric").get<std::vector<std::string>>();
    if (j.contains("drop"))
      s.drop_columns = j.at("drop").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    usage_error(std::string("schema: ") + e.what());
  }
  return s;
}

Gaussian2dSpec parse_gaussian(const json& j) {
  Gaussian2dSpec spec = Gaussian2dSpec::paper();
  static const char* cell_keys[4] = {"a_pos", "a_neg", "b_pos", "b_neg"};
  for (int k = 0; k < 4; ++k) {
    if (!j.contains(cell_keys[k])) continue;
    const auto& c = j.at(cell_keys[k]);
    auto& cell = spec.cells[k];
    if (c.contains("mean")) {
      auto m = c.at("mean").get<std::vector<double>>();
      if (m.size() != 2) usage_error("gaussian cell mean must have 2 entries");
      cell.mean = {m[0], m[1]};
    }
    if (c.contains("variance")) cell.variance = c.at("variance").get<double>();
    if (c.contains("count")) cell.count = c.at("count").get<int>();
  }
  return spec;
}

OutputRule parse_output_rule(const std::string& s) {
  if (s == "early_stop_best") return OutputRule::EarlyStopBest;
  if (s == "uniform_iterate") return OutputRule::UniformIterate;
  if (s == "last") return OutputRule::Last;
  usage_error("trainer.output_rule: unknown value '" + s + "'");
}

GroupMode parse_group_mode(const std::string& s) {
  if (s == "all") return GroupMode::All;
  if (s == "intra_only") return GroupMode::IntraOnly;
  if (s == "inter_only") return GroupMode::InterOnly;
  usage_error("trainer.group_mode: unknown value '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "minimax") return Algorithm::Minimax;
  if (s == "aucmax") return Algorithm::AucMax;
  if (s == "equalauc") return Algorithm::EqualAuc;
  usage_error("algorithm: unknown value '" + s + "'");
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Minimax: return "minimax";
    case Algorithm::AucMax: return "aucmax";
    case Algorithm::EqualAuc: return "equalauc";
  }
  return "?";
}

RunConfig parse_run_config_json(const json& j) {
  RunConfig cfg;
  try {
    const auto& ds = j.at("dataset");
    if (ds.contains("csv") == ds.contains("synthetic"))
      usage_error("dataset: exactly one of 'csv' or 'synthetic' required");
    if (ds.contains("csv")) {
      const auto& c = ds.at("csv");
      cfg.csv_path = c.at("path").get<std::string>();
      if (c.contains("schema")) cfg.schema = parse_schema(c.at("schema"));
      else cfg.schema.label_column = "";  // auto schema for synth-format files
    } else {
      cfg.synthetic = true;
      const auto& s = ds.at("synthetic");
      cfg.synth_spec = s.value("spec", std::string("gaussian2d_paper"));
      if (cfg.synth_spec != "gaussian2d_paper" && cfg.synth_spec != "custom")
        usage_error("dataset.synthetic.spec: unknown spec '" + cfg.synth_spec + "'");
      cfg.gaussian = parse_gaussian(s);
      cfg.data_seed = s.value("seed", 0ULL);
    }
    if (j.contains("split")) {
      const auto& sp = j.at("split");
      cfg.ratios.train = sp.value("train", 0.6);
      cfg.ratios.val = sp.value("val", 0.2);
      cfg.ratios.test = sp.value("test", 0.2);
      cfg.split_seed = sp.value("seed", 0ULL);
    }
    cfg.ratios.validate();
    cfg.standardize = j.value("standardize", true);
    std::string mk = j.value("model", std::string("mlp"));
    if (mk == "mlp") cfg.model_kind = ModelKind::Mlp;
    else if (mk == "linear") cfg.model_kind = ModelKind::Linear;
    else usage_error("model: unknown kind '" + mk + "'");
    cfg.algorithm = parse_algorithm(j.value("algorithm", std::string("minimax")));
    if (j.contains("trainer")) {
      const auto& t = j.at("trainer");
      cfg.trainer.iters = t.value("iters", cfg.trainer.iters);
      cfg.trainer.batch_size = t.value("batch_size", cfg.trainer.batch_size);
      cfg.trainer.eta_theta = t.value("eta_theta", cfg.trainer.eta_theta);
      if (t.contains("eta_lambda")) {
        cfg.trainer.eta_lambda = t.at("eta_lambda").get<double>();
      } else {
        cfg.eta_lambda_from_kappa = true;
        cfg.kappa = t.value("kappa", 1.0);
        cfg.trainer.eta_lambda = cfg.kappa * cfg.trainer.eta_theta;
      }
      cfg.trainer.weight_decay = t.value("weight_decay", 0.0);
      cfg.trainer.eval_every = t.value("eval_every", cfg.trainer.eval_every);
      cfg.trainer.patience = t.value("patience", cfg.trainer.patience);
      cfg.trainer.output_rule =
          parse_output_rule(t.value("output_rule", std::string("early_stop_best")));
      cfg.trainer.group_mode =
          parse_group_mode(t.value("group_mode", std::string("all")));
    }
    if (cfg.trainer.eta_theta <= 0) usage_error("trainer.eta_theta must be > 0");
    if (cfg.trainer.iters < 1) usage_error("trainer.iters must be >= 1");
    if (j.contains("seeds"))
      cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty()) usage_error("seeds: at least one seed required");
    cfg.init_from = j.value("init_from", std::string());
    cfg.output_dir = j.value("output_dir", std::string());
    cfg.jobs = j.value("jobs", 1);
    if (cfg.jobs < 1) usage_error("jobs must be >= 1");
  } catch (const json::exception& e) {
    usage_error(std::string("config: ") + e.what());
  }
  cfg.echo_json = j.dump();
  return cfg;
}

std::string make_svg(const RocCurve& curve) {
  // Minimal 420x420 plot: axes, diagonal, ROC polyline.
  std::ostringstream s;
  auto px = [](double v) { return 10.0 + v * 400.0; };
  auto py = [](double v) { return 410.0 - v * 400.0; };
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"420\">\n";
  s << "<rect x=\"10\" y=\"10\" width=\"400\" height=\"400\" fill=\"none\" "
       "stroke=\"black\"/>\n";
  s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
    << "\" y2=\"" << py(1) << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
  s << "<polyline fill=\"none\" stroke=\"#0057b7\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : curve.points) s << px(p.fpr) << "," << py(p.tpr) << " ";
  s << "\"/>\n</svg>\n";
  return s.str();
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const int workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

struct SeedArtifacts {
  std::uint64_t seed;
  std::string dir;
  bool ok = false;
  std::string error;
  double test_overall = 0.0;
  double test_min_max = 0.0;
};

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    usage_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config_json(j);
}

LoadResult load_dataset_auto(const std::string& path,
                             const std::optional<ColumnSchema>& schema) {
  if (schema && !schema->label_column.empty()) return load_csv(path, *schema);
  // synth format: x0..x{d-1},label,group
  std::string header_line = read_file(path);
  std::size_t eol = header_line.find('\n');
  std::istringstream hs(header_line.substr(0, eol));
  ColumnSchema s;
  s.label_column = "label";
  s.label_positive = "+1";
  s.label_negative = "-1";
  s.group_column = "group";
  s.group_a = "a";
  s.group_b = "b";
  std::string col;
  while (std::getline(hs, col, ',')) {
    while (!col.empty() && (col.back() == '\r' || col.back() == ' ')) col.pop_back();
    if (col != "label" && col != "group") s.numeric_columns.push_back(col);
  }
  return load_csv(path, s);
}

PreparedData prepare_data(const RunConfig& cfg) {
  LoadResult loaded;
  if (cfg.synthetic) {
    loaded.dataset = synth_gaussian2d(cfg.gaussian, cfg.data_seed);
  } else {
    loaded = load_dataset_auto(cfg.csv_path,
                               cfg.schema.label_column.empty()
                                   ? std::nullopt
                                   : std::optional<ColumnSchema>(cfg.schema));
  }
  SplitResult sr = split(loaded.dataset, cfg.ratios, cfg.split_seed);
  PreparedData out{std::move(sr.train), std::move(sr.val), std::move(sr.test),
                   std::move(loaded.encoding)};
  if (cfg.standardize) {
    Standardizer st = Standardizer::fit(out.train);
    st.apply(out.train);
    st.apply(out.val);
    st.apply(out.test);
  }
  return out;
}

int run_train(const RunConfig& cfg, const std::string& out_dir,
              std::string* manifest_json) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  PreparedData data = prepare_data(cfg);
  write_file(out_dir + "/encoding_map.json", data.encoding.to_json());

  auto run_seed = [&](std::uint64_t seed) {
    SeedArtifacts art;
    art.seed = seed;
    art.dir = out_dir + "/seed_" + std::to_string(seed);
    fs::create_directories(art.dir);
    try {
      Model model0 = cfg.init_from.empty()
                         ? (cfg.model_kind == ModelKind::Mlp
                                ? Model::init_mlp(data.train.d, seed)
                                : Model::init_linear(data.train.d, seed))
                         : load_checkpoint(cfg.init_from);
      if (model0.d != data.train.d)
        usage_error("init_from checkpoint dimension " + std::to_string(model0.d) +
                    " does not match dataset dimension " +
                    std::to_string(data.train.d));
      TrainerConfig tc = cfg.trainer;
      tc.seed = seed;
      TrainResult res = train(cfg.algorithm, data.train, data.val,
                              std::move(model0), tc);
      save_checkpoint(res.model, art.dir + "/checkpoint.json");
      res.trajectory.write_csv(art.dir + "/trajectory.csv");

      auto test_scores = res.model.scores_eval(data.test);
      MetricsReport test_rep = full_report(test_scores, data.test);
      auto val_scores = res.model.scores_eval(data.val);
      json summary;
      summary["seed"] = seed;
      summary["algorithm"] = algorithm_name(cfg.algorithm);
      summary["output_rule"] = res.output_rule;
      summary["checkpoint_step"] = res.checkpoint_step;
      summary["total_steps"] = res.total_steps;
      summary["early_stopped"] = res.early_stopped;
      summary["test"] = json::parse(test_rep.to_json());
      summary["val"] = {{"overall_auc", overall_auc(val_scores, data.val)},
                        {"min_max_ratio",
                         min_max_ratio(group_aucs(val_scores, data.val))}};
      write_file(art.dir + "/summary.json", summary.dump(2) + "\n");
      art.ok = true;
      art.test_overall = test_rep.overall;
      art.test_min_max = test_rep.min_max;
    } catch (const Error& e) {
      art.error = e.what();
      log(LogLevel::Warn,
          "seed " + std::to_string(seed) + " failed: " + art.error);
    }
    return art;
  };
  std::vector<SeedArtifacts> artifacts(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), cfg.jobs,
               [&](std::size_t i) { artifacts[i] = run_seed(cfg.seeds[i]); });

  int successes = 0;
  double so = 0, sm = 0;
  for (const auto& a : artifacts)
    if (a.ok) {
      ++successes;
      so += a.test_overall;
      sm += a.test_min_max;
    }
  json agg;
  agg["successes"] = successes;
  agg["total"] = static_cast<int>(artifacts.size());
  if (successes > 0) {
    double om = so / successes, mm = sm / successes;
    double vo = 0, vm = 0;
    for (const auto& a : artifacts)
      if (a.ok) {
        vo += (a.test_overall - om) * (a.test_overall - om);
        vm += (a.test_min_max - mm) * (a.test_min_max - mm);
      }
    agg["overall_mean"] = om;
    agg["overall_std"] = std::sqrt(vo / successes);
    agg["min_max_mean"] = mm;
    agg["min_max_std"] = std::sqrt(vm / successes);
  }

  const auto t1 = std::chrono::steady_clock::now();
  json manifest;
  manifest["library_version"] = kVersion;
  manifest["algorithm"] = algorithm_name(cfg.algorithm);
  manifest["config"] = json::parse(cfg.echo_json);
  manifest["init_from"] = cfg.init_from;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  json seeds = json::array();
  for (const auto& a : artifacts) {
    json s;
    s["seed"] = a.seed;
    s["dir"] = a.dir;
    s["ok"] = a.ok;
    if (!a.ok) s["error"] = a.error;
    s["checkpoint"] = a.dir + "/checkpoint.json";
    s["trajectory"] = a.dir + "/trajectory.csv";
    s["summary"] = a.dir + "/summary.json";
    seeds.push_back(s);
  }
  manifest["seeds"] = seeds;
  manifest["aggregate"] = agg;
  std::string mtext = manifest.dump(2) + "\n";
  write_file_atomic(out_dir + "/manifest.json", mtext);
  if (manifest_json) *manifest_json = mtext;
  return static_cast<int>(artifacts.size()) - successes;
}

std::string run_evaluate(const std::string& checkpoint_path, const Dataset& ds,
                         const std::string& out_dir, bool svg) {
  Model model = load_checkpoint(checkpoint_path);
  if (model.d != ds.d)
    usage_error("checkpoint dimension " + std::to_string(model.d) +
                " does not match dataset dimension " + std::to_string(ds.d));
  fs::create_directories(out_dir);
  auto scores = model.scores_eval(ds);
  MetricsReport rep = full_report(scores, ds);

  auto scores_of = [&](Group z, int y) {
    std::vector<double> out;
    for (int r : ds.strata[stratum_index(z, y)]) out.push_back(scores[r]);
    return out;
  };
  std::vector<double> pos_all, neg_all;
  for (int i = 0; i < ds.n; ++i)
    (ds.labels[i] > 0 ? pos_all : neg_all).push_back(scores[i]);

  auto emit = [&](const std::string& name, const RocCurve& curve) {
    curve.write_csv(out_dir + "/roc_" + name + ".csv");
    if (svg) write_file(out_dir + "/roc_" + name + ".svg", make_svg(curve));
  };
  emit("overall", roc_curve(pos_all, neg_all));
  for (int k = 0; k < 4; ++k) {
    RocCurve c = roc_curve(scores_of(GroupPairIndex::pos_group(k), +1),
                           scores_of(GroupPairIndex::neg_group(k), -1));
    // write-time cross-check against the reported AUCs
    if (std::abs(c.trapezoid_area() - rep.group_aucs[k]) > 1e-10)
      throw NumericError("ROC area disagrees with group AUC for pair " +
                         GroupPairIndex::name(k));
    emit(GroupPairIndex::name(k), c);
  }
  // pooled-by-group: each group's rows against the full complement-class pool
  {
    std::ostringstream out;
    out << "group,threshold,fpr,tpr\n";
    for (Group z : {Group::A, Group::B}) {
      RocCurve c = roc_curve(scores_of(z, +1), neg_all);
      for (const auto& p : c.points)
        out << group_char(z) << "," << format_double(p.threshold) << ","
            << format_double(p.fpr) << "," << format_double(p.tpr) << "\n";
    }
    write_file(out_dir + "/roc_pooled_by_group.csv", out.str());
  }

  std::string report = rep.to_json();
  write_file(out_dir + "/report.json", report);
  return report;
}

CompareOutput run_compare(const std::vector<std::string>& run_dirs) {
  if (run_dirs.size() < 2) usage_error("compare requires at least 2 run dirs");
  struct Row {
    std::string alg;
    double om, os, mm, ms;
    int successes;
  };
  std::vector<Row> rows;
  for (const auto& dir : run_dirs) {
    const std::string mp = dir + "/manifest.json";
    if (!fs::exists(mp)) usage_error("missing manifest in " + dir);
    json m = json::parse(read_file(mp));
    const auto& agg = m.at("aggregate");
    if (agg.value("successes", 0) == 0)
      usage_error("no successful seeds in " + dir);
    rows.push_back({m.at("algorithm").get<std::string>(),
                    agg.at("overall_mean").get<double>(),
                    agg.at("overall_std").get<double>(),
                    agg.at("min_max_mean").get<double>(),
                    agg.at("min_max_std").get<double>(),
                    agg.at("successes").get<int>()});
  }
  std::size_t best_o = 0, best_m = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].om > rows[best_o].om) best_o = i;
    if (rows[i].mm > rows[best_m].mm) best_m = i;
  }
  char buf[64];
  auto fmt = [&buf](double mean, double sd) {
    std::snprintf(buf, sizeof(buf), "%.3f+/-%.3f", mean, sd);
    return std::string(buf);
  };
  CompareOutput out;
  std::ostringstream csv;
  csv << "algorithm,overall_mean,overall_std,min_max_mean,min_max_std,seeds\n";
  for (const auto& r : rows)
    csv << r.alg << "," << format_double(r.om) << "," << format_double(r.os)
        << "," << format_double(r.mm) << "," << format_double(r.ms) << ","
        << r.successes << "\n";
  out.csv = csv.str();
  std::ostringstream txt;
  txt << "algorithm    overall            min/max\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string o = fmt(rows[i].om, rows[i].os);
    std::string m = fmt(rows[i].mm, rows[i].ms);
    if (i == best_o) o = "**" + o + "**";
    if (i == best_m) m = "**" + m + "**";
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %-18s %-18s\n", rows[i].alg.c_str(),
                  o.c_str(), m.c_str());
    txt << line;
  }
  out.text = txt.str();
  return out;
}

std::string run_sweep(const std::string& config_json, const std::string& out_dir) {
  json j;
  try {
    j = json::parse(config_json);
  } catch (const json::exception& e) {
    usage_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.contains("grid")) usage_error("sweep config needs a 'grid' object");
  const json grid = j.at("grid");
  json base = j;
  base.erase("grid");

  auto axis = [&](const char* key, std::vector<double> dflt) {
    if (!grid.contains(key)) return dflt;
    auto v = grid.at(key).get<std::vector<double>>();
    if (v.empty()) usage_error(std::string("grid.") + key + " is empty");
    return v;
  };
  RunConfig probe = parse_run_config_json(base);
  std::vector<double> etas = axis("eta_theta", {probe.trainer.eta_theta});
  std::vector<double> kappas = axis("kappa", {probe.eta_lambda_from_kappa
                                                  ? probe.kappa
                                                  : probe.trainer.eta_lambda /
                                                        probe.trainer.eta_theta});
  std::vector<double> batches = axis("batch_size",
                                     {static_cast<double>(probe.trainer.batch_size)});
  std::vector<double> decays = axis("weight_decay", {probe.trainer.weight_decay});

  PreparedData data = prepare_data(probe);
  fs::create_directories(out_dir);

  struct Entry {
    double eta, kappa, batch, decay;
    double val_overall, val_min_auc, val_min_max;
    double criterion;
    bool eligible = true;
  };
  struct Combo {
    double eta, kappa, batch, decay;
  };
  std::vector<Combo> combos;
  for (double eta : etas)
    for (double kap : kappas)
      for (double bs : batches)
        for (double wd : decays) combos.push_back({eta, kap, bs, wd});

  std::vector<std::optional<Entry>> slots(combos.size());
  parallel_for(combos.size(), probe.jobs, [&](std::size_t ci) {
    const Combo& c = combos[ci];
    RunConfig cfg = probe;
    cfg.trainer.eta_theta = c.eta;
    cfg.trainer.eta_lambda = c.kappa * c.eta;
    cfg.trainer.batch_size = static_cast<int>(c.batch);
    cfg.trainer.weight_decay = c.decay;
    double vo_sum = 0, vmin_sum = 0, vmm_sum = 0;
    int ok = 0;
    for (std::uint64_t seed : cfg.seeds) {
      try {
        Model m0 = cfg.init_from.empty()
                       ? (cfg.model_kind == ModelKind::Mlp
                              ? Model::init_mlp(data.train.d, seed)
                              : Model::init_linear(data.train.d, seed))
                       : load_checkpoint(cfg.init_from);
        TrainerConfig tc = cfg.trainer;
        tc.seed = seed;
        TrainResult res =
            train(cfg.algorithm, data.train, data.val, std::move(m0), tc);
        auto vs = res.model.scores_eval(data.val);
        GroupAucVector g = group_aucs(vs, data.val);
        vo_sum += overall_auc(vs, data.val);
        vmin_sum += *std::min_element(g.begin(), g.end());
        vmm_sum += min_max_ratio(g);
        ++ok;
      } catch (const Error& e) {
        log(LogLevel::Warn, std::string("sweep point failed: ") + e.what());
      }
    }
    if (ok == 0) return;
    Entry e{c.eta, c.kappa, c.batch, c.decay,
            vo_sum / ok, vmin_sum / ok, vmm_sum / ok, 0.0};
    switch (cfg.algorithm) {
      case Algorithm::Minimax: e.criterion = e.val_min_auc; break;
      case Algorithm::AucMax: e.criterion = e.val_overall; break;
      case Algorithm::EqualAuc: e.criterion = e.val_min_max; break;
    }
    slots[ci] = e;
  });
  std::vector<Entry> entries;
  for (const auto& s : slots)
    if (s) entries.push_back(*s);
  if (entries.empty()) usage_error("sweep produced no successful configurations");

  if (probe.algorithm == Algorithm::EqualAuc) {
    // min/max ratio subject to overall within 0.02 of the best overall
    double best_overall = 0;
    for (const auto& e : entries) best_overall = std::max(best_overall, e.val_overall);
    for (auto& e : entries) e.eligible = e.val_overall >= best_overall - 0.02;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.eligible != b.eligible) return a.eligible;
    return a.criterion > b.criterion;
  });

  std::ostringstream csv;
  csv << "rank,eta_theta,kappa,batch_size,weight_decay,val_overall,val_min_auc,"
         "val_min_max,criterion,eligible\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    csv << (i + 1) << "," << format_double(e.eta) << "," << format_double(e.kappa)
        << "," << static_cast<int>(e.batch) << "," << format_double(e.decay) << ","
        << format_double(e.val_overall) << "," << format_double(e.val_min_auc)
        << "," << format_double(e.val_min_max) << "," << format_double(e.criterion)
        << "," << (e.eligible ? 1 : 0) << "\n";
  }
  write_file(out_dir + "/sweep.csv", csv.str());
  const auto& best = entries.front();
  json best_json;
  best_json["eta_theta"] = best.eta;
  best_json["kappa"] = best.kappa;
  best_json["batch_size"] = static_cast<int>(best.batch);
  best_json["weight_decay"] = best.decay;
  best_json["val_overall"] = best.val_overall;
  best_json["val_min_auc"] = best.val_min_auc;
  best_json["val_min_max"] = best.val_min_max;
  write_file_atomic(out_dir + "/best_config.json", best_json.dump(2) + "\n");
  return csv.str();
}

}  // namespace fairauc
