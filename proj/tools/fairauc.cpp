// Command-line front end; talks to the library exclusively through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairauc.h"

namespace {

constexpr int kExitError = 1;  // library/runtime failure
constexpr int kExitUsage = 2;  // bad invocation

int fail(const char* what) {
  std::cerr << "error: " << what << ": " << fairauc_last_error() << "\n";
  return kExitError;
}

bool read_text(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// Splices flag overrides into the config document before the closing brace;
// later duplicate keys win during parsing, so no JSON library is needed here.
std::string with_overrides(const std::string& config, const std::string& out_dir,
                           const std::vector<uint64_t>& seeds,
                           const std::string& init_from, int jobs) {
  std::string doc = config;
  std::size_t end = doc.find_last_of('}');
  if (end == std::string::npos) return doc;  // let the library report it
  std::string extra;
  if (!out_dir.empty()) extra += ",\"output_dir\":\"" + out_dir + "\"";
  if (!init_from.empty()) extra += ",\"init_from\":\"" + init_from + "\"";
  if (jobs > 0) extra += ",\"jobs\":" + std::to_string(jobs);
  if (!seeds.empty()) {
    extra += ",\"seeds\":[";
    for (std::size_t i = 0; i < seeds.size(); ++i)
      extra += (i ? "," : "") + std::to_string(seeds[i]);
    extra += "]";
  }
  doc.insert(end, extra);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax-fair AUC training and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fairauc_version()));

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
  std::string synth_spec = "gaussian2d_paper", synth_out = "synth.csv";
  uint64_t synth_seed = 0;
  std::vector<int> synth_counts;
  std::vector<double> synth_means, synth_vars;
  synth->add_option("spec", synth_spec, "gaussian2d_paper or custom")
      ->check(CLI::IsMember({"gaussian2d_paper", "custom"}));
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("-o,--out", synth_out, "Output CSV path");
  synth
      ->add_option("--counts", synth_counts,
                   "Cell counts a+,a-,b+,b- (custom spec)")
      ->delimiter(',')
      ->expected(4);
  synth
      ->add_option("--means", synth_means,
                   "Cell means a+x,a+y,a-x,a-y,b+x,b+y,b-x,b-y (custom spec)")
      ->delimiter(',')
      ->expected(8);
  synth
      ->add_option("--variances", synth_vars, "Cell variances a+,a-,b+,b- (custom spec)")
      ->delimiter(',')
      ->expected(4);

  // train
  auto* train = app.add_subcommand("train", "Train one algorithm over seeds");
  std::string train_config, train_out, train_init;
  std::vector<uint64_t> train_seeds;
  train->add_option("-c,--config", train_config, "Run config JSON file")->required();
  train->add_option("-o,--out", train_out, "Output directory")->required();
  train->add_option("--seed", train_seeds, "Seed(s), overrides config");
  train->add_option("--init-from", train_init, "Warm-start checkpoint");
  int train_jobs = 0;
  train->add_option("-j,--jobs", train_jobs, "Worker threads over seeds");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Score a dataset with a checkpoint");
  std::string eval_ckpt, eval_data, eval_schema_path, eval_out;
  bool eval_svg = false;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint JSON")->required();
  eval->add_option("--data", eval_data, "Dataset CSV")->required();
  eval->add_option("--schema", eval_schema_path,
                   "Column schema JSON (default: synthetic layout)");
  eval->add_option("-o,--out", eval_out, "Output directory")->required();
  eval->add_flag("--svg", eval_svg, "Also write SVG ROC plots");

  // compare
  auto* compare = app.add_subcommand("compare", "Tabulate completed runs");
  std::vector<std::string> compare_dirs;
  std::string compare_csv_out;
  compare->add_option("dirs", compare_dirs, "Run directories (with manifest.json)")
      ->required()
      ->expected(-2);
  compare->add_option("-o,--out", compare_csv_out, "Also write the CSV here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Hyperparameter grid search");
  std::string sweep_config, sweep_out;
  sweep->add_option("-c,--config", sweep_config, "Sweep config JSON file")->required();
  sweep->add_option("-o,--out", sweep_out, "Output directory")->required();
  int sweep_jobs = 0;
  sweep->add_option("-j,--jobs", sweep_jobs, "Worker threads over grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*synth) {
    std::ostringstream spec;
    spec << "{\"spec\":\"" << synth_spec << "\"";
    static const char* cell_keys[4] = {"a_pos", "a_neg", "b_pos", "b_neg"};
    for (int k = 0; k < 4; ++k) {
      spec << ",\"" << cell_keys[k] << "\":{";
      bool first = true;
      auto field = [&](const std::string& body) {
        spec << (first ? "" : ",") << body;
        first = false;
      };
      char buf[128];
      if (!synth_counts.empty())
        field("\"count\":" + std::to_string(synth_counts[k]));
      if (!synth_means.empty()) {
        std::snprintf(buf, sizeof(buf), "\"mean\":[%.17g,%.17g]",
                      synth_means[2 * k], synth_means[2 * k + 1]);
        field(buf);
      }
      if (!synth_vars.empty()) {
        std::snprintf(buf, sizeof(buf), "\"variance\":%.17g", synth_vars[k]);
        field(buf);
      }
      spec << "}";
    }
    spec << "}";
    fairauc_dataset* ds = nullptr;
    if (fairauc_dataset_synth(spec.str().c_str(), synth_seed, &ds) != FAIRAUC_OK)
      return fail("synth");
    if (fairauc_dataset_write_csv(ds, synth_out.c_str()) != FAIRAUC_OK) {
      fairauc_dataset_free(ds);
      return fail("synth");
    }
    char* stats = nullptr;
    if (fairauc_dataset_stats_json(ds, &stats) == FAIRAUC_OK) {
      std::cout << stats;
      fairauc_string_free(stats);
    }
    fairauc_dataset_free(ds);
    std::cerr << "wrote " << synth_out << "\n";
    return 0;
  }

  if (*train) {
    std::string config;
    if (!read_text(train_config, config)) {
      std::cerr << "error: cannot read " << train_config << "\n";
      return kExitUsage;
    }
    config = with_overrides(config, train_out, train_seeds, train_init, train_jobs);
    char* manifest = nullptr;
    if (fairauc_train(config.c_str(), train_out.c_str(), &manifest) != FAIRAUC_OK)
      return fail("train");
    std::cout << manifest;
    fairauc_string_free(manifest);
    return 0;
  }

  if (*eval) {
    std::string schema_json;
    if (!eval_schema_path.empty() && !read_text(eval_schema_path, schema_json)) {
      std::cerr << "error: cannot read " << eval_schema_path << "\n";
      return kExitUsage;
    }
    fairauc_dataset* ds = nullptr;
    if (fairauc_dataset_load_csv(eval_data.c_str(),
                                 schema_json.empty() ? nullptr : schema_json.c_str(),
                                 &ds) != FAIRAUC_OK)
      return fail("evaluate");
    char* report = nullptr;
    fairauc_status st =
        fairauc_evaluate(eval_ckpt.c_str(), ds, eval_out.c_str(), eval_svg, &report);
    fairauc_dataset_free(ds);
    if (st != FAIRAUC_OK) return fail("evaluate");
    std::cout << report;
    fairauc_string_free(report);
    return 0;
  }

  if (*compare) {
    std::vector<const char*> dirs;
    for (const auto& d : compare_dirs) dirs.push_back(d.c_str());
    char* csv = nullptr;
    char* text = nullptr;
    if (fairauc_compare(dirs.data(), static_cast<int>(dirs.size()), &csv, &text) !=
        FAIRAUC_OK)
      return fail("compare");
    std::cout << text;
    if (!compare_csv_out.empty()) {
      std::ofstream out(compare_csv_out, std::ios::binary);
      out << csv;
      if (!out) {
        std::cerr << "error: cannot write " << compare_csv_out << "\n";
        fairauc_string_free(csv);
        fairauc_string_free(text);
        return kExitError;
      }
    }
    fairauc_string_free(csv);
    fairauc_string_free(text);
    return 0;
  }

  if (*sweep) {
    std::string config;
    if (!read_text(sweep_config, config)) {
      std::cerr << "error: cannot read " << sweep_config << "\n";
      return kExitUsage;
    }
    config = with_overrides(config, "", {}, "", sweep_jobs);
    char* csv = nullptr;
    if (fairauc_sweep(config.c_str(), sweep_out.c_str(), &csv) != FAIRAUC_OK)
      return fail("sweep");
    std::cout << csv;
    fairauc_string_free(csv);
    return 0;
  }

  return kExitUsage;
}
