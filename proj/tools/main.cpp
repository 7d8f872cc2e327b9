// Copyright 2026 the ordbias authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links only the C API in ordbias.h.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordbias.h"

namespace {

int fail_with(ob_status status, const std::string& context) {
  std::cerr << "error: command=" << context << " code=" << static_cast<int>(status)
            << " message=" << ob_last_error() << "\n";
  return status == OB_ERROR_NUMERICAL ? 2 : 1;
}

int fail_numerical(const std::string& context, const std::string& dump_path) {
  std::ofstream dump(dump_path);
  dump << "command: " << context << "\nerror: " << ob_last_error() << "\n";
  std::cerr << "error: command=" << context << " code=" << OB_ERROR_NUMERICAL
            << " message=" << ob_last_error() << " dump=" << dump_path << "\n";
  return 2;
}

#define CHECK_OB(call, context, dump)                                        \
  do {                                                                       \
    const ob_status status_ = (call);                                        \
    if (status_ == OB_ERROR_NUMERICAL) return fail_numerical(context, dump); \
    if (status_ != OB_OK) return fail_with(status_, context);                \
  } while (0)

struct FitFlags {
  std::string model = "full";
  int groups = 10;
  int levels = 5;
  std::uint64_t seed = 0;
  int burn_in = 200;
  int samples = 100;
  int thin = 1;
  double bias_prior_scale = 1.0;
  double response_scale = 0.5;
  bool parallel = false;
  std::string delim = ",";
};

void add_fit_flags(CLI::App* cmd, FitFlags& flags) {
  cmd->add_option("--model", flags.model,
                  "full | continuous-bias | ordinal-no-bias | continuous-no-bias | "
                  "ordinal-global | continuous-global")
      ->default_val(flags.model);
  cmd->add_option("--groups", flags.groups, "number of user groups G")->default_val(flags.groups);
  cmd->add_option("--levels", flags.levels, "ordinal scale size K")->default_val(flags.levels);
  cmd->add_option("--seed", flags.seed, "random seed")->default_val(flags.seed);
  cmd->add_option("--burn-in", flags.burn_in, "discarded sweeps")->default_val(flags.burn_in);
  cmd->add_option("--samples", flags.samples, "retained samples")->default_val(flags.samples);
  cmd->add_option("--thin", flags.thin, "thinning stride")->default_val(flags.thin);
  cmd->add_option("--bias-prior-scale", flags.bias_prior_scale, "sd scale of the bias prior")
      ->default_val(flags.bias_prior_scale);
  cmd->add_option("--response-scale", flags.response_scale, "sd scale of the response noise")
      ->default_val(flags.response_scale);
  cmd->add_flag("--parallel", flags.parallel, "parallel block updates (same draws)");
  cmd->add_option("--delim", flags.delim, "field delimiter")->default_val(flags.delim);
}

int model_kind_from_name(const std::string& name) {
  if (name == "full") return OB_MODEL_FULL;
  if (name == "continuous-bias") return OB_MODEL_CONTINUOUS_BIAS;
  if (name == "ordinal-no-bias") return OB_MODEL_ORDINAL_NO_BIAS;
  if (name == "continuous-no-bias") return OB_MODEL_CONTINUOUS_NO_BIAS;
  if (name == "ordinal-global") return OB_MODEL_ORDINAL_GLOBAL;
  if (name == "continuous-global") return OB_MODEL_CONTINUOUS_GLOBAL;
  return -1;
}

ob_fit_options make_fit_options(const FitFlags& flags) {
  ob_fit_options options;
  ob_fit_options_init(&options);
  options.model_kind = model_kind_from_name(flags.model);
  options.num_groups = flags.groups;
  options.seed = flags.seed;
  options.burn_in = flags.burn_in;
  options.num_samples = flags.samples;
  options.thinning = flags.thin;
  options.parallel = flags.parallel ? 1 : 0;
  options.bias_prior_scale = flags.bias_prior_scale;
  options.response_scale = flags.response_scale;
  return options;
}

struct DatasetHandle {
  ob_dataset* ptr = nullptr;
  ~DatasetHandle() { ob_dataset_free(ptr); }
};
struct ModelHandle {
  ob_model* ptr = nullptr;
  ~ModelHandle() { ob_model_free(ptr); }
};
struct ReportHandle {
  ob_report* ptr = nullptr;
  ~ReportHandle() { ob_report_free(ptr); }
};

std::vector<std::pair<std::string, std::string>> read_pairs(const std::string& path,
                                                            char delimiter) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream stream(line);
    std::string user;
    std::string item;
    std::getline(stream, user, delimiter);
    std::getline(stream, item, delimiter);
    if (first) {
      first = false;
      if (user == "user_id") continue;  // optional header
    }
    pairs.emplace_back(user, item);
  }
  return pairs;
}

const char* label_name(int32_t label) {
  return label > 0 ? "positive" : (label < 0 ? "negative" : "neutral");
}

int run_fit(const std::string& input, const std::string& output, const FitFlags& flags) {
  DatasetHandle data;
  CHECK_OB(ob_dataset_read(input.c_str(), flags.levels, flags.delim[0], &data.ptr), "fit",
           output + ".error.txt");
  const ob_fit_options options = make_fit_options(flags);
  ModelHandle model;
  CHECK_OB(ob_fit(data.ptr, &options, &model.ptr), "fit", output + ".error.txt");
  CHECK_OB(ob_model_save(model.ptr, output.c_str()), "fit", output + ".error.txt");
  const std::string log_path = output + ".fitlog.tsv";
  CHECK_OB(ob_model_write_fit_log(model.ptr, log_path.c_str()), "fit", output + ".error.txt");

  const std::string manifest_path = output + ".manifest.json";
  const std::string meta_path = output + ".meta.json";
  const char* outputs[] = {output.c_str(), log_path.c_str(), meta_path.c_str()};
  CHECK_OB(ob_write_manifest("fit", flags.seed, ob_dataset_content_hash(data.ptr),
                             ob_fit_options_hash(&options), outputs, 3, manifest_path.c_str()),
           "fit", output + ".error.txt");
  std::cout << "fit: wrote " << output << ", " << log_path << ", " << manifest_path << "\n";
  return 0;
}

int run_predict(const std::string& archive, const std::string& input, const std::string& output,
                const std::string& bias_output, double bias_threshold, bool strict, bool plug_in,
                const std::string& delim) {
  ModelHandle model;
  CHECK_OB(ob_model_load(archive.c_str(), &model.ptr), "predict", output + ".error.txt");
  const int aspects = ob_model_num_aspects(model.ptr);

  std::vector<std::pair<std::string, std::string>> pairs;
  try {
    pairs = read_pairs(input, delim[0]);
  } catch (const std::exception& e) {
    std::cerr << "error: command=predict code=" << OB_ERROR_IO << " message=" << e.what() << "\n";
    return 1;
  }

  std::vector<std::string> names(aspects);
  for (int a = 0; a < aspects; ++a) {
    char buffer[256];
    CHECK_OB(ob_model_aspect_name(model.ptr, a, buffer, sizeof buffer), "predict",
             output + ".error.txt");
    names[a] = buffer;
  }

  std::ofstream preds(output);
  if (!preds) {
    std::cerr << "error: command=predict code=" << OB_ERROR_IO << " message=cannot write "
              << output << "\n";
    return 1;
  }
  preds << "user_id\titem_id";
  for (const auto& n : names) preds << "\t" << n;
  preds << "\n";

  std::ofstream bias(bias_output);
  bias << "user_id\tgroup";
  for (const auto& n : names) bias << "\t" << n;
  bias << "\n";

  std::vector<double> ratings(aspects);
  std::vector<int32_t> labels(aspects);
  for (const auto& [user, item] : pairs) {
    CHECK_OB(ob_model_predict(model.ptr, user.c_str(), item.c_str(), strict ? 1 : 0,
                              plug_in ? 1 : 0, ratings.data()),
             "predict", output + ".error.txt");
    preds << user << "\t" << item;
    for (double r : ratings) preds << "\t" << r;
    preds << "\n";

    int32_t group = -1;
    if (ob_model_user_group(model.ptr, user.c_str(), &group) == OB_OK) {
      CHECK_OB(ob_model_bias_labels(model.ptr, user.c_str(), bias_threshold, labels.data()),
               "predict", output + ".error.txt");
      bias << user << "\t" << group;
      for (int32_t l : labels) bias << "\t" << label_name(l);
      bias << "\n";
    } else if (strict) {
      return fail_with(OB_ERROR_UNKNOWN_USER, "predict");
    }
  }

  const std::string manifest_path = output + ".manifest.json";
  const std::string command = "predict --archive " + archive + " --input " + input;
  const char* outputs[] = {output.c_str(), bias_output.c_str()};
  CHECK_OB(ob_write_manifest(command.c_str(), 0,
                             ob_bytes_hash(archive.data(), archive.size()), 0, outputs, 2,
                             manifest_path.c_str()),
           "predict", output + ".error.txt");
  std::cout << "predict: wrote " << output << ", " << bias_output << "\n";
  return 0;
}

int run_evaluate(const std::string& input, const std::string& out_dir, int folds,
                 const FitFlags& flags) {
  DatasetHandle data;
  CHECK_OB(ob_dataset_read(input.c_str(), flags.levels, flags.delim[0], &data.ptr), "evaluate",
           out_dir + "/error.txt");
  const ob_fit_options options = make_fit_options(flags);
  ReportHandle report;
  CHECK_OB(ob_evaluate(data.ptr, &options, folds, &report.ptr), "evaluate",
           out_dir + "/error.txt");
  CHECK_OB(ob_report_write(report.ptr, out_dir.c_str()), "evaluate", out_dir + "/error.txt");

  const std::string manifest_path = out_dir + "/manifest.json";
  const std::string metrics_path = out_dir + "/metrics.tsv";
  const char* outputs[] = {metrics_path.c_str()};
  CHECK_OB(ob_write_manifest("evaluate", flags.seed, ob_dataset_content_hash(data.ptr),
                             ob_fit_options_hash(&options), outputs, 1, manifest_path.c_str()),
           "evaluate", out_dir + "/error.txt");

  double loglik = 0.0;
  double pooled = 0.0;
  CHECK_OB(ob_report_metric(report.ptr, "test_loglik", &loglik), "evaluate",
           out_dir + "/error.txt");
  CHECK_OB(ob_report_metric(report.ptr, "rmse", &pooled), "evaluate", out_dir + "/error.txt");
  std::cout << "evaluate: model=" << flags.model << " folds=" << folds
            << " test_loglik=" << loglik << " rmse=" << pooled << " -> " << out_dir << "\n";
  return 0;
}

int run_simulate(const std::string& output, const std::string& truth, int users, int items,
                 int aspects, int levels, int groups, double density, double bias_scale,
                 std::uint64_t seed, bool power_law, const std::string& delim) {
  ob_sim_options options;
  ob_sim_options_init(&options);
  options.num_users = users;
  options.num_items = items;
  options.num_aspects = aspects;
  options.num_levels = levels;
  options.num_groups = groups;
  options.density = density;
  options.bias_scale = bias_scale;
  options.seed = seed;
  options.power_law_users = power_law ? 1 : 0;

  DatasetHandle data;
  CHECK_OB(ob_simulate(&options, truth.empty() ? nullptr : truth.c_str(), &data.ptr), "simulate",
           output + ".error.txt");
  CHECK_OB(ob_dataset_write(data.ptr, output.c_str(), delim[0]), "simulate",
           output + ".error.txt");

  const std::string manifest_path = output + ".manifest.json";
  const char* outputs[] = {output.c_str()};
  CHECK_OB(ob_write_manifest("simulate", seed, ob_dataset_content_hash(data.ptr),
                             ob_bytes_hash(&options, sizeof options), outputs, 1,
                             manifest_path.c_str()),
           "simulate", output + ".error.txt");
  std::cout << "simulate: wrote " << output << " (" << ob_dataset_num_observations(data.ptr)
            << " observations, " << ob_dataset_num_users(data.ptr) << " users, "
            << ob_dataset_num_items(data.ptr) << " items)\n";
  return 0;
}

int run_diagnose(const std::string& output, bool quick, std::uint64_t seed) {
  ob_diag_options options;
  ob_diag_options_init(&options);
  options.seed = seed;
  options.quick = quick ? 1 : 0;
  int32_t pass = 0;
  CHECK_OB(ob_diagnose(&options, output.empty() ? nullptr : output.c_str(), &pass), "diagnose",
           output.empty() ? "diagnose.error.txt" : output + ".error.txt");
  if (!output.empty()) {
    const std::string manifest_path = output + ".manifest.json";
    const char* outputs[] = {output.c_str()};
    CHECK_OB(ob_write_manifest("diagnose", seed, 0, ob_bytes_hash(&options, sizeof options),
                               outputs, 1, manifest_path.c_str()),
             "diagnose", output + ".error.txt");
  }
  std::cout << "diagnose: " << (pass ? "pass" : "FAIL");
  if (!output.empty()) std::cout << " -> " << output;
  std::cout << "\n";
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("ORDBIAS_THREADS")) {
    ob_set_num_threads(std::atoi(threads));
  }

  CLI::App app{"ordinal aspect-bias model: fit, predict, evaluate, simulate, diagnose"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ob_version()) + " (" + ob_build_stamp() + ")");

  auto* fit_cmd = app.add_subcommand("fit", "fit a model and write a model archive");
  std::string fit_input;
  std::string fit_output = "model.bin";
  FitFlags fit_flags;
  fit_cmd->add_option("--input", fit_input, "ratings file")->required();
  fit_cmd->add_option("--output", fit_output, "model archive path")->default_val(fit_output);
  add_fit_flags(fit_cmd, fit_flags);

  auto* predict_cmd =
      app.add_subcommand("predict", "predict aspect ratings for (user, item) pairs");
  std::string predict_archive;
  std::string predict_input;
  std::string predict_output = "predictions.tsv";
  std::string predict_bias_output;
  double bias_threshold = 0.25;
  bool strict = false;
  bool plug_in = false;
  std::string predict_delim = ",";
  predict_cmd->add_option("--archive", predict_archive, "model archive from fit")->required();
  predict_cmd->add_option("--input", predict_input, "pair list (user_id, item_id)")->required();
  predict_cmd->add_option("--output", predict_output, "predictions file")
      ->default_val(predict_output);
  predict_cmd->add_option("--bias-output", predict_bias_output,
                          "bias label file (default <output>.bias.tsv)");
  predict_cmd->add_option("--bias-threshold", bias_threshold,
                          "bias magnitude that counts as positive/negative")
      ->default_val(bias_threshold);
  predict_cmd->add_flag("--strict", strict, "fail on unknown users or items");
  predict_cmd->add_flag("--plug-in", plug_in, "plug-in mean response instead of Monte Carlo");
  predict_cmd->add_option("--delim", predict_delim, "pair file delimiter")->default_val(",");

  auto* eval_cmd = app.add_subcommand("evaluate", "k-fold evaluation with report files");
  std::string eval_input;
  std::string eval_output = "report";
  int folds = 5;
  FitFlags eval_flags;
  eval_cmd->add_option("--input", eval_input, "ratings file")->required();
  eval_cmd->add_option("--output", eval_output, "report directory")->default_val(eval_output);
  eval_cmd->add_option("--folds", folds, "cross-validation folds")->default_val(folds);
  add_fit_flags(eval_cmd, eval_flags);

  auto* sim_cmd = app.add_subcommand("simulate", "forward-simulate a dataset");
  std::string sim_output = "simulated.csv";
  std::string sim_truth;
  int sim_users = 100;
  int sim_items = 30;
  int sim_aspects = 4;
  int sim_levels = 5;
  int sim_groups = 3;
  double sim_density = 0.2;
  double sim_bias_scale = 1.0;
  std::uint64_t sim_seed = 1;
  bool sim_power_law = false;
  std::string sim_delim = ",";
  sim_cmd->add_option("--output", sim_output, "dataset file")->default_val(sim_output);
  sim_cmd->add_option("--truth", sim_truth, "also write the simulated latent state");
  sim_cmd->add_option("--users", sim_users)->default_val(sim_users);
  sim_cmd->add_option("--items", sim_items)->default_val(sim_items);
  sim_cmd->add_option("--aspects", sim_aspects)->default_val(sim_aspects);
  sim_cmd->add_option("--levels", sim_levels)->default_val(sim_levels);
  sim_cmd->add_option("--groups", sim_groups)->default_val(sim_groups);
  sim_cmd->add_option("--density", sim_density)->default_val(sim_density);
  sim_cmd->add_option("--bias-scale", sim_bias_scale)->default_val(sim_bias_scale);
  sim_cmd->add_option("--seed", sim_seed)->default_val(sim_seed);
  sim_cmd->add_flag("--power-law", sim_power_law, "long-tailed per-user activity");
  sim_cmd->add_option("--delim", sim_delim)->default_val(sim_delim);

  auto* diag_cmd = app.add_subcommand("diagnose", "sampler correctness checks");
  std::string diag_output = "diagnostics.tsv";
  bool diag_quick = false;
  std::uint64_t diag_seed = 1;
  diag_cmd->add_option("--output", diag_output, "diagnostics report")->default_val(diag_output);
  diag_cmd->add_flag("--quick", diag_quick, "smaller sample sizes");
  diag_cmd->add_option("--seed", diag_seed)->default_val(diag_seed);

  CLI11_PARSE(app, argc, argv);

  if (fit_cmd->parsed()) return run_fit(fit_input, fit_output, fit_flags);
  if (predict_cmd->parsed()) {
    if (predict_bias_output.empty()) predict_bias_output = predict_output + ".bias.tsv";
    return run_predict(predict_archive, predict_input, predict_output, predict_bias_output,
                       bias_threshold, strict, plug_in, predict_delim);
  }
  if (eval_cmd->parsed()) return run_evaluate(eval_input, eval_output, folds, eval_flags);
  if (sim_cmd->parsed()) {
    return run_simulate(sim_output, sim_truth, sim_users, sim_items, sim_aspects, sim_levels,
                        sim_groups, sim_density, sim_bias_scale, sim_seed, sim_power_law,
                        sim_delim);
  }
  if (diag_cmd->parsed()) return run_diagnose(diag_output, diag_quick, diag_seed);
  return 1;
}
